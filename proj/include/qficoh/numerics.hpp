#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qficoh/errors.hpp"

namespace qficoh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Absolute and relative tolerances used throughout. All defaults are sized
// for double precision at dimensions up to a few tens.
struct TolerancePolicy {
    double herm = 1e-10;      // Hermiticity residual ||M - M^dag||_F
    double psd = 1e-10;       // most negative admissible eigenvalue
    double recon = 1e-9;      // spectral reconstruction, relative to 1 + ||M||_F
    double ortho = 1e-9;      // orthonormality / unitarity residual
    double zero_eig = 1e-12;  // eigenvalue-pair cutoff, relative to lambda_max
    double commute = 1e-8;    // commutation criterion, relative to 1 + max ||Y||_F^2
};

// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted in
// descending order; eigenvectors are the matching columns, each rotated so
// its largest-magnitude component is real and positive.
struct Spectrum {
    RealVector eigenvalues;
    Matrix eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    Matrix reconstruct() const;
};

double hermiticity_residual(const Matrix& m);
void require_hermitian(const Matrix& m, double tol, const char* context);
void require_square(const Matrix& m, const char* context);

// Deterministic phase fix: rotate v so its largest-magnitude entry is real
// positive. Ties resolve to the lowest index.
void fix_phase(Eigen::Ref<Vector> v);

Spectrum eigh(const Matrix& m, const TolerancePolicy& tol = {});

// Principal square root of a PSD matrix. Eigenvalues in (-tol.psd, 0) are
// clipped to zero; anything below -tol.psd is rejected.
Matrix psd_sqrt(const Matrix& m, const TolerancePolicy& tol = {});

// Completes the stacked isometry (blocks[0]; blocks[1]; ...; blocks[n-1]),
// an (n*rows x cols) matrix with orthonormal columns, to a square unitary
// whose first `cols` columns equal the input. The remaining columns come
// from Gram-Schmidt over canonical basis vectors in index order, so the
// completion is deterministic.
Matrix complete_to_unitary(const std::vector<Matrix>& blocks,
                           const TolerancePolicy& tol = {});

// Frobenius norm of the commutator AB - BA.
double comm_norm(const Matrix& a, const Matrix& b);

// --- seeded randomness for property tests and multi-start optimization ---

std::mt19937_64 make_engine(std::uint64_t seed);

// splitmix64 mix of (seed, index); used to hand independent, reproducible
// streams to sub-tasks.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Matrix random_gaussian_matrix(int rows, int cols, std::mt19937_64& rng);
Matrix random_hermitian(int dim, std::mt19937_64& rng);
// Haar-style random unitary via QR of a complex Gaussian matrix.
Matrix random_unitary(int dim, std::mt19937_64& rng);

} // namespace qficoh
