#pragma once

#include <optional>
#include <vector>

#include "qficoh/numerics.hpp"

namespace qficoh {

// Trace of a density matrix must sit this close to 1.
inline constexpr double kTraceTol = 1e-10;

// Unit-trace PSD operator with its spectral decomposition cached at
// construction. Eigenvalues are descending; tiny negative eigenvalues within
// the PSD tolerance are kept raw here and clipped at the point of use.
class DensityMatrix {
public:
    static DensityMatrix validate(const Matrix& m, const TolerancePolicy& tol = {});

    // Builds the state from a trusted eigensystem. The given frame is kept as
    // the cached spectrum, which pins the basis used for eigenbasis-dependent
    // quantities on degenerate states.
    static DensityMatrix from_eigensystem(const RealVector& eigenvalues,
                                          const Matrix& eigenvectors,
                                          const TolerancePolicy& tol = {});

    const Matrix& matrix() const { return matrix_; }
    const Spectrum& spectrum() const { return spectrum_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

private:
    DensityMatrix(Matrix m, Spectrum s) : matrix_(std::move(m)), spectrum_(std::move(s)) {}
    Matrix matrix_;
    Spectrum spectrum_;
};

enum class MeasurementKind { General, Projective, Basis };

// Validated POVM: PSD elements summing to the identity. Projectivity and
// rank-1 structure are detected at validation and recorded in kind().
class Povm {
public:
    static Povm validate(std::vector<Matrix> elements, const TolerancePolicy& tol = {});

    const std::vector<Matrix>& elements() const { return elements_; }
    const Matrix& element(int j) const { return elements_[static_cast<std::size_t>(j)]; }
    int size() const { return static_cast<int>(elements_.size()); }
    int dim() const { return dim_; }
    MeasurementKind kind() const { return kind_; }
    bool is_projective() const { return kind_ != MeasurementKind::General; }
    // Projector ranks, only meaningful for projective measurements.
    const std::vector<int>& block_dims() const;

private:
    friend class ProjectiveMeasurement;
    Povm() = default;
    std::vector<Matrix> elements_;
    int dim_ = 0;
    MeasurementKind kind_ = MeasurementKind::General;
    std::vector<int> block_dims_;
};

// A POVM whose elements are mutually orthogonal projectors. The strong type
// is the admission ticket for block-coherence operations.
class ProjectiveMeasurement {
public:
    static ProjectiveMeasurement validate(std::vector<Matrix> projectors,
                                          const TolerancePolicy& tol = {});
    // Throws NotPsd/CompletenessViolation-style errors if the POVM does not
    // qualify as projective.
    static ProjectiveMeasurement from_povm(const Povm& povm);

    const Povm& povm() const { return povm_; }
    const std::vector<Matrix>& projectors() const { return povm_.elements(); }
    const Matrix& projector(int j) const { return povm_.element(j); }
    int size() const { return povm_.size(); }
    int dim() const { return povm_.dim(); }
    const std::vector<int>& block_dims() const { return povm_.block_dims(); }

private:
    explicit ProjectiveMeasurement(Povm p) : povm_(std::move(p)) {}
    Povm povm_;
};

// Orthonormal basis, i.e. a rank-1 projective measurement.
class BasisMeasurement {
public:
    static BasisMeasurement validate(std::vector<Vector> vectors,
                                     const TolerancePolicy& tol = {});
    static BasisMeasurement computational(int dim);

    const std::vector<Vector>& vectors() const { return vectors_; }
    int dim() const { return static_cast<int>(vectors_.size()); }
    Matrix projector(int j) const;
    ProjectiveMeasurement projective(const TolerancePolicy& tol = {}) const;

private:
    explicit BasisMeasurement(std::vector<Vector> v) : vectors_(std::move(v)) {}
    std::vector<Vector> vectors_;
};

// max_{j != k} ||E_j rho E_k||_F. Zero exactly when the POVM has a single
// element. The caller decides what counts as incoherent; values at or below
// 1e-10 are the conventional cutoff.
double incoherence_residual(const DensityMatrix& rho, const Povm& e);
double incoherence_residual(const DensityMatrix& rho, const ProjectiveMeasurement& p);

// Block-dephasing map sum_j P_j rho P_j, the fixed-point test partner of
// incoherence_residual.
Matrix block_dephase(const Matrix& rho, const ProjectiveMeasurement& p);

// --- seeded generators ---

// Haar-style random state of the given rank: G G^dag / tr with G a complex
// Gaussian d x rank factor.
DensityMatrix random_state(int dim, int rank, std::uint64_t seed,
                           const TolerancePolicy& tol = {});

// Random POVM from symmetrized normalization of Wishart blocks:
// E_j = S^{-1/2} G_j S^{-1/2}, S = sum_j G_j.
Povm random_povm(int dim, int n, std::uint64_t seed, const TolerancePolicy& tol = {});

// Random projective measurement with the given block ranks (must sum to dim):
// blocks of columns of a Haar random unitary.
ProjectiveMeasurement random_projective(int dim, const std::vector<int>& block_dims,
                                        std::uint64_t seed,
                                        const TolerancePolicy& tol = {});

BasisMeasurement random_basis(int dim, std::uint64_t seed, const TolerancePolicy& tol = {});

// Random state that is exactly block incoherent for p:
// sum_j w_j P_j sigma_j P_j / tr(P_j sigma_j P_j) with random sigma_j and
// random weights w. The residual inherits the orthogonality quality of p.
DensityMatrix random_block_incoherent_state(const ProjectiveMeasurement& p,
                                            std::uint64_t seed,
                                            const TolerancePolicy& tol = {});

} // namespace qficoh
