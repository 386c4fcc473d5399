#include "qficoh/numerics.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qficoh {

Matrix Spectrum::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

double hermiticity_residual(const Matrix& m) {
    return (m - m.adjoint()).norm();
}

void require_square(const Matrix& m, const char* context) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << context << ": matrix is " << m.rows() << "x" << m.cols() << ", expected square";
        throw DimensionMismatch(msg.str());
    }
}

void require_hermitian(const Matrix& m, double tol, const char* context) {
    require_square(m, context);
    if (!m.allFinite()) {
        throw ValidationError(std::string(context) + ": matrix has non-finite entries");
    }
    const double res = hermiticity_residual(m);
    if (res > tol) {
        std::ostringstream msg;
        msg << context << ": Hermiticity residual " << res << " exceeds " << tol;
        throw NotHermitian(msg.str(), res);
    }
}

void fix_phase(Eigen::Ref<Vector> v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    v *= std::conj(v[imax]) / best;
}

Spectrum eigh(const Matrix& m, const TolerancePolicy& tol) {
    require_hermitian(m, tol.herm, "eigh");
    const Matrix sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("eigh: eigensolver did not converge");
    }
    const int d = static_cast<int>(m.rows());
    Spectrum s;
    s.eigenvalues = solver.eigenvalues().reverse();
    s.eigenvectors = solver.eigenvectors().rowwise().reverse();
    for (int i = 0; i < d; ++i) {
        fix_phase(s.eigenvectors.col(i));
    }
    return s;
}

Matrix psd_sqrt(const Matrix& m, const TolerancePolicy& tol) {
    Spectrum s = eigh(m, tol);
    RealVector vals = s.eigenvalues;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals[i] < -tol.psd) {
            std::ostringstream msg;
            msg << "psd_sqrt: eigenvalue " << vals[i] << " below -" << tol.psd;
            throw NotPsd(msg.str(), -vals[i]);
        }
        vals[i] = std::sqrt(std::max(vals[i], 0.0));
    }
    Matrix r = s.eigenvectors * vals.asDiagonal() * s.eigenvectors.adjoint();
    return (r + r.adjoint()) / 2.0;
}

Matrix complete_to_unitary(const std::vector<Matrix>& blocks, const TolerancePolicy& tol) {
    if (blocks.empty()) {
        throw DimensionMismatch("complete_to_unitary: empty block list");
    }
    const Eigen::Index rows = blocks.front().rows();
    const Eigen::Index cols = blocks.front().cols();
    for (const Matrix& b : blocks) {
        if (b.rows() != rows || b.cols() != cols) {
            throw DimensionMismatch("complete_to_unitary: blocks have unequal shapes");
        }
    }
    const Eigen::Index n = static_cast<Eigen::Index>(blocks.size());
    const Eigen::Index total = n * rows;
    if (cols > total) {
        throw DimensionMismatch("complete_to_unitary: more columns than stacked rows");
    }

    Matrix v(total, total);
    for (Eigen::Index j = 0; j < n; ++j) {
        v.block(j * rows, 0, rows, cols) = blocks[j];
    }
    const double iso_res = (v.leftCols(cols).adjoint() * v.leftCols(cols) -
                            Matrix::Identity(cols, cols))
                               .norm();
    if (iso_res > tol.recon * (1.0 + std::sqrt(static_cast<double>(cols)))) {
        std::ostringstream msg;
        msg << "complete_to_unitary: column isometry residual " << iso_res;
        throw NotIsometry(msg.str(), iso_res);
    }

    // Gram-Schmidt the canonical basis against the accepted columns, twice
    // per candidate to hold orthogonality near machine precision.
    Eigen::Index filled = cols;
    for (Eigen::Index c = 0; c < total && filled < total; ++c) {
        Vector cand = Vector::Zero(total);
        cand[c] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            cand -= v.leftCols(filled) * (v.leftCols(filled).adjoint() * cand);
        }
        const double norm = cand.norm();
        if (norm > 1e-6) {
            v.col(filled) = cand / norm;
            ++filled;
        }
    }
    if (filled < total) {
        throw NumericalFailure("complete_to_unitary: ran out of completion candidates");
    }
    const double uni_res = (v.adjoint() * v - Matrix::Identity(total, total)).norm();
    if (uni_res > tol.ortho * (1.0 + std::sqrt(static_cast<double>(total)))) {
        throw NumericalFailure("complete_to_unitary: completion lost unitarity", uni_res);
    }
    return v;
}

double comm_norm(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("comm_norm: dimension mismatch");
    }
    return (a * b - b * a).norm();
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix random_gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    return (g + g.adjoint()) / 2.0;
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the QR phase ambiguity so the draw depends only on g.
    for (int j = 0; j < dim; ++j) {
        const Complex rjj = r(j, j);
        const double a = std::abs(rjj);
        q.col(j) *= (a > 0) ? rjj / a : Complex(1.0, 0.0);
    }
    return q;
}

} // namespace qficoh
