#include "qficoh/qfi.hpp"

#include <algorithm>

namespace qficoh {

namespace {

void check_dims(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol,
                const char* context) {
    require_hermitian(a, tol.herm, context);
    if (a.rows() != rho.dim()) {
        throw DimensionMismatch(std::string(context) + ": observable dimension mismatch");
    }
}

// Eigenvalues clipped at zero; validation already bounded them below.
RealVector clipped_eigenvalues(const DensityMatrix& rho) {
    return rho.spectrum().eigenvalues.cwiseMax(0.0);
}

} // namespace

double qfi(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol) {
    check_dims(rho, a, tol, "qfi");
    const RealVector lam = clipped_eigenvalues(rho);
    const int d = rho.dim();
    const Matrix b = rho.spectrum().eigenvectors.adjoint() * a * rho.spectrum().eigenvectors;
    const double cutoff = tol.zero_eig * lam[0];
    double sum = 0.0;
    for (int l = 0; l < d; ++l) {
        for (int lp = 0; lp < d; ++lp) {
            const double s = lam[l] + lam[lp];
            if (s <= cutoff) continue;
            const double diff = lam[l] - lam[lp];
            sum += diff * diff / s * std::norm(b(l, lp));
        }
    }
    return 2.0 * sum;
}

double pure_qfi(const Vector& psi, const Matrix& a, const TolerancePolicy& tol) {
    require_hermitian(a, tol.herm, "pure_qfi");
    if (psi.size() != a.rows()) {
        throw DimensionMismatch("pure_qfi: vector dimension mismatch");
    }
    const double norm_dev = std::abs(psi.norm() - 1.0);
    if (norm_dev > 1e-10) {
        throw NotNormalized("pure_qfi: vector norm deviates from 1", norm_dev);
    }
    const Vector apsi = a * psi;
    const double mean = psi.dot(apsi).real();
    const double second = apsi.squaredNorm();
    return 4.0 * (second - mean * mean);
}

Matrix z_matrix(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol) {
    check_dims(rho, a, tol, "z_matrix");
    const RealVector lam = clipped_eigenvalues(rho);
    const int d = rho.dim();
    const Matrix& phi = rho.spectrum().eigenvectors;
    const Matrix b = phi.adjoint() * a * phi;
    Matrix c(d, d);
    for (int l = 0; l < d; ++l) {
        for (int lp = 0; lp < d; ++lp) {
            const double s = lam[l] + lam[lp];
            const double coeff = (s > 0.0) ? std::sqrt(2.0 * lam[l] * lam[lp] / s) : 0.0;
            c(l, lp) = coeff * b(l, lp);
        }
    }
    Matrix z = phi * c * phi.adjoint();
    return (z + z.adjoint()) / 2.0;
}

double qfi_via_z(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol) {
    check_dims(rho, a, tol, "qfi_via_z");
    const Matrix z = z_matrix(rho, a, tol);
    const double tr_rho_a2 = (rho.matrix() * a * a).trace().real();
    const double tr_z2 = (z * z).trace().real();
    return 4.0 * (tr_rho_a2 - tr_z2);
}

} // namespace qficoh
