#include "qficoh/naimark.hpp"

#include <sstream>

namespace qficoh {

namespace {

// kron(X, Y) with system-major composite index (a, j) -> a * cols(Y) + j.
Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

Matrix register_unit(int register_dim, int j, int k) {
    Matrix u = Matrix::Zero(register_dim, register_dim);
    u(j, k) = 1.0;
    return u;
}

} // namespace

Matrix register_projector(int system_dim, int register_dim, int j) {
    return kron(Matrix::Identity(system_dim, system_dim), register_unit(register_dim, j, j));
}

KrausRoots kraus_roots(const Povm& e, const std::vector<Matrix>& twists,
                       const TolerancePolicy& tol) {
    if (!twists.empty() && static_cast<int>(twists.size()) != e.size()) {
        throw NotUnitaryTwist("kraus_roots: twist count does not match element count");
    }
    KrausRoots out;
    out.dim = e.dim();
    for (int j = 0; j < e.size(); ++j) {
        Matrix root = psd_sqrt(e.element(j), tol);
        if (!twists.empty()) {
            const Matrix& u = twists[static_cast<std::size_t>(j)];
            if (u.rows() != e.dim() || u.cols() != e.dim()) {
                throw NotUnitaryTwist("kraus_roots: twist dimension mismatch");
            }
            const double res =
                (u.adjoint() * u - Matrix::Identity(e.dim(), e.dim())).norm();
            if (res > tol.ortho) {
                std::ostringstream msg;
                msg << "kraus_roots: twist " << j << " unitarity residual " << res;
                throw NotUnitaryTwist(msg.str(), res);
            }
            root = u * root;
        }
        out.roots.push_back(std::move(root));
    }
    return out;
}

NaimarkExtension build_extension(const KrausRoots& roots, const TolerancePolicy& tol) {
    const int d = roots.dim;
    const int n = roots.size();
    // complete_to_unitary uses the stacked block layout, in which block (j,k)
    // sits at rows [j d, (j+1) d). The tensor-product form needs the
    // system-major shuffle applied afterwards.
    const Matrix stacked = complete_to_unitary(roots.roots, tol);

    NaimarkExtension ext;
    ext.system_dim = d;
    ext.register_dim = n;
    ext.extension_dim = n * d;
    ext.v = Matrix::Zero(ext.extension_dim, ext.extension_dim);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const Matrix block = stacked.block(j * d, k * d, d, d);
            ext.v += kron(block, register_unit(n, j, k));
        }
    }
    for (int j = 0; j < n; ++j) {
        Matrix lifted = ext.v.adjoint() * register_projector(d, n, j) * ext.v;
        ext.lifted_projectors.push_back((lifted + lifted.adjoint()) / 2.0);
    }
    return ext;
}

DensityMatrix embed_state(const DensityMatrix& rho, const KrausRoots& roots,
                          const TolerancePolicy& tol) {
    const int d = roots.dim;
    const int n = roots.size();
    if (rho.dim() != d) {
        throw DimensionMismatch("embed_state: state and roots dimensions differ");
    }
    Matrix rho_eps = Matrix::Zero(n * d, n * d);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const Matrix block =
                roots.roots[static_cast<std::size_t>(j)] * rho.matrix() *
                roots.roots[static_cast<std::size_t>(k)].adjoint();
            rho_eps += kron(block, register_unit(n, j, k));
        }
    }
    rho_eps = (rho_eps + rho_eps.adjoint()) / 2.0;

    // Cross-check the direct block assembly against the conjugated product.
    const NaimarkExtension ext = build_extension(roots, tol);
    const Matrix prepared = kron(rho.matrix(), register_unit(n, 0, 0));
    const double res = (rho_eps - ext.v * prepared * ext.v.adjoint()).norm();
    if (res > 1e-9) {
        throw NumericalFailure("embed_state: block assembly disagrees with V conjugation", res);
    }

    rho_eps /= rho_eps.trace().real();
    return DensityMatrix::validate(rho_eps, tol);
}

ProbabilityReport probability_check(const DensityMatrix& rho, const Povm& e,
                                    const TolerancePolicy& tol) {
    const KrausRoots roots = kraus_roots(e, {}, tol);
    const NaimarkExtension ext = build_extension(roots, tol);
    const Matrix prepared = kron(rho.matrix(), register_unit(e.size(), 0, 0));
    ProbabilityReport report;
    for (int j = 0; j < e.size(); ++j) {
        const double direct = (e.element(j) * rho.matrix()).trace().real();
        const double lifted =
            (ext.lifted_projectors[static_cast<std::size_t>(j)] * prepared).trace().real();
        report.residuals.push_back(std::abs(direct - lifted));
        report.max_residual = std::max(report.max_residual, report.residuals.back());
    }
    return report;
}

} // namespace qficoh
