#pragma once

#include "qficoh/states.hpp"

namespace qficoh {

// Factorization E_j = A_j^dag A_j of a POVM. The canonical choice is
// A_j = sqrt(E_j); optional unitary twists U_j replace A_j by U_j A_j and
// leave every E_j unchanged.
struct KrausRoots {
    std::vector<Matrix> roots;
    int dim = 0;

    int size() const { return static_cast<int>(roots.size()); }
};

KrausRoots kraus_roots(const Povm& e, const std::vector<Matrix>& twists = {},
                       const TolerancePolicy& tol = {});

// Canonical Naimark extension of an n-element POVM on a d-dimensional space.
//
// The extension space is H (x) H_R with an n-dimensional register; composite
// basis index (a, j) -> a * n + j with a the system index and j the register
// index. The register preparation state is its first basis vector, so state
// embedding acts as rho -> V (rho (x) |0><0|_R) V^dag (zero-indexed here; the
// register slot is conventionally written as index 1).
struct NaimarkExtension {
    Matrix v;                             // (n d) x (n d) unitary
    std::vector<Matrix> lifted_projectors; // P~_j = V^dag (I (x) |j><j|) V
    int system_dim = 0;
    int register_dim = 0;
    int extension_dim = 0;
};

// Register projector I_d (x) |j><j| on the extension space.
Matrix register_projector(int system_dim, int register_dim, int j);

// Builds V from the stacked Kraus roots (first block column) and lifts the
// register projectors through it.
NaimarkExtension build_extension(const KrausRoots& roots, const TolerancePolicy& tol = {});

// rho_eps = sum_{jk} A_j rho A_k^dag (x) |j><k|, equal to
// V (rho (x) |0><0|_R) V^dag. Internally cross-checked against that product
// form; the result is renormalized by its trace (a no-op within the POVM's
// completeness residual).
DensityMatrix embed_state(const DensityMatrix& rho, const KrausRoots& roots,
                          const TolerancePolicy& tol = {});

// Per-outcome residuals |tr(E_j rho) - tr(P~_j (rho (x) |0><0|))|.
struct ProbabilityReport {
    std::vector<double> residuals;
    double max_residual = 0.0;
};

ProbabilityReport probability_check(const DensityMatrix& rho, const Povm& e,
                                    const TolerancePolicy& tol = {});

} // namespace qficoh
