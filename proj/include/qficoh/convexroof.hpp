#pragma once

#include <optional>

#include "qficoh/coherence.hpp"

namespace qficoh {

// Weighted pure-state decomposition of a density matrix. Members whose
// weight falls at or below kEnsembleWeightFloor are dropped at construction;
// they cannot contribute to reconstruction or objective sums.
inline constexpr double kEnsembleWeightFloor = 1e-14;

struct PureStateEnsemble {
    std::vector<double> weights;
    std::vector<Vector> states;

    int size() const { return static_cast<int>(weights.size()); }
    Matrix reconstruct(int dim) const;
    double reconstruction_error(const DensityMatrix& rho) const;
};

// Y_A in the descending eigenbasis of rho:
//   (Y_A)_{l l'} = 2 sqrt(lam_l lam_l') / (lam_l + lam_l') <phi_l|A|phi_l'>,
// with the 0/0 coefficient set to 0. Rows and columns attached to kernel
// eigenvectors vanish. The matrix is returned in that eigenbasis frame.
Matrix y_matrix(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol = {});

// True when all Y_{E_j} pairwise commute within
// tol.commute * (1 + max_j ||Y_j||_F^2). The second member is the largest
// pairwise commutator Frobenius norm.
struct CommutationVerdict {
    bool commutes = false;
    double max_comm_norm = 0.0;
};

CommutationVerdict commutation_criterion(const DensityMatrix& rho, const Povm& e,
                                         const TolerancePolicy& tol = {});

// Ensemble generated from a d' x d' unitary (d' >= d) acting on the padded
// eigendecomposition: sqrt(p_k) |psi_k> = sum_l U_{kl} sqrt(lam_l) |phi_l>.
PureStateEnsemble ensemble_from_unitary(const DensityMatrix& rho, const Matrix& u,
                                        const TolerancePolicy& tol = {});

// Orthonormality defect of the Gamma_k family attached to (rho, U):
// max_{j,k with positive weights} |tr(Gamma_j Gamma_k) / sqrt(p_j p_k) - delta_jk|.
double gamma_check(const DensityMatrix& rho, const Matrix& u, const TolerancePolicy& tol = {});

// sum_k p_k sum_j F(psi_k, E_j); by convexity never below cf_direct of the
// reconstructed state.
double average_pure_cf(const PureStateEnsemble& ens, const Povm& e,
                       const TolerancePolicy& tol = {});

struct RoofConfig {
    int d_prime = 0;      // 0 means d; admissible range [d, d^2]
    int starts = 16;
    int max_iter = 2000;  // iteration budget per start, refinement included
    double tol = 1e-10;   // stop once 50 iterations improve less than this
    std::uint64_t seed = 0;
};

struct RoofResult {
    double lower_bound = 0.0;   // cf_direct(rho, E)
    double roof_value = 0.0;    // best ensemble average found
    PureStateEnsemble ensemble; // argmin ensemble
    bool criterion_commutes = false;
    double max_comm_norm = 0.0;
    int starts_used = 0;
    long iterations = 0;        // objective-improvement steps across starts
};

// Multi-start local minimization of average_pure_cf over ensembles of rho,
// parametrized by U = exp(i H(theta)) with H Hermitian from d'^2 real
// parameters. Deterministic per (config.seed, start index); start 0 is the
// eigendecomposition itself.
RoofResult convex_roof_minimize(const DensityMatrix& rho, const Povm& e,
                                const RoofConfig& config = {},
                                const TolerancePolicy& tol = {});

// When the Y matrices commute, the ensemble generated by their joint
// diagonalizer attains average_pure_cf == cf_direct. Returns nothing when
// the criterion fails.
std::optional<PureStateEnsemble> commuting_optimal_ensemble(const DensityMatrix& rho,
                                                            const Povm& e,
                                                            const TolerancePolicy& tol = {});

// The rank-2 qutrit state whose eigenvectors carry the third roots of unity:
// lowest instance where the roof strictly exceeds the direct measure for the
// computational basis (direct 4/3, roof 2).
struct RoofGapWitness {
    DensityMatrix state;
    BasisMeasurement basis;
};

RoofGapWitness roof_gap_witness(const TolerancePolicy& tol = {});

} // namespace qficoh
