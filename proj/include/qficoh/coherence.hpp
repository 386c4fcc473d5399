#pragma once

#include <string>

#include "qficoh/naimark.hpp"
#include "qficoh/qfi.hpp"

namespace qficoh {

// Direct measure: sum_j F(rho, E_j).
double cf_direct(const DensityMatrix& rho, const Povm& e, const TolerancePolicy& tol = {});

// Embedded measure: sum_j F(rho_eps, I (x) |j><j|) with rho_eps the canonical
// Naimark embedding of rho. Coincides with cf_direct on projective
// measurements; on general POVMs it exceeds it by 4 sum_j tr(rho (E_j - E_j^2)).
double cf_embedded(const DensityMatrix& rho, const Povm& e, const TolerancePolicy& tol = {});

// Block coherence: sum_j F(rho, P_j). Zero exactly on block-incoherent states.
double cf_block(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                const TolerancePolicy& tol = {});

// Standard (basis) coherence: sum_j F(rho, |j><j|).
double cf_standard(const DensityMatrix& rho, const BasisMeasurement& b,
                   const TolerancePolicy& tol = {});

// Side-by-side diagnostic of the direct and embedded routes.
struct CoherenceReport {
    double direct_value = 0.0;
    double embedded_value = 0.0;
    double gap = 0.0;                     // embedded - direct
    std::vector<double> per_element;      // F(rho, E_j)
    double conjectured_gap = 0.0;         // 4 sum_j tr(rho (E_j - E_j^2))
    bool agrees = false;                  // |gap| <= 1e-8
};

CoherenceReport naimark_gap(const DensityMatrix& rho, const Povm& e,
                            const TolerancePolicy& tol = {});

// --- randomized axiom checks ---

struct AxiomCheck {
    std::string property;
    int trials = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const;
};

struct AxiomSuiteConfig {
    std::vector<int> dims = {2, 3};
    int trials = 100;
    std::uint64_t seed = 1;
    TolerancePolicy tol;
};

// Randomized verification of the measure axioms: faithfulness of cf_block in
// both directions, convexity, unitary covariance of the embedded form, block
// additivity on direct-sum instances, and monotonicity under block dephasing,
// block unitaries and block permutations. Violations are data, not errors.
AxiomReport axiom_suite(const AxiomSuiteConfig& config);

} // namespace qficoh
