#pragma once

#include "qficoh/coherence.hpp"

namespace qficoh {

// Cramer-Rao lower bound on (Delta theta)^2 for exp(-i A theta) with N
// repetitions: 1 / (N F(rho, A)). Empty when the QFI vanishes (bound
// unbounded).
std::optional<double> qcrb_bound(const DensityMatrix& rho, const Matrix& a, long repetitions,
                                 const TolerancePolicy& tol = {});

// Per-outcome Cramer-Rao bounds plus their aggregated uncertainty budget.
// sum_bound is built as the literal sum of the reciprocal bounds, so
// sum(1 / bound_j) == sum_bound holds exactly; it agrees with
// N * cf_direct(rho, E) within roundoff.
struct EstimationBudget {
    std::vector<std::optional<double>> per_parameter_bounds;
    double sum_bound = 0.0;
    long repetitions = 0;
};

EstimationBudget uncertainty_budget(const DensityMatrix& rho, const Povm& e, long repetitions,
                                    const TolerancePolicy& tol = {});

// Classical Fisher information of the outcome distribution of measurement m
// on rho(theta) = exp(-i A theta) rho exp(i A theta), evaluated at theta0 by
// central differences with step 1e-5. Outcomes with probability below 1e-12
// are skipped.
double classical_fisher(const DensityMatrix& rho, const Matrix& a, const Povm& m, double theta0,
                        const TolerancePolicy& tol = {});

struct EstimationExperiment {
    std::optional<double> variance;  // sample variance of the MLE; empty for < 2 trials
    double mean_estimate = 0.0;
    double cfi = 0.0;
    double crlb = 0.0;               // 1 / (N * CFI)
    double ratio = 0.0;              // variance / crlb (0 when variance is empty)
    long repetitions = 0;
    int trials = 0;
    double theta_true = 0.0;
};

// Monte-Carlo maximum-likelihood estimation of theta_true from N outcomes per
// trial, drawn from the measurement distribution. The MLE is a grid search
// over [theta_true - 1, theta_true + 1] refined by golden section to 1e-6.
// Deterministic per seed.
EstimationExperiment simulate_estimation(const DensityMatrix& rho, const Matrix& a,
                                         const Povm& m, double theta_true, long repetitions,
                                         int trials, std::uint64_t seed,
                                         const TolerancePolicy& tol = {});

} // namespace qficoh
