#include "qficoh/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qficoh {

namespace {

constexpr double kQfiFloor = 1e-12;
constexpr double kDiffStep = 1e-5;
constexpr double kProbFloor = 1e-12;

// Outcome probabilities of m on exp(-i A theta) rho exp(i A theta), with the
// generator's eigendecomposition precomputed once.
class OutcomeModel {
public:
    OutcomeModel(const DensityMatrix& rho, const Matrix& a, const Povm& m,
                 const TolerancePolicy& tol)
        : rho_(rho.matrix()), m_(m), gen_(eigh(a, tol)) {
        if (a.rows() != rho.dim() || m.dim() != rho.dim()) {
            throw DimensionMismatch("metrology: state, generator and measurement disagree");
        }
    }

    std::vector<double> probabilities(double theta) const {
        Vector phases(gen_.dim());
        for (int i = 0; i < gen_.dim(); ++i) {
            phases[i] = std::exp(Complex(0.0, -gen_.eigenvalues[i] * theta));
        }
        const Matrix u = gen_.eigenvectors * phases.asDiagonal() * gen_.eigenvectors.adjoint();
        const Matrix evolved = u * rho_ * u.adjoint();
        std::vector<double> p;
        for (int j = 0; j < m_.size(); ++j) {
            p.push_back(std::max((m_.element(j) * evolved).trace().real(), 0.0));
        }
        return p;
    }

    int outcomes() const { return m_.size(); }

private:
    Matrix rho_;
    const Povm& m_;
    Spectrum gen_;
};

double log_likelihood(const std::vector<long>& counts, const std::vector<double>& p) {
    double ll = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) continue;
        if (p[j] <= 1e-300) return -std::numeric_limits<double>::infinity();
        ll += static_cast<double>(counts[j]) * std::log(p[j]);
    }
    return ll;
}

} // namespace

std::optional<double> qcrb_bound(const DensityMatrix& rho, const Matrix& a, long repetitions,
                                 const TolerancePolicy& tol) {
    if (repetitions < 1) {
        throw ConfigInvalid("qcrb_bound: repetitions must be positive");
    }
    const double f = qfi(rho, a, tol);
    if (f <= kQfiFloor) {
        return std::nullopt;
    }
    return 1.0 / (static_cast<double>(repetitions) * f);
}

EstimationBudget uncertainty_budget(const DensityMatrix& rho, const Povm& e, long repetitions,
                                    const TolerancePolicy& tol) {
    EstimationBudget budget;
    budget.repetitions = repetitions;
    for (int j = 0; j < e.size(); ++j) {
        budget.per_parameter_bounds.push_back(qcrb_bound(rho, e.element(j), repetitions, tol));
    }
    for (const auto& bound : budget.per_parameter_bounds) {
        if (bound) {
            budget.sum_bound += 1.0 / *bound;
        }
    }
    return budget;
}

double classical_fisher(const DensityMatrix& rho, const Matrix& a, const Povm& m, double theta0,
                        const TolerancePolicy& tol) {
    const OutcomeModel model(rho, a, m, tol);
    const std::vector<double> p = model.probabilities(theta0);
    const std::vector<double> p_plus = model.probabilities(theta0 + kDiffStep);
    const std::vector<double> p_minus = model.probabilities(theta0 - kDiffStep);
    double cfi = 0.0;
    for (int j = 0; j < model.outcomes(); ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        if (p[sj] < kProbFloor) continue;
        const double dp = (p_plus[sj] - p_minus[sj]) / (2.0 * kDiffStep);
        cfi += dp * dp / p[sj];
    }
    return cfi;
}

EstimationExperiment simulate_estimation(const DensityMatrix& rho, const Matrix& a,
                                         const Povm& m, double theta_true, long repetitions,
                                         int trials, std::uint64_t seed,
                                         const TolerancePolicy& tol) {
    if (repetitions < 1 || trials < 1) {
        throw ConfigInvalid("simulate_estimation: repetitions and trials must be positive");
    }
    EstimationExperiment experiment;
    experiment.repetitions = repetitions;
    experiment.trials = trials;
    experiment.theta_true = theta_true;
    experiment.cfi = classical_fisher(rho, a, m, theta_true, tol);
    if (experiment.cfi <= 1e-6) {
        throw FlatLikelihood("simulate_estimation: classical Fisher information vanishes at theta0",
                             experiment.cfi);
    }
    experiment.crlb = 1.0 / (static_cast<double>(repetitions) * experiment.cfi);

    const OutcomeModel model(rho, a, m, tol);
    const std::vector<double> p_true = model.probabilities(theta_true);
    std::vector<double> cdf(p_true.size());
    std::partial_sum(p_true.begin(), p_true.end(), cdf.begin());
    const double total = cdf.back();

    // MLE grid over [theta_true - 1, theta_true + 1]; probabilities depend on
    // theta only, so the grid is shared across trials.
    constexpr int kGridPoints = 201;
    const double lo = theta_true - 1.0;
    const double hi = theta_true + 1.0;
    const double grid_step = (hi - lo) / (kGridPoints - 1);
    std::vector<std::vector<double>> grid_probs;
    for (int g = 0; g < kGridPoints; ++g) {
        grid_probs.push_back(model.probabilities(lo + g * grid_step));
    }

    auto rng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> estimates;
    std::vector<long> counts(p_true.size());

    for (int t = 0; t < trials; ++t) {
        std::fill(counts.begin(), counts.end(), 0L);
        for (long shot = 0; shot < repetitions; ++shot) {
            const double r = unif(rng) * total;
            const std::size_t outcome = static_cast<std::size_t>(
                std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
            ++counts[std::min(outcome, counts.size() - 1)];
        }

        std::vector<double> grid_ll(kGridPoints);
        for (int g = 0; g < kGridPoints; ++g) {
            grid_ll[static_cast<std::size_t>(g)] =
                log_likelihood(counts, grid_probs[static_cast<std::size_t>(g)]);
        }

        // Refine every local maximum of the grid by golden section, then pick
        // the best refined candidate. Even outcome distributions produce a
        // mirror mode at the reflected parameter with exactly equal
        // likelihood; ties resolve toward the window center theta_true.
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        double best_theta = theta_true;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (int g = 0; g < kGridPoints; ++g) {
            const std::size_t sg = static_cast<std::size_t>(g);
            if (g > 0 && grid_ll[sg] <= grid_ll[sg - 1]) continue;
            if (g + 1 < kGridPoints && grid_ll[sg] < grid_ll[sg + 1]) continue;

            double a_lo = std::max(lo, lo + (g - 1) * grid_step);
            double b_hi = std::min(hi, lo + (g + 1) * grid_step);
            double x1 = b_hi - golden * (b_hi - a_lo);
            double x2 = a_lo + golden * (b_hi - a_lo);
            double f1 = log_likelihood(counts, model.probabilities(x1));
            double f2 = log_likelihood(counts, model.probabilities(x2));
            while (b_hi - a_lo > 1e-6) {
                if (f1 < f2) {
                    a_lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a_lo + golden * (b_hi - a_lo);
                    f2 = log_likelihood(counts, model.probabilities(x2));
                } else {
                    b_hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b_hi - golden * (b_hi - a_lo);
                    f1 = log_likelihood(counts, model.probabilities(x1));
                }
            }
            const double theta_hat = (a_lo + b_hi) / 2.0;
            const double ll_hat =
                log_likelihood(counts, model.probabilities(theta_hat));
            const bool first = !std::isfinite(best_ll);
            const bool tie =
                !first && std::abs(ll_hat - best_ll) <= 1e-9 * (1.0 + std::abs(best_ll));
            const bool closer =
                std::abs(theta_hat - theta_true) < std::abs(best_theta - theta_true);
            if (first || (tie && closer) || (!tie && ll_hat > best_ll)) {
                best_ll = std::max(best_ll, ll_hat);
                best_theta = theta_hat;
            }
        }
        estimates.push_back(best_theta);
    }

    double mean = 0.0;
    for (double est : estimates) mean += est;
    mean /= static_cast<double>(trials);
    experiment.mean_estimate = mean;
    if (trials >= 2) {
        double ss = 0.0;
        for (double est : estimates) ss += (est - mean) * (est - mean);
        experiment.variance = ss / static_cast<double>(trials - 1);
        experiment.ratio = *experiment.variance / experiment.crlb;
    }
    return experiment;
}

} // namespace qficoh
