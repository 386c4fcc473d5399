#include "qficoh/coherence.hpp"

#include <algorithm>
#include <limits>

namespace qficoh {

namespace {

void check_dims(const DensityMatrix& rho, const Povm& e, const char* context) {
    if (rho.dim() != e.dim()) {
        throw DimensionMismatch(std::string(context) + ": state and measurement dimensions differ");
    }
}

} // namespace

double cf_direct(const DensityMatrix& rho, const Povm& e, const TolerancePolicy& tol) {
    check_dims(rho, e, "cf_direct");
    double total = 0.0;
    for (int j = 0; j < e.size(); ++j) {
        total += qfi(rho, e.element(j), tol);
    }
    return total;
}

double cf_embedded(const DensityMatrix& rho, const Povm& e, const TolerancePolicy& tol) {
    check_dims(rho, e, "cf_embedded");
    const KrausRoots roots = kraus_roots(e, {}, tol);
    const DensityMatrix rho_eps = embed_state(rho, roots, tol);
    double total = 0.0;
    for (int j = 0; j < e.size(); ++j) {
        total += qfi(rho_eps, register_projector(e.dim(), e.size(), j), tol);
    }
    return total;
}

double cf_block(const DensityMatrix& rho, const ProjectiveMeasurement& p,
                const TolerancePolicy& tol) {
    return cf_direct(rho, p.povm(), tol);
}

double cf_standard(const DensityMatrix& rho, const BasisMeasurement& b,
                   const TolerancePolicy& tol) {
    if (rho.dim() != b.dim()) {
        throw DimensionMismatch("cf_standard: state and basis dimensions differ");
    }
    double total = 0.0;
    for (int j = 0; j < b.dim(); ++j) {
        total += qfi(rho, b.projector(j), tol);
    }
    return total;
}

CoherenceReport naimark_gap(const DensityMatrix& rho, const Povm& e,
                            const TolerancePolicy& tol) {
    check_dims(rho, e, "naimark_gap");
    CoherenceReport report;
    for (int j = 0; j < e.size(); ++j) {
        report.per_element.push_back(qfi(rho, e.element(j), tol));
        report.direct_value += report.per_element.back();
        const Matrix& ej = e.element(j);
        report.conjectured_gap += 4.0 * (rho.matrix() * (ej - ej * ej)).trace().real();
    }
    report.embedded_value = cf_embedded(rho, e, tol);
    report.gap = report.embedded_value - report.direct_value;
    report.agrees = std::abs(report.gap) <= 1e-8;
    return report;
}

bool AxiomReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.pass; });
}

namespace {

// Random partition of d into at least two positive blocks (one block when
// d == 1). Used to draw projective measurements of varying coarseness.
std::vector<int> random_partition(int d, std::mt19937_64& rng) {
    if (d == 1) return {1};
    std::uniform_int_distribution<int> n_dist(2, d);
    const int n = n_dist(rng);
    std::vector<int> dims(static_cast<std::size_t>(n), 1);
    int rest = d - n;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (rest > 0) {
        dims[static_cast<std::size_t>(pick(rng))] += 1;
        --rest;
    }
    return dims;
}

// Orthonormal column bases of each projector's range.
std::vector<Matrix> block_bases(const ProjectiveMeasurement& p, const TolerancePolicy& tol) {
    std::vector<Matrix> bases;
    for (int j = 0; j < p.size(); ++j) {
        const Spectrum s = eigh(p.projector(j), tol);
        const int rank = p.block_dims()[static_cast<std::size_t>(j)];
        bases.push_back(s.eigenvectors.leftCols(rank));
    }
    return bases;
}

struct Accumulator {
    double max_violation = -std::numeric_limits<double>::infinity();
    int trials = 0;
    void add(double v) {
        max_violation = std::max(max_violation, v);
        ++trials;
    }
};

} // namespace

AxiomReport axiom_suite(const AxiomSuiteConfig& config) {
    const TolerancePolicy& tol = config.tol;
    Accumulator faith_fwd, faith_bwd, convexity, covariance, additivity, monotonicity;

    for (std::size_t di = 0; di < config.dims.size(); ++di) {
        const int d = config.dims[di];
        if (d < 1) throw ConfigInvalid("axiom_suite: dimensions must be positive");
        for (int t = 0; t < config.trials; ++t) {
            const std::uint64_t s0 =
                derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(di)),
                            static_cast<std::uint64_t>(t));
            auto rng = make_engine(s0);

            const ProjectiveMeasurement p = random_projective(d, random_partition(d, rng),
                                                              derive_seed(s0, 1), tol);

            // (B1) forward: constructed block-incoherent states measure zero.
            const DensityMatrix rho_bi =
                random_block_incoherent_state(p, derive_seed(s0, 2), tol);
            faith_fwd.add(cf_block(rho_bi, p, tol));

            // (B1) backward: visibly coherent states measure nonzero.
            const DensityMatrix rho = random_state(d, d, derive_seed(s0, 3), tol);
            if (incoherence_residual(rho, p) >= 1e-3) {
                faith_bwd.add(1e-8 - cf_block(rho, p, tol));
            }

            // (B4)/(P4) convexity, on a general POVM and on p.
            {
                std::uniform_int_distribution<int> n_dist(1, d + 1);
                const Povm e = random_povm(d, n_dist(rng), derive_seed(s0, 4), tol);
                const DensityMatrix rho2 = random_state(d, d, derive_seed(s0, 5), tol);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const double w = unif(rng);
                const DensityMatrix mix = DensityMatrix::validate(
                    w * rho.matrix() + (1.0 - w) * rho2.matrix(), tol);
                convexity.add(cf_direct(mix, e, tol) -
                              (w * cf_direct(rho, e, tol) + (1.0 - w) * cf_direct(rho2, e, tol)));
                convexity.add(cf_block(mix, p, tol) -
                              (w * cf_block(rho, p, tol) + (1.0 - w) * cf_block(rho2, p, tol)));
            }

            // Unitary covariance of the embedded form.
            {
                std::uniform_int_distribution<int> n_dist(1, d + 1);
                const int n = n_dist(rng);
                const Povm e = random_povm(d, n, derive_seed(s0, 6), tol);
                const KrausRoots roots = kraus_roots(e, {}, tol);
                const DensityMatrix rho_eps = embed_state(rho, roots, tol);
                auto urng = make_engine(derive_seed(s0, 7));
                const Matrix u = random_unitary(n * d, urng);
                double before = 0.0, after = 0.0;
                const DensityMatrix rotated = DensityMatrix::validate(
                    u * rho_eps.matrix() * u.adjoint(), tol);
                for (int j = 0; j < n; ++j) {
                    const Matrix pj = register_projector(d, n, j);
                    before += qfi(rho_eps, pj, tol);
                    after += qfi(rotated, u * pj * u.adjoint(), tol);
                }
                covariance.add(std::abs(after - before) / (1.0 + std::abs(before)));
            }

            // (B5) block additivity on a constructed direct sum.
            if (d >= 2) {
                std::uniform_int_distribution<int> split_dist(1, d - 1);
                const int d1 = split_dist(rng);
                const int d2 = d - d1;
                auto prng = make_engine(derive_seed(s0, 8));
                const ProjectiveMeasurement p1 =
                    random_projective(d1, random_partition(d1, prng), derive_seed(s0, 9), tol);
                const ProjectiveMeasurement p2 =
                    random_projective(d2, random_partition(d2, prng), derive_seed(s0, 10), tol);
                std::vector<Matrix> blocks;
                for (int j = 0; j < p1.size(); ++j) {
                    Matrix pj = Matrix::Zero(d, d);
                    pj.topLeftCorner(d1, d1) = p1.projector(j);
                    blocks.push_back(pj);
                }
                for (int j = 0; j < p2.size(); ++j) {
                    Matrix pj = Matrix::Zero(d, d);
                    pj.bottomRightCorner(d2, d2) = p2.projector(j);
                    blocks.push_back(pj);
                }
                const ProjectiveMeasurement split = ProjectiveMeasurement::validate(blocks, tol);
                const DensityMatrix rho1 = random_state(d1, d1, derive_seed(s0, 11), tol);
                const DensityMatrix rho2 = random_state(d2, d2, derive_seed(s0, 12), tol);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const double w = unif(rng);
                Matrix lift1 = Matrix::Zero(d, d);
                lift1.topLeftCorner(d1, d1) = rho1.matrix();
                Matrix lift2 = Matrix::Zero(d, d);
                lift2.bottomRightCorner(d2, d2) = rho2.matrix();
                const DensityMatrix sum_state =
                    DensityMatrix::validate(w * lift1 + (1.0 - w) * lift2, tol);
                const double lhs = cf_block(sum_state, split, tol);
                const double rhs = w * cf_block(DensityMatrix::validate(lift1, tol), split, tol) +
                                   (1.0 - w) *
                                       cf_block(DensityMatrix::validate(lift2, tol), split, tol);
                additivity.add(std::abs(lhs - rhs));
            }

            // (B2) monotonicity under the constructive block-incoherent family.
            {
                const double before = cf_block(rho, p, tol);
                const DensityMatrix dephased =
                    DensityMatrix::validate(block_dephase(rho.matrix(), p), tol);
                monotonicity.add(cf_block(dephased, p, tol) - before);

                const std::vector<Matrix> bases = block_bases(p, tol);
                auto urng = make_engine(derive_seed(s0, 13));
                Matrix block_u = Matrix::Zero(d, d);
                for (int j = 0; j < p.size(); ++j) {
                    const int dj = p.block_dims()[static_cast<std::size_t>(j)];
                    const Matrix uj = random_unitary(dj, urng);
                    block_u += bases[static_cast<std::size_t>(j)] * uj *
                               bases[static_cast<std::size_t>(j)].adjoint();
                }
                const DensityMatrix rotated = DensityMatrix::validate(
                    block_u * rho.matrix() * block_u.adjoint(), tol);
                monotonicity.add(cf_block(rotated, p, tol) - before);

                // Swap two equal-rank blocks when the partition offers a pair.
                int a = -1, b = -1;
                for (int j = 0; j < p.size() && a < 0; ++j) {
                    for (int k = j + 1; k < p.size(); ++k) {
                        if (p.block_dims()[static_cast<std::size_t>(j)] ==
                            p.block_dims()[static_cast<std::size_t>(k)]) {
                            a = j;
                            b = k;
                            break;
                        }
                    }
                }
                if (a >= 0) {
                    Matrix swap_u = Matrix::Identity(d, d);
                    const Matrix& ba = bases[static_cast<std::size_t>(a)];
                    const Matrix& bb = bases[static_cast<std::size_t>(b)];
                    swap_u -= ba * ba.adjoint() + bb * bb.adjoint();
                    swap_u += ba * bb.adjoint() + bb * ba.adjoint();
                    const DensityMatrix swapped = DensityMatrix::validate(
                        swap_u * rho.matrix() * swap_u.adjoint(), tol);
                    monotonicity.add(cf_block(swapped, p, tol) - before);
                }
            }
        }
    }

    auto finish = [](const char* name, const Accumulator& acc, double tolerance) {
        AxiomCheck check;
        check.property = name;
        check.trials = acc.trials;
        check.max_violation = acc.trials > 0 ? acc.max_violation : 0.0;
        check.tolerance = tolerance;
        check.pass = check.max_violation <= tolerance;
        return check;
    };

    AxiomReport report;
    report.checks.push_back(finish("faithfulness_zero_on_incoherent", faith_fwd, 1e-10));
    report.checks.push_back(finish("faithfulness_positive_on_coherent", faith_bwd, 0.0));
    report.checks.push_back(finish("convexity", convexity, 1e-9));
    report.checks.push_back(finish("unitary_covariance_embedded", covariance, 1e-9));
    report.checks.push_back(finish("block_additivity", additivity, 1e-9));
    report.checks.push_back(finish("monotonicity_block_incoherent", monotonicity, 1e-9));
    return report;
}

} // namespace qficoh
