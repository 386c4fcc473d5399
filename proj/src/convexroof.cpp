#include "qficoh/convexroof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qficoh {

Matrix PureStateEnsemble::reconstruct(int dim) const {
    Matrix out = Matrix::Zero(dim, dim);
    for (int k = 0; k < size(); ++k) {
        out += weights[static_cast<std::size_t>(k)] *
               (states[static_cast<std::size_t>(k)] *
                states[static_cast<std::size_t>(k)].adjoint());
    }
    return out;
}

double PureStateEnsemble::reconstruction_error(const DensityMatrix& rho) const {
    return (reconstruct(rho.dim()) - rho.matrix()).norm();
}

Matrix y_matrix(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol) {
    require_hermitian(a, tol.herm, "y_matrix");
    if (a.rows() != rho.dim()) {
        throw DimensionMismatch("y_matrix: observable dimension mismatch");
    }
    RealVector lam = rho.spectrum().eigenvalues.cwiseMax(0.0);
    // The coefficient 2 sqrt(lam lam') / (lam + lam') is scale invariant, so
    // two eigenvalues of solver-noise size would produce an O(1) entry where
    // the kernel block must vanish. Snap them to exact zeros first.
    const double cutoff = tol.zero_eig * lam.maxCoeff();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] <= cutoff) lam[i] = 0.0;
    }
    const Matrix& phi = rho.spectrum().eigenvectors;
    const Matrix b = phi.adjoint() * a * phi;
    const int d = rho.dim();
    Matrix y(d, d);
    for (int l = 0; l < d; ++l) {
        for (int lp = 0; lp < d; ++lp) {
            const double s = lam[l] + lam[lp];
            const double coeff = (s > 0.0) ? 2.0 * std::sqrt(lam[l] * lam[lp]) / s : 0.0;
            y(l, lp) = coeff * b(l, lp);
        }
    }
    return (y + y.adjoint()) / 2.0;
}

CommutationVerdict commutation_criterion(const DensityMatrix& rho, const Povm& e,
                                         const TolerancePolicy& tol) {
    std::vector<Matrix> ys;
    double max_norm_sq = 0.0;
    for (int j = 0; j < e.size(); ++j) {
        ys.push_back(y_matrix(rho, e.element(j), tol));
        max_norm_sq = std::max(max_norm_sq, ys.back().squaredNorm());
    }
    CommutationVerdict verdict;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        for (std::size_t k = j + 1; k < ys.size(); ++k) {
            verdict.max_comm_norm = std::max(verdict.max_comm_norm, comm_norm(ys[j], ys[k]));
        }
    }
    verdict.commutes = verdict.max_comm_norm <= tol.commute * (1.0 + max_norm_sq);
    return verdict;
}

namespace {

void require_unitary(const Matrix& u, double tol, const char* context) {
    require_square(u, context);
    const double res =
        (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
    if (res > tol * (1.0 + std::sqrt(static_cast<double>(u.rows())))) {
        throw NotUnitary(std::string(context) + ": unitarity residual too large", res);
    }
}

// Unnormalized ensemble vectors as columns: Psi~ = Phi diag(sqrt(lam)) U^T,
// with U^T restricted to its first d rows (padded eigenvalues vanish).
Matrix unnormalized_members(const DensityMatrix& rho, const Matrix& u) {
    const RealVector lam = rho.spectrum().eigenvalues.cwiseMax(0.0);
    const Matrix scaled = rho.spectrum().eigenvectors * lam.cwiseSqrt().asDiagonal();
    return scaled * u.leftCols(rho.dim()).transpose();
}

} // namespace

PureStateEnsemble ensemble_from_unitary(const DensityMatrix& rho, const Matrix& u,
                                        const TolerancePolicy& tol) {
    require_unitary(u, tol.ortho, "ensemble_from_unitary");
    const int d_prime = static_cast<int>(u.rows());
    if (d_prime < rho.dim()) {
        throw BadDimension("ensemble_from_unitary: unitary smaller than state dimension");
    }
    const Matrix members = unnormalized_members(rho, u);
    PureStateEnsemble ens;
    for (int k = 0; k < d_prime; ++k) {
        const double p = members.col(k).squaredNorm();
        if (p <= kEnsembleWeightFloor) continue;
        ens.weights.push_back(p);
        ens.states.push_back(members.col(k) / std::sqrt(p));
    }
    return ens;
}

double gamma_check(const DensityMatrix& rho, const Matrix& u, const TolerancePolicy& tol) {
    require_unitary(u, tol.ortho, "gamma_check");
    const int d_prime = static_cast<int>(u.rows());
    const int d = rho.dim();
    if (d_prime < d) {
        throw BadDimension("gamma_check: unitary smaller than state dimension");
    }
    RealVector lam = RealVector::Zero(d_prime);
    lam.head(d) = rho.spectrum().eigenvalues.cwiseMax(0.0);

    std::vector<Matrix> gammas;
    std::vector<double> p;
    for (int k = 0; k < d_prime; ++k) {
        Matrix g(d_prime, d_prime);
        for (int l = 0; l < d_prime; ++l) {
            for (int lp = 0; lp < d_prime; ++lp) {
                g(l, lp) = std::sqrt((lam[l] + lam[lp]) / 2.0) * u(k, l) * std::conj(u(k, lp));
            }
        }
        gammas.push_back(std::move(g));
        double pk = 0.0;
        for (int l = 0; l < d; ++l) pk += lam[l] * std::norm(u(k, l));
        p.push_back(pk);
    }

    double dev = 0.0;
    for (int j = 0; j < d_prime; ++j) {
        if (p[static_cast<std::size_t>(j)] <= kEnsembleWeightFloor) continue;
        for (int k = 0; k < d_prime; ++k) {
            if (p[static_cast<std::size_t>(k)] <= kEnsembleWeightFloor) continue;
            const Complex inner = (gammas[static_cast<std::size_t>(j)] *
                                   gammas[static_cast<std::size_t>(k)])
                                      .trace() /
                                  std::sqrt(p[static_cast<std::size_t>(j)] *
                                            p[static_cast<std::size_t>(k)]);
            const double target = (j == k) ? 1.0 : 0.0;
            dev = std::max(dev, std::abs(inner - Complex(target, 0.0)));
        }
    }
    return dev;
}

double average_pure_cf(const PureStateEnsemble& ens, const Povm& e,
                       const TolerancePolicy& tol) {
    double total = 0.0;
    for (int k = 0; k < ens.size(); ++k) {
        const double p = ens.weights[static_cast<std::size_t>(k)];
        if (p <= kEnsembleWeightFloor) continue;
        double member = 0.0;
        for (int j = 0; j < e.size(); ++j) {
            member += pure_qfi(ens.states[static_cast<std::size_t>(k)], e.element(j), tol);
        }
        total += p * member;
    }
    return total;
}

namespace {

// theta in R^{m^2} -> Hermitian H -> U = exp(i H).
Matrix unitary_from_params(const RealVector& theta, int m) {
    Matrix h(m, m);
    int idx = 0;
    for (int k = 0; k < m; ++k) h(k, k) = theta[idx++];
    for (int k = 0; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) {
            h(k, l) = Complex(theta[idx], theta[idx + 1]);
            h(l, k) = std::conj(h(k, l));
            idx += 2;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Vector phases(m);
    for (int k = 0; k < m; ++k) {
        phases[k] = std::exp(Complex(0.0, solver.eigenvalues()[k]));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// Ensemble objective evaluated straight from the parameter vector; matches
// average_pure_cf(ensemble_from_unitary(...)) but skips normalization.
class RoofObjective {
public:
    RoofObjective(const DensityMatrix& rho, const Povm& e, int d_prime)
        : rho_(rho), d_prime_(d_prime) {
        for (int j = 0; j < e.size(); ++j) {
            es_.push_back(e.element(j));
        }
    }

    int params() const { return d_prime_ * d_prime_; }

    double operator()(const RealVector& theta) const {
        const Matrix u = unitary_from_params(theta, d_prime_);
        const Matrix members = unnormalized_members(rho_, u);
        double total = 0.0;
        for (int k = 0; k < d_prime_; ++k) {
            const double p = members.col(k).squaredNorm();
            if (p <= kEnsembleWeightFloor) continue;
            for (const Matrix& ej : es_) {
                const Vector x = ej * members.col(k);
                const double second = x.squaredNorm();
                const double first = members.col(k).dot(x).real();
                total += 4.0 * (second - first * first / p);
            }
        }
        return total;
    }

    Matrix unitary(const RealVector& theta) const {
        return unitary_from_params(theta, d_prime_);
    }

private:
    const DensityMatrix& rho_;
    std::vector<Matrix> es_;
    int d_prime_;
};

struct NelderMeadResult {
    RealVector x;
    double f = 0.0;
    long iterations = 0;
};

// Plain Nelder-Mead with the improvement-window stop rule: quit when the
// incumbent has improved by less than `tol` over the last 50 iterations.
NelderMeadResult nelder_mead(const RoofObjective& objective, const RealVector& x0,
                             double step, int max_iter, double tol) {
    const int n = static_cast<int>(x0.size());
    std::vector<RealVector> xs;
    std::vector<double> fs;
    xs.push_back(x0);
    fs.push_back(objective(x0));
    for (int i = 0; i < n; ++i) {
        RealVector xi = x0;
        xi[i] += step;
        xs.push_back(xi);
        fs.push_back(objective(xi));
    }

    std::vector<int> order(static_cast<std::size_t>(n + 1));
    std::vector<double> best_history;
    NelderMeadResult result;

    for (long iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i <= n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return fs[static_cast<std::size_t>(a)] <
                                             fs[static_cast<std::size_t>(b)]; });
        const int best = order.front();
        const int worst = order.back();
        const int second_worst = order[static_cast<std::size_t>(n - 1)];

        best_history.push_back(fs[static_cast<std::size_t>(best)]);
        result.iterations = iter + 1;
        if (iter >= 50 &&
            best_history[static_cast<std::size_t>(iter - 50)] -
                    best_history[static_cast<std::size_t>(iter)] <
                tol) {
            break;
        }

        RealVector centroid = RealVector::Zero(n);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            centroid += xs[static_cast<std::size_t>(i)];
        }
        centroid /= static_cast<double>(n);

        const RealVector reflected = centroid + (centroid - xs[static_cast<std::size_t>(worst)]);
        const double f_reflected = objective(reflected);
        if (f_reflected < fs[static_cast<std::size_t>(best)]) {
            const RealVector expanded =
                centroid + 2.0 * (centroid - xs[static_cast<std::size_t>(worst)]);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                xs[static_cast<std::size_t>(worst)] = expanded;
                fs[static_cast<std::size_t>(worst)] = f_expanded;
            } else {
                xs[static_cast<std::size_t>(worst)] = reflected;
                fs[static_cast<std::size_t>(worst)] = f_reflected;
            }
        } else if (f_reflected < fs[static_cast<std::size_t>(second_worst)]) {
            xs[static_cast<std::size_t>(worst)] = reflected;
            fs[static_cast<std::size_t>(worst)] = f_reflected;
        } else {
            const RealVector contracted =
                centroid + 0.5 * (xs[static_cast<std::size_t>(worst)] - centroid);
            const double f_contracted = objective(contracted);
            if (f_contracted < fs[static_cast<std::size_t>(worst)]) {
                xs[static_cast<std::size_t>(worst)] = contracted;
                fs[static_cast<std::size_t>(worst)] = f_contracted;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    xs[static_cast<std::size_t>(i)] =
                        xs[static_cast<std::size_t>(best)] +
                        0.5 * (xs[static_cast<std::size_t>(i)] -
                               xs[static_cast<std::size_t>(best)]);
                    fs[static_cast<std::size_t>(i)] = objective(xs[static_cast<std::size_t>(i)]);
                }
            }
        }
    }

    int final_best = 0;
    for (int i = 1; i <= n; ++i) {
        if (fs[static_cast<std::size_t>(i)] < fs[static_cast<std::size_t>(final_best)]) {
            final_best = i;
        }
    }
    result.x = xs[static_cast<std::size_t>(final_best)];
    result.f = fs[static_cast<std::size_t>(final_best)];
    return result;
}

} // namespace

RoofResult convex_roof_minimize(const DensityMatrix& rho, const Povm& e,
                                const RoofConfig& config, const TolerancePolicy& tol) {
    const int d = rho.dim();
    const int d_prime = config.d_prime == 0 ? d : config.d_prime;
    if (d_prime < d || d_prime > d * d) {
        std::ostringstream msg;
        msg << "convex_roof_minimize: d' = " << d_prime << " outside [" << d << ", " << d * d
            << "]";
        throw ConfigInvalid(msg.str());
    }
    if (config.starts < 1) {
        throw ConfigInvalid("convex_roof_minimize: need at least one start");
    }
    if (rho.dim() != e.dim()) {
        throw DimensionMismatch("convex_roof_minimize: state and measurement dimensions differ");
    }

    const RoofObjective objective(rho, e, d_prime);
    const CommutationVerdict verdict = commutation_criterion(rho, e, tol);

    RoofResult result;
    result.lower_bound = cf_direct(rho, e, tol);
    result.criterion_commutes = verdict.commutes;
    result.max_comm_norm = verdict.max_comm_norm;
    result.starts_used = config.starts;

    RealVector best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int start = 0; start < config.starts; ++start) {
        RealVector x0 = RealVector::Zero(objective.params());
        if (start > 0) {
            auto rng = make_engine(derive_seed(config.seed, static_cast<std::uint64_t>(start)));
            for (int i = 0; i < x0.size(); ++i) x0[i] = gauss(rng);
        }
        long budget = config.max_iter;
        RealVector x = x0;
        double f = std::numeric_limits<double>::infinity();
        // Coarse descent followed by two shrinking-simplex refinements.
        for (const double step : {0.5, 1e-3, 1e-5}) {
            if (budget <= 0) break;
            const NelderMeadResult nm =
                nelder_mead(objective, x, step, static_cast<int>(budget), config.tol);
            budget -= nm.iterations;
            result.iterations += nm.iterations;
            if (nm.f < f) {
                f = nm.f;
                x = nm.x;
            }
        }
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }

    result.roof_value = best_f;
    result.ensemble = ensemble_from_unitary(rho, objective.unitary(best_x), tol);
    return result;
}

std::optional<PureStateEnsemble> commuting_optimal_ensemble(const DensityMatrix& rho,
                                                            const Povm& e,
                                                            const TolerancePolicy& tol) {
    const CommutationVerdict verdict = commutation_criterion(rho, e, tol);
    if (!verdict.commutes) {
        return std::nullopt;
    }
    std::vector<Matrix> ys;
    double max_norm = 0.0;
    for (int j = 0; j < e.size(); ++j) {
        ys.push_back(y_matrix(rho, e.element(j), tol));
        max_norm = std::max(max_norm, ys.back().norm());
    }

    const int d = rho.dim();
    auto rng = make_engine(0x79a1d5u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix combo = Matrix::Zero(d, d);
        for (const Matrix& y : ys) {
            combo += gauss(rng) * y;
        }
        const Spectrum s = eigh(combo, tol);
        double offdiag = 0.0;
        for (const Matrix& y : ys) {
            Matrix rotated = s.eigenvectors.adjoint() * y * s.eigenvectors;
            rotated.diagonal().setZero();
            offdiag = std::max(offdiag, rotated.norm());
        }
        if (offdiag > 1e-6 * (1.0 + max_norm)) {
            continue; // degenerate combination; redraw weights
        }
        // Rows of U are the unconjugated eigenvectors: Y = sum_k r_k v_k v_k^dag
        // with (v_k)_l = U_{kl}.
        const Matrix u = s.eigenvectors.transpose();
        return ensemble_from_unitary(rho, u, tol);
    }
    throw NumericalFailure("commuting_optimal_ensemble: no weight draw separated the spectrum");
}

RoofGapWitness roof_gap_witness(const TolerancePolicy& tol) {
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const Complex w = std::exp(Complex(0.0, 2.0 * std::numbers::pi / 3.0));
    Matrix phi(3, 3);
    phi.col(0) << inv_sqrt3, inv_sqrt3, inv_sqrt3;
    phi.col(1) << inv_sqrt3, inv_sqrt3 * w, inv_sqrt3 * std::conj(w);
    phi.col(2) << inv_sqrt3, inv_sqrt3 * std::conj(w), inv_sqrt3 * w;
    RealVector lam(3);
    lam << 0.5, 0.5, 0.0;
    return RoofGapWitness{DensityMatrix::from_eigensystem(lam, phi, tol),
                          BasisMeasurement::computational(3)};
}

} // namespace qficoh
