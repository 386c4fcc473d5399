// Command-line front end: every computation in the library behind one verb,
// JSON on stdout, diagnostics on stderr.
//
// Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 usage.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "qficoh/convexroof.hpp"
#include "qficoh/io.hpp"
#include "qficoh/metrology.hpp"

namespace {

using qficoh::io::Json;

Json ensemble_to_json(const qficoh::PureStateEnsemble& ens) {
    Json members = Json::array();
    for (int k = 0; k < ens.size(); ++k) {
        Json member;
        member["weight"] = ens.weights[static_cast<std::size_t>(k)];
        Json vec = Json::array();
        const qficoh::Vector& psi = ens.states[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            vec.push_back(Json::array({psi[i].real(), psi[i].imag()}));
        }
        member["state"] = std::move(vec);
        members.push_back(std::move(member));
    }
    return members;
}

Json report_to_json(const qficoh::CoherenceReport& report) {
    Json out;
    out["direct_value"] = report.direct_value;
    out["embedded_value"] = report.embedded_value;
    out["gap"] = report.gap;
    out["per_element_values"] = report.per_element;
    out["conjectured_gap"] = report.conjectured_gap;
    out["flag"] = report.agrees ? "AGREES" : "DISAGREES";
    return out;
}

Json roof_to_json(const qficoh::RoofResult& roof) {
    Json out;
    out["lower_bound"] = roof.lower_bound;
    out["roof_value"] = roof.roof_value;
    out["criterion_commutes"] = roof.criterion_commutes;
    out["max_comm_norm"] = roof.max_comm_norm;
    out["starts_used"] = roof.starts_used;
    out["iterations"] = roof.iterations;
    out["ensemble"] = ensemble_to_json(roof.ensemble);
    return out;
}

void emit(const Json& doc) {
    std::cout << doc.dump(2) << "\n";
}

struct CliOptions {
    std::string state_path;
    std::string povm_path;
    std::string observable_path;
    std::string method = "both";
    int d_prime = 0;
    int starts = 16;
    long max_iter = 2000;
    double roof_tol = 1e-10;
    std::uint64_t seed = 0;
    long repetitions = 1000;
    int mc_trials = 2000;
    int suite_trials = 100;
    bool simulate = false;
    double theta0 = 0.3;
    std::string dims = "2,3";
    qficoh::TolerancePolicy tol;
};

std::vector<int> parse_dims(const std::string& list) {
    std::vector<int> dims;
    std::size_t pos = 0;
    while (pos < list.size()) {
        std::size_t next = list.find(',', pos);
        if (next == std::string::npos) next = list.size();
        dims.push_back(std::stoi(list.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (dims.empty()) {
        throw qficoh::ConfigInvalid("--dims needs a comma-separated list");
    }
    return dims;
}

int run(const std::string& command, const CliOptions& opt) {
    const qficoh::TolerancePolicy& tol = opt.tol;

    if (command == "validate") {
        Json out;
        if (!opt.state_path.empty()) {
            const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
            out["kind"] = "state";
            out["dim"] = rho.dim();
            out["eigenvalues"] = std::vector<double>(
                rho.spectrum().eigenvalues.data(),
                rho.spectrum().eigenvalues.data() + rho.dim());
        } else if (!opt.povm_path.empty()) {
            const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
            out["kind"] = povm.kind() == qficoh::MeasurementKind::General ? "povm"
                          : povm.kind() == qficoh::MeasurementKind::Projective
                              ? "projective-measurement"
                              : "basis-measurement";
            out["dim"] = povm.dim();
            out["elements"] = povm.size();
            if (povm.is_projective()) {
                out["block_dims"] = povm.block_dims();
            }
        } else if (!opt.observable_path.empty()) {
            const qficoh::Matrix a = qficoh::io::load_observable(opt.observable_path, tol);
            out["kind"] = "observable";
            out["dim"] = a.rows();
        } else {
            throw CLI::ValidationError("validate needs --state, --povm or --observable");
        }
        out["valid"] = true;
        emit(out);
        return 0;
    }

    if (command == "qfi") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Matrix a = qficoh::io::load_observable(opt.observable_path, tol);
        Json out;
        out["value"] = qficoh::qfi(rho, a, tol);
        emit(out);
        return 0;
    }

    if (command == "coherence") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
        Json out;
        if (opt.method == "direct") {
            out["direct_value"] = qficoh::cf_direct(rho, povm, tol);
        } else if (opt.method == "naimark") {
            out["embedded_value"] = qficoh::cf_embedded(rho, povm, tol);
        } else if (opt.method == "both") {
            out = report_to_json(qficoh::naimark_gap(rho, povm, tol));
        } else {
            throw CLI::ValidationError("--method must be direct, naimark or both");
        }
        emit(out);
        return 0;
    }

    if (command == "block-coherence") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
        const auto projective = qficoh::ProjectiveMeasurement::from_povm(povm);
        Json out;
        out["value"] = qficoh::cf_block(rho, projective, tol);
        out["block_dims"] = projective.block_dims();
        out["incoherence_residual"] = qficoh::incoherence_residual(rho, projective);
        emit(out);
        return 0;
    }

    if (command == "convex-roof") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
        qficoh::RoofConfig config;
        config.d_prime = opt.d_prime;
        config.starts = opt.starts;
        config.max_iter = static_cast<int>(opt.max_iter);
        config.tol = opt.roof_tol;
        config.seed = opt.seed;
        emit(roof_to_json(qficoh::convex_roof_minimize(rho, povm, config, tol)));
        return 0;
    }

    if (command == "criterion") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
        const auto verdict = qficoh::commutation_criterion(rho, povm, tol);
        Json out;
        out["commutes"] = verdict.commutes;
        out["max_comm_norm"] = verdict.max_comm_norm;
        Json ys = Json::array();
        for (int j = 0; j < povm.size(); ++j) {
            ys.push_back(qficoh::io::matrix_to_json(qficoh::y_matrix(rho, povm.element(j), tol)));
        }
        out["y_matrices"] = std::move(ys);
        emit(out);
        return 0;
    }

    if (command == "counterexample") {
        const qficoh::RoofGapWitness witness = qficoh::roof_gap_witness(tol);
        const qficoh::Povm povm = witness.basis.projective(tol).povm();
        const auto verdict = qficoh::commutation_criterion(witness.state, povm, tol);
        qficoh::RoofConfig config;
        config.d_prime = opt.d_prime == 0 ? 3 : opt.d_prime;
        config.starts = opt.starts;
        config.max_iter = static_cast<int>(opt.max_iter);
        config.tol = opt.roof_tol;
        config.seed = opt.seed;
        const qficoh::RoofResult roof =
            qficoh::convex_roof_minimize(witness.state, povm, config, tol);

        Json out;
        Json ys = Json::array();
        for (int j = 0; j < povm.size(); ++j) {
            ys.push_back(qficoh::io::matrix_to_json(
                qficoh::y_matrix(witness.state, povm.element(j), tol)));
        }
        out["state"] = qficoh::io::matrix_to_json(witness.state.matrix());
        out["y_matrices"] = std::move(ys);
        out["criterion_commutes"] = verdict.commutes;
        out["max_comm_norm"] = verdict.max_comm_norm;
        out["lower_bound"] = roof.lower_bound;
        out["roof_value"] = roof.roof_value;
        out["gap"] = roof.roof_value - roof.lower_bound;
        emit(out);
        return 0;
    }

    if (command == "metrology") {
        const qficoh::DensityMatrix rho = qficoh::io::load_state(opt.state_path, tol);
        const qficoh::Povm povm = qficoh::io::load_povm(opt.povm_path, tol);
        const qficoh::EstimationBudget budget =
            qficoh::uncertainty_budget(rho, povm, opt.repetitions, tol);
        Json out;
        Json bounds = Json::array();
        for (const auto& b : budget.per_parameter_bounds) {
            if (b) {
                bounds.push_back(*b);
            } else {
                bounds.push_back("unbounded");
            }
        }
        out["per_parameter_bounds"] = std::move(bounds);
        out["sum_bound"] = budget.sum_bound;
        out["repetitions"] = budget.repetitions;
        if (opt.simulate) {
            const qficoh::Matrix a = qficoh::io::load_observable(opt.observable_path, tol);
            const qficoh::EstimationExperiment ex = qficoh::simulate_estimation(
                rho, a, povm, opt.theta0, opt.repetitions, opt.mc_trials, opt.seed, tol);
            Json sim;
            sim["cfi"] = ex.cfi;
            sim["crlb"] = ex.crlb;
            if (ex.variance) {
                sim["variance"] = *ex.variance;
                sim["ratio"] = ex.ratio;
            } else {
                sim["variance"] = "not-applicable";
            }
            sim["mean_estimate"] = ex.mean_estimate;
            sim["trials"] = ex.trials;
            sim["theta_true"] = ex.theta_true;
            out["simulation"] = std::move(sim);
        }
        emit(out);
        return 0;
    }

    if (command == "suite") {
        qficoh::AxiomSuiteConfig config;
        config.dims = parse_dims(opt.dims);
        config.trials = opt.suite_trials;
        config.seed = opt.seed;
        config.tol = tol;
        const qficoh::AxiomReport report = qficoh::axiom_suite(config);
        Json out;
        Json checks = Json::array();
        for (const auto& check : report.checks) {
            Json c;
            c["property"] = check.property;
            c["trials"] = check.trials;
            c["max_violation"] = check.max_violation;
            c["tolerance"] = check.tolerance;
            c["pass"] = check.pass;
            checks.push_back(std::move(c));
        }
        out["checks"] = std::move(checks);
        out["all_pass"] = report.all_pass();
        emit(out);
        return report.all_pass() ? 0 : 2;
    }

    throw CLI::ValidationError("unknown command: " + command);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QFI-based coherence measures for states relative to general measurements"};
    app.require_subcommand(1);

    CliOptions opt;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--state", opt.state_path, "density matrix file");
        sub->add_option("--povm", opt.povm_path, "measurement file");
        sub->add_option("--observable", opt.observable_path, "Hermitian observable file");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--tol-herm", opt.tol.herm, "Hermiticity tolerance");
        sub->add_option("--tol-psd", opt.tol.psd, "positivity tolerance");
        sub->add_option("--tol-recon", opt.tol.recon, "reconstruction tolerance");
        sub->add_option("--tol-ortho", opt.tol.ortho, "orthonormality tolerance");
        sub->add_option("--tol-zero-eig", opt.tol.zero_eig, "eigenvalue-pair cutoff");
        sub->add_option("--tol-commute", opt.tol.commute, "commutation tolerance");
    };

    add_common(app.add_subcommand("validate", "validate a state, POVM or observable file"));
    add_common(app.add_subcommand("qfi", "quantum Fisher information of a state and observable"));

    CLI::App* coherence = app.add_subcommand("coherence", "POVM coherence of a state");
    add_common(coherence);
    coherence->add_option("--method", opt.method, "direct | naimark | both");

    add_common(app.add_subcommand("block-coherence",
                                  "block coherence for a projective measurement"));

    CLI::App* roof = app.add_subcommand("convex-roof", "convex-roof minimization");
    add_common(roof);
    roof->add_option("--dprime", opt.d_prime, "ensemble size parameter d' (default d)");
    roof->add_option("--starts", opt.starts, "optimizer starts");
    roof->add_option("--max-iter", opt.max_iter, "iteration budget per start");
    roof->add_option("--tol", opt.roof_tol, "optimizer improvement tolerance");

    add_common(app.add_subcommand("criterion", "Y-matrix commutation criterion"));

    CLI::App* witness = app.add_subcommand(
        "counterexample", "d = 3 instance where the roof exceeds the direct measure");
    add_common(witness);
    witness->add_option("--dprime", opt.d_prime, "ensemble size parameter d'");
    witness->add_option("--starts", opt.starts, "optimizer starts");
    witness->add_option("--max-iter", opt.max_iter, "iteration budget per start");
    witness->add_option("--tol", opt.roof_tol, "optimizer improvement tolerance");

    CLI::App* metrology = app.add_subcommand("metrology", "Cramer-Rao uncertainty budget");
    add_common(metrology);
    metrology->add_option("--repetitions", opt.repetitions, "independent repetitions N");
    metrology->add_flag("--simulate", opt.simulate, "run the Monte-Carlo MLE experiment");
    metrology->add_option("--trials", opt.mc_trials, "Monte-Carlo trials");
    metrology->add_option("--theta0", opt.theta0, "evaluation point for the simulation");

    CLI::App* suite = app.add_subcommand("suite", "randomized axiom checks");
    add_common(suite);
    suite->add_option("--dims", opt.dims, "comma-separated dimensions");
    suite->add_option("--trials", opt.suite_trials, "trials per dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), opt);
    } catch (const qficoh::NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    } catch (const qficoh::ValidationError& err) {
        std::cerr << "validation failure: " << err.what() << "\n";
        return 1;
    } catch (const CLI::Error& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
