// End-to-end checks of the command-line surface: file formats in, JSON out,
// exit codes as documented. The binary path arrives in QFICOH_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qficoh/io.hpp"

using namespace qficoh;
using qficoh::io::Json;

namespace {

std::string cli_path() {
    const char* path = std::getenv("QFICOH_CLI");
    REQUIRE_MESSAGE(path != nullptr, "QFICOH_CLI must point at the built binary");
    return path;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string command = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const Json& doc)
        : path(std::string("qficoh_cli_test_") + name + ".json") {
        std::ofstream out(path);
        out << doc.dump();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Json plus_state_file() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return io::matrix_file(m);
}

Json basis_povm_file(int d) {
    std::vector<Matrix> ps;
    for (int j = 0; j < d; ++j) {
        Matrix p = Matrix::Zero(d, d);
        p(j, j) = 1.0;
        ps.push_back(p);
    }
    return io::povm_file(ps);
}

Json noisy_povm_file() {
    return io::povm_file({Matrix::Identity(2, 2) / 2.0, Matrix::Identity(2, 2) / 2.0});
}

} // namespace

TEST_CASE("validate reports kinds and exit codes") {
    TempFile state("state", plus_state_file());
    const RunResult ok = run_cli("validate --state " + state.path);
    CHECK(ok.exit_code == 0);
    const Json doc = Json::parse(ok.output);
    CHECK(doc["kind"] == "state");
    CHECK(doc["valid"] == true);

    TempFile basis("basis", basis_povm_file(2));
    const Json povm_doc = Json::parse(run_cli("validate --povm " + basis.path).output);
    CHECK(povm_doc["kind"] == "basis-measurement");

    Matrix bad = Matrix::Zero(2, 2);
    bad.diagonal() << 0.45, 0.45;
    TempFile broken("broken", io::matrix_file(bad));
    CHECK(run_cli("validate --state " + broken.path).exit_code == 1);
}

TEST_CASE("usage errors exit with code 3") {
    CHECK(run_cli("no-such-command").exit_code == 3);
    CHECK(run_cli("qfi --no-such-flag x").exit_code == 3);
}

TEST_CASE("qfi subcommand computes the worked qubit value") {
    TempFile state("state", plus_state_file());
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    TempFile obs("obs", io::matrix_file(p0));
    const RunResult run = run_cli("qfi --state " + state.path + " --observable " + obs.path);
    REQUIRE(run.exit_code == 0);
    const Json doc = Json::parse(run.output);
    CHECK(std::abs(doc["value"].get<double>() - 1.0) <= 1e-10);
}

TEST_CASE("coherence subcommand reports both routes and the gap") {
    TempFile state("state", plus_state_file());
    TempFile noisy("noisy", noisy_povm_file());
    const RunResult run = run_cli("coherence --state " + state.path + " --povm " + noisy.path +
                                  " --method both");
    REQUIRE(run.exit_code == 0);
    const Json doc = Json::parse(run.output);
    CHECK(std::abs(doc["direct_value"].get<double>()) <= 1e-12);
    CHECK(std::abs(doc["embedded_value"].get<double>() - 2.0) <= 1e-9);
    CHECK(std::abs(doc["gap"].get<double>() - 2.0) <= 1e-9);
    CHECK(doc["flag"] == "DISAGREES");

    TempFile basis("basis", basis_povm_file(2));
    const Json agree = Json::parse(
        run_cli("coherence --state " + state.path + " --povm " + basis.path + " --method both")
            .output);
    CHECK(agree["flag"] == "AGREES");
}

TEST_CASE("block-coherence rejects non-projective input") {
    TempFile state("state", plus_state_file());
    TempFile noisy("noisy", noisy_povm_file());
    CHECK(run_cli("block-coherence --state " + state.path + " --povm " + noisy.path)
              .exit_code == 1);

    TempFile basis("basis", basis_povm_file(2));
    const RunResult run =
        run_cli("block-coherence --state " + state.path + " --povm " + basis.path);
    REQUIRE(run.exit_code == 0);
    CHECK(std::abs(Json::parse(run.output)["value"].get<double>() - 2.0) <= 1e-10);
}

TEST_CASE("counterexample reproduces the printed instance") {
    const RunResult run = run_cli("counterexample");
    REQUIRE(run.exit_code == 0);
    const Json doc = Json::parse(run.output);
    CHECK(doc["criterion_commutes"] == false);
    CHECK(std::abs(doc["max_comm_norm"].get<double>() - std::sqrt(6.0) / 9.0) <= 1e-10);
    CHECK(std::abs(doc["lower_bound"].get<double>() - 4.0 / 3.0) <= 1e-9);
    CHECK(std::abs(doc["roof_value"].get<double>() - 2.0) <= 1e-4);

    // First Y matrix equals (1/3) on the upper-left 2x2 block of ones.
    const Json y1 = doc["y_matrices"][0];
    CHECK(std::abs(y1[0][0][0].get<double>() - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(y1[0][1][0].get<double>() - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(y1[2][2][0].get<double>()) <= 1e-12);
    // Second Y matrix carries the phase exp(2 pi i / 3) / 3 off diagonal.
    const Json y2 = doc["y_matrices"][1];
    CHECK(std::abs(y2[0][1][0].get<double>() + 1.0 / 6.0) <= 1e-10);
    CHECK(std::abs(y2[0][1][1].get<double>() - std::sqrt(3.0) / 6.0) <= 1e-10);
}

TEST_CASE("identical invocations produce identical bytes") {
    TempFile state("state", plus_state_file());
    TempFile basis("basis", basis_povm_file(2));
    const std::string args =
        "coherence --state " + state.path + " --povm " + basis.path + " --method both";
    const RunResult first = run_cli(args);
    const RunResult second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);

    const std::string roof_args = "convex-roof --state " + state.path + " --povm " +
                                  basis.path + " --starts 4 --seed 9";
    CHECK(run_cli(roof_args).output == run_cli(roof_args).output);
}

TEST_CASE("criterion and metrology subcommands emit their reports") {
    TempFile state("state", plus_state_file());
    TempFile basis("basis", basis_povm_file(2));
    const Json crit =
        Json::parse(run_cli("criterion --state " + state.path + " --povm " + basis.path).output);
    CHECK(crit["commutes"] == true);
    CHECK(crit["y_matrices"].size() == 2);

    const Json budget = Json::parse(
        run_cli("metrology --state " + state.path + " --povm " + basis.path +
                " --repetitions 1")
            .output);
    CHECK(std::abs(budget["sum_bound"].get<double>() - 2.0) <= 1e-9);

    Matrix diag = Matrix::Zero(2, 2);
    diag.diagonal() << 0.8, 0.2;
    TempFile diag_state("diag", io::matrix_file(diag));
    const Json unbounded = Json::parse(
        run_cli("metrology --state " + diag_state.path + " --povm " + basis.path +
                " --repetitions 5")
            .output);
    CHECK(unbounded["per_parameter_bounds"][0] == "unbounded");
    CHECK(unbounded["sum_bound"].get<double>() == 0.0);
}

TEST_CASE("suite subcommand runs the axiom checks") {
    const RunResult run = run_cli("suite --dims 2 --trials 5 --seed 1");
    REQUIRE(run.exit_code == 0);
    const Json doc = Json::parse(run.output);
    CHECK(doc["all_pass"] == true);
    CHECK(doc["checks"].size() == 6);
}
