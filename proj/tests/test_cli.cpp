// test_cli.cpp — the `qms` batch front end: reports, exit codes, determinism and the golden extension
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qms/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace qms;
using namespace qms::testing;
namespace io = qms::io;
namespace cli = qms::cli;

namespace {

std::string data(const std::string& name) { return std::string(QMS_TEST_DATA) + "/" + name; }

cli::JobSpec job(const std::string& command, std::map<std::string, std::string> inputs) {
    cli::JobSpec j;
    j.command = command;
    j.inputs = std::move(inputs);
    return j;
}

// Runs the binary, returning its exit status; stdout goes to `out`.
int run_binary(const std::string& args, const std::string& out = "/dev/null") {
    std::string cmd = std::string(QMS_BINARY) + " " + args + " > " + out + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "qms_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("check on the chain passes and names its residuals") {
    cli::Report r = cli::run(job("check", {{"generator", data("chain.json")}}));
    CHECK(r.exit_code == cli::EXIT_OK);
    CHECK(r.body["status"] == "ok");
    CHECK(r.body["version"] == "v1");
    for (const char* key : {"unital", "hermiticity", "cnd", "gns_symmetric", "modular_commutation"})
        CHECK(r.body["residuals"].contains(key));
    for (const auto& [name, row] : r.body["residuals"].items()) {
        CAPTURE(name);
        CHECK(row["pass"].get<bool>());
        CHECK(row["value"].get<double>() <= row["tol"].get<double>());
    }
}

TEST_CASE("extend reproduces the golden closed form entrywise") {
    cli::Report r = cli::run(job("extend", {{"sub", data("chain.json")}}));
    REQUIRE(r.exit_code == cli::EXIT_OK);
    Matrix got = io::matrix_from_json(r.body["artifacts"]["generator"]["mat"]);
    io::json golden = io::read_file(data("extension_chain_golden.json"));
    Matrix want = io::matrix_from_json(golden["mat"]);
    REQUIRE(got.rows() == want.rows());
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10);

    // Thin shell: the artifact equals the library result.
    ChainSpec c = chain_example();
    QMSGenerator lib = extend_generator(chain_to_generator(c), full_algebra(2), c.state());
    CHECK((got - lib.op.mat()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("decompose and fock-verify are thin wrappers") {
    ChainSpec c = chain_example();
    cli::Report fv = cli::run(job("fock-verify", {{"generator", data("chain.json")}}));
    CHECK(fv.exit_code == cli::EXIT_OK);
    QMSGenerator l = chain_to_generator(c);
    CEResult ce = ce_pipeline(l, c.state());
    CHECK(fv.body["residuals"]["ce_identity"]["value"].get<double>() == doctest::Approx(ce.ce_residual / std::max(1.0, l.op.norm())).epsilon(1e-6));

    cli::Report dec = cli::run(job("decompose", {{"generator", data("depolarizing.json")}}));
    CHECK(dec.exit_code == cli::EXIT_OK);
    AlickiForm f = io::alicki_from_json(dec.body["artifacts"]["alicki"]);
    io::LoadedGenerator g = io::generator_from_json(io::read_file(data("depolarizing.json")), std::nullopt);
    CHECK((alicki_rebuild(f, 2).mat() - g.generator.op.mat()).norm() <= 1e-9);
}

TEST_CASE("evolve and haar-test") {
    cli::Report ev = cli::run(job("evolve", {{"generator", data("chain.json")}, {"input", data("x.json")}}));
    CHECK(ev.exit_code == cli::EXIT_OK);
    CHECK(ev.body["artifacts"]["trajectory"].size() >= 1);

    cli::JobSpec h = job("haar-test", {{"generator", data("chain.json")}});
    h.samples = {100, 400};
    cli::Report hr = cli::run(h);
    CHECK(hr.exit_code == cli::EXIT_OK);
    CHECK(hr.body["artifacts"]["haar"].size() == 2);
}

TEST_CASE("library error classes map to exit codes") {
    CHECK(cli::run(job("check", {{"generator", data("malformed.json")}})).exit_code == cli::EXIT_PARSE);
    CHECK(cli::run(job("check", {{"generator", data("missing.json")}})).exit_code == cli::EXIT_PARSE);
    CHECK(cli::run(job("nonsense", {})).exit_code == cli::EXIT_PARSE);
    cli::Report bad = cli::run(job("check", {{"generator", data("depolarizing.json")}, {"state", data("bad_state.json")}}));
    CHECK(bad.exit_code == cli::EXIT_PRECONDITION);
    CHECK(bad.body["error"]["name"] == "FaithfulnessViolated");
    cli::Report ns = cli::run(job("check", {{"generator", data("nonsymmetric.json")}}));
    CHECK(ns.exit_code == cli::EXIT_RESIDUAL);
    CHECK(ns.body["status"] == "residual_exceeded");
    CHECK_FALSE(ns.body["residuals"]["gns_symmetric"]["pass"].get<bool>());
    cli::Report nd = cli::run(job("decompose", {{"generator", data("nonsymmetric.json")}}));
    CHECK(nd.exit_code == cli::EXIT_PRECONDITION);
    CHECK(nd.body["error"]["name"] == "NotDBC");
    cli::Report ovf = cli::run(job("evolve", {{"generator", data("overflow.json")}, {"input", data("x.json")}}));
    CHECK(ovf.exit_code == cli::EXIT_NUMERICAL);
}

TEST_CASE("tolerance precedence") {
    cli::JobSpec j = job("check", {{"generator", data("chain.json")}});
    ::unsetenv("QMS_TOL");
    CHECK(cli::resolve_tolerance(j) == 1e-9);
    ::setenv("QMS_TOL", "1e-6", 1);
    CHECK(cli::resolve_tolerance(j) == 1e-6);
    j.tol = 1e-3;
    CHECK(cli::resolve_tolerance(j) == 1e-3);
    ::unsetenv("QMS_TOL");
}

TEST_CASE("reports are deterministic") {
    cli::JobSpec j = job("extend", {{"sub", data("chain.json")}});
    j.seed = 42;
    std::string a = cli::render(cli::run(j), false);
    std::string b = cli::render(cli::run(j), false);
    CHECK(a == b);
    CHECK(a.find("wall_time_s") == std::string::npos);
}

TEST_CASE("binary exit codes and output") {
    const std::string chain = data("chain.json");
    auto out = scratch("extend.json");
    CHECK(run_binary("extend --sub " + chain + " -o " + out.string()) == 0);
    io::json rep = io::read_file(out.string());
    CHECK(rep["command"] == "extend");
    Matrix want = io::matrix_from_json(io::read_file(data("extension_chain_golden.json"))["mat"]);
    CHECK((io::matrix_from_json(rep["artifacts"]["generator"]["mat"]) - want).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK(run_binary("check --generator " + chain) == 0);
    CHECK(run_binary("check --generator " + data("nonsymmetric.json")) == 1);
    CHECK(run_binary("check --generator " + data("malformed.json")) == 2);
    CHECK(run_binary("check") == 2);
    CHECK(run_binary("check --generator " + chain + " --t-grid 0.1,x") == 2);
    CHECK(run_binary("check --generator " + data("depolarizing.json") + " --state " + data("bad_state.json")) == 3);
    CHECK(run_binary("evolve --generator " + data("overflow.json") + " --input " + data("x.json")) == 4);
    CHECK(run_binary("--tol 1e-30 fock-verify --generator " + chain) == 1);
}
