// qms.cpp — command-line front end; see `qms --help`
#include "qms/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number in --t-grid: " + item);
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qms::cli;
    CLI::App app{"Numerical toolkit for GNS-symmetric quantum Markov semigroups"};
    app.require_subcommand(1);

    JobSpec job;
    std::optional<double> tol;
    std::string t_grid, output;
    std::vector<int> samples;
    int ambient_dim = 0;
    app.add_option("--tol", tol, "Residual tolerance (overrides QMS_TOL; default 1e-9)");
    app.add_option("--seed", job.seed, "RNG seed recorded in the report");
    app.add_option("--t-grid", t_grid, "Comma-separated list of times");
    app.add_option("--output,-o", output, "Report path (default: stdout)");

    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> help = {
        {"check", "GNS-symmetry, CND and CP checks of a generator"},
        {"decompose", "Alicki decomposition of a GNS-symmetric generator on M_n"},
        {"extend", "Extend a generator from a subalgebra to M"},
        {"fock-verify", "Tomita-bimodule identities and truncated Fock-space checks"},
        {"haar-test", "Monte-Carlo Haar average for the implementing vector"},
        {"evolve", "Evolve a matrix under exp(-tL)"}};
    for (const auto& name : commands()) {
        CLI::App* s = app.add_subcommand(name, help.at(name));
        s->fallthrough();  // global options may follow the subcommand
        subs[name] = s;
        if (name == "extend") {
            s->add_option("--sub", job.inputs["sub"], "Generator on the subalgebra (chain or superoperator JSON)")->required();
            s->add_option("--ambient-dim", ambient_dim, "Matrix size of the ambient full algebra");
            s->add_option("--ambient", job.inputs["ambient"], "Ambient algebra JSON (default: full M_n)");
        } else {
            s->add_option("--generator", job.inputs["generator"], "Generator JSON")->required();
            s->add_option("--algebra", job.inputs["algebra"], "Algebra JSON for superoperator generators");
        }
        s->add_option("--state", job.inputs["state"], "State JSON");
        if (name == "haar-test") s->add_option("--samples", samples, "Sample sizes (default 1000 4000)");
        if (name == "evolve") s->add_option("--input", job.inputs["input"], "Matrix JSON {\"x\": ...}")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : EXIT_PARSE;
    }
    for (const auto& [name, s] : subs)
        if (s->parsed()) job.command = name;
    job.tol = tol;
    job.samples = samples;
    if (ambient_dim > 0) job.ambient_dim = ambient_dim;

    Report r;
    try {
        job.t_grid = parse_grid(t_grid);
        r = run(job);
    } catch (const std::exception& e) {
        std::cerr << "qms: " << e.what() << "\n";
        return EXIT_PARSE;
    }
    std::string text = render(r);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "qms: cannot write " << output << "\n";
            return EXIT_PARSE;
        }
        out << text;
    }
    if (r.exit_code != EXIT_OK && r.body.contains("error"))
        std::cerr << "qms: " << r.body["error"]["name"].get<std::string>() << ": " << r.body["error"]["message"].get<std::string>() << "\n";
    return r.exit_code;
}
