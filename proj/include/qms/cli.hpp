// cli.hpp — batch jobs behind the `qms` command: check, decompose, extend, fock-verify, haar-test, evolve
#pragma once

#include "qms/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qms::cli {

// Exit codes of a job.
enum ExitCode : int {
    EXIT_OK = 0,          // every tabulated residual within tolerance
    EXIT_RESIDUAL = 1,    // the job ran but some residual exceeded its tolerance
    EXIT_PARSE = 2,       // unreadable input, bad JSON or bad arguments
    EXIT_PRECONDITION = 3,
    EXIT_NUMERICAL = 4,
};

struct JobSpec {
    std::string command;
    // Input files by role: generator, state, algebra, sub, ambient, input.
    std::map<std::string, std::string> inputs;
    std::optional<int> ambient_dim;
    std::optional<double> tol;        // overrides QMS_TOL and the default
    std::uint64_t seed = 1;
    std::vector<double> t_grid;       // empty: command default
    std::vector<int> samples;         // haar-test sample sizes
};

struct Report {
    io::json body;
    int exit_code = EXIT_OK;
};

// Tolerance precedence: job.tol, then the QMS_TOL environment variable, then 1e-9.
double resolve_tolerance(const JobSpec& job);

// Runs the job; never throws for input or library errors (they become exit codes
// with an "error" member naming the failure).
Report run(const JobSpec& job);

// Serialized report; `with_time` false drops the wall-time field.
std::string render(const Report& r, bool with_time = true);

const std::vector<std::string>& commands();

}  // namespace qms::cli
