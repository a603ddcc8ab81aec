#pragma once

#include "fptqv/mc_oracle.hpp"
#include "fptqv/wiener_two_sided.hpp"

#include <optional>
#include <string>
#include <vector>

// Batch command layer behind the fptqv executable: forward evaluation,
// inversion, and simulation over CSV grid files and JSON configs. Kept
// separate from argv parsing so commands are directly testable.
//
// Exit codes: 0 success, 2 validation error, 3 assumption failure,
// 4 numerical non-convergence. Failures print a single machine-readable
// JSON line on standard error; output files are only written on success
// (except the inverse report, which is also written on assumption failure).

namespace fptqv::cli {

struct ScenarioSpec {
    double weight = 1.0;
    std::string clock;                   // "identity" | "linear:<rate>" | CSV path
    std::optional<double> boundary_upper;
    std::optional<double> boundary_lower;
    std::string target;                  // inverse: per-scenario cdf target CSV
    std::string pdf_target;              // inverse: per-scenario pdf target CSV
};

struct RunConfig {
    std::optional<double> boundary_upper;
    std::optional<double> boundary_lower;
    std::string clock = "identity";
    std::string grid;        // forward: CSV supplying the t column
    std::string target;      // inverse: cdf target CSV
    std::string pdf_target;  // inverse: pdf target CSV
    std::string out;         // output CSV; reports land at out + ".report.json",
                             // simulate summaries at out + ".summary.json"
    bool compare = false;    // simulate: add KS vs the analytic cdf to the summary
    SimConfig sim;
    SeriesControl series;
    std::vector<ScenarioSpec> scenarios;
};

/// Loads a JSON config; unknown keys anywhere are rejected and all physical
/// constraints are revalidated on load.
RunConfig load_config_json(const std::string& path);

int cmd_forward(const RunConfig& config);
int cmd_inverse(const RunConfig& config);
int cmd_simulate(const RunConfig& config);

/// Maps the library error taxonomy onto the exit-code contract.
int exit_code_for(const std::exception& e);

} // namespace fptqv::cli
