#pragma once

#include <string>
#include <vector>

#include "tatlab/scenario.hpp"

namespace tatlab {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// The experiment names accepted by the CLI `run` entry point.
const std::vector<std::string>& experiment_names();

struct RunOutcome {
    Json result;            // main JSON document (includes the resolved scenario)
    std::string json_name;  // result file name, e.g. "critical_points.json"
    std::vector<std::pair<std::string, std::string>> csv_files;  // name -> content
    Json summary;           // condensed stats for the manifest
};

/// Execute one named experiment. The orchestration layer only calls module
/// operations and serializes their outputs.
RunOutcome run_experiment(const std::string& subcommand, const Scenario& scenario);

/// Execute and persist: result JSON, CSV plot data and a run manifest
/// (timestamps live only in the manifest). Returns the written paths,
/// manifest last.
std::vector<std::string> execute_and_write(const std::string& subcommand,
                                           const Scenario& scenario,
                                           const std::string& output_dir);

}  // namespace tatlab
