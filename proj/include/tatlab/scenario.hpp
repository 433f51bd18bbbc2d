#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tatlab/field.hpp"
#include "tatlab/grid.hpp"

namespace tatlab {

using Json = nlohmann::ordered_json;

struct MfptConfig {
    std::vector<double> epsilons;
    int ensemble = 500;
    double t_cap = 1e5;
    Vec start;
    Vec target;
};

struct PathActionConfig {
    std::string kind = "straight";  // "straight" | "explicit"
    Vec start, end;                 // straight
    int n_nodes = 256;
    std::optional<double> t_total;
    Mat nodes;  // explicit
    double epsilon = 0.1;
};

struct MinimizeConfig {
    Vec start, end;
    int n_nodes = 128;
    double t_total = 40.0;
    double epsilon = 1.0;
    int max_iterations = 20000;
    double tol = 1e-10;
};

struct TransitionsConfig {
    Vec initial;
    int slice_stride = 10;
};

/// Fully resolved scenario: every default filled in, the canonical echo and
/// its hash attached. The echo is embedded in every output file.
struct Scenario {
    std::string name = "scenario";
    int workers = 0;  // 0 = hardware concurrency; never affects results
    std::vector<std::string> experiments;

    std::optional<FieldSpec> field;
    Box box;

    std::vector<int> grid_resolution;
    Mat covariance;
    std::uint64_t master_seed = 0;

    double dt = 1e-3;
    double t_final = 50.0;
    int record_stride = 1;

    double capture_radius = 0.1;
    double release_radius = 0.3;

    int multistart = 16;
    double root_tol = 1e-10;

    double poisson_tol = 1e-10;
    int poisson_max_iterations = 20000;

    std::optional<Vec> simulate_initial;
    bool simulate_stochastic = false;

    std::optional<MfptConfig> mfpt;
    std::optional<PathActionConfig> path_action;
    std::optional<MinimizeConfig> minimize;
    std::optional<TransitionsConfig> transitions;
    std::optional<Vec> parameters_prime;

    Json resolved;  // canonical resolved config
    std::string hash;

    GridSpec grid() const { return GridSpec(box, grid_resolution); }
    int resolved_workers() const;
};

struct ValidationReport {
    std::vector<std::string> violations;  // "<config.path>: constraint"
    bool ok() const { return violations.empty(); }
};

/// Full constraint check without execution; every violation is listed, not
/// just the first.
ValidationReport validate_scenario(const Json& config);
ValidationReport validate_scenario_file(const std::string& path);

/// Build a resolved scenario; throws ConfigError carrying the full violation
/// list when the config is invalid.
Scenario load_scenario(const Json& config);
Scenario load_scenario_file(const std::string& path);

/// FNV-1a 64 over the canonical resolved config dump.
std::string scenario_hash(const Json& resolved);

}  // namespace tatlab
