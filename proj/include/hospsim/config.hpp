#pragma once

#include "hospsim/objective.hpp"
#include "hospsim/sensa.hpp"
#include "hospsim/smbo.hpp"
#include "hospsim/surrogates.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace hospsim {

/// Everything a run needs, loaded from one sectioned key = value file.
/// Relative paths are resolved against the config file's directory.
struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int workers = 1;

    // [scenario] / [space]
    std::string scenario_manifest;
    std::string space_config; // empty keeps the built-in space

    // [objective]
    Weights weights{};
    int replicates = 5;

    // [optimizer]
    OptimizerConfig optimizer{};

    // [study]
    int importance_repeats = 20;
    std::string study_design; // evaluations CSV to reuse; empty generates one
    int design_size = 0;      // 0 picks 2 * free + 2
    int study_replicates = 20;
    double delta = 0.2;
    int delta_configs = 33;
    int null_reevals = 2;
    int grid_i = 14;
    int grid_j = 13;
    int grid_resolution = 33;
    int removal_repeats = 10;
    std::vector<std::set<int>> removal_sets;
    ForestConfig forest{};
    KrigingConfig study_kriging{};

    std::string config_path;
    std::uint64_t config_hash = 0;
};

RunConfig load_run_config(const std::string& path);

/// Parses "2,5,24" or "x2,x5,x24" into a 1-based index set.
std::set<int> parse_index_set(const std::string& text);

} // namespace hospsim
