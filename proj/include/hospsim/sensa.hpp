#pragma once

#include "hospsim/smbo.hpp"
#include "hospsim/surrogates.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace hospsim {

enum class ModelFamily { Kriging, Linear, Forest };
const char* family_name(ModelFamily family);

/// Rank permutations from repeated seeded fits of one model family. Each run
/// lists column indices (1-based) from most to least important.
struct RankTable {
    std::string model_type;
    int d = 0;
    std::vector<std::vector<int>> runs;
};

/// Eq.-style normalized importance index: P*_i = (sum over runs of O_i) /
/// (n * d) where O_i = d for the most important parameter of a run and 1 for
/// the least. Larger P* means more important; every P*_i lies in [1/d, 1] and
/// the mean over i is exactly (d+1)/(2d).
std::vector<double> importance_index(const RankTable& table);

struct ImportanceStudyConfig {
    int repeats = 20;
    std::vector<ModelFamily> families{ModelFamily::Kriging, ModelFamily::Linear,
                                      ModelFamily::Forest};
    KrigingConfig kriging;
    ForestConfig forest;
    std::uint64_t seed = 0;
};

struct FamilyImportance {
    std::string model_type;
    RankTable table;
    std::vector<double> p_star;
    int attempted = 0;
    int completed = 0; // fit failures shrink the aggregate's n
    std::vector<std::string> failures;
};

struct ImportanceReport {
    std::vector<FamilyImportance> families;
    std::vector<int> param_indices; // column -> original 1-based parameter
    int d = 0;
    std::uint64_t seed = 0;
    // O_i orientation: the most important parameter of a run scores d.
    std::string orientation = "largest-rank-most-important";
};

/// Fits `repeats` seeded models per family on the design, ranks each fit's
/// importance scores, and aggregates them with importance_index.
ImportanceReport run_importance_study(const Design& design, const ImportanceStudyConfig& cfg);

void write_importance_csv(const ImportanceReport& report, std::ostream& out,
                          const std::vector<std::string>& preamble = {});
nlohmann::json importance_to_json(const ImportanceReport& report);

struct DeltaErrorConfig {
    double delta = 0.2;  // +/- relative perturbation
    int null_reevals = 2; // unperturbed re-evaluations per config (noise floor)
    std::uint64_t seed = 0;
};

/// Per-parameter relative error changes, pooled over configurations and both
/// perturbation directions: Delta E = |E - E_i| / E * 100.
struct DeltaErrorReport {
    double delta = 0.0;
    int configs_attempted = 0;
    std::vector<int> skipped;                         // configs with E == 0
    std::vector<double> base_scores;                  // E per config
    std::vector<std::vector<double>> per_param;       // [param-1] -> pooled values
    std::vector<double> mean_per_param;               // [param-1]
    std::vector<int> clamped_count;                   // perturbations cut by bounds
    std::vector<std::vector<double>> null_per_config; // re-evaluation noise
};

DeltaErrorReport delta_error_study(const std::vector<ParamVector>& configs,
                                   const ObjectiveHandle& objective, const ParamSpace& space,
                                   const DeltaErrorConfig& cfg);

void write_delta_csv(const DeltaErrorReport& report, std::ostream& out,
                     const std::vector<std::string>& preamble = {});
void write_delta_summary_csv(const DeltaErrorReport& report, std::ostream& out,
                             const std::vector<std::string>& preamble = {});
nlohmann::json delta_to_json(const DeltaErrorReport& report);

/// Surrogate response over a 2-d slice of the space: dims i and j sweep their
/// bounds on an m x m grid, all other dimensions stay at `base`. With m = 1
/// both sweep coordinates collapse to their bound midpoints.
struct GridResult {
    int param_i = 0;
    int param_j = 0;
    std::vector<double> xi, xj; // raw coordinate values
    Eigen::MatrixXd response;   // response(a, b) at (xi[a], xj[b])
};

GridResult parameter_grid(const KrigingModel& model, int i, int j, const ParamVector& base,
                          int resolution, const ParamSpace& space);

void write_grid_csv(const GridResult& grid, std::ostream& out,
                    const std::vector<std::string>& preamble = {});

struct RemovalConfig {
    OptimizerConfig optimizer; // mask is overridden per exclusion set
    int repeats = 10;
    std::uint64_t seed = 0;
};

struct RemovalRow {
    std::set<int> excluded;
    std::vector<double> final_best; // one SMBO final best per repeat
    double wallclock_seconds = 0.0; // reported to stderr, never serialized
};

/// Runs the optimizer once per (exclusion set, repeat) with that set masked.
/// Sets must be nested and strictly growing; the first may be empty.
std::vector<RemovalRow> removal_experiment(const ParamSpace& space,
                                           const ObjectiveHandle& objective,
                                           const std::vector<std::set<int>>& exclusion_order,
                                           const RemovalConfig& cfg);

void write_removal_csv(const std::vector<RemovalRow>& rows, std::ostream& out,
                       const std::vector<std::string>& preamble = {});

} // namespace hospsim
