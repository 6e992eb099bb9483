#pragma once

#include "hospsim/objective.hpp"
#include "hospsim/param_space.hpp"
#include "hospsim/surrogates.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hospsim {

/// One expensive evaluation: x in, replicate-averaged score out. The entity
/// id is distinct per call so repeat evaluations of one x see fresh noise.
using ObjectiveHandle = std::function<EvaluationResult(const ParamVector&, std::uint64_t)>;

/// Wraps a deterministic test function as an objective handle.
ObjectiveHandle wrap_function(std::function<double(const ParamVector&)> fn);

enum class Infill { ExpectedImprovement, PredictedValue };

const char* infill_name(Infill infill);

struct InfillSearch {
    int random_starts = 200;
    int pattern_iters = 50;
};

struct OptimizerConfig {
    int total_budget = 100;
    int init_size = 0; // 0 picks 2 * (free dimensions) + 2
    Infill infill = Infill::ExpectedImprovement;
    int replicates_per_eval = 5; // echoed into reports; the handle applies it
    std::set<int> mask;          // excluded 1-based indices, fixed at midpoints
    InfillSearch infill_search;
    KrigingConfig kriging;
    std::uint64_t seed = 0;

    int resolved_init(int free_dims) const;
};

struct EvaluatedPoint {
    ParamVector x{};
    EvaluationResult result{};
    std::string tag; // initial | infill | random
    bool failed = false;
    std::string error;
};

struct OptimizationRecord {
    std::vector<EvaluatedPoint> evaluated;
    std::vector<double> best_trajectory; // best mean score after each evaluation
    OptimizerConfig config;
    int best_index = -1; // -1 when every evaluation failed
    double wallclock_seconds = 0.0; // reported to stderr, never serialized

    double best_score() const;
    const ParamVector& best_x() const; // throws when best_index < 0
};

/// Midpoint assignment for the masked indices ("fixed to the mean between
/// their bounds"); empty mask gives an empty assignment.
std::map<int, double> fix_excluded(const ParamSpace& space, const std::set<int>& mask);

/// LHS over the free dimensions, masked dimensions at their midpoints.
std::vector<ParamVector> initial_design(const ParamSpace& space, const OptimizerConfig& cfg);

/// Maximizes the infill criterion on the surrogate with multi-start random
/// search plus a compass refinement, in the normalized free-dimension box.
/// Never returns a point within 1e-9 (normalized Euclidean) of an evaluated
/// one. The iteration index seeds the proposal's random stream.
ParamVector propose(const KrigingModel& model, const std::vector<EvaluatedPoint>& evaluated,
                    const ParamSpace& space, const OptimizerConfig& cfg, int iteration);

/// The optimization loop: evaluate the initial design, then fit -> propose ->
/// evaluate until exactly total_budget evaluations are spent. Objective
/// failures are recorded and skipped; the budget is still consumed.
OptimizationRecord run(const ObjectiveHandle& objective, const ParamSpace& space,
                       const OptimizerConfig& cfg);

/// Uniform random valid vectors under the same budget and bookkeeping.
OptimizationRecord random_search_baseline(const ObjectiveHandle& objective,
                                          const ParamSpace& space, const OptimizerConfig& cfg);

nlohmann::json record_to_json(const OptimizationRecord& record);

/// Flat CSV: iteration,tag,x1..x29,meanScore,bestSoFar. Preamble lines are
/// written as '#' comments.
void write_record_csv(const OptimizationRecord& record, std::ostream& out,
                      const std::vector<std::string>& preamble = {});

/// Reads (x, mean score) rows back from write_record_csv output; failed
/// evaluations are skipped.
std::vector<std::pair<ParamVector, double>> read_evaluations_csv(std::istream& in);

} // namespace hospsim
