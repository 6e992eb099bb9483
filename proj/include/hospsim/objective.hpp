#pragma once

#include "hospsim/data.hpp"
#include "hospsim/random.hpp"
#include "hospsim/simulation.hpp"

#include <cstdint>
#include <vector>

namespace hospsim {

/// Per-category error weights. Scarcer resources carry larger weight by
/// default; reports echo the weights actually used.
struct Weights {
    double bed = 2.0;
    double icu = 4.0;
    double vent = 8.0;

    double at(Resource r) const {
        switch (r) {
            case Resource::Bed: return bed;
            case Resource::Icu: return icu;
            default: return vent;
        }
    }
};

/// Weighted sum over categories of the per-category RMSE across the window
/// [t0, t1] (inclusive, simulation-day indices). Field record k holds the
/// observation for simulation day field_offset + k.
double weighted_rmse(const OccupancyTrace& sim, const std::vector<FieldRecord>& field,
                     int field_offset, const Weights& w, int t0, int t1);

/// weighted_rmse over a scenario's full evaluation window.
double score_trace(const OccupancyTrace& sim, const Scenario& scenario, const Weights& w);

struct EvaluationResult {
    double mean_score = 0.0;
    std::vector<double> per_replicate;
    int replicates = 0;
    std::uint64_t seed_used = 0;
};

/// Runs the simulator `replicates` times with replicate-derived seeds and
/// scores each run on the scenario's evaluation window. Deterministic given
/// (x, scenario, seed); the mean is the reported objective value.
EvaluationResult evaluate(const ParamVector& x, const Scenario& scenario, const ParamSpace& space,
                          const Weights& w, int replicates, const SeedSpec& seed,
                          const SimOptions& options = {});

/// The simulator wrapped as a noisy scalar objective. Each call site passes a
/// distinct entity id so repeat evaluations of the same x see fresh noise.
struct SimObjective {
    const Scenario* scenario = nullptr;
    const ParamSpace* space = nullptr;
    Weights weights{};
    int replicates = 5;
    std::uint64_t master_seed = 0;
    SimOptions options{};

    EvaluationResult eval(const ParamVector& x, std::uint64_t entity) const;
    double operator()(const ParamVector& x, std::uint64_t entity) const {
        return eval(x, entity).mean_score;
    }
};

} // namespace hospsim
