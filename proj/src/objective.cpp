#include "hospsim/objective.hpp"

#include "hospsim/errors.hpp"

#include <cmath>
#include <string>

namespace hospsim {

namespace {

void check_weights(const Weights& w) {
    if (w.bed < 0.0 || w.icu < 0.0 || w.vent < 0.0)
        throw ConfigError("weights must be nonnegative");
    if (w.bed == 0.0 && w.icu == 0.0 && w.vent == 0.0)
        throw ConfigError("weights must not all be zero");
}

std::int64_t observed(const FieldRecord& rec, Resource r) {
    switch (r) {
        case Resource::Bed: return rec.bed;
        case Resource::Icu: return rec.icu;
        default: return rec.vent;
    }
}

} // namespace

double weighted_rmse(const OccupancyTrace& sim, const std::vector<FieldRecord>& field,
                     int field_offset, const Weights& w, int t0, int t1) {
    check_weights(w);
    if (t0 > t1) throw ConfigError("weighted_rmse: empty window");
    if (t0 < 0 || t1 >= sim.days())
        throw ConfigError("weighted_rmse: window [" + std::to_string(t0) + ", " +
                          std::to_string(t1) + "] outside simulated horizon of " +
                          std::to_string(sim.days()) + " days");
    if (t0 - field_offset < 0 ||
        t1 - field_offset >= static_cast<int>(field.size()))
        throw ConfigError("weighted_rmse: window not covered by field data");

    const int T = t1 - t0 + 1;
    double score = 0.0;
    for (const Resource r : {Resource::Bed, Resource::Icu, Resource::Vent}) {
        double sq = 0.0;
        for (int t = t0; t <= t1; ++t) {
            const double diff =
                static_cast<double>(observed(field[static_cast<size_t>(t - field_offset)], r)) -
                static_cast<double>(sim.at(t, r));
            sq += diff * diff;
        }
        score += w.at(r) * std::sqrt(sq / static_cast<double>(T));
    }
    return score;
}

double score_trace(const OccupancyTrace& sim, const Scenario& scenario, const Weights& w) {
    if (scenario.eval_days() == 0) throw ConfigError("scenario has an empty evaluation window");
    const int t0 = scenario.warmup_days;
    const int t1 = scenario.warmup_days + scenario.eval_days() - 1;
    return weighted_rmse(sim, scenario.field, scenario.warmup_days, w, t0, t1);
}

EvaluationResult evaluate(const ParamVector& x, const Scenario& scenario, const ParamSpace& space,
                          const Weights& w, int replicates, const SeedSpec& seed,
                          const SimOptions& options) {
    check_weights(w);
    if (replicates < 1) throw ConfigError("evaluate: replicates must be at least 1");
    const ValidationResult check = validate_vector(space, x);
    if (!check.ok()) throw ConfigError("evaluate: invalid parameter vector: " + check.describe());

    EvaluationResult result;
    result.replicates = replicates;
    result.seed_used = seed.master_seed;
    result.per_replicate.reserve(static_cast<size_t>(replicates));
    double sum = 0.0;
    for (int r = 0; r < replicates; ++r) {
        SeedSpec rep = seed;
        rep.key.purpose = "sim";
        rep.key.replicate = static_cast<std::uint64_t>(r);
        const OccupancyTrace trace = simulate(scenario.arrivals, x, space.graph(), rep, options);
        const double score = score_trace(trace, scenario, w);
        result.per_replicate.push_back(score);
        sum += score;
    }
    result.mean_score = sum / static_cast<double>(replicates);
    return result;
}

EvaluationResult SimObjective::eval(const ParamVector& x, std::uint64_t entity) const {
    if (scenario == nullptr || space == nullptr)
        throw ConfigError("objective is not bound to a scenario");
    return evaluate(x, *scenario, *space, weights, replicates,
                    SeedSpec{master_seed, {"sim", entity, 0}}, options);
}

} // namespace hospsim
