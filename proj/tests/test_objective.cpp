#include "doctest.h"

#include "hospsim/data.hpp"
#include "hospsim/errors.hpp"
#include "hospsim/objective.hpp"

#include <cmath>

using namespace hospsim;

namespace {

OccupancyTrace trace_from(std::initializer_list<std::array<std::int64_t, 3>> rows) {
    OccupancyTrace t;
    for (const auto& r : rows) t.counts.push_back(r);
    return t;
}

FieldRecord field_row(int day, std::int64_t bed, std::int64_t icu, std::int64_t vent) {
    FieldRecord r;
    r.date = Date::parse("2020-01-01").plus_days(day);
    r.bed = bed;
    r.icu = icu;
    r.vent = vent;
    return r;
}

} // namespace

TEST_CASE("weighted_rmse matches the hand-computed value") {
    // Bed differs by 3 and 4 over two days; the other resources agree.
    OccupancyTrace sim = trace_from({{10, 2, 1}, {11, 2, 1}});
    std::vector<FieldRecord> field{field_row(0, 7, 2, 1), field_row(1, 7, 2, 1)};

    SUBCASE("single resource") {
        Weights w{1.0, 0.0, 0.0};
        // sqrt((9 + 16) / 2) = sqrt(12.5)
        CHECK(weighted_rmse(sim, field, 0, w, 0, 1) ==
              doctest::Approx(3.5355339059327378).epsilon(1e-13));
    }
    SUBCASE("default weights combine per-resource RMSE terms") {
        OccupancyTrace s = trace_from({{8, 4, 2}, {8, 4, 4}});
        std::vector<FieldRecord> f{field_row(0, 7, 2, 1), field_row(1, 7, 2, 1)};
        // bed diffs (1,1) -> 1; icu (2,2) -> 2; vent (1,3) -> sqrt(5)
        const double want = 2.0 * 1.0 + 4.0 * 2.0 + 8.0 * std::sqrt(5.0);
        CHECK(weighted_rmse(s, f, 0, Weights{}, 0, 1) == doctest::Approx(want).epsilon(1e-13));
    }
    SUBCASE("window can be a subrange with an offset field") {
        // Four sim days; field holds days 1..3; evaluate days 2..3 only.
        OccupancyTrace s = trace_from({{0, 0, 0}, {5, 0, 0}, {6, 0, 0}, {9, 0, 0}});
        std::vector<FieldRecord> f{field_row(1, 5, 0, 0), field_row(2, 4, 0, 0),
                                   field_row(3, 6, 0, 0)};
        Weights w{1.0, 0.0, 0.0};
        // diffs on days 2,3: (2, 3) -> sqrt((4 + 9) / 2)
        CHECK(weighted_rmse(s, f, 1, w, 2, 3) ==
              doctest::Approx(std::sqrt(6.5)).epsilon(1e-13));
    }
}

TEST_CASE("weighted_rmse rejects bad windows and weights") {
    OccupancyTrace sim = trace_from({{1, 1, 1}, {1, 1, 1}});
    std::vector<FieldRecord> field{field_row(0, 1, 1, 1), field_row(1, 1, 1, 1)};
    CHECK_THROWS_AS(weighted_rmse(sim, field, 0, Weights{}, 1, 0), ConfigError);
    CHECK_THROWS_AS(weighted_rmse(sim, field, 0, Weights{}, 0, 5), ConfigError);
    CHECK_THROWS_AS(weighted_rmse(sim, field, 2, Weights{}, 0, 1), ConfigError);
    CHECK_THROWS_AS(weighted_rmse(sim, field, 0, Weights{-1.0, 0.0, 0.0}, 0, 1), ConfigError);
    CHECK_THROWS_AS(weighted_rmse(sim, field, 0, Weights{0.0, 0.0, 0.0}, 0, 1), ConfigError);
}

TEST_CASE("score_trace evaluates exactly the field window") {
    Scenario s;
    s.arrivals = ArrivalSchedule::empty(5);
    s.warmup_days = 3;
    s.field = {field_row(3, 2, 0, 0), field_row(4, 5, 0, 0)};
    OccupancyTrace sim = trace_from({{9, 9, 9}, {9, 9, 9}, {9, 9, 9}, {3, 0, 0}, {9, 0, 0}});
    Weights w{1.0, 0.0, 0.0};
    // Warmup days are ignored; diffs on days 3,4 are (1, 4).
    CHECK(score_trace(sim, s, w) == doctest::Approx(std::sqrt(8.5)).epsilon(1e-13));
}

TEST_CASE("evaluate averages stochastic replicates deterministically") {
    ArrivalSpec spec;
    spec.daily_counts.assign(40, 4);
    spec.warmup_days = 10;
    const ParamSpace& space = canonical_space();
    Scenario scenario = generate_synthetic(space.defaults(), spec, 7);

    const SeedSpec seed{123, {"sim", 5, 0}};
    EvaluationResult r = evaluate(space.defaults(), scenario, space, Weights{}, 4, seed);
    CHECK(r.replicates == 4);
    REQUIRE(r.per_replicate.size() == 4);
    double sum = 0.0;
    for (double v : r.per_replicate) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(r.mean_score == doctest::Approx(sum / 4.0).epsilon(1e-12));
    // Replicates see different noise.
    CHECK(r.per_replicate[0] != r.per_replicate[1]);

    EvaluationResult again = evaluate(space.defaults(), scenario, space, Weights{}, 4, seed);
    CHECK(again.per_replicate == r.per_replicate);
}

TEST_CASE("evaluate validates the parameter vector") {
    ArrivalSpec spec;
    spec.daily_counts.assign(20, 2);
    spec.warmup_days = 5;
    const ParamSpace& space = canonical_space();
    Scenario scenario = generate_synthetic(space.defaults(), spec, 7);
    ParamVector bad = space.defaults();
    bad.set(14, 3.0);
    CHECK_THROWS_AS(evaluate(bad, scenario, space, Weights{}, 2, SeedSpec{1, {"sim", 0, 0}}),
                    ConfigError);
}

TEST_CASE("SimObjective keys noise off the entity id") {
    ArrivalSpec spec;
    spec.daily_counts.assign(30, 3);
    spec.warmup_days = 7;
    const ParamSpace& space = canonical_space();
    Scenario scenario = generate_synthetic(space.defaults(), spec, 9);

    SimObjective objective{&scenario, &space, Weights{}, 3, 2024, SimOptions{}};
    EvaluationResult a = objective.eval(space.defaults(), 0);
    EvaluationResult b = objective.eval(space.defaults(), 0);
    EvaluationResult c = objective.eval(space.defaults(), 1);
    CHECK(a.per_replicate == b.per_replicate);
    CHECK(a.mean_score != c.mean_score);
    CHECK(objective(space.defaults(), 0) == a.mean_score);
}

TEST_CASE("SimObjective requires its bindings") {
    SimObjective objective;
    CHECK_THROWS_AS(objective.eval(canonical_space().defaults(), 0), ConfigError);
}
