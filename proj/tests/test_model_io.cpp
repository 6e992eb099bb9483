#include "doctest.h"

#include "hospsim/errors.hpp"
#include "hospsim/model_io.hpp"
#include "hospsim/random.hpp"
#include "hospsim/surrogates.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

using namespace hospsim;
using nlohmann::json;

namespace {

Design sample_design(int n, int d, std::uint64_t seed) {
    RngStream rng = derive_stream(SeedSpec{seed, {"design", 0, 0}});
    Design design;
    design.X = lhs_unit(n, d, rng);
    design.y.resize(n);
    for (int i = 0; i < n; ++i)
        design.y[i] = std::cos(4.0 * design.X(i, 0)) + design.X(i, 1) * design.X(i, 1);
    design.param_indices.resize(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) design.param_indices[static_cast<size_t>(k)] = k + 1;
    return design;
}

std::vector<Eigen::VectorXd> probe_points(int d) {
    std::vector<Eigen::VectorXd> probes;
    RngStream rng = derive_stream(SeedSpec{404, {"probe", 0, 0}});
    for (int i = 0; i < 10; ++i) {
        Eigen::VectorXd x(d);
        for (int k = 0; k < d; ++k) x[k] = rng.uniform01();
        probes.push_back(x);
    }
    return probes;
}

} // namespace

TEST_CASE("design JSON round trips exactly") {
    Design design = sample_design(12, 3, 1);
    json j = design_to_json(design);
    Design back = design_from_json(j);
    CHECK(back.X == design.X);
    CHECK(back.y == design.y);
    CHECK(back.param_indices == design.param_indices);
}

TEST_CASE("design JSON rejects ragged or inconsistent input") {
    Design design = sample_design(5, 2, 2);
    json j = design_to_json(design);
    json ragged = j;
    ragged["X"][2].erase(1);
    CHECK_THROWS_AS(design_from_json(ragged), DataError);
    json short_y = j;
    short_y["y"].erase(0);
    CHECK_THROWS_AS(design_from_json(short_y), DataError);
}

TEST_CASE("kriging JSON round trip preserves predictions exactly") {
    Design design = sample_design(20, 3, 3);
    KrigingConfig cfg;
    cfg.restarts = 2;
    cfg.pattern_iters = 10;
    RngStream rng = derive_stream(SeedSpec{3, {"fit", 0, 0}});
    KrigingModel model = KrigingModel::fit(design, cfg, rng);

    json j = kriging_to_json(model);
    CHECK(j.at("format") == "kriging");
    KrigingModel back = kriging_from_json(j);
    CHECK(back.theta() == model.theta());
    CHECK(back.nugget() == model.nugget());
    for (const auto& x : probe_points(3)) {
        auto a = model.predict(x);
        auto b = back.predict(x);
        CHECK(a.mean == b.mean);
        CHECK(a.sd == b.sd);
    }
}

TEST_CASE("linear JSON round trip preserves predictions exactly") {
    Design design = sample_design(15, 3, 4);
    LinearModel model = LinearModel::fit(design);
    json j = linear_to_json(model);
    CHECK(j.at("format") == "linear");
    LinearModel back = linear_from_json(j);
    CHECK(back.beta == model.beta);
    CHECK(back.intercept == model.intercept);
    for (const auto& x : probe_points(3)) CHECK(model.predict(x) == back.predict(x));
}

TEST_CASE("forest JSON round trip rebuilds the same forest") {
    Design design = sample_design(40, 3, 5);
    ForestConfig cfg;
    cfg.trees = 30;
    ForestModel model = ForestModel::fit(design, cfg, 77);
    json j = forest_to_json(model);
    CHECK(j.at("format") == "forest");
    ForestModel back = forest_from_json(j);
    CHECK(back.seed() == model.seed());
    CHECK(back.config().trees == model.config().trees);
    CHECK(back.importance_scores() == model.importance_scores());
    for (const auto& x : probe_points(3)) CHECK(model.predict(x) == back.predict(x));
}

TEST_CASE("model loaders reject wrong formats") {
    Design design = sample_design(15, 2, 6);
    LinearModel linear = LinearModel::fit(design);
    json j = linear_to_json(linear);
    CHECK_THROWS_AS(kriging_from_json(j), DataError);
    json unversioned = j;
    unversioned.erase("version");
    CHECK_THROWS_AS(linear_from_json(unversioned), DataError);
    CHECK_THROWS_AS(forest_from_json(json::object()), DataError);
}
