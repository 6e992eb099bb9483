#include "doctest.h"

#include "hospsim/config.hpp"
#include "hospsim/errors.hpp"
#include "hospsim/version.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace hospsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "hospsim-config-tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

} // namespace

TEST_CASE("every key of a full run configuration is honored") {
    const std::string content =
        "# full configuration\n"
        "[run]\n"
        "seed = 42\n"
        "out = results\n"
        "workers = 3\n"
        "\n"
        "[scenario]\n"
        "manifest = scn.manifest\n"
        "\n"
        "[space]\n"
        "config = space.csv\n"
        "\n"
        "[objective]\n"
        "w_bed = 1.5\n"
        "w_icu = 3.5\n"
        "w_vent = 9.5\n"
        "replicates = 7\n"
        "\n"
        "[optimizer]\n"
        "budget = 80\n"
        "init = 24\n"
        "infill = predicted-value\n"
        "random_starts = 111\n"
        "pattern_iters = 22\n"
        "exclude = 2, x5, 24\n"
        "kriging_restarts = 6\n"
        "kriging_pattern_iters = 33\n"
        "\n"
        "[study]\n"
        "importance_repeats = 12\n"
        "design = design.csv\n"
        "design_size = 44\n"
        "replicates = 9\n"
        "delta = 0.25\n"
        "delta_configs = 8\n"
        "null_reevals = 4\n"
        "grid_i = 3\n"
        "grid_j = 9\n"
        "grid_resolution = 11\n"
        "removal_repeats = 6\n"
        "removal_sets = none | 24 | 24,5\n"
        "forest_trees = 321\n"
        "forest_min_leaf = 2\n"
        "forest_mtry = 4\n"
        "kriging_restarts = 5\n"
        "kriging_pattern_iters = 21\n";
    const std::string path = write_config("full.cfg", content);
    RunConfig cfg = load_run_config(path);

    CHECK(cfg.seed == 42);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.workers == 3);
    CHECK(cfg.scenario_manifest == (temp_dir() / "scn.manifest").string());
    CHECK(cfg.space_config == (temp_dir() / "space.csv").string());
    CHECK(cfg.weights.bed == doctest::Approx(1.5));
    CHECK(cfg.weights.icu == doctest::Approx(3.5));
    CHECK(cfg.weights.vent == doctest::Approx(9.5));
    CHECK(cfg.replicates == 7);
    CHECK(cfg.optimizer.total_budget == 80);
    CHECK(cfg.optimizer.init_size == 24);
    CHECK(cfg.optimizer.infill == Infill::PredictedValue);
    CHECK(cfg.optimizer.infill_search.random_starts == 111);
    CHECK(cfg.optimizer.infill_search.pattern_iters == 22);
    CHECK(cfg.optimizer.mask == std::set<int>({2, 5, 24}));
    CHECK(cfg.optimizer.kriging.restarts == 6);
    CHECK(cfg.optimizer.kriging.pattern_iters == 33);
    CHECK(cfg.importance_repeats == 12);
    CHECK(cfg.study_design == (temp_dir() / "design.csv").string());
    CHECK(cfg.design_size == 44);
    CHECK(cfg.study_replicates == 9);
    CHECK(cfg.delta == doctest::Approx(0.25));
    CHECK(cfg.delta_configs == 8);
    CHECK(cfg.null_reevals == 4);
    CHECK(cfg.grid_i == 3);
    CHECK(cfg.grid_j == 9);
    CHECK(cfg.grid_resolution == 11);
    CHECK(cfg.removal_repeats == 6);
    REQUIRE(cfg.removal_sets.size() == 3);
    CHECK(cfg.removal_sets[0].empty());
    CHECK(cfg.removal_sets[1] == std::set<int>({24}));
    CHECK(cfg.removal_sets[2] == std::set<int>({5, 24}));
    CHECK(cfg.forest.trees == 321);
    CHECK(cfg.forest.min_leaf == 2);
    CHECK(cfg.forest.mtry == 4);
    CHECK(cfg.study_kriging.restarts == 5);
    CHECK(cfg.study_kriging.pattern_iters == 21);
    CHECK(cfg.config_path == path);
    CHECK(cfg.config_hash == fnv1a64(content));
}

TEST_CASE("an empty file keeps the documented defaults") {
    RunConfig cfg = load_run_config(write_config("empty.cfg", ""));
    CHECK(cfg.seed == 1);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.workers == 1);
    CHECK(cfg.scenario_manifest.empty());
    CHECK(cfg.space_config.empty());
    CHECK(cfg.weights.bed == doctest::Approx(2.0));
    CHECK(cfg.weights.icu == doctest::Approx(4.0));
    CHECK(cfg.weights.vent == doctest::Approx(8.0));
    CHECK(cfg.replicates == 5);
    CHECK(cfg.optimizer.total_budget == 100);
    CHECK(cfg.optimizer.init_size == 0);
    CHECK(cfg.optimizer.infill == Infill::ExpectedImprovement);
    CHECK(cfg.importance_repeats == 20);
    CHECK(cfg.design_size == 0);
    CHECK(cfg.study_replicates == 20);
    CHECK(cfg.delta == doctest::Approx(0.2));
    CHECK(cfg.delta_configs == 33);
    CHECK(cfg.null_reevals == 2);
    CHECK(cfg.grid_i == 14);
    CHECK(cfg.grid_j == 13);
    CHECK(cfg.grid_resolution == 33);
    CHECK(cfg.removal_repeats == 10);
    CHECK(cfg.removal_sets.empty());
    CHECK(cfg.forest.trees == 500);
    CHECK(cfg.forest.min_leaf == 5);
    CHECK(cfg.forest.mtry == 0);
}

TEST_CASE("sections and keys are case-insensitive; comments are skipped") {
    const std::string content =
        "; leading comment\n"
        "[RUN]\n"
        "SEED = 9\n"
        "# another comment\n"
        "Workers = 2\n";
    RunConfig cfg = load_run_config(write_config("case.cfg", content));
    CHECK(cfg.seed == 9);
    CHECK(cfg.workers == 2);
}

TEST_CASE("absolute paths are kept as-is") {
    const std::string content = "[scenario]\nmanifest = /abs/path.manifest\n";
    RunConfig cfg = load_run_config(write_config("abs.cfg", content));
    CHECK(cfg.scenario_manifest == "/abs/path.manifest");
}

TEST_CASE("malformed files are rejected with located errors") {
    CHECK_THROWS_WITH_AS(load_run_config(write_config("unknown.cfg", "[run]\nbogus = 1\n")),
                         doctest::Contains("unknown key 'run.bogus'"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("nosection.cfg", "seed = 1\n")),
                         doctest::Contains("key outside any [section]"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("badnum.cfg", "[run]\nseed = abc\n")),
                         doctest::Contains("unparsable value"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("badreal.cfg",
                                                      "[objective]\nw_bed = 1.2.3\n")),
                         doctest::Contains("unparsable value"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("unterm.cfg", "[run\nseed = 1\n")),
                         doctest::Contains("unterminated section header"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("noeq.cfg", "[run]\nseed 1\n")),
                         doctest::Contains("expected key = value"), ConfigError);
    CHECK_THROWS_AS(load_run_config(write_config("negworkers.cfg", "[run]\nworkers = -1\n")),
                    ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config(write_config("badinfill.cfg",
                                                      "[optimizer]\ninfill = bogus\n")),
                         doctest::Contains("unknown infill"), ConfigError);
    CHECK_THROWS_WITH_AS(load_run_config((temp_dir() / "does-not-exist.cfg").string()),
                         doctest::Contains("cannot open"), ConfigError);
}

TEST_CASE("line numbers point at the offending line") {
    const std::string content = "[run]\nseed = 1\nbogus = 2\n";
    CHECK_THROWS_WITH_AS(load_run_config(write_config("lineno.cfg", content)),
                         doctest::Contains("line 3"), ConfigError);
}

TEST_CASE("index sets accept bare and x-prefixed forms") {
    CHECK(parse_index_set("2,5,24") == std::set<int>({2, 5, 24}));
    CHECK(parse_index_set("x2,x5,x24") == std::set<int>({2, 5, 24}));
    CHECK(parse_index_set(" X2 , 5 ") == std::set<int>({2, 5}));
    CHECK(parse_index_set("2,2,2") == std::set<int>({2}));
    CHECK(parse_index_set("none").empty());
    CHECK(parse_index_set("").empty());
    CHECK(parse_index_set("   ").empty());
    CHECK_THROWS_AS(parse_index_set("0"), ConfigError);
    CHECK_THROWS_AS(parse_index_set("30"), ConfigError);
    CHECK_THROWS_AS(parse_index_set("junk"), ConfigError);
    CHECK(parse_index_set("2,,5") == std::set<int>({2, 5})); // empty items are skipped
}

TEST_CASE("the configuration hash fingerprints file content") {
    const std::string a = "[run]\nseed = 1\n";
    const std::string b = "[run]\nseed = 2\n";
    RunConfig ca = load_run_config(write_config("hash_a.cfg", a));
    RunConfig cb = load_run_config(write_config("hash_b.cfg", b));
    RunConfig ca2 = load_run_config(write_config("hash_a2.cfg", a));
    CHECK(ca.config_hash != cb.config_hash);
    CHECK(ca.config_hash == ca2.config_hash);
    CHECK(ca.config_hash == fnv1a64(a));
}
