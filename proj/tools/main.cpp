// Command line front end: simulate, optimize, analyze, validate.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "hospsim/config.hpp"
#include "hospsim/data.hpp"
#include "hospsim/errors.hpp"
#include "hospsim/model_io.hpp"
#include "hospsim/objective.hpp"
#include "hospsim/param_space.hpp"
#include "hospsim/random.hpp"
#include "hospsim/sensa.hpp"
#include "hospsim/simulation.hpp"
#include "hospsim/smbo.hpp"
#include "hospsim/stats.hpp"
#include "hospsim/surrogates.hpp"
#include "hospsim/text.hpp"
#include "hospsim/threading.hpp"
#include "hospsim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hospsim;

namespace {

struct CliArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> budget;
    std::optional<int> init;
    std::optional<std::string> exclude;
    std::optional<int> replicates;
    std::optional<std::string> out_dir;
    std::string baseline;         // optimize
    std::string study;            // analyze
    std::string x_file;           // simulate
    std::string x_record;         // simulate
};

// The config hash covers everything that can change results: the config file
// bytes plus every explicitly given override flag. --workers is excluded on
// purpose; outputs are worker-count invariant.
std::uint64_t overridden_hash(std::uint64_t base, const std::string& key, const std::string& value) {
    return hash_combine(base, fnv1a64(key + "=" + value));
}

RunConfig assemble_config(const CliArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = load_run_config(args.config_path);
    std::uint64_t h = cfg.config_hash;
    if (args.seed) {
        cfg.seed = *args.seed;
        h = overridden_hash(h, "seed", std::to_string(*args.seed));
    }
    if (args.workers) {
        if (*args.workers < 0) throw ConfigError("--workers must be >= 0");
        cfg.workers = *args.workers;  // not hashed
    }
    if (args.budget) {
        cfg.optimizer.total_budget = *args.budget;
        h = overridden_hash(h, "budget", std::to_string(*args.budget));
    }
    if (args.init) {
        cfg.optimizer.init_size = *args.init;
        h = overridden_hash(h, "init", std::to_string(*args.init));
    }
    if (args.exclude) {
        cfg.optimizer.mask = parse_index_set(*args.exclude);
        h = overridden_hash(h, "exclude", *args.exclude);
    }
    if (args.replicates) {
        if (*args.replicates < 1) throw ConfigError("--replicates must be >= 1");
        cfg.replicates = *args.replicates;
        h = overridden_hash(h, "replicates", std::to_string(*args.replicates));
    }
    if (args.out_dir) cfg.out_dir = *args.out_dir;  // not hashed
    cfg.config_hash = h;
    return cfg;
}

std::vector<std::string> preamble_lines(const RunConfig& cfg) {
    return {std::string(kToolName) + " " + kToolVersion,
            "seed=" + std::to_string(cfg.seed),
            "config=" + hex64(cfg.config_hash)};
}

void embed_meta(json& j, const RunConfig& cfg) {
    j["tool"] = kToolName;
    j["tool_version"] = kToolVersion;
    j["seed"] = cfg.seed;
    j["config_hash"] = hex64(cfg.config_hash);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file " + path.string());
    out << content;
    if (!out) throw DataError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

ParamSpace load_space(const RunConfig& cfg) {
    if (cfg.space_config.empty()) return canonical_space();
    std::ifstream in(cfg.space_config);
    if (!in) throw ConfigError("cannot open space config " + cfg.space_config);
    return load_space_csv(in);
}

Scenario require_scenario(const RunConfig& cfg, const ParamSpace& space) {
    if (cfg.scenario_manifest.empty())
        throw ConfigError("no scenario manifest configured (set [scenario] manifest=...)");
    return load_scenario_manifest(cfg.scenario_manifest, space);
}

SimOptions sim_options(const RunConfig& cfg) {
    SimOptions options;
    options.duration_mode = DurationMode::Stochastic;
    options.workers = cfg.workers;
    return options;
}

ObjectiveHandle make_handle(SimObjective& objective) {
    return [&objective](const ParamVector& x, std::uint64_t entity) { return objective.eval(x, entity); };
}

// ---------------------------------------------------------------- simulate

ParamVector vector_from_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open record file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("record file " + path + ": " + e.what());
    }
    if (!j.contains("best") || j["best"].is_null() || !j["best"].contains("x"))
        throw DataError("record file " + path + " holds no successful best point");
    const auto& bx = j["best"]["x"];
    if (!bx.is_array() || bx.size() != static_cast<size_t>(kParamCount))
        throw DataError("record file " + path + ": best.x must hold 29 values");
    ParamVector x;
    for (int i = 0; i < kParamCount; ++i) x.values[i] = bx[i].get<double>();
    return x;
}

ParamVector vector_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vector file " + path);
    return load_vector_csv(in);
}

int cmd_simulate(const CliArgs& args) {
    RunConfig cfg = assemble_config(args);
    ParamSpace space = load_space(cfg);
    Scenario scenario = require_scenario(cfg, space);

    ParamVector x = space.defaults();
    if (!args.x_record.empty() && !args.x_file.empty())
        throw ConfigError("--x-file and --x-record are mutually exclusive");
    if (!args.x_record.empty()) x = vector_from_record(args.x_record);
    else if (!args.x_file.empty()) x = vector_from_csv_file(args.x_file);
    {
        auto check = validate_vector(space, x);
        if (!check.ok()) throw ConfigError("parameter vector invalid: " + check.describe());
    }

    fs::path out = prepare_out_dir(cfg);
    SimOptions options = sim_options(cfg);
    SeedSpec seed{cfg.seed, StreamKey{"sim", 0, 0}};
    OccupancyTrace trace = simulate(scenario.arrivals, x, space.graph(), seed, options);

    // The trace file carries the evaluation window only, indexed by absolute
    // simulation day so it lines up with the field data.
    OccupancyTrace window;
    window.counts.assign(trace.counts.begin() + scenario.warmup_days, trace.counts.end());
    std::ostringstream trace_csv;
    write_trace_csv(window, trace_csv, preamble_lines(cfg), scenario.warmup_days);
    write_text_file(out / "trace.csv", trace_csv.str());

    double score = score_trace(trace, scenario, cfg.weights);
    json j;
    j["format"] = "score-report";
    j["version"] = 1;
    embed_meta(j, cfg);
    j["score"] = score;
    j["weights"] = {{"bed", cfg.weights.bed}, {"icu", cfg.weights.icu}, {"vent", cfg.weights.vent}};
    j["warmup_days"] = scenario.warmup_days;
    j["eval_days"] = scenario.eval_days();
    j["horizon_days"] = scenario.horizon();
    j["x"] = std::vector<double>(x.values.begin(), x.values.end());
    write_json_file(out / "score.json", j);

    std::cout << "score " << format_double(score) << "\n";
    return 0;
}

// ---------------------------------------------------------------- optimize

void write_record_outputs(const OptimizationRecord& record, const RunConfig& cfg,
                          const fs::path& out, const std::string& stem) {
    json j = record_to_json(record);
    embed_meta(j, cfg);
    write_json_file(out / (stem + "_record.json"), j);
    std::ostringstream csv;
    write_record_csv(record, csv, preamble_lines(cfg));
    write_text_file(out / (stem + "_trajectory.csv"), csv.str());
}

int cmd_optimize(const CliArgs& args) {
    RunConfig cfg = assemble_config(args);
    if (!args.baseline.empty() && args.baseline != "random")
        throw ConfigError("unknown baseline '" + args.baseline + "' (expected: random)");
    ParamSpace space = load_space(cfg);
    Scenario scenario = require_scenario(cfg, space);
    fs::path out = prepare_out_dir(cfg);

    SimObjective objective{&scenario, &space, cfg.weights, cfg.replicates, cfg.seed, sim_options(cfg)};
    ObjectiveHandle handle = make_handle(objective);

    OptimizerConfig opt = cfg.optimizer;
    opt.seed = cfg.seed;
    opt.replicates_per_eval = cfg.replicates;

    OptimizationRecord record = run(handle, space, opt);
    write_record_outputs(record, cfg, out, "smbo");
    std::fprintf(stderr, "optimize: %zu evaluations, best %s, %.1f s\n", record.evaluated.size(),
                 format_double(record.best_score()).c_str(), record.wallclock_seconds);

    if (args.baseline == "random") {
        OptimizationRecord base = random_search_baseline(handle, space, opt);
        write_record_outputs(base, cfg, out, "baseline");
        std::fprintf(stderr, "baseline: %zu evaluations, best %s, %.1f s\n", base.evaluated.size(),
                     format_double(base.best_score()).c_str(), base.wallclock_seconds);
    }
    std::cout << "best " << format_double(record.best_score()) << "\n";
    return 0;
}

// ----------------------------------------------------------------- analyze

// Studies run on a shared evaluated design: either recorded evaluations from
// an optimize run (study.design) or a fresh LHS evaluated here.
struct StudyDesign {
    std::vector<ParamVector> xs;
    std::vector<double> ys;
};

StudyDesign load_recorded_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open design file " + path);
    StudyDesign d;
    for (auto& [x, y] : read_evaluations_csv(in)) {
        d.xs.push_back(x);
        d.ys.push_back(y);
    }
    if (d.xs.empty()) throw DataError("design file " + path + " holds no successful evaluations");
    return d;
}

std::vector<ParamVector> fresh_lhs(const RunConfig& cfg, const ParamSpace& space, int n,
                                   const char* purpose) {
    OptimizerConfig probe = cfg.optimizer;
    probe.total_budget = std::max(n, 1);
    probe.init_size = n;
    probe.seed = hash_combine(cfg.seed, fnv1a64(purpose));
    return initial_design(space, probe);
}

StudyDesign evaluated_design(const RunConfig& cfg, const ParamSpace& space, SimObjective& objective,
                             const char* purpose) {
    if (!cfg.study_design.empty()) return load_recorded_design(cfg.study_design);
    int free_count = kParamCount - static_cast<int>(cfg.optimizer.mask.size());
    int n = cfg.design_size > 0 ? cfg.design_size : 2 * free_count + 2;
    StudyDesign d;
    d.xs = fresh_lhs(cfg, space, n, purpose);
    d.ys.resize(d.xs.size());
    std::uint64_t base = hash_combine(cfg.seed, fnv1a64(purpose));
    for (size_t i = 0; i < d.xs.size(); ++i)
        d.ys[i] = objective.eval(d.xs[i], hash_combine(base, i)).mean_score;
    return d;
}

int cmd_analyze_importance(const RunConfig& cfg, const ParamSpace& space, SimObjective& objective,
                           const fs::path& out) {
    objective.replicates = cfg.study_replicates;
    StudyDesign sd = evaluated_design(cfg, space, objective, "importance-design");
    Design design = make_design(sd.xs, sd.ys, space, cfg.optimizer.mask);

    ImportanceStudyConfig sc;
    sc.repeats = cfg.importance_repeats;
    sc.kriging = cfg.study_kriging;
    sc.forest = cfg.forest;
    sc.seed = cfg.seed;
    ImportanceReport report = run_importance_study(design, sc);

    std::ostringstream csv;
    write_importance_csv(report, csv, preamble_lines(cfg));
    write_text_file(out / "importance.csv", csv.str());
    json j = importance_to_json(report);
    embed_meta(j, cfg);
    j["design_points"] = design.n();
    write_json_file(out / "importance.json", j);
    for (const auto& fam : report.families)
        std::cout << fam.model_type << " completed " << fam.completed << "/" << fam.attempted
                  << "\n";
    return 0;
}

int cmd_analyze_delta(const RunConfig& cfg, const ParamSpace& space, SimObjective& objective,
                      const fs::path& out) {
    objective.replicates = cfg.study_replicates;
    std::vector<ParamVector> configs;
    if (!cfg.study_design.empty()) {
        StudyDesign sd = load_recorded_design(cfg.study_design);
        int take = std::min<int>(cfg.delta_configs, static_cast<int>(sd.xs.size()));
        configs.assign(sd.xs.begin(), sd.xs.begin() + take);
    } else {
        configs = fresh_lhs(cfg, space, cfg.delta_configs, "delta-configs");
    }

    DeltaErrorConfig dc;
    dc.delta = cfg.delta;
    dc.null_reevals = cfg.null_reevals;
    dc.seed = cfg.seed;
    DeltaErrorReport report = delta_error_study(configs, make_handle(objective), space, dc);

    std::ostringstream csv;
    write_delta_csv(report, csv, preamble_lines(cfg));
    write_text_file(out / "delta_error.csv", csv.str());
    std::ostringstream summary;
    write_delta_summary_csv(report, summary, preamble_lines(cfg));
    write_text_file(out / "delta_error_summary.csv", summary.str());
    json j = delta_to_json(report);
    embed_meta(j, cfg);
    write_json_file(out / "delta_error.json", j);
    std::cout << "configs " << report.configs_attempted << " skipped " << report.skipped.size() << "\n";
    return 0;
}

int cmd_analyze_grid(const RunConfig& cfg, const ParamSpace& space, SimObjective& objective,
                     const fs::path& out) {
    objective.replicates = cfg.study_replicates;
    StudyDesign sd = evaluated_design(cfg, space, objective, "grid-design");
    Design design = make_design(sd.xs, sd.ys, space, cfg.optimizer.mask);
    RngStream rng = derive_stream(SeedSpec{cfg.seed, StreamKey{"grid-fit", 0, 0}});
    KrigingModel model = KrigingModel::fit(design, cfg.study_kriging, rng);
    GridResult grid = parameter_grid(model, cfg.grid_i, cfg.grid_j, space.defaults(),
                                     cfg.grid_resolution, space);
    std::ostringstream csv;
    write_grid_csv(grid, csv, preamble_lines(cfg));
    write_text_file(out / "grid.csv", csv.str());
    std::cout << "grid " << cfg.grid_resolution << "x" << cfg.grid_resolution << " for x"
              << cfg.grid_i << ",x" << cfg.grid_j << "\n";
    return 0;
}

int cmd_analyze_removal(const RunConfig& cfg, const ParamSpace& space, SimObjective& objective,
                        const fs::path& out) {
    if (cfg.removal_sets.empty())
        throw ConfigError("removal study needs [study] removal_sets=... (| separated index sets)");
    RemovalConfig rc;
    rc.optimizer = cfg.optimizer;
    rc.optimizer.seed = cfg.seed;
    rc.optimizer.replicates_per_eval = cfg.replicates;
    rc.repeats = cfg.removal_repeats;
    rc.seed = cfg.seed;
    std::vector<RemovalRow> rows = removal_experiment(space, make_handle(objective), cfg.removal_sets, rc);

    std::ostringstream csv;
    write_removal_csv(rows, csv, preamble_lines(cfg));
    write_text_file(out / "removal.csv", csv.str());
    json j;
    j["format"] = "removal-report";
    j["version"] = 1;
    embed_meta(j, cfg);
    j["repeats"] = rc.repeats;
    j["budget"] = rc.optimizer.total_budget;
    json sets = json::array();
    for (const auto& set : cfg.removal_sets) sets.push_back(set);
    j["exclusion_sets"] = sets;
    json results = json::array();
    for (const auto& row : rows) {
        json r;
        r["excluded"] = row.excluded;
        r["final_best"] = row.final_best;
        results.push_back(r);
    }
    j["runs"] = results;
    write_json_file(out / "removal.json", j);
    std::cout << "removal runs " << rows.size() << "\n";
    return 0;
}

int cmd_analyze(const CliArgs& args) {
    RunConfig cfg = assemble_config(args);
    ParamSpace space = load_space(cfg);
    Scenario scenario = require_scenario(cfg, space);
    fs::path out = prepare_out_dir(cfg);
    SimObjective objective{&scenario, &space, cfg.weights, cfg.replicates, cfg.seed, sim_options(cfg)};

    if (args.study == "importance") return cmd_analyze_importance(cfg, space, objective, out);
    if (args.study == "delta") return cmd_analyze_delta(cfg, space, objective, out);
    if (args.study == "grid") return cmd_analyze_grid(cfg, space, objective, out);
    if (args.study == "removal") return cmd_analyze_removal(cfg, space, objective, out);
    throw ConfigError("unknown study '" + args.study +
                      "' (expected: importance, delta, grid, removal)");
}

// ---------------------------------------------------------------- validate

int cmd_validate(const CliArgs& args) {
    RunConfig cfg = assemble_config(args);
    ParamSpace space = load_space(cfg);
    std::cout << "space: " << space.entries().size() << " parameters\n";

    for (const char* which : {"default", "midpoint"}) {
        ParamVector x = which == std::string("default") ? space.defaults() : space.midpoint_vector();
        auto check = validate_vector(space, x);
        if (!check.ok())
            throw ConfigError(std::string(which) + " vector invalid: " + check.describe());
        std::cout << which << " vector: ok\n";
    }

    if (!cfg.scenario_manifest.empty()) {
        Scenario scenario = load_scenario_manifest(cfg.scenario_manifest, space);
        std::cout << "scenario: " << scenario.arrivals.total_patients() << " cases, "
                  << scenario.field.size() << " field days, warmup " << scenario.warmup_days
                  << ", horizon " << scenario.horizon() << "\n";
        if (scenario.has_truth) std::cout << "scenario: synthetic truth attached\n";
    } else {
        std::cout << "scenario: none configured\n";
    }
    std::cout << "config " << hex64(cfg.config_hash) << ": ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + " " + kToolVersion +
                 " - hospital capacity simulation and parameter studies"};
    app.require_subcommand(1);
    CliArgs args;

    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "run configuration file");
        cmd->add_option("--seed", args.seed, "master seed");
        cmd->add_option("--workers", args.workers, "worker threads (0 = hardware)");
        cmd->add_option("--replicates", args.replicates, "simulation replicates per evaluation");
        cmd->add_option("--out", args.out_dir, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run the patient flow simulation once");
    add_common(simulate);
    simulate->add_option("--x-file", args.x_file, "parameter vector CSV (index,value)");
    simulate->add_option("--x-record", args.x_record, "optimization record JSON; uses its best point");

    CLI::App* optimize = app.add_subcommand("optimize", "surrogate guided parameter search");
    add_common(optimize);
    optimize->add_option("--budget", args.budget, "total evaluation budget");
    optimize->add_option("--init", args.init, "initial design size");
    optimize->add_option("--exclude", args.exclude, "parameters held at midpoint, e.g. 2,5,24");
    optimize->add_option("--baseline", args.baseline, "also run a baseline search (random)");

    CLI::App* analyze = app.add_subcommand("analyze", "parameter importance and robustness studies");
    add_common(analyze);
    analyze->add_option("--budget", args.budget, "evaluation budget for nested searches");
    analyze->add_option("--init", args.init, "initial design size for nested searches");
    analyze->add_option("--exclude", args.exclude, "parameters held at midpoint");
    analyze->add_option("--study", args.study, "importance | delta | grid | removal")->required();

    CLI::App* validate = app.add_subcommand("validate", "check configuration and data files");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (optimize->parsed()) return cmd_optimize(args);
        if (analyze->parsed()) return cmd_analyze(args);
        if (validate->parsed()) return cmd_validate(args);
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const SimulationError& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
