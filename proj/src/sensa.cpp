#include "hospsim/sensa.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/text.hpp"
#include "hospsim/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace hospsim {

namespace {

void write_preamble(std::ostream& out, const std::vector<std::string>& preamble) {
    for (const std::string& line : preamble) out << "# " << line << "\n";
}

} // namespace

const char* family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::Kriging: return "kriging";
        case ModelFamily::Linear: return "linear";
        default: return "forest";
    }
}

std::vector<double> importance_index(const RankTable& table) {
    if (table.d < 1) throw ConfigError("importance index: dimension must be positive");
    if (table.runs.empty()) throw ConfigError("importance index: no runs");
    const int d = table.d;
    std::vector<double> sums(static_cast<size_t>(d), 0.0);
    for (const std::vector<int>& run : table.runs) {
        if (static_cast<int>(run.size()) != d)
            throw ConfigError("importance index: run length differs from dimension");
        std::vector<bool> seen(static_cast<size_t>(d), false);
        for (int pos = 0; pos < d; ++pos) {
            const int param = run[static_cast<size_t>(pos)];
            if (param < 1 || param > d || seen[static_cast<size_t>(param - 1)])
                throw ConfigError("importance index: run is not a permutation of 1.." +
                                  std::to_string(d));
            seen[static_cast<size_t>(param - 1)] = true;
            sums[static_cast<size_t>(param - 1)] += static_cast<double>(d - pos);
        }
    }
    const double denom = static_cast<double>(table.runs.size()) * d;
    for (double& s : sums) s /= denom;
    return sums;
}

ImportanceReport run_importance_study(const Design& design, const ImportanceStudyConfig& cfg) {
    if (cfg.repeats < 1) throw ConfigError("importance study: repeats must be at least 1");
    if (cfg.families.empty()) throw ConfigError("importance study: no model families selected");

    ImportanceReport report;
    report.d = design.d();
    report.param_indices = design.param_indices;
    report.seed = cfg.seed;

    for (const ModelFamily family : cfg.families) {
        FamilyImportance fam;
        fam.model_type = family_name(family);
        fam.table.model_type = fam.model_type;
        fam.table.d = design.d();
        fam.attempted = cfg.repeats;
        for (int r = 0; r < cfg.repeats; ++r) {
            try {
                std::vector<double> scores;
                switch (family) {
                    case ModelFamily::Kriging: {
                        RngStream rng = derive_stream(
                            SeedSpec{cfg.seed, {"importance-kriging",
                                                static_cast<std::uint64_t>(r), 0}});
                        scores = importance(KrigingModel::fit(design, cfg.kriging, rng));
                        break;
                    }
                    case ModelFamily::Linear:
                        scores = importance(LinearModel::fit(design));
                        break;
                    case ModelFamily::Forest:
                        scores = importance(ForestModel::fit(
                            design, cfg.forest,
                            hash_combine(cfg.seed, static_cast<std::uint64_t>(r))));
                        break;
                }
                fam.table.runs.push_back(rank_parameters(scores));
            } catch (const std::exception& e) {
                fam.failures.push_back(e.what());
            }
        }
        fam.completed = static_cast<int>(fam.table.runs.size());
        if (fam.completed > 0) fam.p_star = importance_index(fam.table);
        report.families.push_back(std::move(fam));
    }
    return report;
}

void write_importance_csv(const ImportanceReport& report, std::ostream& out,
                          const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "model,parameter,p_star\n";
    for (const FamilyImportance& fam : report.families) {
        for (int col = 0; col < report.d; ++col) {
            const int param = report.param_indices.empty()
                                  ? col + 1
                                  : report.param_indices[static_cast<size_t>(col)];
            out << fam.model_type << ",x" << param << ',';
            if (fam.completed > 0)
                out << format_double(fam.p_star[static_cast<size_t>(col)]);
            out << '\n';
        }
    }
}

nlohmann::json importance_to_json(const ImportanceReport& report) {
    nlohmann::json families = nlohmann::json::array();
    for (const FamilyImportance& fam : report.families) {
        families.push_back(nlohmann::json{{"model", fam.model_type},
                                          {"attempted", fam.attempted},
                                          {"completed", fam.completed},
                                          {"failures", fam.failures},
                                          {"p_star", fam.p_star},
                                          {"runs", fam.table.runs}});
    }
    return nlohmann::json{{"format", "importance-report"},
                          {"version", 1},
                          {"tool", kToolName},
                          {"tool_version", kToolVersion},
                          {"d", report.d},
                          {"param_indices", report.param_indices},
                          {"seed", report.seed},
                          {"orientation", report.orientation},
                          {"families", std::move(families)}};
}

DeltaErrorReport delta_error_study(const std::vector<ParamVector>& configs,
                                   const ObjectiveHandle& objective, const ParamSpace& space,
                                   const DeltaErrorConfig& cfg) {
    if (configs.empty()) throw ConfigError("delta-error study: no configurations");
    if (cfg.delta <= -1.0) throw ConfigError("delta-error study: delta must exceed -1");
    if (cfg.null_reevals < 0)
        throw ConfigError("delta-error study: null re-evaluations must be nonnegative");

    DeltaErrorReport report;
    report.delta = cfg.delta;
    report.configs_attempted = static_cast<int>(configs.size());
    report.per_param.assign(kParamCount, {});
    report.mean_per_param.assign(kParamCount, 0.0);
    report.clamped_count.assign(kParamCount, 0);

    std::uint64_t counter = 0;
    auto call = [&](const ParamVector& x) {
        return objective(x, hash_combine(cfg.seed, counter++)).mean_score;
    };

    for (size_t c = 0; c < configs.size(); ++c) {
        const double base = call(configs[c]);
        report.base_scores.push_back(base);
        if (base == 0.0) {
            report.skipped.push_back(static_cast<int>(c));
            report.null_per_config.emplace_back();
            // Entity accounting stays aligned for skipped configs.
            counter += static_cast<std::uint64_t>(cfg.null_reevals) +
                       2ull * static_cast<std::uint64_t>(kParamCount);
            continue;
        }
        std::vector<double> nulls;
        for (int r = 0; r < cfg.null_reevals; ++r)
            nulls.push_back(std::abs(base - call(configs[c])) / base * 100.0);
        report.null_per_config.push_back(std::move(nulls));

        for (int i = 1; i <= kParamCount; ++i) {
            for (const double sign : {+1.0, -1.0}) {
                const PerturbResult p = perturb(space, configs[c], i, sign * cfg.delta);
                if (p.clamped) ++report.clamped_count[static_cast<size_t>(i - 1)];
                const double perturbed = call(p.x);
                report.per_param[static_cast<size_t>(i - 1)].push_back(
                    std::abs(base - perturbed) / base * 100.0);
            }
        }
    }

    for (int i = 0; i < kParamCount; ++i) {
        const std::vector<double>& vals = report.per_param[static_cast<size_t>(i)];
        if (!vals.empty()) {
            double sum = 0.0;
            for (double v : vals) sum += v;
            report.mean_per_param[static_cast<size_t>(i)] = sum / static_cast<double>(vals.size());
        }
    }
    return report;
}

void write_delta_csv(const DeltaErrorReport& report, std::ostream& out,
                     const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "config,parameter,direction,delta_e_percent\n";
    for (int i = 0; i < kParamCount; ++i) {
        const std::vector<double>& vals = report.per_param[static_cast<size_t>(i)];
        // Values are pooled as (config, +delta), (config, -delta) pairs in
        // config order over the non-skipped configs.
        size_t v = 0;
        for (int c = 0; c < report.configs_attempted && v < vals.size(); ++c) {
            if (std::find(report.skipped.begin(), report.skipped.end(), c) !=
                report.skipped.end())
                continue;
            out << c << ",x" << (i + 1) << ",+," << format_double(vals[v++]) << '\n';
            out << c << ",x" << (i + 1) << ",-," << format_double(vals[v++]) << '\n';
        }
    }
}

void write_delta_summary_csv(const DeltaErrorReport& report, std::ostream& out,
                             const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "parameter,mean_delta_e_percent,values,clamped\n";
    for (int i = 0; i < kParamCount; ++i) {
        out << 'x' << (i + 1) << ',' << format_double(report.mean_per_param[static_cast<size_t>(i)])
            << ',' << report.per_param[static_cast<size_t>(i)].size() << ','
            << report.clamped_count[static_cast<size_t>(i)] << '\n';
    }
}

nlohmann::json delta_to_json(const DeltaErrorReport& report) {
    return nlohmann::json{{"format", "delta-error-report"},
                          {"version", 1},
                          {"tool", kToolName},
                          {"tool_version", kToolVersion},
                          {"delta", report.delta},
                          {"configs", report.configs_attempted},
                          {"skipped", report.skipped},
                          {"base_scores", report.base_scores},
                          {"mean_per_param", report.mean_per_param},
                          {"per_param", report.per_param},
                          {"clamped_count", report.clamped_count},
                          {"null_per_config", report.null_per_config}};
}

GridResult parameter_grid(const KrigingModel& model, int i, int j, const ParamVector& base,
                          int resolution, const ParamSpace& space) {
    if (i == j) throw ConfigError("parameter grid: the two axes must differ");
    if (resolution < 1) throw ConfigError("parameter grid: resolution must be at least 1");
    const Design& design = model.training();
    if (design.param_indices.empty())
        throw ConfigError("parameter grid: model carries no parameter bindings");

    auto column_of = [&](int param) {
        const auto it =
            std::find(design.param_indices.begin(), design.param_indices.end(), param);
        if (it == design.param_indices.end())
            throw ConfigError("parameter grid: x" + std::to_string(param) +
                              " is not a model dimension");
        return static_cast<Eigen::Index>(it - design.param_indices.begin());
    };
    const Eigen::Index col_i = column_of(i);
    const Eigen::Index col_j = column_of(j);

    Eigen::VectorXd u(static_cast<Eigen::Index>(design.param_indices.size()));
    for (size_t k = 0; k < design.param_indices.size(); ++k) {
        const ParamDef& def = space.def(design.param_indices[k]);
        const double span = def.upper - def.lower;
        u[static_cast<Eigen::Index>(k)] =
            span > 0.0 ? (base.at(def.index) - def.lower) / span : 0.5;
    }

    GridResult grid;
    grid.param_i = i;
    grid.param_j = j;
    auto axis = [&](int param) {
        const ParamDef& def = space.def(param);
        std::vector<double> vals;
        if (resolution == 1) {
            vals.push_back(0.5 * (def.lower + def.upper));
        } else {
            for (int t = 0; t < resolution; ++t)
                vals.push_back(def.lower +
                               (def.upper - def.lower) * t / static_cast<double>(resolution - 1));
        }
        return vals;
    };
    grid.xi = axis(i);
    grid.xj = axis(j);
    grid.response.resize(resolution, resolution);

    const ParamDef& def_i = space.def(i);
    const ParamDef& def_j = space.def(j);
    for (int a = 0; a < resolution; ++a) {
        for (int b = 0; b < resolution; ++b) {
            Eigen::VectorXd point = u;
            const double span_i = def_i.upper - def_i.lower;
            const double span_j = def_j.upper - def_j.lower;
            point[col_i] = span_i > 0.0 ? (grid.xi[static_cast<size_t>(a)] - def_i.lower) / span_i
                                        : 0.5;
            point[col_j] = span_j > 0.0 ? (grid.xj[static_cast<size_t>(b)] - def_j.lower) / span_j
                                        : 0.5;
            grid.response(a, b) = model.predict(point).mean;
        }
    }
    return grid;
}

void write_grid_csv(const GridResult& grid, std::ostream& out,
                    const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << 'x' << grid.param_i << ",x" << grid.param_j << ",response\n";
    for (size_t a = 0; a < grid.xi.size(); ++a)
        for (size_t b = 0; b < grid.xj.size(); ++b)
            out << format_double(grid.xi[a]) << ',' << format_double(grid.xj[b]) << ','
                << format_double(grid.response(static_cast<Eigen::Index>(a),
                                               static_cast<Eigen::Index>(b)))
                << '\n';
}

std::vector<RemovalRow> removal_experiment(const ParamSpace& space,
                                           const ObjectiveHandle& objective,
                                           const std::vector<std::set<int>>& exclusion_order,
                                           const RemovalConfig& cfg) {
    if (exclusion_order.empty()) throw ConfigError("removal experiment: no exclusion sets");
    if (cfg.repeats < 1) throw ConfigError("removal experiment: repeats must be at least 1");
    for (size_t t = 1; t < exclusion_order.size(); ++t) {
        const std::set<int>& prev = exclusion_order[t - 1];
        const std::set<int>& cur = exclusion_order[t];
        if (cur.size() <= prev.size() ||
            !std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
            throw ConfigError("removal experiment: exclusion sets must be nested and growing");
    }

    std::vector<RemovalRow> rows;
    for (size_t t = 0; t < exclusion_order.size(); ++t) {
        const auto start = std::chrono::steady_clock::now();
        RemovalRow row;
        row.excluded = exclusion_order[t];
        for (int r = 0; r < cfg.repeats; ++r) {
            OptimizerConfig run_cfg = cfg.optimizer;
            run_cfg.mask = exclusion_order[t];
            run_cfg.seed = hash_combine(
                cfg.seed, hash_combine(static_cast<std::uint64_t>(t),
                                       static_cast<std::uint64_t>(r)));
            row.final_best.push_back(run(objective, space, run_cfg).best_score());
        }
        row.wallclock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_removal_csv(const std::vector<RemovalRow>& rows, std::ostream& out,
                       const std::vector<std::string>& preamble) {
    write_preamble(out, preamble);
    out << "set_index,excluded,repeat,final_best\n";
    for (size_t t = 0; t < rows.size(); ++t) {
        std::string excluded;
        for (int i : rows[t].excluded)
            excluded += (excluded.empty() ? "x" : ";x") + std::to_string(i);
        if (excluded.empty()) excluded = "none";
        for (size_t r = 0; r < rows[t].final_best.size(); ++r)
            out << t << ',' << excluded << ',' << r << ','
                << format_double(rows[t].final_best[r]) << '\n';
    }
}

} // namespace hospsim
