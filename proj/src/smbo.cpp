#include "hospsim/smbo.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/random.hpp"
#include "hospsim/search.hpp"
#include "hospsim/text.hpp"
#include "hospsim/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace hospsim {

namespace {

constexpr double kMinProposalDistance = 1e-9;

std::vector<int> free_dimensions(const ParamSpace& space, const std::set<int>& mask) {
    for (int i : mask)
        if (i < 1 || i > kParamCount)
            throw ConfigError("mask: unknown parameter index " + std::to_string(i));
    std::vector<int> free;
    for (const ParamDef& def : space.entries())
        if (!mask.count(def.index)) free.push_back(def.index);
    if (free.empty()) throw ConfigError("mask leaves no free dimensions");
    return free;
}

void validate_config(const ParamSpace& space, const OptimizerConfig& cfg, int free_dims) {
    if (cfg.total_budget < 1) throw ConfigError("optimizer: total budget must be at least 1");
    const int init = cfg.resolved_init(free_dims);
    if (init < 1) throw ConfigError("optimizer: initial design must have at least 1 point");
    if (init > cfg.total_budget)
        throw ConfigError("optimizer: initial design size " + std::to_string(init) +
                          " exceeds the total budget " + std::to_string(cfg.total_budget));
    if (cfg.replicates_per_eval < 1)
        throw ConfigError("optimizer: replicates per evaluation must be at least 1");
    if (cfg.infill_search.random_starts < 1 || cfg.infill_search.pattern_iters < 0)
        throw ConfigError("optimizer: invalid infill search settings");
    (void)space;
}

Eigen::VectorXd to_unit(const ParamSpace& space, const ParamVector& x,
                        const std::vector<int>& free) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(free.size()));
    for (size_t k = 0; k < free.size(); ++k) {
        const ParamDef& def = space.def(free[k]);
        const double span = def.upper - def.lower;
        u[static_cast<Eigen::Index>(k)] =
            span > 0.0 ? (x.at(free[k]) - def.lower) / span : 0.5;
    }
    return u;
}

ParamVector from_unit(const ParamSpace& space, const Eigen::VectorXd& u,
                      const std::vector<int>& free, const std::map<int, double>& fixed) {
    ParamVector x = space.midpoint_vector();
    for (const auto& [index, value] : fixed) x.set(index, value);
    for (size_t k = 0; k < free.size(); ++k) {
        const ParamDef& def = space.def(free[k]);
        x.set(free[k], def.lower + u[static_cast<Eigen::Index>(k)] * (def.upper - def.lower));
    }
    return x;
}

void push_evaluation(OptimizationRecord& record, EvaluatedPoint point) {
    record.evaluated.push_back(std::move(point));
    const EvaluatedPoint& p = record.evaluated.back();
    double best = record.best_trajectory.empty() ? std::numeric_limits<double>::infinity()
                                                 : record.best_trajectory.back();
    if (!p.failed && p.result.mean_score < best) {
        best = p.result.mean_score;
        record.best_index = static_cast<int>(record.evaluated.size()) - 1;
    }
    record.best_trajectory.push_back(best);
}

void evaluate_into(OptimizationRecord& record, const ObjectiveHandle& objective,
                   const ParamVector& x, std::uint64_t entity, const char* tag) {
    EvaluatedPoint point;
    point.x = x;
    point.tag = tag;
    try {
        point.result = objective(x, entity);
    } catch (const std::exception& e) {
        point.failed = true;
        point.error = e.what();
    }
    push_evaluation(record, std::move(point));
}

} // namespace

ObjectiveHandle wrap_function(std::function<double(const ParamVector&)> fn) {
    return [fn = std::move(fn)](const ParamVector& x, std::uint64_t) {
        EvaluationResult result;
        result.mean_score = fn(x);
        result.per_replicate = {result.mean_score};
        result.replicates = 1;
        return result;
    };
}

const char* infill_name(Infill infill) {
    return infill == Infill::ExpectedImprovement ? "expected-improvement" : "predicted-value";
}

int OptimizerConfig::resolved_init(int free_dims) const {
    return init_size > 0 ? init_size : 2 * free_dims + 2;
}

double OptimizationRecord::best_score() const {
    return best_index >= 0 ? evaluated[static_cast<size_t>(best_index)].result.mean_score
                           : std::numeric_limits<double>::infinity();
}

const ParamVector& OptimizationRecord::best_x() const {
    if (best_index < 0) throw SimulationError("optimization record has no successful evaluation");
    return evaluated[static_cast<size_t>(best_index)].x;
}

std::map<int, double> fix_excluded(const ParamSpace& space, const std::set<int>& mask) {
    return midpoint(space, mask);
}

std::vector<ParamVector> initial_design(const ParamSpace& space, const OptimizerConfig& cfg) {
    const std::vector<int> free = free_dimensions(space, cfg.mask);
    validate_config(space, cfg, static_cast<int>(free.size()));
    const std::map<int, double> fixed = fix_excluded(space, cfg.mask);
    const int n = cfg.resolved_init(static_cast<int>(free.size()));
    RngStream rng = derive_stream(SeedSpec{cfg.seed, {"lhs", 0, 0}});

    Eigen::MatrixXd U;
    if (n == 1) {
        U.resize(1, static_cast<Eigen::Index>(free.size()));
        for (Eigen::Index k = 0; k < U.cols(); ++k) U(0, k) = rng.uniform01();
    } else {
        U = lhs_unit(n, static_cast<int>(free.size()), rng);
    }

    std::vector<ParamVector> design;
    design.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        design.push_back(from_unit(space, U.row(i).transpose(), free, fixed));
    return design;
}

ParamVector propose(const KrigingModel& model, const std::vector<EvaluatedPoint>& evaluated,
                    const ParamSpace& space, const OptimizerConfig& cfg, int iteration) {
    const std::vector<int> free = free_dimensions(space, cfg.mask);
    if (model.dims() != static_cast<int>(free.size()))
        throw ConfigError("propose: model dimension does not match the free dimensions");
    const std::map<int, double> fixed = fix_excluded(space, cfg.mask);

    double best_seen = std::numeric_limits<double>::infinity();
    for (const EvaluatedPoint& p : evaluated)
        if (!p.failed) best_seen = std::min(best_seen, p.result.mean_score);

    // Score to minimize: negated infill criterion.
    auto score = [&](const Eigen::VectorXd& u) {
        if (cfg.infill == Infill::ExpectedImprovement && std::isfinite(best_seen))
            return -expected_improvement(model, u, best_seen);
        return model.predict(u).mean;
    };

    RngStream rng = derive_stream(
        SeedSpec{cfg.seed, {"infill", static_cast<std::uint64_t>(iteration), 0}});
    const Eigen::Index f = static_cast<Eigen::Index>(free.size());
    Eigen::VectorXd best_u(f);
    double best_value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < std::max(cfg.infill_search.random_starts, 1); ++s) {
        Eigen::VectorXd u(f);
        for (Eigen::Index k = 0; k < f; ++k) u[k] = rng.uniform01();
        const double v = score(u);
        if (v < best_value) {
            best_value = v;
            best_u = u;
        }
    }
    const Eigen::VectorXd lo = Eigen::VectorXd::Zero(f);
    const Eigen::VectorXd hi = Eigen::VectorXd::Ones(f);
    compass_minimize(score, best_u, best_value, lo, hi, cfg.infill_search.pattern_iters);

    // Keep a minimum distance from every evaluated point.
    std::vector<Eigen::VectorXd> seen;
    seen.reserve(evaluated.size());
    for (const EvaluatedPoint& p : evaluated) seen.push_back(to_unit(space, p.x, free));
    auto min_distance = [&](const Eigen::VectorXd& u) {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Eigen::VectorXd& v : seen) dmin = std::min(dmin, (u - v).norm());
        return dmin;
    };
    for (int attempt = 0; attempt < 200 && min_distance(best_u) < kMinProposalDistance;
         ++attempt) {
        for (Eigen::Index k = 0; k < f; ++k) {
            const double jitter = attempt < 100 ? rng.uniform(-0.05, 0.05) : rng.uniform01() - best_u[k];
            best_u[k] = std::clamp(best_u[k] + jitter, 0.0, 1.0);
        }
    }
    return from_unit(space, best_u, free, fixed);
}

OptimizationRecord run(const ObjectiveHandle& objective, const ParamSpace& space,
                       const OptimizerConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<int> free = free_dimensions(space, cfg.mask);
    validate_config(space, cfg, static_cast<int>(free.size()));
    const std::map<int, double> fixed = fix_excluded(space, cfg.mask);

    OptimizationRecord record;
    record.config = cfg;

    for (const ParamVector& x : initial_design(space, cfg)) {
        const std::uint64_t entity =
            hash_combine(cfg.seed, static_cast<std::uint64_t>(record.evaluated.size()));
        evaluate_into(record, objective, x, entity, "initial");
    }

    while (static_cast<int>(record.evaluated.size()) < cfg.total_budget) {
        const int iteration = static_cast<int>(record.evaluated.size());
        std::vector<ParamVector> xs;
        std::vector<double> ys;
        for (const EvaluatedPoint& p : record.evaluated) {
            if (p.failed) continue;
            xs.push_back(p.x);
            ys.push_back(p.result.mean_score);
        }

        ParamVector candidate;
        bool have_candidate = false;
        if (xs.size() >= 2) {
            try {
                RngStream fit_rng = derive_stream(
                    SeedSpec{cfg.seed, {"fit", static_cast<std::uint64_t>(iteration), 0}});
                const KrigingModel model =
                    KrigingModel::fit(make_design(xs, ys, space, cfg.mask), cfg.kriging, fit_rng);
                candidate = propose(model, record.evaluated, space, cfg, iteration);
                have_candidate = true;
            } catch (const std::exception&) {
                have_candidate = false;
            }
        }
        if (!have_candidate) {
            RngStream rng = derive_stream(
                SeedSpec{cfg.seed, {"explore", static_cast<std::uint64_t>(iteration), 0}});
            Eigen::VectorXd u(static_cast<Eigen::Index>(free.size()));
            for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = rng.uniform01();
            candidate = from_unit(space, u, free, fixed);
        }
        const std::uint64_t entity =
            hash_combine(cfg.seed, static_cast<std::uint64_t>(iteration));
        evaluate_into(record, objective, candidate, entity, "infill");
    }

    record.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

OptimizationRecord random_search_baseline(const ObjectiveHandle& objective,
                                          const ParamSpace& space, const OptimizerConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<int> free = free_dimensions(space, cfg.mask);
    validate_config(space, cfg, static_cast<int>(free.size()));
    const std::map<int, double> fixed = fix_excluded(space, cfg.mask);

    OptimizationRecord record;
    record.config = cfg;
    RngStream rng = derive_stream(SeedSpec{cfg.seed, {"random-search", 0, 0}});
    for (int i = 0; i < cfg.total_budget; ++i) {
        Eigen::VectorXd u(static_cast<Eigen::Index>(free.size()));
        for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = rng.uniform01();
        const ParamVector x = from_unit(space, u, free, fixed);
        const std::uint64_t entity = hash_combine(cfg.seed, static_cast<std::uint64_t>(i));
        evaluate_into(record, objective, x, entity, "random");
    }
    record.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

nlohmann::json record_to_json(const OptimizationRecord& record) {
    nlohmann::json evaluated = nlohmann::json::array();
    for (size_t i = 0; i < record.evaluated.size(); ++i) {
        const EvaluatedPoint& p = record.evaluated[i];
        nlohmann::json x = nlohmann::json::array();
        for (int k = 1; k <= kParamCount; ++k) x.push_back(p.x.at(k));
        nlohmann::json entry{{"iteration", i}, {"tag", p.tag}, {"x", std::move(x)}};
        if (p.failed) {
            entry["failed"] = true;
            entry["error"] = p.error;
        } else {
            entry["mean_score"] = p.result.mean_score;
            entry["per_replicate"] = p.result.per_replicate;
        }
        evaluated.push_back(std::move(entry));
    }

    nlohmann::json best;
    if (record.best_index >= 0) {
        nlohmann::json x = nlohmann::json::array();
        for (int k = 1; k <= kParamCount; ++k) x.push_back(record.best_x().at(k));
        best = nlohmann::json{
            {"index", record.best_index}, {"score", record.best_score()}, {"x", std::move(x)}};
    }

    return nlohmann::json{
        {"format", "optimization-record"},
        {"version", 1},
        {"tool", kToolName},
        {"tool_version", kToolVersion},
        {"config",
         {{"total_budget", record.config.total_budget},
          {"init_size", record.config.init_size},
          {"infill", infill_name(record.config.infill)},
          {"replicates_per_eval", record.config.replicates_per_eval},
          {"mask", std::vector<int>(record.config.mask.begin(), record.config.mask.end())},
          {"infill_random_starts", record.config.infill_search.random_starts},
          {"infill_pattern_iters", record.config.infill_search.pattern_iters},
          {"kriging_restarts", record.config.kriging.restarts},
          {"kriging_pattern_iters", record.config.kriging.pattern_iters},
          {"seed", record.config.seed}}},
        {"evaluated", std::move(evaluated)},
        {"best", std::move(best)},
        {"trajectory", record.best_trajectory}};
}

void write_record_csv(const OptimizationRecord& record, std::ostream& out,
                      const std::vector<std::string>& preamble) {
    for (const std::string& line : preamble) out << "# " << line << "\n";
    out << "iteration,tag";
    for (int k = 1; k <= kParamCount; ++k) out << ",x" << k;
    out << ",mean_score,best_so_far\n";
    for (size_t i = 0; i < record.evaluated.size(); ++i) {
        const EvaluatedPoint& p = record.evaluated[i];
        out << i << ',' << p.tag;
        for (int k = 1; k <= kParamCount; ++k) out << ',' << format_double(p.x.at(k));
        out << ',' << (p.failed ? "failed" : format_double(p.result.mean_score));
        const double best = record.best_trajectory[i];
        out << ',' << (std::isfinite(best) ? format_double(best) : "inf") << '\n';
    }
}

std::vector<std::pair<ParamVector, double>> read_evaluations_csv(std::istream& in) {
    std::vector<std::pair<ParamVector, double>> rows;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t.rfind("iteration,tag,x1,", 0) != 0)
                throw DataError("evaluations csv: unexpected header '" + t + "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> parts = split(t, ',');
        if (parts.size() != static_cast<size_t>(kParamCount) + 4)
            throw DataError("evaluations csv line " + std::to_string(lineno) +
                            ": wrong field count");
        if (parts[static_cast<size_t>(kParamCount) + 2] == "failed") continue;
        ParamVector x{};
        try {
            for (int k = 1; k <= kParamCount; ++k)
                x.set(k, std::stod(parts[static_cast<size_t>(k) + 1]));
            rows.emplace_back(x, std::stod(parts[static_cast<size_t>(kParamCount) + 2]));
        } catch (const std::exception&) {
            throw DataError("evaluations csv line " + std::to_string(lineno) +
                            ": unparsable number");
        }
    }
    if (!header_seen) throw DataError("evaluations csv: missing header");
    return rows;
}

} // namespace hospsim
