#include "hospsim/config.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/text.hpp"
#include "hospsim/version.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hospsim {

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        const std::uint64_t v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: unparsable value for '" + key + "': '" + text + "'");
    }
}

int parse_int(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: unparsable value for '" + key + "': '" + text + "'");
    }
}

double parse_real(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: unparsable value for '" + key + "': '" + text + "'");
    }
}

} // namespace

std::set<int> parse_index_set(const std::string& text) {
    std::set<int> out;
    const std::string t = trim(text);
    if (t.empty() || t == "none") return out;
    for (const std::string& raw : split(t, ',')) {
        std::string item = trim(raw);
        if (item.empty()) continue;
        if (item[0] == 'x' || item[0] == 'X') item = item.substr(1);
        const int index = parse_int(item, "index list");
        if (index < 1 || index > kParamCount)
            throw ConfigError("config: parameter index " + std::to_string(index) +
                              " outside 1.." + std::to_string(kParamCount));
        out.insert(index);
    }
    return out;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    RunConfig cfg;
    cfg.config_path = path;
    cfg.config_hash = fnv1a64(content);

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& rel) {
        if (rel.empty()) return rel;
        std::filesystem::path p(rel);
        if (p.is_absolute()) return rel;
        return (base / p).string();
    };

    const std::map<std::string, std::function<void(const std::string&, const std::string&)>>
        handlers{
            {"run.seed", [&](const std::string& k, const std::string& v) { cfg.seed = parse_u64(v, k); }},
            {"run.out", [&](const std::string&, const std::string& v) { cfg.out_dir = v; }},
            {"run.workers",
             [&](const std::string& k, const std::string& v) { cfg.workers = parse_int(v, k); }},
            {"scenario.manifest",
             [&](const std::string&, const std::string& v) { cfg.scenario_manifest = resolve(v); }},
            {"space.config",
             [&](const std::string&, const std::string& v) { cfg.space_config = resolve(v); }},
            {"objective.w_bed",
             [&](const std::string& k, const std::string& v) { cfg.weights.bed = parse_real(v, k); }},
            {"objective.w_icu",
             [&](const std::string& k, const std::string& v) { cfg.weights.icu = parse_real(v, k); }},
            {"objective.w_vent",
             [&](const std::string& k, const std::string& v) { cfg.weights.vent = parse_real(v, k); }},
            {"objective.replicates",
             [&](const std::string& k, const std::string& v) { cfg.replicates = parse_int(v, k); }},
            {"optimizer.budget",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.total_budget = parse_int(v, k);
             }},
            {"optimizer.init",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.init_size = parse_int(v, k);
             }},
            {"optimizer.infill",
             [&](const std::string& k, const std::string& v) {
                 const std::string name = to_lower(v);
                 if (name == "expected-improvement" || name == "ei")
                     cfg.optimizer.infill = Infill::ExpectedImprovement;
                 else if (name == "predicted-value" || name == "pv")
                     cfg.optimizer.infill = Infill::PredictedValue;
                 else
                     throw ConfigError("config: unknown infill '" + v + "' for '" + k + "'");
             }},
            {"optimizer.random_starts",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.infill_search.random_starts = parse_int(v, k);
             }},
            {"optimizer.pattern_iters",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.infill_search.pattern_iters = parse_int(v, k);
             }},
            {"optimizer.exclude",
             [&](const std::string&, const std::string& v) {
                 cfg.optimizer.mask = parse_index_set(v);
             }},
            {"optimizer.kriging_restarts",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.kriging.restarts = parse_int(v, k);
             }},
            {"optimizer.kriging_pattern_iters",
             [&](const std::string& k, const std::string& v) {
                 cfg.optimizer.kriging.pattern_iters = parse_int(v, k);
             }},
            {"study.importance_repeats",
             [&](const std::string& k, const std::string& v) {
                 cfg.importance_repeats = parse_int(v, k);
             }},
            {"study.design",
             [&](const std::string&, const std::string& v) { cfg.study_design = resolve(v); }},
            {"study.design_size",
             [&](const std::string& k, const std::string& v) { cfg.design_size = parse_int(v, k); }},
            {"study.replicates",
             [&](const std::string& k, const std::string& v) {
                 cfg.study_replicates = parse_int(v, k);
             }},
            {"study.delta",
             [&](const std::string& k, const std::string& v) { cfg.delta = parse_real(v, k); }},
            {"study.delta_configs",
             [&](const std::string& k, const std::string& v) {
                 cfg.delta_configs = parse_int(v, k);
             }},
            {"study.null_reevals",
             [&](const std::string& k, const std::string& v) {
                 cfg.null_reevals = parse_int(v, k);
             }},
            {"study.grid_i",
             [&](const std::string& k, const std::string& v) { cfg.grid_i = parse_int(v, k); }},
            {"study.grid_j",
             [&](const std::string& k, const std::string& v) { cfg.grid_j = parse_int(v, k); }},
            {"study.grid_resolution",
             [&](const std::string& k, const std::string& v) {
                 cfg.grid_resolution = parse_int(v, k);
             }},
            {"study.removal_repeats",
             [&](const std::string& k, const std::string& v) {
                 cfg.removal_repeats = parse_int(v, k);
             }},
            {"study.removal_sets",
             [&](const std::string&, const std::string& v) {
                 cfg.removal_sets.clear();
                 for (const std::string& part : split(v, '|'))
                     cfg.removal_sets.push_back(parse_index_set(part));
             }},
            {"study.forest_trees",
             [&](const std::string& k, const std::string& v) {
                 cfg.forest.trees = parse_int(v, k);
             }},
            {"study.forest_min_leaf",
             [&](const std::string& k, const std::string& v) {
                 cfg.forest.min_leaf = parse_int(v, k);
             }},
            {"study.forest_mtry",
             [&](const std::string& k, const std::string& v) { cfg.forest.mtry = parse_int(v, k); }},
            {"study.kriging_restarts",
             [&](const std::string& k, const std::string& v) {
                 cfg.study_kriging.restarts = parse_int(v, k);
             }},
            {"study.kriging_pattern_iters",
             [&](const std::string& k, const std::string& v) {
                 cfg.study_kriging.pattern_iters = parse_int(v, k);
             }},
        };

    std::istringstream lines(content);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = to_lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = to_lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any [section]");
        const std::string full = section + "." + key;
        const auto it = handlers.find(full);
        if (it == handlers.end())
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + full +
                              "'");
        it->second(full, value);
    }

    if (cfg.workers < 0) throw ConfigError("config: workers must be nonnegative");
    return cfg;
}

} // namespace hospsim
