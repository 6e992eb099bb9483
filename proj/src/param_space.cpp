#include "hospsim/param_space.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hospsim {

namespace {
constexpr double kProbSumTol = 1e-9;
}

const char* role_name(ParamRole role) {
    switch (role) {
    case ParamRole::DurationDays: return "duration-days";
    case ParamRole::Probability: return "probability";
    case ParamRole::Distribution: return "distribution";
    case ParamRole::Risk: return "risk";
    }
    return "?";
}

std::optional<ParamRole> role_from_name(const std::string& name) {
    if (name == "duration-days") return ParamRole::DurationDays;
    if (name == "probability") return ParamRole::Probability;
    if (name == "distribution") return ParamRole::Distribution;
    if (name == "risk") return ParamRole::Risk;
    return std::nullopt;
}

const char* state_name(HospState s) {
    switch (s) {
    case HospState::Infected: return "Infected";
    case HospState::Hospital: return "Hospital";
    case HospState::Normal: return "Normal";
    case HospState::Intensive: return "Intensive";
    case HospState::Ventilation: return "Ventilation";
    case HospState::IntensiveAfter: return "IntensiveAfter";
    case HospState::Aftercare: return "Aftercare";
    case HospState::Healthy: return "Healthy";
    case HospState::Death: return "Death";
    }
    return "?";
}

const char* resource_name(Resource r) {
    switch (r) {
    case Resource::Bed: return "bed";
    case Resource::Icu: return "icu";
    case Resource::Vent: return "vent";
    case Resource::None: return "none";
    }
    return "?";
}

StateGraph StateGraph::build(std::vector<GraphEdge> edges,
                             std::array<Resource, kStateCount> resource_tags) {
    StateGraph g;
    g.resource_tags_ = resource_tags;
    for (const auto& e : edges) {
        if (is_absorbing(e.from)) {
            throw ConfigError(std::string("absorbing state ") + state_name(e.from) +
                              " must not have outgoing edges");
        }
    }
    // Explicit edges first, the complement edge last.
    for (int s = 0; s < kStateCount; ++s) {
        auto state = static_cast<HospState>(s);
        std::vector<GraphEdge> explicit_edges;
        std::vector<GraphEdge> complement_edges;
        for (const auto& e : edges) {
            if (e.from != state) continue;
            (e.is_complement() ? complement_edges : explicit_edges).push_back(e);
        }
        if (is_absorbing(state)) {
            if (!explicit_edges.empty() || !complement_edges.empty())
                throw ConfigError("absorbing state has edges");
            continue;
        }
        if (complement_edges.size() != 1) {
            throw ConfigError(std::string("state ") + state_name(state) +
                              " must have exactly one complement edge");
        }
        auto& out = g.outgoing_[static_cast<size_t>(s)];
        out = std::move(explicit_edges);
        out.push_back(complement_edges.front());
        for (const auto& e : out) g.edges_.push_back(e);
    }
    return g;
}

ParamSpace ParamSpace::create(std::vector<ParamDef> defs, StateGraph graph) {
    if (defs.size() != static_cast<size_t>(kParamCount)) {
        throw ConfigError("parameter space must have exactly " + std::to_string(kParamCount) +
                          " entries, got " + std::to_string(defs.size()));
    }
    std::set<std::string> names;
    for (int i = 0; i < kParamCount; ++i) {
        const ParamDef& d = defs[static_cast<size_t>(i)];
        const std::string tag = "x" + std::to_string(i + 1);
        if (d.index != i + 1)
            throw ConfigError(tag + ": entries must be ordered by index 1..29");
        if (d.name.empty()) throw ConfigError(tag + ": empty name");
        if (!names.insert(d.name).second) throw ConfigError(tag + ": duplicate name " + d.name);
        if (!(d.lower < d.upper))
            throw ConfigError(tag + " (" + d.name + "): lower bound must be below upper bound");
        switch (d.role) {
        case ParamRole::Probability:
            if (d.lower < 0.0 || d.upper > 1.0)
                throw ConfigError(tag + " (" + d.name + "): probability bounds must lie in [0,1]");
            break;
        case ParamRole::DurationDays:
            if (d.lower <= 0.0)
                throw ConfigError(tag + " (" + d.name + "): duration bounds must be positive");
            break;
        case ParamRole::Distribution:
            if (d.lower < 0.0)
                throw ConfigError(tag + " (" + d.name + "): distribution bounds must be nonnegative");
            break;
        case ParamRole::Risk:
            if (d.lower <= 0.0)
                throw ConfigError(tag + " (" + d.name + "): risk bounds must be positive");
            break;
        }
        if (d.default_value < d.lower || d.default_value > d.upper)
            throw ConfigError(tag + " (" + d.name + "): default outside bounds");
    }
    // The gamma shape parameter needs a strictly positive lower bound.
    if (defs[12].lower <= 0.0) throw ConfigError("x13: shape lower bound must be positive");

    // Every probability/duration parameter binds to exactly one edge.
    std::map<int, int> prob_uses;
    std::map<int, int> dur_uses;
    for (const auto& e : graph.all_edges()) {
        if (e.prob_param != 0) prob_uses[e.prob_param]++;
        if (e.duration_param != 0) dur_uses[e.duration_param]++;
    }
    for (const auto& d : defs) {
        if (d.role == ParamRole::Probability && prob_uses[d.index] != 1)
            throw ConfigError("probability parameter x" + std::to_string(d.index) +
                              " must bind to exactly one edge");
        if (d.role == ParamRole::DurationDays && dur_uses[d.index] != 1)
            throw ConfigError("duration parameter x" + std::to_string(d.index) +
                              " must bind to exactly one edge");
    }
    for (const auto& [idx, n] : prob_uses) {
        if (defs[static_cast<size_t>(idx - 1)].role != ParamRole::Probability)
            throw ConfigError("edge probability binding x" + std::to_string(idx) +
                              " is not a probability parameter");
        (void)n;
    }
    for (const auto& [idx, n] : dur_uses) {
        if (defs[static_cast<size_t>(idx - 1)].role != ParamRole::DurationDays)
            throw ConfigError("edge duration binding x" + std::to_string(idx) +
                              " is not a duration parameter");
        (void)n;
    }

    ParamSpace space;
    space.defs_ = std::move(defs);
    space.graph_ = std::move(graph);

    // Outgoing probabilities must form a distribution at defaults.
    ParamVector def = space.defaults();
    ValidationResult check = validate_vector(space, def);
    if (!check.ok()) throw ConfigError("defaults are not a valid vector: " + check.describe());
    return space;
}

ParamVector ParamSpace::defaults() const {
    ParamVector x;
    for (const auto& d : defs_) x.set(d.index, d.default_value);
    return x;
}

ParamVector ParamSpace::midpoint_vector() const {
    ParamVector x;
    for (const auto& d : defs_) x.set(d.index, 0.5 * (d.lower + d.upper));
    return x;
}

std::set<std::pair<HospState, HospState>> ParamSpace::risk_sensitive_edges() const {
    std::set<std::pair<HospState, HospState>> out;
    for (const auto& e : graph_.all_edges())
        if (e.risk_sensitive) out.emplace(e.from, e.to);
    return out;
}

namespace {

StateGraph canonical_graph() {
    using S = HospState;
    std::vector<GraphEdge> edges{
        // from, to, prob param (0 = complement), duration param (0 = instantaneous), risk flag
        {S::Infected, S::Hospital, 14, 1, false},
        {S::Infected, S::Healthy, 0, 24, false},
        {S::Hospital, S::Intensive, 15, 0, true},
        {S::Hospital, S::Ventilation, 16, 0, true},
        {S::Hospital, S::Normal, 0, 0, false},
        {S::Normal, S::Intensive, 17, 3, true},
        {S::Normal, S::Ventilation, 18, 4, true},
        {S::Normal, S::Death, 19, 5, true},
        {S::Normal, S::Healthy, 0, 2, false},
        {S::Intensive, S::Ventilation, 20, 7, false},
        {S::Intensive, S::Death, 21, 8, true},
        {S::Intensive, S::Aftercare, 0, 6, false},
        {S::Ventilation, S::IntensiveAfter, 22, 9, false},
        {S::Ventilation, S::Death, 0, 10, false},
        {S::IntensiveAfter, S::Death, 23, 12, true},
        {S::IntensiveAfter, S::Healthy, 0, 11, false},
        {S::Aftercare, S::Healthy, 0, 28, false},
    };
    std::array<Resource, kStateCount> tags{};
    tags.fill(Resource::None);
    tags[static_cast<size_t>(S::Normal)] = Resource::Bed;
    tags[static_cast<size_t>(S::Aftercare)] = Resource::Bed;
    tags[static_cast<size_t>(S::Intensive)] = Resource::Icu;
    tags[static_cast<size_t>(S::IntensiveAfter)] = Resource::Icu;
    tags[static_cast<size_t>(S::Ventilation)] = Resource::Vent;
    return StateGraph::build(std::move(edges), tags);
}

std::vector<ParamDef> canonical_defs() {
    using R = ParamRole;
    // Bounds and defaults are artifact configuration. Probability upper
    // bounds are chosen so every state's explicit probabilities stay below 1
    // anywhere in the box; duration lower bounds stay above the maximum
    // gamma translation (x29) so sampled means are always feasible.
    return {
        {1, "AmntDaysInfectedToHospital", R::DurationDays, 2.0, 14.0, 8.0},
        {2, "AmntDaysNormalToHealthy", R::DurationDays, 3.0, 30.0, 10.0},
        {3, "AmntDaysNormalToIntensive", R::DurationDays, 1.0, 14.0, 5.0},
        {4, "AmntDaysNormalToVentilation", R::DurationDays, 1.0, 14.0, 6.0},
        {5, "AmntDaysNormalToDeath", R::DurationDays, 3.0, 30.0, 12.0},
        {6, "AmntDaysIntensiveToAftercare", R::DurationDays, 1.0, 30.0, 7.0},
        {7, "AmntDaysIntensiveToVentilation", R::DurationDays, 1.0, 14.0, 4.0},
        {8, "AmntDaysIntensiveToDeath", R::DurationDays, 1.0, 21.0, 8.0},
        {9, "AmntDaysVentilationToIntensiveAfter", R::DurationDays, 2.0, 35.0, 9.0},
        {10, "AmntDaysVentilationToDeath", R::DurationDays, 1.0, 28.0, 10.0},
        {11, "AmntDaysIntensiveAfterToHealthy", R::DurationDays, 1.0, 30.0, 7.0},
        {12, "AmntDaysIntensiveAfterToDeath", R::DurationDays, 1.0, 21.0, 5.0},
        {13, "GammaShapeParameter", R::Distribution, 0.5, 10.0, 2.0},
        {14, "FactorPatientsInfectedToHospital", R::Probability, 0.0, 1.0, 0.18},
        {15, "FactorPatientsHospitalToIntensive", R::Probability, 0.0, 0.45, 0.15},
        {16, "FactorPatientsHospitalToVentilation", R::Probability, 0.0, 0.45, 0.10},
        {17, "FactorPatientsNormalToIntensive", R::Probability, 0.0, 0.35, 0.10},
        {18, "FactorPatientsNormalToVentilation", R::Probability, 0.0, 0.25, 0.05},
        {19, "FactorPatientsNormalToDeath", R::Probability, 0.0, 0.35, 0.04},
        {20, "FactorPatientsIntensiveToVentilation", R::Probability, 0.0, 0.45, 0.25},
        {21, "FactorPatientsIntensiveToDeath", R::Probability, 0.0, 0.45, 0.12},
        {22, "FactorPatientsVentilationToIntensiveAfter", R::Probability, 0.05, 0.95, 0.45},
        {23, "FactorPatientsIntensiveAfterToDeath", R::Probability, 0.0, 0.45, 0.08},
        {24, "AmntDaysInfectedToHealthy", R::DurationDays, 5.0, 25.0, 14.0},
        {25, "RiskFactorA", R::Risk, 0.001, 0.1, 0.02},
        {26, "RiskFactorB", R::Risk, 0.005, 0.1, 0.035},
        {27, "RiskMale", R::Risk, 1.0, 3.0, 1.5},
        {28, "AmntDaysAftercareToHealthy", R::DurationDays, 1.0, 21.0, 5.0},
        {29, "GammaTranslation", R::Distribution, 0.0, 0.9, 0.5},
    };
}

} // namespace

const ParamSpace& canonical_space() {
    static const ParamSpace space = ParamSpace::create(canonical_defs(), canonical_graph());
    return space;
}

std::string ValidationResult::describe() const {
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        if (violations[i].param_index > 0) os << "x" << violations[i].param_index << ": ";
        os << violations[i].reason;
    }
    return os.str();
}

ValidationResult validate_vector(const ParamSpace& space, const ParamVector& x) {
    ValidationResult result;
    for (const auto& d : space.entries()) {
        double v = x.at(d.index);
        if (!std::isfinite(v)) {
            result.violations.push_back({d.index, "not finite"});
        } else if (v < d.lower || v > d.upper) {
            result.violations.push_back(
                {d.index, "out of bounds [" + format_double(d.lower) + ", " +
                              format_double(d.upper) + "]: " + format_double(v)});
        }
    }
    for (int s = 0; s < kStateCount; ++s) {
        auto state = static_cast<HospState>(s);
        if (StateGraph::is_absorbing(state)) continue;
        double explicit_sum = 0.0;
        for (const auto& e : space.graph().outgoing(state))
            if (!e.is_complement()) explicit_sum += x.at(e.prob_param);
        if (explicit_sum > 1.0 + kProbSumTol) {
            result.violations.push_back(
                {0, std::string("negative complement at ") + state_name(state) +
                        ": explicit probabilities sum to " + format_double(explicit_sum)});
        }
    }
    return result;
}

ParamVector repair_vector(const ParamSpace& space, const ParamVector& x) {
    ParamVector fixed = x;
    for (const auto& d : space.entries()) {
        double v = fixed.at(d.index);
        if (!std::isfinite(v)) v = d.default_value;
        fixed.set(d.index, std::clamp(v, d.lower, d.upper));
    }
    for (int s = 0; s < kStateCount; ++s) {
        auto state = static_cast<HospState>(s);
        if (StateGraph::is_absorbing(state)) continue;
        double explicit_sum = 0.0;
        for (const auto& e : space.graph().outgoing(state))
            if (!e.is_complement()) explicit_sum += fixed.at(e.prob_param);
        if (explicit_sum > 1.0) {
            double scale = 1.0 / explicit_sum;
            for (const auto& e : space.graph().outgoing(state))
                if (!e.is_complement()) fixed.set(e.prob_param, fixed.at(e.prob_param) * scale);
        }
    }
    return fixed;
}

std::map<int, double> midpoint(const ParamSpace& space, const std::set<int>& subset) {
    std::map<int, double> out;
    for (int idx : subset) {
        if (idx < 1 || idx > kParamCount)
            throw ConfigError("midpoint: unknown parameter index " + std::to_string(idx));
        const ParamDef& d = space.def(idx);
        out[idx] = 0.5 * (d.lower + d.upper);
    }
    return out;
}

PerturbResult perturb(const ParamSpace& space, const ParamVector& x, int index1, double factor) {
    if (index1 < 1 || index1 > kParamCount)
        throw ConfigError("perturb: unknown parameter index " + std::to_string(index1));
    if (factor <= -1.0) throw ConfigError("perturb: factor must be greater than -1");
    const ParamDef& d = space.def(index1);
    PerturbResult res;
    res.x = x;
    double raw = x.at(index1) * (1.0 + factor);
    double clamped = std::clamp(raw, d.lower, d.upper);
    res.clamped = clamped != raw;
    res.x.set(index1, clamped);
    return res;
}

void save_space_csv(const ParamSpace& space, std::ostream& out) {
    out << "index,name,role,lower,upper,default\n";
    for (const auto& d : space.entries()) {
        out << d.index << ',' << d.name << ',' << role_name(d.role) << ','
            << format_double(d.lower) << ',' << format_double(d.upper) << ','
            << format_double(d.default_value) << '\n';
    }
}

ParamSpace load_space_csv(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::vector<ParamDef> defs;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "index,name,role,lower,upper,default")
                throw ConfigError("space config line " + std::to_string(lineno) +
                                ": expected header index,name,role,lower,upper,default");
            header_seen = true;
            continue;
        }
        auto fields = split(t, ',');
        if (fields.size() != 6)
            throw ConfigError("space config line " + std::to_string(lineno) + ": expected 6 fields");
        ParamDef d;
        try {
            d.index = std::stoi(fields[0]);
            d.name = trim(fields[1]);
            auto role = role_from_name(trim(fields[2]));
            if (!role)
                throw ConfigError("unknown role '" + fields[2] + "'");
            d.role = *role;
            d.lower = std::stod(fields[3]);
            d.upper = std::stod(fields[4]);
            d.default_value = std::stod(fields[5]);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("space config line " + std::to_string(lineno) + ": unparsable field");
        }
        defs.push_back(std::move(d));
    }
    if (!header_seen) throw ConfigError("space config: missing header");
    std::sort(defs.begin(), defs.end(),
              [](const ParamDef& a, const ParamDef& b) { return a.index < b.index; });
    // Role layout is tied to the fixed graph topology.
    const auto& canonical = canonical_space().entries();
    if (defs.size() == canonical.size()) {
        for (size_t i = 0; i < defs.size(); ++i) {
            if (defs[i].role != canonical[i].role)
                throw ConfigError("space config: x" + std::to_string(defs[i].index) +
                                " must keep role " + role_name(canonical[i].role) +
                                " (graph topology is fixed)");
        }
    }
    return ParamSpace::create(std::move(defs), canonical_graph());
}

void save_vector_csv(const ParamVector& x, std::ostream& out) {
    out << "index,value\n";
    for (int i = 1; i <= kParamCount; ++i)
        out << i << ',' << format_double(x.at(i)) << '\n';
}

ParamVector load_vector_csv(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::array<bool, kParamCount> seen{};
    ParamVector x{};
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "index,value")
                throw DataError("vector csv line " + std::to_string(lineno) +
                                ": expected header index,value");
            header_seen = true;
            continue;
        }
        auto fields = split(t, ',');
        if (fields.size() != 2)
            throw DataError("vector csv line " + std::to_string(lineno) + ": expected 2 fields");
        int index = 0;
        double value = 0.0;
        try {
            index = std::stoi(fields[0]);
            value = std::stod(fields[1]);
        } catch (const std::exception&) {
            throw DataError("vector csv line " + std::to_string(lineno) + ": unparsable field");
        }
        if (index < 1 || index > kParamCount)
            throw DataError("vector csv line " + std::to_string(lineno) + ": index out of range");
        if (seen[static_cast<size_t>(index - 1)])
            throw DataError("vector csv: duplicate index " + std::to_string(index));
        seen[static_cast<size_t>(index - 1)] = true;
        x.set(index, value);
    }
    if (!header_seen) throw DataError("vector csv: missing header");
    for (int i = 1; i <= kParamCount; ++i)
        if (!seen[static_cast<size_t>(i - 1)])
            throw DataError("vector csv: missing index " + std::to_string(i));
    return x;
}

} // namespace hospsim
