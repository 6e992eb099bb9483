#include "hospsim/simulation.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/text.hpp"
#include "hospsim/threading.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace hospsim {

namespace {

constexpr double kComplementFloor = 1e-6;

// Days covered by [start, end): the day-t census instant is t + 0.5.
struct DayRange {
    long long first = 0;
    long long last_excl = 0;
};

DayRange census_days(double start, double end) {
    DayRange r;
    r.first = static_cast<long long>(std::ceil(start - 0.5));
    r.last_excl = static_cast<long long>(std::ceil(end - 0.5));
    return r;
}

DurationSpec edge_duration(const GraphEdge& edge, const ParamVector& x, const SimOptions& options) {
    DurationSpec spec;
    spec.mean = x.at(edge.duration_param);
    spec.shape = x.at(13);
    spec.translation = x.at(29);
    spec.cap = options.cap_factor * spec.mean;
    return spec;
}

void add_interval(std::vector<std::array<double, kResourceCount>>& expected, Resource res,
                  double start, double end, double weight) {
    if (res == Resource::None || weight == 0.0) return;
    const DayRange days = census_days(start, end);
    const long long horizon = static_cast<long long>(expected.size());
    const long long lo = std::max<long long>(days.first, 0);
    const long long hi = std::min<long long>(days.last_excl, horizon);
    for (long long d = lo; d < hi; ++d)
        expected[static_cast<size_t>(d)][static_cast<size_t>(res)] += weight;
}

void enumerate_paths(const Patient& p, const ParamVector& x, const StateGraph& graph,
                     const SimOptions& options, HospState state, double clock, double prob,
                     std::vector<std::array<double, kResourceCount>>& expected) {
    if (StateGraph::is_absorbing(state)) return;
    const std::vector<double> probs = effective_probs(state, p, x, graph);
    const std::vector<GraphEdge>& edges = graph.outgoing(state);
    const Resource res = graph.resource_tag(state);
    for (size_t i = 0; i < edges.size(); ++i) {
        const double branch = prob * probs[i];
        if (branch <= 0.0) continue;
        const double dur = edges[i].is_instantaneous() ? 0.0 : x.at(edges[i].duration_param);
        add_interval(expected, res, clock, clock + dur, branch);
        enumerate_paths(p, x, graph, options, edges[i].to, clock + dur, branch, expected);
    }
}

} // namespace

std::int64_t ArrivalSchedule::total_patients() const {
    std::int64_t n = 0;
    for (const auto& day : per_day) n += static_cast<std::int64_t>(day.size());
    return n;
}

ArrivalSchedule ArrivalSchedule::empty(int horizon_days) {
    if (horizon_days < 0) throw ConfigError("arrival schedule: horizon must be nonnegative");
    ArrivalSchedule s;
    s.horizon_days = horizon_days;
    s.per_day.resize(static_cast<size_t>(horizon_days));
    return s;
}

void write_trace_csv(const OccupancyTrace& trace, std::ostream& out,
                     const std::vector<std::string>& preamble, int first_day) {
    for (const std::string& line : preamble) out << "# " << line << "\n";
    out << "day,bed,icu,vent\n";
    for (int d = 0; d < trace.days(); ++d) {
        out << (first_day + d);
        for (int r = 0; r < kResourceCount; ++r)
            out << ',' << trace.counts[static_cast<size_t>(d)][static_cast<size_t>(r)];
        out << '\n';
    }
}

OccupancyTrace read_trace_csv(std::istream& in) {
    OccupancyTrace trace;
    std::string line;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "day,bed,icu,vent")
                throw DataError("occupancy csv: expected header 'day,bed,icu,vent', got '" + t + "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> parts = split(t, ',');
        if (parts.size() != 4)
            throw DataError("occupancy csv line " + std::to_string(lineno) + ": expected 4 fields");
        std::array<std::int64_t, kResourceCount> row{};
        try {
            for (int r = 0; r < kResourceCount; ++r)
                row[static_cast<size_t>(r)] = std::stoll(trim(parts[static_cast<size_t>(r) + 1]));
        } catch (const std::exception&) {
            throw DataError("occupancy csv line " + std::to_string(lineno) + ": bad count");
        }
        trace.counts.push_back(row);
    }
    if (!header_seen) throw DataError("occupancy csv: missing header");
    return trace;
}

double assign_risk(const Patient& p, const ParamVector& x) {
    double r = x.at(25) * std::exp(x.at(26) * p.age);
    if (p.male) r *= x.at(27);
    return r;
}

double reference_risk(const ParamVector& x) { return x.at(25) * std::exp(x.at(26) * 50.0); }

std::vector<double> effective_probs(HospState state, const Patient& p, const ParamVector& x,
                                    const StateGraph& graph) {
    const std::vector<GraphEdge>& edges = graph.outgoing(state);
    if (edges.empty())
        throw SimulationError(std::string("no outgoing edges at state ") + state_name(state));
    const double scale = assign_risk(p, x) / reference_risk(x);

    std::vector<double> probs(edges.size(), 0.0);
    double explicit_sum = 0.0;
    size_t complement_at = edges.size();
    for (size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].is_complement()) {
            complement_at = i;
            continue;
        }
        double pe = x.at(edges[i].prob_param);
        if (edges[i].risk_sensitive) pe *= scale;
        probs[i] = pe;
        explicit_sum += pe;
    }
    if (complement_at == edges.size())
        throw SimulationError(std::string("no complement edge at state ") + state_name(state));

    const double limit = 1.0 - kComplementFloor;
    if (explicit_sum > limit) {
        const double shrink = limit / explicit_sum;
        for (size_t i = 0; i < edges.size(); ++i)
            if (i != complement_at) probs[i] *= shrink;
        explicit_sum = limit;
    }
    probs[complement_at] = 1.0 - explicit_sum;
    return probs;
}

std::vector<ResourceInterval> simulate_patient(const Patient& p, const ParamVector& x,
                                               const StateGraph& graph, RngStream& rng,
                                               const SimOptions& options) {
    std::vector<ResourceInterval> intervals;
    HospState state = HospState::Infected;
    double clock = static_cast<double>(p.infection_day);
    // The graph is loop-free so this terminates; the bound only guards a
    // malformed custom graph.
    for (int step = 0; step < 64; ++step) {
        if (StateGraph::is_absorbing(state)) return intervals;
        const std::vector<double> probs = effective_probs(state, p, x, graph);
        const int pick = categorical(probs, rng);
        const GraphEdge& edge = graph.outgoing(state)[static_cast<size_t>(pick)];
        double dur = 0.0;
        if (!edge.is_instantaneous()) {
            if (options.duration_mode == DurationMode::Deterministic)
                dur = x.at(edge.duration_param);
            else
                dur = sample_duration(edge_duration(edge, x, options), rng);
        }
        const Resource res = graph.resource_tag(state);
        if (res != Resource::None && dur > 0.0)
            intervals.push_back({res, clock, clock + dur});
        clock += dur;
        state = edge.to;
    }
    throw SimulationError("patient walk exceeded 64 transitions; graph has a cycle");
}

OccupancyTrace simulate(const ArrivalSchedule& arrivals, const ParamVector& x,
                        const StateGraph& graph, const SeedSpec& seed,
                        const SimOptions& options) {
    if (static_cast<int>(arrivals.per_day.size()) != arrivals.horizon_days)
        throw ConfigError("arrival schedule: per_day size does not match horizon");

    std::vector<const Patient*> patients;
    patients.reserve(static_cast<size_t>(arrivals.total_patients()));
    for (const auto& day : arrivals.per_day)
        for (const Patient& p : day) patients.push_back(&p);

    std::vector<std::vector<ResourceInterval>> slots(patients.size());
    parallel_for(patients.size(), options.workers, [&](size_t i) {
        const Patient& p = *patients[i];
        SeedSpec s = seed;
        s.key.purpose = "walk";
        s.key.entity = hash_combine(seed.key.entity, static_cast<std::uint64_t>(p.id));
        RngStream rng = derive_stream(s);
        slots[i] = simulate_patient(p, x, graph, rng, options);
    });

    OccupancyTrace trace;
    trace.counts.assign(static_cast<size_t>(arrivals.horizon_days), {});
    const long long horizon = arrivals.horizon_days;
    for (const auto& slot : slots) {
        for (const ResourceInterval& iv : slot) {
            const DayRange days = census_days(iv.start, iv.end);
            const long long lo = std::max<long long>(days.first, 0);
            const long long hi = std::min<long long>(days.last_excl, horizon);
            for (long long d = lo; d < hi; ++d)
                ++trace.counts[static_cast<size_t>(d)][static_cast<size_t>(iv.resource)];
        }
    }
    return trace;
}

std::vector<std::array<double, kResourceCount>> expected_occupancy_oracle(
    const ArrivalSchedule& arrivals, const ParamVector& x, const StateGraph& graph,
    const SimOptions& options) {
    if (options.duration_mode != DurationMode::Deterministic)
        throw ConfigError("expected occupancy oracle requires deterministic durations");
    std::vector<std::array<double, kResourceCount>> expected(
        static_cast<size_t>(arrivals.horizon_days), std::array<double, kResourceCount>{});
    for (const auto& day : arrivals.per_day)
        for (const Patient& p : day)
            enumerate_paths(p, x, graph, options, HospState::Infected,
                            static_cast<double>(p.infection_day), 1.0, expected);
    return expected;
}

} // namespace hospsim
