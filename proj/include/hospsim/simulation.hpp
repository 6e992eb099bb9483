#pragma once

#include "hospsim/param_space.hpp"
#include "hospsim/random.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hospsim {

struct Patient {
    std::int64_t id = 0;
    int infection_day = 0;
    double age = 0.0;
    bool male = false;
};

struct ArrivalSchedule {
    int horizon_days = 0;
    std::vector<std::vector<Patient>> per_day; // size == horizon_days

    std::int64_t total_patients() const;
    static ArrivalSchedule empty(int horizon_days);
};

struct ResourceInterval {
    Resource resource = Resource::Bed;
    double start = 0.0; // day offset from simulation start
    double end = 0.0;
};

/// Daily occupied-resource counts (bed, icu, vent), one row per day.
struct OccupancyTrace {
    std::vector<std::array<std::int64_t, kResourceCount>> counts;

    int days() const { return static_cast<int>(counts.size()); }
    std::int64_t at(int day, Resource r) const {
        return counts.at(static_cast<size_t>(day))[static_cast<size_t>(r)];
    }
    bool operator==(const OccupancyTrace&) const = default;
};

/// Writes day,bed,icu,vent rows; `preamble` lines are emitted as '#' comments.
void write_trace_csv(const OccupancyTrace& trace, std::ostream& out,
                     const std::vector<std::string>& preamble = {}, int first_day = 0);
OccupancyTrace read_trace_csv(std::istream& in);

enum class DurationMode {
    Stochastic,    // truncated-translated gamma draws
    Deterministic, // every duration equals its mean parameter exactly
};

struct SimOptions {
    DurationMode duration_mode = DurationMode::Stochastic;
    double cap_factor = 10.0; // truncation cap = cap_factor * mean
    int workers = 1;
};

/// Patient risk: x25 * exp(x26 * age), times x27 for male patients.
double assign_risk(const Patient& p, const ParamVector& x);

/// Risk of the reference patient (female, age 50); risk scaling is relative
/// to this anchor.
double reference_risk(const ParamVector& x);

/// Outgoing transition distribution for a patient in `state`, aligned with
/// graph.outgoing(state). Risk-sensitive edges are scaled by risk/referenceRisk
/// and proportionally clamped so the complement keeps at least 1e-6 mass.
std::vector<double> effective_probs(HospState state, const Patient& p, const ParamVector& x,
                                    const StateGraph& graph);

/// Walks one patient from Infected to an absorbing state. Every visited
/// resource-tagged state contributes one interval of its sampled sojourn.
std::vector<ResourceInterval> simulate_patient(const Patient& p, const ParamVector& x,
                                               const StateGraph& graph, RngStream& rng,
                                               const SimOptions& options = {});

/// Runs all arrivals and accumulates daily occupancy. A resource counts as
/// occupied on day t when an interval covers the census instant t + 0.5.
/// Deterministic given (arrivals, x, seed) for any worker count.
OccupancyTrace simulate(const ArrivalSchedule& arrivals, const ParamVector& x,
                        const StateGraph& graph, const SeedSpec& seed,
                        const SimOptions& options = {});

/// Exact expected occupancy by enumerating every root-to-absorbing path with
/// its probability, under deterministic durations. Requires
/// options.duration_mode == Deterministic.
std::vector<std::array<double, kResourceCount>> expected_occupancy_oracle(
    const ArrivalSchedule& arrivals, const ParamVector& x, const StateGraph& graph,
    const SimOptions& options);

} // namespace hospsim
