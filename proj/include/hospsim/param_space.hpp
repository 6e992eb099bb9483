#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hospsim {

inline constexpr int kParamCount = 29;

enum class ParamRole { DurationDays, Probability, Distribution, Risk };

const char* role_name(ParamRole role);
std::optional<ParamRole> role_from_name(const std::string& name);

struct ParamDef {
    int index = 0; // 1-based, stable
    std::string name;
    ParamRole role = ParamRole::DurationDays;
    double lower = 0.0;
    double upper = 0.0;
    double default_value = 0.0;
};

/// One full setting of the 29 model parameters, ordered by index.
struct ParamVector {
    std::array<double, kParamCount> values{};

    /// Access by the stable 1-based parameter index.
    double at(int index1) const { return values.at(static_cast<size_t>(index1 - 1)); }
    void set(int index1, double v) { values.at(static_cast<size_t>(index1 - 1)) = v; }
};

enum class HospState {
    Infected = 0,
    Hospital,
    Normal,
    Intensive,
    Ventilation,
    IntensiveAfter,
    Aftercare,
    Healthy,
    Death,
};
inline constexpr int kStateCount = 9;

const char* state_name(HospState s);

enum class Resource { None = -1, Bed = 0, Icu = 1, Vent = 2 };
inline constexpr int kResourceCount = 3;
const char* resource_name(Resource r);

struct GraphEdge {
    HospState from = HospState::Infected;
    HospState to = HospState::Healthy;
    int prob_param = 0;     // 1-based parameter index; 0 marks the complement edge
    int duration_param = 0; // 1-based parameter index; 0 marks an instantaneous hop
    bool risk_sensitive = false;

    bool is_complement() const { return prob_param == 0; }
    bool is_instantaneous() const { return duration_param == 0; }
};

/// The fixed hospital state graph. Edges of a state are ordered with all
/// explicit-probability edges first and the single complement edge last.
class StateGraph {
public:
    static StateGraph build(std::vector<GraphEdge> edges,
                            std::array<Resource, kStateCount> resource_tags);

    const std::vector<GraphEdge>& outgoing(HospState s) const {
        return outgoing_[static_cast<size_t>(s)];
    }
    Resource resource_tag(HospState s) const { return resource_tags_[static_cast<size_t>(s)]; }
    const std::vector<GraphEdge>& all_edges() const { return edges_; }

    static bool is_absorbing(HospState s) {
        return s == HospState::Healthy || s == HospState::Death;
    }

private:
    std::vector<GraphEdge> edges_;
    std::array<std::vector<GraphEdge>, kStateCount> outgoing_{};
    std::array<Resource, kStateCount> resource_tags_{};
};

/// The 29-dimensional model parameter space plus the state graph the
/// parameters bind to. Immutable once constructed.
class ParamSpace {
public:
    /// Throws ConfigError when any structural invariant is violated.
    static ParamSpace create(std::vector<ParamDef> defs, StateGraph graph);

    const std::vector<ParamDef>& entries() const { return defs_; }
    const ParamDef& def(int index1) const { return defs_.at(static_cast<size_t>(index1 - 1)); }
    const StateGraph& graph() const { return graph_; }

    ParamVector defaults() const;
    ParamVector midpoint_vector() const;

    /// Indices (1-based) of parameters flagged risk sensitive on some edge.
    std::set<std::pair<HospState, HospState>> risk_sensitive_edges() const;

    /// Parameter indices used for the gamma duration distribution.
    int shape_param() const { return 13; }
    int translation_param() const { return 29; }

private:
    std::vector<ParamDef> defs_;
    StateGraph graph_;
};

/// The canonical space with the artifact's shipped bounds and defaults.
const ParamSpace& canonical_space();

struct Violation {
    int param_index = 0; // 0 for state-level violations
    std::string reason;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

/// Exhaustive, non-aborting check of one vector against the space: bound
/// violations plus negative-complement checks per graph state.
ValidationResult validate_vector(const ParamSpace& space, const ParamVector& x);

/// Scales down the explicit probabilities of any state whose complement went
/// negative so the vector passes validate_vector. Bound violations are fixed
/// by clamping. Returns the repaired vector.
ParamVector repair_vector(const ParamSpace& space, const ParamVector& x);

/// Midpoint (lower+upper)/2 for each selected 1-based index.
/// Throws ConfigError on an unknown index.
std::map<int, double> midpoint(const ParamSpace& space, const std::set<int>& subset);

struct PerturbResult {
    ParamVector x;
    bool clamped = false;
};

/// Multiplies component `index1` by (1 + factor) and clamps to its bounds.
/// factor must be > -1.
PerturbResult perturb(const ParamSpace& space, const ParamVector& x, int index1, double factor);

/// Space config serialization: CSV with header index,name,role,lower,upper,default.
/// Lines starting with '#' are ignored. The graph topology is fixed in code;
/// loaded entries must keep the canonical role per index.
void save_space_csv(const ParamSpace& space, std::ostream& out);
ParamSpace load_space_csv(std::istream& in);

/// Parameter vector serialization: CSV with header index,value, 29 rows.
void save_vector_csv(const ParamVector& x, std::ostream& out);
ParamVector load_vector_csv(std::istream& in);

} // namespace hospsim
