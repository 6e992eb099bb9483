#pragma once

#include "hospsim/param_space.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hospsim {

/// Identifies one logical random stream. Distinct keys yield independent
/// streams; the same (masterSeed, key) always reproduces the same stream,
/// independent of call order or thread scheduling.
struct StreamKey {
    std::string purpose;
    std::uint64_t entity = 0;    // patient id, design row, config id, ...
    std::uint64_t replicate = 0;
};

struct SeedSpec {
    std::uint64_t master_seed = 0;
    StreamKey key;

    SeedSpec with_replicate(std::uint64_t r) const {
        SeedSpec s = *this;
        s.key.replicate = r;
        return s;
    }
    SeedSpec with_entity(std::uint64_t e) const {
        SeedSpec s = *this;
        s.key.entity = e;
        return s;
    }
};

/// splitmix64 finalizer; also used to combine ids into stream entities.
std::uint64_t mix64(std::uint64_t v);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via polar Box-Muller (no cached spare, so draws stay
    /// an explicit function of the stream position).
    double normal01();

private:
    std::mt19937_64 engine_;
};

RngStream derive_stream(const SeedSpec& seed);

/// Truncated and translated gamma duration distribution.
/// X = translation + G with G ~ Gamma(shape, scale = (mean - translation)/shape),
/// resampled while X would exceed cap. Support is (translation, cap].
struct DurationSpec {
    double mean = 1.0;
    double shape = 1.0;       // x13
    double translation = 0.0; // x29
    double cap = 10.0;
};

double sample_duration(const DurationSpec& spec, RngStream& rng);

/// Mean of the truncated-translated distribution above, evaluated in closed
/// form through the regularized incomplete gamma function. Independent of
/// the sampling path; primarily a test oracle.
double truncated_duration_mean(const DurationSpec& spec);

/// Gamma(shape, scale) variate.
double sample_gamma(double shape, double scale, RngStream& rng);

/// Latin hypercube design on the unit cube: n rows, d columns, exactly one
/// point per column in each of the n equal strata, jittered within strata.
Eigen::MatrixXd lhs_unit(int n, int d, RngStream& rng);

/// Latin hypercube design over the space's raw bounds (n x 29).
Eigen::MatrixXd lhs(int n, const ParamSpace& space, RngStream& rng);

/// Draws an index with the given probabilities. probs must be nonnegative
/// and sum to 1 within 1e-9.
int categorical(const std::vector<double>& probs, RngStream& rng);

} // namespace hospsim
