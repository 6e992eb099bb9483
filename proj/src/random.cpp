#include "hospsim/random.hpp"

#include "hospsim/errors.hpp"
#include "hospsim/version.hpp"

#include <cmath>

namespace hospsim {

std::uint64_t mix64(std::uint64_t v) {
    v += 0x9e3779b97f4a7c15ULL;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return v ^ (v >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

RngStream derive_stream(const SeedSpec& seed) {
    std::uint64_t h = fnv1a64(seed.key.purpose);
    h = hash_combine(h, seed.master_seed);
    h = hash_combine(h, seed.key.entity);
    h = hash_combine(h, seed.key.replicate);
    return RngStream(h);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    // Rejection keeps the draw unbiased.
    std::uint64_t threshold = (~n + 1) % n; // 2^64 mod n
    while (true) {
        std::uint64_t v = next_u64();
        if (v >= threshold) return v % n;
    }
}

double RngStream::normal01() {
    while (true) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double sample_gamma(double shape, double scale, RngStream& rng) {
    if (shape <= 0.0 || scale <= 0.0)
        throw SimulationError("gamma: shape and scale must be positive");
    // Marsaglia-Tsang squeeze; the shape < 1 case boosts through shape + 1.
    if (shape < 1.0) {
        double u = rng.uniform01();
        while (u <= 0.0) u = rng.uniform01();
        return sample_gamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x;
        double v;
        do {
            x = rng.normal01();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = rng.uniform01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_duration(const DurationSpec& spec, RngStream& rng) {
    if (spec.shape <= 0.0) throw SimulationError("duration: shape must be positive");
    if (spec.translation < 0.0) throw SimulationError("duration: translation must be nonnegative");
    if (spec.mean <= spec.translation) throw SimulationError("duration: mean must exceed translation");
    if (spec.cap <= spec.translation) throw SimulationError("duration: cap must exceed translation");
    double scale = (spec.mean - spec.translation) / spec.shape;
    constexpr int kMaxRejects = 1 << 20;
    for (int attempt = 0; attempt < kMaxRejects; ++attempt) {
        double value = spec.translation + sample_gamma(spec.shape, scale, rng);
        if (value <= spec.cap) return value;
    }
    throw SimulationError("duration: truncation rejection did not terminate (cap too tight)");
}

namespace {

/// Regularized lower incomplete gamma P(a, x): series expansion for
/// x < a + 1, modified-Lentz continued fraction for the upper tail otherwise.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    const double prefactor = std::exp(-x + a * std::log(x) - lg);
    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) return sum * prefactor;
        }
        throw SimulationError("incomplete gamma: series did not converge");
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return 1.0 - prefactor * h;
    }
    throw SimulationError("incomplete gamma: continued fraction did not converge");
}

} // namespace

double truncated_duration_mean(const DurationSpec& spec) {
    if (spec.mean <= spec.translation) throw SimulationError("duration: mean must exceed translation");
    double scale = (spec.mean - spec.translation) / spec.shape;
    double upper = (spec.cap - spec.translation) / scale; // in standard-gamma units
    double k = spec.shape;
    // For G ~ Gamma(k, 1): E[G | G <= u] = k P(k+1, u) / P(k, u), since
    // int_0^u g^k e^-g dg / Gamma(k) = k P(k+1, u).
    const double mass = gamma_p(k, upper);
    if (mass <= 0.0) throw SimulationError("duration: zero truncated mass");
    return spec.translation + scale * k * gamma_p(k + 1.0, upper) / mass;
}

Eigen::MatrixXd lhs_unit(int n, int d, RngStream& rng) {
    if (n < 2) throw ConfigError("lhs: need at least 2 points");
    if (d < 1) throw ConfigError("lhs: need at least 1 dimension");
    Eigen::MatrixXd design(n, d);
    std::vector<int> order(static_cast<size_t>(n));
    for (int col = 0; col < d; ++col) {
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
        }
        for (int row = 0; row < n; ++row) {
            double stratum = static_cast<double>(order[static_cast<size_t>(row)]);
            design(row, col) = (stratum + rng.uniform01()) / static_cast<double>(n);
        }
    }
    return design;
}

Eigen::MatrixXd lhs(int n, const ParamSpace& space, RngStream& rng) {
    Eigen::MatrixXd unit = lhs_unit(n, kParamCount, rng);
    for (int col = 0; col < kParamCount; ++col) {
        const ParamDef& def = space.entries()[static_cast<size_t>(col)];
        unit.col(col) = (def.lower + (def.upper - def.lower) * unit.col(col).array()).matrix();
    }
    return unit;
}

int categorical(const std::vector<double>& probs, RngStream& rng) {
    if (probs.empty()) throw SimulationError("categorical: empty distribution");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw SimulationError("categorical: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SimulationError("categorical: probabilities must sum to 1");
    double u = rng.uniform01();
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
}

} // namespace hospsim
