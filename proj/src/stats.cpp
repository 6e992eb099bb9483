#include "hospsim/stats.hpp"

#include "hospsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hospsim {

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ConfigError("wilcoxon: paired samples must have equal length");
    std::vector<double> diff;
    diff.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }

    WilcoxonResult result;
    result.m = static_cast<int>(diff.size());
    if (diff.empty()) return result;
    if (diff.size() > 50)
        throw ConfigError("wilcoxon: exact test supports at most 50 nonzero pairs");

    std::vector<size_t> order(diff.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return std::abs(diff[i]) < std::abs(diff[j]); });

    // Doubled ranks keep tie-averaged ranks integral: a tie block spanning
    // 1-based positions p..q gets doubled rank p + q.
    const size_t m = diff.size();
    std::vector<long long> rank2(m, 0);
    size_t i = 0;
    while (i < m) {
        size_t j = i;
        while (j + 1 < m && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
        const long long doubled = static_cast<long long>(i + 1) + static_cast<long long>(j + 1);
        for (size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
        i = j + 1;
    }

    long long w2 = 0;
    for (size_t k = 0; k < m; ++k)
        if (diff[k] > 0.0) w2 += rank2[k];
    result.statistic = static_cast<double>(w2) / 2.0;

    // Exact null distribution of the doubled statistic by subset counting.
    const long long total2 = std::accumulate(rank2.begin(), rank2.end(), 0LL);
    std::vector<double> dist(static_cast<size_t>(total2) + 1, 0.0);
    dist[0] = 1.0;
    long long reached = 0;
    for (size_t k = 0; k < m; ++k) {
        const long long r = rank2[k];
        for (long long t = reached; t >= 0; --t)
            if (dist[static_cast<size_t>(t)] > 0.0)
                dist[static_cast<size_t>(t + r)] += dist[static_cast<size_t>(t)];
        reached += r;
    }
    const double denom = std::ldexp(1.0, static_cast<int>(m)); // 2^m
    double ge = 0.0, le = 0.0;
    for (long long t = 0; t <= total2; ++t) {
        const double c = dist[static_cast<size_t>(t)];
        if (t >= w2) ge += c;
        if (t <= w2) le += c;
    }
    result.p_greater = ge / denom;
    result.p_less = le / denom;
    result.p_two_sided = std::min(1.0, 2.0 * std::min(result.p_greater, result.p_less));
    return result;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace hospsim
