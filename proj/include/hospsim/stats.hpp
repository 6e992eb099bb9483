#pragma once

#include <vector>

namespace hospsim {

struct WilcoxonResult {
    double statistic = 0.0;  // W+: rank sum of positive differences a - b
    double p_greater = 1.0;  // P(W+ >= observed): evidence for a > b
    double p_less = 1.0;     // P(W+ <= observed): evidence for a < b
    double p_two_sided = 1.0;
    int m = 0; // pairs remaining after dropping zero differences
};

/// Exact paired Wilcoxon signed-rank test on differences a_i - b_i. Zero
/// differences are dropped; ties get average ranks. The null distribution is
/// computed exactly by rank-sum counting, not by a normal approximation.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

double median(std::vector<double> values);

} // namespace hospsim
