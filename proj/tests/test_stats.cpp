#include "doctest.h"

#include "hospsim/errors.hpp"
#include "hospsim/stats.hpp"

#include <vector>

using namespace hospsim;

TEST_CASE("signed-rank test on three positive differences") {
    // differences 1, 2, 3: W+ = 1+2+3 = 6; of eight sign assignments only one
    // reaches 6, so P(W+ >= 6) = 1/8.
    WilcoxonResult r = wilcoxon_signed_rank({2.0, 4.0, 6.0}, {1.0, 2.0, 3.0});
    CHECK(r.m == 3);
    CHECK(r.statistic == doctest::Approx(6.0));
    CHECK(r.p_greater == doctest::Approx(1.0 / 8.0));
    CHECK(r.p_less == doctest::Approx(1.0));
    CHECK(r.p_two_sided == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("signed-rank test with a mixed sign") {
    // differences 1, -2, 3: ranks by |d| are 1, 2, 3; W+ = 1 + 3 = 4.
    // Null values over the 8 subsets are 0,1,2,3,3,4,5,6.
    WilcoxonResult r = wilcoxon_signed_rank({2.0, 0.0, 4.0}, {1.0, 2.0, 1.0});
    CHECK(r.m == 3);
    CHECK(r.statistic == doctest::Approx(4.0));
    CHECK(r.p_greater == doctest::Approx(3.0 / 8.0));
    CHECK(r.p_less == doctest::Approx(6.0 / 8.0));
    CHECK(r.p_two_sided == doctest::Approx(6.0 / 8.0));
}

TEST_CASE("tied magnitudes share an averaged rank") {
    // differences 1, 1, -2: the two magnitude-1 values share rank 1.5, the
    // magnitude-2 value gets rank 3. W+ = 1.5 + 1.5 = 3. The exact null over
    // doubled statistics {3,3,6} gives P(W+ >= 3) = P(W+ <= 3) = 5/8.
    WilcoxonResult r = wilcoxon_signed_rank({2.0, 2.0, 0.0}, {1.0, 1.0, 2.0});
    CHECK(r.m == 3);
    CHECK(r.statistic == doctest::Approx(3.0));
    CHECK(r.p_greater == doctest::Approx(5.0 / 8.0));
    CHECK(r.p_less == doctest::Approx(5.0 / 8.0));
    CHECK(r.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("zero differences are dropped before ranking") {
    // diffs (0, 1, 2, 0) reduce to m = 2 with W+ = 3 and P(W+ >= 3) = 1/4.
    WilcoxonResult r = wilcoxon_signed_rank({1.0, 2.0, 3.0, 4.0}, {1.0, 1.0, 1.0, 4.0});
    CHECK(r.m == 2);
    CHECK(r.statistic == doctest::Approx(3.0));
    CHECK(r.p_greater == doctest::Approx(1.0 / 4.0));
    CHECK(r.p_two_sided == doctest::Approx(2.0 / 4.0));
}

TEST_CASE("identical samples yield a degenerate result") {
    WilcoxonResult r = wilcoxon_signed_rank({5.0, 5.0}, {5.0, 5.0});
    CHECK(r.m == 0);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_greater == doctest::Approx(1.0));
    CHECK(r.p_less == doctest::Approx(1.0));
    CHECK(r.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("ten uniformly positive differences give the textbook tail") {
    std::vector<double> a, b;
    for (int i = 1; i <= 10; ++i) {
        a.push_back(static_cast<double>(i));
        b.push_back(0.0);
    }
    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    CHECK(r.m == 10);
    CHECK(r.statistic == doctest::Approx(55.0));
    CHECK(r.p_greater == doctest::Approx(1.0 / 1024.0));
    CHECK(r.p_two_sided == doctest::Approx(2.0 / 1024.0));
}

TEST_CASE("sample-size guards") {
    CHECK_THROWS_AS(wilcoxon_signed_rank({1.0, 2.0}, {1.0}), ConfigError);
    std::vector<double> a(51), b(51, 0.0);
    for (size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i + 1);
    CHECK_THROWS_AS(wilcoxon_signed_rank(a, b), ConfigError);
}

TEST_CASE("median of odd, even, and singleton samples") {
    CHECK(median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
    CHECK(median({7.0}) == doctest::Approx(7.0));
    CHECK_THROWS_AS(median({}), ConfigError);
}
