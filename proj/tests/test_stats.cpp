#include "modgauss/cumulants.hpp"
#include "modgauss/stats.hpp"

#include <gtest/gtest.h>

using namespace modgauss;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }

std::vector<double> normals(int N, std::uint64_t seed) {
    Rng rng(RngSeed{seed, 0});
    std::vector<double> x(N);
    for (auto& v : x) v = rng.normal();
    return x;
}

}  // namespace

TEST(Normal, ReferenceValues) {
    EXPECT_NEAR(normal_cdf(0), 0.5, 1e-15);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_NEAR(normal_tail(3), 1.3498980316300946e-3, 1e-15);
    EXPECT_NEAR(normal_tail(8) / 6.220960574271785e-16, 1.0, 1e-10);
}

TEST(Kolmogorov, ConstantSample) {
    EXPECT_DOUBLE_EQ(kolmogorov_distance(std::vector<double>(1000, 0.0)), 0.5);
    EXPECT_NEAR(kolmogorov_distance(std::vector<double>(1000, 1.0)), normal_cdf(1.0), 1e-15);
    EXPECT_THROW(kolmogorov_distance(std::vector<double>(999, 0.0)), std::invalid_argument);
}

TEST(Kolmogorov, NormalSampleWithinDkwBound) {
    const int N = 1000000;
    EXPECT_LE(kolmogorov_distance(normals(N, 3)), 1.36 / std::sqrt(double(N)));
}

TEST(Kolmogorov, ShiftedSampleIsDetected) {
    auto x = normals(100000, 4);
    for (auto& v : x) v += 0.25;
    // sup |Phi(t - 0.25) - Phi(t)| = 2 Phi(0.125) - 1.
    EXPECT_NEAR(kolmogorov_distance(x), 2 * normal_cdf(0.125) - 1, 0.01);
}

TEST(KolmogorovBound, PlugInValues) {
    CumulantRegime g;
    g.N = 100;
    g.D = 1;
    EXPECT_NEAR(kolmogorov_bound(g, 1.0), 76.36 / 10, 1e-12);
    EXPECT_THROW(kolmogorov_bound(g, 0.0), std::invalid_argument);
    // Inversions with sigma = 1/6: 76.36 * 216 * sqrt(D/N) with D/N = 4/n.
    for (int n : {100, 1000, 10000}) {
        auto r = regime_for(parse_permutation("21"), n);
        EXPECT_NEAR(kolmogorov_bound(r, 1.0 / 6) * std::sqrt(double(n)) / 33000, 1.0, 0.05);
    }
}

TEST(ClopperPearson, ZeroSuccesses) {
    EXPECT_NEAR(clopper_pearson_upper(0, 10000), 1 - std::pow(0.01, 1e-4), 1e-12);
    EXPECT_EQ(clopper_pearson_upper(10, 10), 1.0);
    double u = clopper_pearson_upper(50, 1000);
    EXPECT_GT(u, 0.05);
    EXPECT_LT(u, 0.07);
}

TEST(Concentration, Predicate) {
    std::vector<double> f(10000, 0.5);
    f[0] = 0.9;
    auto rep = concentration_check(f, 0.5, 100, 2, {0.3, 1.5}, 2.0);
    EXPECT_EQ(rep.rows[0].exceed, 1);
    EXPECT_EQ(rep.rows[1].exceed, 0);
    EXPECT_EQ(rep.rows[1].empirical, 0.0);
    EXPECT_TRUE(rep.pass);
    // A bound >= 1 always passes.
    auto loose = concentration_check(std::vector<double>(10000, 1.0), 0.0, 1, 3, {0.01}, 2.0);
    EXPECT_GE(loose.rows[0].bound, 1.0);
    EXPECT_TRUE(loose.pass);
    EXPECT_THROW(concentration_check(std::vector<double>(9999, 0.0), 0, 10, 2, {0.1}, 2), std::invalid_argument);
}

TEST(Concentration, ProductGraphonTriangleDensity) {
    auto s = sample_statistic(GraphonSpec::product(), complete_graph(3), 100, 10000, 9, 2);
    for (auto& v : s) v /= 1e6;
    const double center = expected_hom_density(complete_graph(3), GraphonSpec::product(), 100);
    auto rep = concentration_check(s, center, 100, 3, {0.02, 0.05, 0.1}, 2.0);
    for (const auto& row : rep.rows) EXPECT_LE(row.upper, row.bound) << "x=" << row.x;
}

TEST(Tails, SymmetricCaseHasNoCorrection) {
    auto y = standardize_y(normals(20000, 8));
    auto rep = tail_report(y, 1.0, 0.0, regime_for(parse_permutation("21"), 100));
    ASSERT_EQ(rep.rows.size(), 9u);
    for (const auto& row : rep.rows) EXPECT_DOUBLE_EQ(row.corrected, std::exp(-row.x * row.x / 2) / (row.x * std::sqrt(2 * M_PI)));
    EXPECT_EQ(rep.skewness_check, "unresolved");
    EXPECT_TRUE(rep.pass);
    EXPECT_THROW(tail_report(y, 0.0, 0.0, regime_for(parse_permutation("21"), 100)), std::invalid_argument);
}

TEST(Tails, TriangleSkewnessHasTheSignOfL) {
    ModelSpec m = GraphonSpec::product();
    auto [s2, L] = formal_limits(m, complete_graph(3));
    ASSERT_TRUE(s2 && L);
    auto s = sample_statistic(m, complete_graph(3), 100, 20000, 1, 2);
    auto rep = tail_report(standardize_y(s), *s2, *L, regime_for(complete_graph(3), 100));
    EXPECT_NE(rep.skewness_check, "inconsistent");
    EXPECT_GT(*L, 0);
}

TEST(Tails, KolmogorovDistanceShrinksWithN) {
    auto d = [](int n) {
        auto s = sample_statistic(GraphonSpec::product(), complete_graph(3), n, 10000, 31, 2);
        return kolmogorov_distance(standardize_y(s).values);
    };
    EXPECT_GT(d(50), d(200));
}

TEST(TotalVariation, Basics) {
    std::map<int, long long> counts{{1, 50}, {2, 50}};
    std::map<int, Rational> exact{{1, R(1, 2)}, {2, R(1, 2)}};
    EXPECT_EQ(tv_test(counts, exact, 0.01).tv, 0.0);
    std::map<int, Rational> other{{1, R(1, 4)}, {3, R(3, 4)}};
    auto r = tv_test(counts, other, 0.5);
    EXPECT_DOUBLE_EQ(r.tv, 0.75);
    EXPECT_FALSE(r.pass);
    EXPECT_THROW(tv_test(std::map<int, long long>{}, exact, 0.1), std::invalid_argument);
}

TEST(Standardize, XMode) {
    auto g = regime_for(complete_graph(2), 10);
    auto x = standardize_x({1, 2, 3}, g);
    const double scale = std::cbrt(100.0) * std::pow(40.0, 2.0 / 3);
    EXPECT_NEAR(x.values[2], 1 / scale, 1e-15);
    EXPECT_THROW(standardize_y({1, 1, 1}), std::invalid_argument);
}
