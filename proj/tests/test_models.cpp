#include "modgauss/models.hpp"
#include "modgauss/stats.hpp"

#include <gtest/gtest.h>

using namespace modgauss;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }

template <class Key>
std::map<Key, long long> tally(const std::vector<Key>& xs) {
    std::map<Key, long long> c;
    for (const auto& x : xs) ++c[x];
    return c;
}

}  // namespace

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    Rng a(RngSeed{5, 3}), b(RngSeed{5, 3}), c(RngSeed{5, 4});
    bool differ = false;
    for (int i = 0; i < 100; ++i) {
        auto x = a.bits();
        EXPECT_EQ(x, b.bits());
        differ = differ || x != c.bits();
    }
    EXPECT_TRUE(differ);
}

TEST(Rng, UniformMoments) {
    Rng r(RngSeed{1, 0});
    const int N = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u, s2 += u * u;
    }
    EXPECT_NEAR(s / N, 0.5, 5 * std::sqrt(1.0 / 12 / N));
    EXPECT_NEAR(s2 / N, 1.0 / 3, 0.005);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) ++hist[r.below(7)];
    for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

// ---------------------------------------------------------------- graphons

TEST(Graphon, Validation) {
    EXPECT_THROW(GraphonSpec::constant(R(3, 2)), std::invalid_argument);
    EXPECT_THROW(GraphonSpec::step({R(1, 2), R(1, 3)}, {{R(0), R(1)}, {R(1), R(0)}}), std::invalid_argument);
    EXPECT_THROW(GraphonSpec::step({R(1, 2), R(1, 2)}, {{R(0), R(1)}, {R(0), R(0)}}), std::invalid_argument);
    EXPECT_THROW(GraphonSpec::grid_values({{0.1, 0.2}, {0.3, 0.4}}, false), std::invalid_argument);
    EXPECT_THROW(GraphonSpec::grid_values({{1.5}}, false), std::invalid_argument);
}

TEST(Graphon, PointEvaluation) {
    auto s = GraphonSpec::step({R(1, 4), R(3, 4)}, {{R(1), R(1, 2)}, {R(1, 2), R(0)}});
    EXPECT_EQ(s(0.1, 0.1), 1.0);
    EXPECT_EQ(s(0.1, 0.9), 0.5);
    EXPECT_EQ(s(0.5, 0.9), 0.0);
    EXPECT_DOUBLE_EQ(GraphonSpec::product()(0.5, 0.3), 0.15);
    EXPECT_DOUBLE_EQ(GraphonSpec::mean()(0.5, 0.3), 0.4);
    auto g = GraphonSpec::grid_values({{0.0, 1.0}, {1.0, 0.0}}, true);
    EXPECT_DOUBLE_EQ(g(0.25, 0.75), 1.0);
    EXPECT_DOUBLE_EQ(g(0.5, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(g(0.0, 0.0), 0.0);
}

TEST(Graphon, ConstantLawIsErdosRenyi) {
    auto law = exact_graph_law(GraphonSpec::constant(R(1, 3)), 4);
    EXPECT_EQ(law.size(), 64u);
    Rational total = 0;
    for (const auto& [g, p] : law) {
        const int e = static_cast<int>(g.edge_count());
        EXPECT_EQ(p, pow(R(1, 3), e) * pow(R(2, 3), 6 - e));
        total += p;
    }
    EXPECT_EQ(total, 1);
}

TEST(Graphon, StepSamplerMatchesExactLaw) {
    auto s = GraphonSpec::step({R(1, 3), R(2, 3)}, {{R(9, 10), R(1, 5)}, {R(1, 5), R(1, 2)}});
    auto law = exact_graph_law(s, 4);
    std::vector<Graph> draws(40000);
    for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = sample_graph(s, 4, RngSeed{17, i});
    auto r = tv_test(tally(draws), law, 0.03);
    EXPECT_TRUE(r.pass) << "tv=" << r.tv;
}

TEST(Graphon, EmbeddedGraphRecoversEdges) {
    Graph g(3, {{1, 2}});
    auto s = embed_graph(g);
    EXPECT_EQ(s(0.1, 0.5), 1.0);
    EXPECT_EQ(s(0.1, 0.9), 0.0);
    EXPECT_EQ(s(0.1, 0.2), 0.0);
    Rational edge = 0;
    for (const auto& [h, p] : exact_graph_law(s, 2))
        if (h.edge_count() == 1) edge += p;
    EXPECT_EQ(edge, R(2, 9));
}

TEST(Graphon, SampledEdgeDensityOfProductGraphon) {
    // P[edge] = E[XY] = 1/4.
    auto s = GraphonSpec::product();
    double e = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng(RngSeed{3, i});
        e += sample_adjacency(s, 60, rng).edge_count();
    }
    EXPECT_NEAR(e / 200 / (60 * 59 / 2), 0.25, 0.01);
}

// ---------------------------------------------------------------- permutons

TEST(Permuton, Validation) {
    EXPECT_THROW(PermutonSpec::grid_density({{R(1, 2), R(0)}, {R(1, 4), R(1, 4)}}), std::invalid_argument);
    EXPECT_NO_THROW(PermutonSpec::grid_density({{R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4)}}));
}

TEST(Permuton, UniformSamplerIsUniform) {
    std::vector<Permutation> draws(48000);
    auto u = PermutonSpec::uniform();
    for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = sample_permutation(u, 4, RngSeed{8, i});
    std::map<Permutation, Rational> exact;
    for (const auto& s : all_permutations(4)) exact[s] = R(1, 24);
    auto r = tv_test(tally(draws), exact, 0.02);
    EXPECT_TRUE(r.pass) << "tv=" << r.tv;
}

TEST(Permuton, MarginalsAreUniform) {
    for (const auto& spec : {PermutonSpec::disc(), PermutonSpec::from_permutation(parse_permutation("2413")),
                             PermutonSpec::grid_density({{R(1, 3), R(1, 6)}, {R(1, 6), R(1, 3)}})}) {
        Rng rng(RngSeed{11, 0});
        std::vector<double> xs, ys;
        for (int i = 0; i < 20000; ++i) {
            auto [x, y] = spec.draw(rng);
            xs.push_back(x);
            ys.push_back(y);
        }
        // Kolmogorov distance to U(0,1); 1.63/sqrt(N) is the 1% critical value.
        for (auto* v : {&xs, &ys}) {
            std::sort(v->begin(), v->end());
            double d = 0;
            for (std::size_t i = 0; i < v->size(); ++i)
                d = std::max({d, std::abs((*v)[i] - double(i) / v->size()), std::abs(double(i + 1) / v->size() - (*v)[i])});
            EXPECT_LT(d, 1.63 / std::sqrt(20000.0));
        }
    }
}

TEST(Permuton, EmbeddedPermutationSamplesItsOwnPattern) {
    // One point per block recovers sigma whenever the blocks are distinct.
    auto s = parse_permutation("3142");
    auto spec = embed_permutation(s);
    Rng rng(RngSeed{2, 0});
    int hits = 0;
    for (int i = 0; i < 2000; ++i) {
        auto pts = sample_points(spec, 4, rng);
        std::set<int> blocks;
        for (auto [x, y] : pts) blocks.insert(static_cast<int>(x * 4));
        if (blocks.size() == 4) {
            EXPECT_EQ(conf(pts), s);
            ++hits;
        }
    }
    EXPECT_GT(hits, 100);
}

// ---------------------------------------------------------------- Thoma parameters

TEST(Thoma, Validation) {
    EXPECT_THROW(ThomaParameter({R(1, 3), R(1, 2)}, {}), std::invalid_argument);
    EXPECT_THROW(ThomaParameter({R(2, 3)}, {R(1, 2)}), std::invalid_argument);
    EXPECT_EQ(ThomaParameter({R(1, 2)}, {R(1, 3)}).gamma(), R(1, 6));
}

TEST(Thoma, EmbeddedPartitionUsesScaledFrobeniusCoordinates) {
    auto w = embed_partition(Partition{4, 3, 1});
    EXPECT_EQ(w.alpha, (std::vector<Rational>{R(7, 16), R(3, 16)}));
    EXPECT_EQ(w.beta, (std::vector<Rational>{R(5, 16), R(1, 16)}));
    EXPECT_EQ(w.gamma(), 0);
}

TEST(Thoma, MomentsAndDensity) {
    ThomaParameter w({R(1, 2)}, {R(1, 3)});
    EXPECT_EQ(thoma_moment(1, w), 1);
    EXPECT_EQ(thoma_moment(2, w), R(1, 4) - R(1, 9));
    EXPECT_EQ(thoma_moment(3, w), R(1, 8) + R(1, 27));
    EXPECT_EQ(thoma_density(Partition{2, 2}, w), pow(R(5, 36), 2));
    EXPECT_EQ(thoma_density(Partition{2}, ThomaParameter::plancherel()), 0);
}

TEST(Thoma, PlancherelMeasureIsDimensionSquared) {
    for (int n = 1; n <= 8; ++n) {
        auto m = exact_central_measure(ThomaParameter::plancherel(), n);
        for (const auto& [l, p] : m) {
            BigInt d = hook_dimension(l);
            EXPECT_EQ(p, Rational(d * d, factorial(n))) << to_string(l);
        }
    }
}

TEST(Thoma, CentralMeasureIsAProbability) {
    for (const auto& w : {ThomaParameter({R(1, 2)}, {R(1, 3)}), ThomaParameter({R(1, 2), R(1, 4)}, {}),
                          ThomaParameter({}, {R(3, 5)})}) {
        for (int n = 1; n <= 7; ++n) {
            Rational total = 0;
            for (const auto& [l, p] : exact_central_measure(w, n)) {
                EXPECT_GE(p, 0);
                total += p;
            }
            EXPECT_EQ(total, 1);
        }
    }
}

TEST(Thoma, DegenerateParametersGiveOneRowOrColumn) {
    // alpha=(1): all letters equal and row-weak. beta=(1): column-weak.
    for (int n : {1, 5, 9}) {
        EXPECT_EQ(sample_partition(ThomaParameter({R(1)}, {}), n, RngSeed{1, 0}), Partition({n}));
        EXPECT_EQ(sample_partition(ThomaParameter({}, {R(1)}), n, RngSeed{1, 0}), Partition(std::vector<int>(n, 1)));
    }
    auto row = exact_central_measure(ThomaParameter({R(1)}, {}), 5);
    EXPECT_EQ(row.at(Partition{5}), 1);
}

TEST(Thoma, SamplerMatchesCentralMeasureSmall) {
    for (const auto& w : {ThomaParameter({R(1, 2)}, {R(1, 3)}), ThomaParameter({R(1, 3), R(1, 3)}, {R(1, 5)}),
                          ThomaParameter::plancherel()}) {
        std::vector<Partition> draws(30000);
        for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = sample_partition(w, 4, RngSeed{99, i});
        auto r = tv_test(tally(draws), exact_central_measure(w, 4), 0.02);
        EXPECT_TRUE(r.pass) << "tv=" << r.tv;
    }
}
