#pragma once

#include "modgauss/observables.hpp"
#include "modgauss/parallel.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace modgauss {

// ---------------------------------------------------------------- formal maps

namespace detail {
inline void same_size(int a, int b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": arguments must have the same size");
}
}  // namespace detail

inline GraphSum kappa2_graphs(const Graph& f, const Graph& g) {
    detail::same_size(f.k, g.k, "kappa2_graphs");
    const int k = f.k;
    GraphSum out;
    const Graph fg = graph_disjoint_union(f, g);
    for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b) {
            out += graph_term(graph_junction2(f, g, a, b));
            out -= graph_term(fg);
        }
    out *= Rational(1, k * k);
    return out;
}

inline GraphSum kappa3_graphs(const Graph& f, const Graph& g, const Graph& h) {
    detail::same_size(f.k, g.k, "kappa3_graphs");
    detail::same_size(g.k, h.k, "kappa3_graphs");
    const int k = f.k;
    auto U = [](const Graph& x, const Graph& y) { return graph_disjoint_union(x, y); };
    const Graph fgh = U(U(f, g), h);
    GraphSum out;
    for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b)
            for (int c = 1; c <= k; ++c) {
                out += graph_term(graph_junction3(f, g, h, PointMode{a, b, c}));
                out += graph_term(fgh, 2);
                out -= graph_term(U(f, graph_junction2(g, h, b, c)));
                out -= graph_term(U(g, graph_junction2(f, h, a, c)));
                out -= graph_term(U(h, graph_junction2(f, g, a, b)));
            }
    const std::array<std::array<const Graph*, 3>, 3> cyc{{{&f, &g, &h}, {&g, &h, &f}, {&h, &f, &g}}};
    for (const auto& [x, y, z] : cyc)
        for (int a = 1; a <= k; ++a)
            for (int b = 1; b <= k; ++b)
                for (int c = 1; c <= k; ++c) {
                    if (b == c) continue;
                    for (int d = 1; d <= k; ++d) {
                        out += graph_term(graph_junction3(*x, *y, *z, PairMode{a, b, c, d}));
                        out += graph_term(fgh);
                        out -= graph_term(U(*z, graph_junction2(*x, *y, a, b)));
                        out -= graph_term(U(*x, graph_junction2(*y, *z, c, d)));
                    }
                }
    out *= Rational(1, k * k * k * k);
    return out;
}

inline PermSum perm_product(const PermSum& a, const Permutation& b) { return perm_product(a, PermSum(b)); }

inline PermSum kappa2_perms(const Permutation& t, const Permutation& r) {
    detail::same_size(t.size(), r.size(), "kappa2_perms");
    const int k = t.size();
    const PermSum tr = graphical_shuffle(t, r);
    PermSum out;
    for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b) {
            out += amalgamated_shuffle2(t, r, a, b);
            out -= tr;
        }
    out *= Rational(1, k * k);
    return out;
}

inline PermSum kappa3_perms(const Permutation& t, const Permutation& r, const Permutation& u) {
    detail::same_size(t.size(), r.size(), "kappa3_perms");
    detail::same_size(r.size(), u.size(), "kappa3_perms");
    const int k = t.size();
    const PermSum tru = perm_product(graphical_shuffle(t, r), u);
    // (x join y)(i,j) * z, memoized; the two argument addresses determine z.
    std::map<std::tuple<const Permutation*, const Permutation*, int, int>, PermSum> memo;
    auto amal_times = [&](const Permutation& x, const Permutation& y, int i, int j, const Permutation& z) -> const PermSum& {
        auto key = std::make_tuple(&x, &y, i, j);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, perm_product(amalgamated_shuffle2(x, y, i, j), z)).first;
        return it->second;
    };
    PermSum out;
    for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b)
            for (int c = 1; c <= k; ++c) {
                out += amalgamated_shuffle3(t, r, u, PermPoint{a, b, c});
                out += Rational(2) * tru;
                out -= amal_times(t, r, a, b, u);
                out -= amal_times(r, u, b, c, t);
                out -= amal_times(t, u, a, c, r);
            }
    // Cyclic pair-mode terms. For the roles (x,y,z) the subtracted products are
    // (x join y)(a,b) * z and (y join z)(c,d) * x.
    const std::array<std::array<const Permutation*, 3>, 3> cyc{{{&t, &r, &u}, {&r, &u, &t}, {&u, &t, &r}}};
    for (const auto& [x, y, z] : cyc)
        for (int a = 1; a <= k; ++a)
            for (int b = 1; b <= k; ++b)
                for (int c = 1; c <= k; ++c) {
                    if (b == c) continue;
                    for (int d = 1; d <= k; ++d) {
                        out += amalgamated_shuffle3(*x, *y, *z, PermPair{a, b, c, d});
                        out += tru;
                        out -= amal_times(*x, *y, a, b, *z);
                        out -= amal_times(*y, *z, c, d, *x);
                    }
                }
    out *= Rational(1, k * k * k * k);
    return out;
}

inline PartSum kappa2_parts(const Partition& r, const Partition& m) {
    detail::same_size(r.size(), m.size(), "kappa2_parts");
    const int k = r.size();
    const Partition rm = partition_union(r, m);
    PartSum out;
    for (int a = 1; a <= r.length(); ++a)
        for (int b = 1; b <= m.length(); ++b) {
            Rational w = r[a] * m[b];
            out.add(partition_join(r, m, a, b), w);
            out.add(rm, -w);
        }
    out *= Rational(1, k * k);
    return out;
}

inline PartSum kappa3_parts(const Partition& r, const Partition& m, const Partition& u) {
    detail::same_size(r.size(), m.size(), "kappa3_parts");
    detail::same_size(m.size(), u.size(), "kappa3_parts");
    const int k = r.size();
    const Partition rmu = partition_union(partition_union(r, m), u);
    auto U = partition_union;
    PartSum out;
    for (int a = 1; a <= r.length(); ++a)
        for (int b = 1; b <= m.length(); ++b)
            for (int c = 1; c <= u.length(); ++c) {
                Rational w = r[a] * m[b] * u[c];
                out.add(partition_join3(r, m, u, PartPoint{a, b, c}), w);
                out.add(rmu, 2 * w);
                out.add(U(partition_join(r, m, a, b), u), -w);
                out.add(U(partition_join(m, u, b, c), r), -w);
                out.add(U(partition_join(r, u, a, c), m), -w);
            }
    const std::array<std::array<const Partition*, 3>, 3> cyc{{{&r, &m, &u}, {&m, &u, &r}, {&u, &r, &m}}};
    for (const auto& [x, y, z] : cyc) {
        for (int a = 1; a <= x->length(); ++a)
            for (int b = 1; b <= y->length(); ++b)
                for (int c = 1; c <= z->length(); ++c) {
                    Rational w = (*x)[a] * (*y)[b] * ((*y)[b] - 1) * (*z)[c];
                    if (w == 0) continue;
                    out.add(rmu, w);
                    out.add(partition_join3(*x, *y, *z, PartPoint{a, b, c}), w);
                    out.add(U(partition_join(*x, *y, a, b), *z), -w);
                    out.add(U(partition_join(*y, *z, b, c), *x), -w);
                }
        for (int a = 1; a <= x->length(); ++a)
            for (int b = 1; b <= y->length(); ++b)
                for (int c = 1; c <= y->length(); ++c) {
                    if (b == c) continue;
                    for (int d = 1; d <= z->length(); ++d) {
                        Rational w = (*x)[a] * (*y)[b] * (*y)[c] * (*z)[d];
                        out.add(rmu, w);
                        out.add(partition_join3(*x, *y, *z, PartPair{a, b, c, d}), w);
                        out.add(U(partition_join(*x, *y, a, b), *z), -w);
                        out.add(U(partition_join(*y, *z, c, d), *x), -w);
                    }
                }
    }
    out *= Rational(1, k * k * k * k);
    return out;
}

// ---------------------------------------------------------------- basis objects

using Basis = std::variant<Graph, Permutation, Partition>;

inline int basis_size(const Basis& b) {
    switch (b.index()) {
        case 0: return std::get<Graph>(b).k;
        case 1: return std::get<Permutation>(b).size();
        default: return std::get<Partition>(b).size();
    }
}

inline Observable kappa2(const Basis& f, const Basis& g) {
    if (f.index() != g.index()) throw std::invalid_argument("kappa2: family mismatch");
    switch (f.index()) {
        case 0: return kappa2_graphs(std::get<Graph>(f), std::get<Graph>(g));
        case 1: return kappa2_perms(std::get<Permutation>(f), std::get<Permutation>(g));
        default: return kappa2_parts(std::get<Partition>(f), std::get<Partition>(g));
    }
}

inline Observable kappa3(const Basis& f, const Basis& g, const Basis& h) {
    if (f.index() != g.index() || g.index() != h.index()) throw std::invalid_argument("kappa3: family mismatch");
    switch (f.index()) {
        case 0: return kappa3_graphs(std::get<Graph>(f), std::get<Graph>(g), std::get<Graph>(h));
        case 1: return kappa3_perms(std::get<Permutation>(f), std::get<Permutation>(g), std::get<Permutation>(h));
        default: return kappa3_parts(std::get<Partition>(f), std::get<Partition>(g), std::get<Partition>(h));
    }
}

// ---------------------------------------------------------------- regimes

struct CumulantRegime {
    Rational D, N, A = 1;
    int n = 0, k = 0;

    double ratio() const { return to_double(D / N); }
};

// Graphs and partitions: S = n^k t, D = k^2 n^(k-1), N = n^k.
// Permutations: S = occ(tau, sigma_n), D = k C(n-1,k-1), N = C(n,k).
inline CumulantRegime regime_for(const Basis& b, int n) {
    CumulantRegime r;
    r.n = n;
    r.k = basis_size(b);
    const int k = r.k;
    if (b.index() == 1) {
        r.D = Rational(k * binomial(n - 1, k - 1));
        r.N = Rational(binomial(n, k));
    } else {
        BigInt nk1 = 1;
        for (int i = 0; i + 1 < k; ++i) nk1 *= n;
        r.D = Rational(k * k * nk1);
        r.N = Rational(nk1 * n);
    }
    return r;
}

// ---------------------------------------------------------------- sampling S_n

inline void check_family(const ModelSpec& m, const Basis& b) {
    if (m.index() != b.index())
        throw std::invalid_argument("model family " + family_name(m) + " does not match the observable family");
}

inline double p_rho_double(const Partition& r, const Partition& l) {
    auto c = l.conjugate();
    double v = 1;
    for (int k : r.parts) {
        double s = 0;
        for (int i = 1; i <= l.length() && l[i] >= i; ++i) {
            double a = l[i] - i + 0.5, b = c[i] - i + 0.5;
            s += std::pow(a, k) + (k % 2 ? 1 : -1) * std::pow(b, k);
        }
        v *= s;
    }
    return v;
}

// One draw of S_n for replicate `rep`; the stream id is the replicate index.
inline double sample_statistic_once(const ModelSpec& m, const Basis& b, int n, RngSeed seed) {
    Rng rng(seed);
    switch (m.index()) {
        case 0: {
            auto adj = sample_adjacency(std::get<GraphonSpec>(m), n, rng);
            return hom_count(std::get<Graph>(b), adj).convert_to<double>();
        }
        case 1: {
            auto s = sample_permutation(std::get<PermutonSpec>(m), n, rng);
            return static_cast<double>(occ(std::get<Permutation>(b), s));
        }
        default: {
            auto l = sample_partition(std::get<ThomaParameter>(m), n, rng);
            return p_rho_double(std::get<Partition>(b), l);
        }
    }
}

inline std::vector<double> sample_statistic(const ModelSpec& m, const Basis& b, int n, long long reps,
                                            std::uint64_t seed, int threads = 1) {
    check_family(m, b);
    std::vector<double> out(reps);
    parallel_for(reps, threads, [&](long long i) {
        out[i] = sample_statistic_once(m, b, n, RngSeed{seed, static_cast<std::uint64_t>(i)});
    });
    return out;
}

// ---------------------------------------------------------------- estimators

struct KStats {
    double k1 = 0, k2 = 0, k3 = 0;
};

inline KStats k_statistics(const std::vector<double>& x) {
    const double N = static_cast<double>(x.size());
    if (x.size() < 3) throw std::invalid_argument("k_statistics: need at least 3 values");
    double mean = 0;
    for (double v : x) mean += v;
    mean /= N;
    double m2 = 0, m3 = 0;
    for (double v : x) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= N;
    m3 /= N;
    return {mean, N / (N - 1) * m2, N * N / ((N - 1) * (N - 2)) * m3};
}

// Bootstrap standard errors of (k1, k2, k3).
inline std::array<double, 3> bootstrap_stderr(const std::vector<double>& x, int B, RngSeed seed) {
    Rng rng(seed);
    const std::size_t N = x.size();
    std::vector<double> res(N);
    double s[3] = {0, 0, 0}, ss[3] = {0, 0, 0};
    for (int b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < N; ++i) res[i] = x[rng.below(N)];
        auto k = k_statistics(res);
        double v[3] = {k.k1, k.k2, k.k3};
        for (int j = 0; j < 3; ++j) s[j] += v[j], ss[j] += v[j] * v[j];
    }
    std::array<double, 3> out{};
    for (int j = 0; j < 3; ++j) out[j] = std::sqrt(std::max(0.0, ss[j] / B - (s[j] / B) * (s[j] / B)) * B / (B - 1));
    return out;
}

struct CumulantReport {
    std::vector<double> kappa;               // kappa^(1..R)
    std::vector<Rational> exact;             // filled in exact mode
    std::vector<double> stderr_;             // filled in Monte-Carlo mode
    CumulantRegime regime;
    double sigma2_n = 0, L_n = 0;
    std::optional<double> sigma2, L;         // formal limits when available
    long long reps = 0;
    std::uint64_t seed = 0;
    bool exact_mode = false;
};

inline void fill_scaled(CumulantReport& r) {
    const double N = to_double(r.regime.N), D = to_double(r.regime.D);
    if (r.kappa.size() >= 2) r.sigma2_n = r.kappa[1] / (N * D);
    if (r.kappa.size() >= 3) r.L_n = r.kappa[2] / (N * D * D);
}

// Psi(kappa2(f,f))(m) and Psi(kappa3(f,f,f))(m), when they can be evaluated.
inline std::pair<std::optional<double>, std::optional<double>> formal_limits(const ModelSpec& m, const Basis& b,
                                                                            bool with_third = true) {
    std::optional<double> s2, l;
    auto value = [&](const Observable& o) -> std::optional<double> {
        try {
            if (m.index() == 1 && std::get<PermutonSpec>(m).kind != PermutonSpec::Kind::Uniform &&
                std::get<PermutonSpec>(m).kind != PermutonSpec::Kind::FromPermutation)
                return std::nullopt;
            return evaluate(o, m).value;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    s2 = value(kappa2(b, b));
    if (with_third && basis_size(b) <= 3) l = value(kappa3(b, b, b));
    return {s2, l};
}

inline CumulantReport cumulants_from_samples(const std::vector<double>& x, const CumulantRegime& regime,
                                             std::uint64_t seed, int bootstrap = 200) {
    CumulantReport r;
    auto k = k_statistics(x);
    r.kappa = {k.k1, k.k2, k.k3};
    auto se = bootstrap_stderr(x, bootstrap, RngSeed{seed, 0xB0075u});
    r.stderr_ = {se[0], se[1], se[2]};
    r.regime = regime;
    r.reps = static_cast<long long>(x.size());
    r.seed = seed;
    fill_scaled(r);
    return r;
}

inline CumulantReport mc_cumulants(const ModelSpec& m, const Basis& b, int n, long long reps, std::uint64_t seed,
                                   int threads = 1, bool with_limits = true) {
    if (reps < 1000) throw std::invalid_argument("mc_cumulants: need at least 1000 replicates");
    auto x = sample_statistic(m, b, n, reps, seed, threads);
    auto r = cumulants_from_samples(x, regime_for(b, n), seed);
    if (with_limits) std::tie(r.sigma2, r.L) = formal_limits(m, b);
    return r;
}

// Second joint cumulant by polarization: (var(X+Y) - var(X-Y)) / 4.
inline std::pair<double, double> joint_cumulant2(const std::vector<double>& x, const std::vector<double>& y,
                                                 int B = 200, RngSeed seed = {}) {
    if (x.size() != y.size()) throw std::invalid_argument("joint_cumulant2: sample sizes differ");
    auto est = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> s(a.size()), d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i], d[i] = a[i] - b[i];
        return (k_statistics(s).k2 - k_statistics(d).k2) / 4;
    };
    const double value = est(x, y);
    Rng rng(seed);
    const std::size_t N = x.size();
    std::vector<double> rx(N), ry(N);
    double s = 0, ss = 0;
    for (int b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < N; ++i) {
            auto j = rng.below(N);
            rx[i] = x[j], ry[i] = y[j];
        }
        double v = est(rx, ry);
        s += v, ss += v * v;
    }
    return {value, std::sqrt(std::max(0.0, ss / B - (s / B) * (s / B)))};
}

// ---------------------------------------------------------------- exact mode

inline std::vector<Rational> cumulants_from_moments(const std::vector<Rational>& mom) {
    // mom[r] = E[S^r], mom[0] = 1.
    const int R = static_cast<int>(mom.size()) - 1;
    std::vector<Rational> kap(R + 1, 0);
    for (int r = 1; r <= R; ++r) {
        Rational v = mom[r];
        for (int j = 1; j < r; ++j) v -= Rational(binomial(r - 1, j - 1)) * kap[j] * mom[r - j];
        kap[r] = v;
    }
    return kap;
}

// Exact law of S_n as value -> probability.
inline std::map<Rational, Rational> exact_distribution(const ModelSpec& m, const Basis& b, int n) {
    check_family(m, b);
    std::map<Rational, Rational> law;
    switch (m.index()) {
        case 0: {
            const auto& g = std::get<GraphonSpec>(m);
            GraphonSpec step = g;
            if (g.kind == GraphonSpec::Kind::Constant)
                step = GraphonSpec::step({Rational(1)}, {{g.p}});
            else if (g.kind != GraphonSpec::Kind::Step)
                throw std::invalid_argument("exact_cumulants: graphon must be constant or a step function");
            const int q = static_cast<int>(step.masses.size());
            if (q > 2 || n > 4) throw std::invalid_argument("exact_cumulants: needs at most 2 blocks and n <= 4");
            const auto& f = std::get<Graph>(b);
            std::vector<std::pair<int, int>> pairs;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
            int types = 1;
            for (int i = 0; i < n; ++i) types *= q;
            for (int code = 0; code < types; ++code) {
                std::vector<int> ty(n);
                Rational pt = 1;
                for (int i = 0, c = code; i < n; ++i, c /= q) ty[i] = c % q, pt *= step.masses[ty[i]];
                for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
                    Rational p = pt;
                    Adjacency adj(n);
                    for (std::size_t e = 0; e < pairs.size(); ++e) {
                        const auto& v = step.values[ty[pairs[e].first]][ty[pairs[e].second]];
                        if (mask >> e & 1) p *= v, adj.add_edge(pairs[e].first, pairs[e].second);
                        else p *= 1 - v;
                        if (p == 0) break;
                    }
                    if (p != 0) law[Rational(hom_count(f, adj))] += p;
                }
            }
            break;
        }
        case 1: {
            if (std::get<PermutonSpec>(m).kind != PermutonSpec::Kind::Uniform)
                throw std::invalid_argument("exact_cumulants: only the uniform permuton is supported");
            if (n > 7) throw std::invalid_argument("exact_cumulants: permutations need n <= 7");
            const auto& t = std::get<Permutation>(b);
            Rational w(1, factorial(n));
            for (const auto& s : all_permutations(n)) law[Rational(t.size() > n ? 0 : occ(t, s))] += w;
            break;
        }
        default: {
            if (n > 8) throw std::invalid_argument("exact_cumulants: partitions need n <= 8");
            const auto& r = std::get<Partition>(b);
            for (const auto& [l, p] : exact_central_measure(std::get<ThomaParameter>(m), n))
                if (p != 0) law[p_rho(r, l)] += p;
            break;
        }
    }
    return law;
}

inline CumulantReport exact_cumulants(const ModelSpec& m, const Basis& b, int n, int R) {
    if (R < 1 || R > 6) throw std::invalid_argument("exact_cumulants: order must be in 1..6");
    auto law = exact_distribution(m, b, n);
    std::vector<Rational> mom(R + 1, 0);
    for (const auto& [v, p] : law) {
        Rational x = p;
        for (int r = 0; r <= R; ++r) {
            mom[r] += x;
            x *= v;
        }
    }
    auto kap = cumulants_from_moments(mom);
    CumulantReport rep;
    rep.exact_mode = true;
    rep.regime = regime_for(b, n);
    for (int r = 1; r <= R; ++r) {
        rep.exact.push_back(kap[r]);
        rep.kappa.push_back(to_double(kap[r]));
    }
    fill_scaled(rep);
    return rep;
}

struct MC1Row {
    int r;
    Rational abs_kappa, bound;
    bool pass;
    double margin;  // bound / |kappa|, infinite when kappa = 0
};

inline Rational mc1_bound(const CumulantRegime& g, int r) {
    Rational b = g.N * pow(2 * g.D, r - 1) * pow(g.A, r);
    return r == 1 ? b : b * pow(Rational(r), r - 2);
}

// |kappa^(r)| <= N (2D)^(r-1) r^(r-2) A^r for each available order.
inline std::vector<MC1Row> mc1_check(const CumulantReport& rep) {
    std::vector<MC1Row> rows;
    for (std::size_t i = 0; i < rep.kappa.size(); ++i) {
        const int r = static_cast<int>(i) + 1;
        Rational k = rep.exact_mode ? rep.exact[i] : Rational(rep.kappa[i]);
        if (k < 0) k = -k;
        Rational bound = mc1_bound(rep.regime, r);
        double margin = k == 0 ? INFINITY : to_double(bound / k);
        rows.push_back({r, k, bound, k <= bound, margin});
    }
    return rows;
}

}  // namespace modgauss
