#pragma once

#include "modgauss/models.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <variant>

namespace modgauss {

// ---------------------------------------------------------------- finite graphs

namespace detail {

inline std::vector<std::vector<int>> components(const Graph& f) {
    std::vector<std::vector<int>> adj(f.k + 1);
    for (auto [i, j] : f.edges) adj[i].push_back(j), adj[j].push_back(i);
    std::vector<int> seen(f.k + 1, 0);
    std::vector<std::vector<int>> out;
    for (int s = 1; s <= f.k; ++s) {
        if (seen[s]) continue;
        std::vector<int> order{s};
        seen[s] = 1;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (int w : adj[order[h]])
                if (!seen[w]) seen[w] = 1, order.push_back(w);
        out.push_back(order);  // BFS order: every vertex after the first has an earlier neighbour
    }
    return out;
}

using u128 = unsigned __int128;

inline BigInt to_big(u128 x) {
    BigInt hi = static_cast<std::uint64_t>(x >> 64), lo = static_cast<std::uint64_t>(x);
    return (hi << 64) + lo;
}

// Number of maps of one connected component into the host, injective or not.
inline u128 count_component(const Graph& f, const std::vector<int>& order, const Adjacency& g, bool injective) {
    const int n = g.n(), W = g.words(), c = static_cast<int>(order.size());
    if (c == 1) return static_cast<u128>(n);
    std::vector<std::vector<int>> back(c);  // earlier neighbours, as positions in `order`
    std::vector<int> pos(f.k + 1, -1);
    for (int i = 0; i < c; ++i) pos[order[i]] = i;
    for (auto [a, b] : f.edges) {
        int pa = pos[a], pb = pos[b];
        if (pa < 0) continue;
        if (pa < pb) back[pb].push_back(pa);
        else back[pa].push_back(pb);
    }
    std::vector<int> img(c, -1);
    std::vector<std::uint64_t> used(W, 0), cand(static_cast<std::size_t>(c) * W);
    std::function<u128(int)> rec = [&](int level) -> u128 {
        std::uint64_t* cs = cand.data() + static_cast<std::size_t>(level) * W;
        const std::uint64_t* first = g.row(img[back[level][0]]);
        std::copy(first, first + W, cs);
        for (std::size_t t = 1; t < back[level].size(); ++t) {
            const std::uint64_t* r = g.row(img[back[level][t]]);
            for (int w = 0; w < W; ++w) cs[w] &= r[w];
        }
        if (injective)
            for (int w = 0; w < W; ++w) cs[w] &= ~used[w];
        u128 total = 0;
        if (level == c - 1) {
            for (int w = 0; w < W; ++w) total += std::popcount(cs[w]);
            return total;
        }
        for (int w = 0; w < W; ++w) {
            std::uint64_t bits = cs[w];
            while (bits) {
                int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                img[level] = v;
                used[v >> 6] |= std::uint64_t{1} << (v & 63);
                total += rec(level + 1);
                used[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
            }
        }
        return total;
    };
    u128 total = 0;
    for (int v = 0; v < n; ++v) {
        img[0] = v;
        used[v >> 6] |= std::uint64_t{1} << (v & 63);
        total += rec(1);
        used[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
    return total;
}

inline long long triangle_count(const Adjacency& g) {
    long long t = 0;
    const int n = g.n(), W = g.words();
    for (int i = 0; i < n; ++i) {
        const std::uint64_t* ri = g.row(i);
        for (int j = i + 1; j < n; ++j) {
            if (!g.has(i, j)) continue;
            const std::uint64_t* rj = g.row(j);
            // Common neighbours above j.
            int w0 = (j + 1) >> 6;
            for (int w = w0; w < W; ++w) {
                std::uint64_t m = ri[w] & rj[w];
                if (w == w0) m &= ~std::uint64_t{0} << ((j + 1) & 63);
                t += std::popcount(m);
            }
        }
    }
    return t;
}

}  // namespace detail

// |hom(F,G)|
inline BigInt hom_count(const Graph& f, const Adjacency& g) {
    if (f.k > 8) throw std::invalid_argument("hom_density: pattern has more than 8 vertices");
    const long long n = g.n();
    // Fast paths for the acceptance observables.
    if (f.k == 3 && f.edges.size() == 3) return BigInt(6) * detail::triangle_count(g);
    if (f.k == 2 && f.edges.size() == 1) return BigInt(2) * g.edge_count();
    if (f.k == 3 && f.edges.size() == 2) {
        BigInt s = 0;
        for (int i = 0; i < n; ++i) s += static_cast<long long>(g.degree(i)) * g.degree(i);
        return s;
    }
    BigInt total = 1;
    for (const auto& comp : detail::components(f)) total *= detail::to_big(detail::count_component(f, comp, g, false));
    return total;
}

// |emb(F,G)|, injective maps
inline BigInt emb_count(const Graph& f, const Adjacency& g) {
    if (f.k > 8) throw std::invalid_argument("emb_density: pattern has more than 8 vertices");
    if (f.k == 0) return 1;
    // One BFS order over all components so injectivity spans components.
    std::vector<int> order;
    for (const auto& comp : detail::components(f)) order.insert(order.end(), comp.begin(), comp.end());
    const int n = g.n(), W = g.words(), c = f.k;
    std::vector<int> pos(f.k + 1);
    for (int i = 0; i < c; ++i) pos[order[i]] = i;
    std::vector<std::vector<int>> back(c);
    for (auto [a, b] : f.edges) {
        int pa = pos[a], pb = pos[b];
        if (pa < pb) back[pb].push_back(pa);
        else back[pa].push_back(pb);
    }
    std::vector<int> img(c, -1);
    std::vector<std::uint64_t> used(W, 0), cand(static_cast<std::size_t>(c) * W), all(W, ~std::uint64_t{0});
    if (n % 64) all[W - 1] = (std::uint64_t{1} << (n % 64)) - 1;
    std::function<detail::u128(int)> rec = [&](int level) -> detail::u128 {
        std::uint64_t* cs = cand.data() + static_cast<std::size_t>(level) * W;
        std::copy(all.begin(), all.end(), cs);
        for (int b : back[level]) {
            const std::uint64_t* r = g.row(img[b]);
            for (int w = 0; w < W; ++w) cs[w] &= r[w];
        }
        for (int w = 0; w < W; ++w) cs[w] &= ~used[w];
        detail::u128 total = 0;
        if (level == c - 1) {
            for (int w = 0; w < W; ++w) total += std::popcount(cs[w]);
            return total;
        }
        for (int w = 0; w < W; ++w) {
            std::uint64_t bits = cs[w];
            while (bits) {
                int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                img[level] = v;
                used[v >> 6] |= std::uint64_t{1} << (v & 63);
                total += rec(level + 1);
                used[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
            }
        }
        return total;
    };
    return detail::to_big(rec(0));
}

inline Rational hom_density(const Graph& f, const Adjacency& g) {
    if (g.n() == 0) throw std::invalid_argument("hom_density: empty host graph");
    BigInt denom = 1;
    for (int i = 0; i < f.k; ++i) denom *= g.n();
    return Rational(hom_count(f, g), denom);
}
inline Rational hom_density(const Graph& f, const Graph& g) { return hom_density(f, Adjacency(g)); }

inline Rational emb_density(const Graph& f, const Graph& g) {
    if (f.k > g.k) return 0;
    return Rational(emb_count(f, Adjacency(g)), falling(g.k, f.k));
}

// ---------------------------------------------------------------- graphons

struct GraphonDensity {
    double value = 0;
    std::optional<Rational> exact;
    std::string method;
    int order = 0;  // Gauss-Legendre points per piece, when quadrature was used
};

namespace detail {

// Gauss-Legendre nodes and weights on [0,1] by Newton iteration on P_q.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int q) {
    std::vector<double> x(q), w(q);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < q; ++i) {
        double z = std::cos(pi * (i + 0.75) / (q + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int j = 2; j <= q; ++j) {
                double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1 - z);
        w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

}  // namespace detail

// Composite Gauss-Legendre with q points on each polynomial piece of the
// graphon, tensorized over the vertices of F.
inline double graphon_density_quadrature(const Graph& f, const GraphonSpec& spec, int q) {
    if (f.k > 7) throw std::invalid_argument("graphon_density: quadrature needs at most 7 vertices");
    auto br = spec.breakpoints();
    auto [gx, gw] = detail::gauss_legendre(q);
    std::vector<double> x, w;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        double a = br[p], len = br[p + 1] - br[p];
        for (int i = 0; i < q; ++i) x.push_back(a + len * gx[i]), w.push_back(len * gw[i]);
    }
    const int m = static_cast<int>(x.size());
    if (std::pow(double(m), f.k) > 2e8) throw std::invalid_argument("graphon_density: quadrature grid too large");
    std::vector<double> gm(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gm[static_cast<std::size_t>(i) * m + j] = spec(x[i], x[j]);
    std::vector<std::vector<int>> back(f.k);
    for (auto [a, b] : f.edges) back[b - 1].push_back(a - 1);
    std::vector<int> node(f.k);
    std::function<double(int)> rec = [&](int v) -> double {
        if (v == f.k) return 1.0;
        double s = 0;
        for (int i = 0; i < m; ++i) {
            double prod = w[i];
            for (int u : back[v]) prod *= gm[static_cast<std::size_t>(i) * m + node[u]];
            if (prod == 0) continue;
            node[v] = i;
            s += prod * rec(v + 1);
        }
        return s;
    };
    return rec(0);
}

inline std::optional<Rational> graphon_density_exact(const Graph& f, const GraphonSpec& spec) {
    using K = GraphonSpec::Kind;
    switch (spec.kind) {
        case K::Constant: return pow(spec.p, static_cast<int>(f.edges.size()));
        case K::Product: {
            Rational v = 1;
            auto d = f.degrees();
            for (int i = 1; i <= f.k; ++i) v /= (d[i] + 1);
            return v;
        }
        case K::Step: {
            const int q = static_cast<int>(spec.masses.size());
            std::vector<std::vector<int>> back(f.k);
            for (auto [a, b] : f.edges) back[b - 1].push_back(a - 1);
            std::vector<int> type(f.k);
            std::function<Rational(int)> rec = [&](int v) -> Rational {
                if (v == f.k) return 1;
                Rational s = 0;
                for (int t = 0; t < q; ++t) {
                    Rational prod = spec.masses[t];
                    for (int u : back[v]) prod *= spec.values[t][type[u]];
                    if (prod == 0) continue;
                    type[v] = t;
                    s += prod * rec(v + 1);
                }
                return s;
            };
            return rec(0);
        }
        default: return std::nullopt;
    }
}

inline GraphonDensity graphon_density(const Graph& f, const GraphonSpec& spec) {
    GraphonDensity out;
    if (auto e = graphon_density_exact(f, spec)) {
        out.exact = *e;
        out.value = to_double(*e);
        out.method = "exact";
        return out;
    }
    // Per piece the integrand is a polynomial of degree <= deg(v) in each
    // variable, so q > max degree / 2 is already exact; the doubled order is
    // a consistency check.
    auto d = f.degrees();
    int maxdeg = 0;
    for (int i = 1; i <= f.k; ++i) maxdeg = std::max(maxdeg, d[i]);
    int q = std::max(2, maxdeg / 2 + 1);
    out.value = graphon_density_quadrature(f, spec, q);
    out.method = "gauss-legendre";
    out.order = q;
    double pieces = static_cast<double>(spec.breakpoints().size() - 1);
    if (std::pow(2 * q * pieces, f.k) <= 2e8) {
        double check = graphon_density_quadrature(f, spec, 2 * q);
        if (std::abs(check - out.value) > 1e-8) throw std::runtime_error("graphon_density: quadrature did not converge");
    }
    return out;
}

// Exact E[t(F, G_n)]: sum over the kernels of maps V_F -> [n] (set partitions
// with no edge inside a block) of n_(r)/n^k t(F/P, g).
inline double expected_hom_density(const Graph& f, const GraphonSpec& spec, int n) {
    std::vector<int> block(f.k + 1, 0);
    double total = 0;
    std::function<void(int, int)> rec = [&](int v, int r) {
        if (v > f.k) {
            if (r > n) return;
            std::vector<std::pair<int, int>> e;
            for (auto [a, b] : f.edges) {
                int x = block[a], y = block[b];
                if (x == y) return;
                e.emplace_back(std::min(x, y) + 1, std::max(x, y) + 1);
            }
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
            double ratio = 1;
            for (int i = 0; i < f.k; ++i) ratio *= (i < r ? double(n - i) : 1.0) / n;
            total += ratio * graphon_density(Graph(r, e), spec).value;
            return;
        }
        for (int b = 0; b <= r; ++b) {
            block[v] = b;
            rec(v + 1, std::max(r, b + 1));
        }
    };
    rec(1, 0);
    return total;
}

// ---------------------------------------------------------------- permutations

inline Rational pattern_density(const Permutation& t, const Permutation& s) {
    return Rational(occ(t, s), binomial(s.size(), t.size()));
}

using RPoint = std::pair<Rational, Rational>;

// Limit probability that the eps-perturbed tuple has configuration t.
inline Rational F_tau(const Permutation& t, const std::vector<RPoint>& pts) {
    const int k = t.size();
    if (static_cast<int>(pts.size()) != k) throw std::invalid_argument("F_tau: tuple size differs from pattern size");
    if (k > 5) throw std::invalid_argument("F_tau: k above 5");
    std::vector<int> group(k, -1);
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < k; ++i) {
        if (group[i] >= 0) continue;
        group[i] = static_cast<int>(groups.size());
        groups.push_back({i});
        for (int j = i + 1; j < k; ++j)
            if (pts[j] == pts[i]) group[j] = group[i], groups.back().push_back(j);
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (group[i] != group[j] && (pts[i].first == pts[j].first || pts[i].second == pts[j].second))
                throw std::invalid_argument("F_tau: distinct points share a coordinate");
    // Tie-break ranks inside each group, for x and for y independently.
    std::vector<int> xr(k), yr(k);
    long long favorable = 0, total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (gi == 2 * groups.size()) {
            std::vector<std::pair<std::pair<Rational, int>, std::pair<Rational, int>>> p;
            for (int i = 0; i < k; ++i) p.push_back({{pts[i].first, xr[i]}, {pts[i].second, yr[i]}});
            ++total;
            favorable += conf(p) == t;
            return;
        }
        const auto& g = groups[gi % groups.size()];
        auto& ranks = gi < groups.size() ? xr : yr;
        std::vector<int> perm(g.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (std::size_t j = 0; j < g.size(); ++j) ranks[g[j]] = perm[j];
            rec(gi + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(0);
    return Rational(favorable, total);
}

// t(tau, pi(sigma)) exactly. Grouping the k i.i.d. cell choices by which
// coincide gives sum_P sum_rho occ(rho, sigma) * (labelled placements) * F_tau.
inline Rational permuton_density_of_perm(const Permutation& t, const Permutation& s) {
    const int k = t.size(), n = s.size();
    if (k > 4) throw std::invalid_argument("permuton_density_of_perm: k above 4");
    if (n > 300) throw std::invalid_argument("permuton_density_of_perm: n above 300");
    if (k == 0) return 1;
    std::vector<std::map<Permutation, long long>> profile(k + 1);
    for (int r = 1; r <= std::min(k, n); ++r) profile[r] = pattern_profile(s, r);
    std::vector<int> block(k);
    Rational sum = 0;
    std::function<void(int, int)> rec = [&](int i, int r) {
        if (i == k) {
            if (r > n) return;
            for (const auto& [rho, count] : profile[r]) {
                // beta: block -> x-rank of its cell among the r chosen cells.
                std::vector<int> beta(r);
                std::iota(beta.begin(), beta.end(), 1);
                Rational acc = 0;
                do {
                    std::vector<RPoint> pts;
                    for (int a = 0; a < k; ++a) {
                        int c = beta[block[a]];
                        pts.emplace_back(Rational(c), Rational(rho(c)));
                    }
                    acc += F_tau(t, pts);
                } while (std::next_permutation(beta.begin(), beta.end()));
                sum += acc * count;
            }
            return;
        }
        for (int b = 0; b <= r; ++b) {
            block[i] = b;
            rec(i + 1, std::max(r, b + 1));
        }
    };
    rec(0, 0);
    BigInt nk = 1;
    for (int i = 0; i < k; ++i) nk *= n;
    return sum / Rational(nk);
}

struct Estimate {
    double value = 0;
    double stderr_ = 0;
    std::optional<Rational> exact;
};

inline Estimate permuton_density(const Permutation& t, const PermutonSpec& spec, long long budget, RngSeed seed) {
    Estimate e;
    const int k = t.size();
    if (k <= 1 || spec.kind == PermutonSpec::Kind::Uniform) {
        e.exact = Rational(1, factorial(k));
        e.value = to_double(*e.exact);
        return e;
    }
    if (budget < 1) throw std::invalid_argument("permuton_density: budget must be positive");
    Rng rng(seed);
    long long hits = 0;
    for (long long b = 0; b < budget; ++b) hits += conf(sample_points(spec, k, rng)) == t;
    double p = double(hits) / budget;
    e.value = p;
    e.stderr_ = std::sqrt(p * (1 - p) / budget);
    return e;
}

// ---------------------------------------------------------------- evaluation

using Observable = std::variant<GraphSum, PermSum, PartSum>;

inline std::string family_name(const Observable& o) {
    static const char* names[] = {"graph", "permutation", "partition"};
    return names[o.index()];
}
inline std::string family_name(const ModelSpec& m) {
    static const char* names[] = {"graph", "permutation", "partition"};
    return names[m.index()];
}

inline Estimate evaluate(const GraphSum& obs, const GraphonSpec& g) {
    Estimate e;
    Rational exact = 0;
    bool is_exact = true;
    for (const auto& [f, c] : obs) {
        auto d = graphon_density(f, g);
        e.value += to_double(c) * d.value;
        if (d.exact) exact += c * *d.exact;
        else is_exact = false;
    }
    if (is_exact) e.exact = exact, e.value = to_double(exact);
    return e;
}

// Exact for Uniform and FromPermutation; Monte-Carlo otherwise.
inline Estimate evaluate(const PermSum& obs, const PermutonSpec& p, long long budget = 100000, RngSeed seed = {}) {
    Estimate e;
    Rational exact = 0;
    bool is_exact = true;
    double var = 0;
    for (const auto& [t, c] : obs) {
        Estimate d;
        if (p.kind == PermutonSpec::Kind::FromPermutation && t.size() <= 4 && p.sigma.size() <= 300) {
            d.exact = permuton_density_of_perm(t, p.sigma);
            d.value = to_double(*d.exact);
        } else {
            d = permuton_density(t, p, budget, seed);
        }
        e.value += to_double(c) * d.value;
        var += to_double(c * c) * d.stderr_ * d.stderr_;
        if (d.exact) exact += c * *d.exact;
        else is_exact = false;
    }
    e.stderr_ = std::sqrt(var);
    if (is_exact) e.exact = exact, e.value = to_double(exact);
    return e;
}

inline Estimate evaluate(const PartSum& obs, const ThomaParameter& w) {
    Rational exact = 0;
    for (const auto& [r, c] : obs) exact += c * thoma_density(r, w);
    Estimate e;
    e.exact = exact;
    e.value = to_double(exact);
    return e;
}

inline Estimate evaluate(const Observable& obs, const ModelSpec& m) {
    if (obs.index() != m.index())
        throw std::invalid_argument("evaluate: observable family " + family_name(obs) + " does not match model family " +
                                    family_name(m));
    switch (obs.index()) {
        case 0: return evaluate(std::get<GraphSum>(obs), std::get<GraphonSpec>(m));
        case 1: return evaluate(std::get<PermSum>(obs), std::get<PermutonSpec>(m));
        default: return evaluate(std::get<PartSum>(obs), std::get<ThomaParameter>(m));
    }
}

}  // namespace modgauss
