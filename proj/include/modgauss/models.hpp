#pragma once

#include "modgauss/adjacency.hpp"
#include "modgauss/characters.hpp"
#include "modgauss/permutation.hpp"
#include "modgauss/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace modgauss {

// ---------------------------------------------------------------- graphons

struct GraphonSpec {
    enum class Kind { Constant, Step, Product, Mean, Grid };
    Kind kind = Kind::Constant;
    Rational p = 0;                             // Constant
    std::vector<Rational> masses;               // Step
    std::vector<std::vector<Rational>> values;  // Step
    std::vector<std::vector<double>> grid;      // Grid, m x m
    bool bilinear = false;                      // Grid

    static GraphonSpec constant(Rational p) {
        if (p < 0 || p > 1) throw std::invalid_argument("graphon: constant outside [0,1]");
        GraphonSpec s;
        s.p = std::move(p);
        return s;
    }

    static GraphonSpec step(std::vector<Rational> masses, std::vector<std::vector<Rational>> values) {
        const std::size_t q = masses.size();
        if (q == 0 || values.size() != q) throw std::invalid_argument("graphon: step shape mismatch");
        Rational total = 0;
        for (std::size_t i = 0; i < q; ++i) {
            if (masses[i] <= 0) throw std::invalid_argument("graphon: block masses must be positive");
            total += masses[i];
            if (values[i].size() != q) throw std::invalid_argument("graphon: step matrix not square");
            for (std::size_t j = 0; j < q; ++j) {
                if (values[i][j] < 0 || values[i][j] > 1) throw std::invalid_argument("graphon: value outside [0,1]");
                if (values[i][j] != values[j][i]) throw std::invalid_argument("graphon: step matrix not symmetric");
            }
        }
        if (total != 1) throw std::invalid_argument("graphon: block masses must sum to 1");
        GraphonSpec s;
        s.kind = Kind::Step;
        s.masses = std::move(masses);
        s.values = std::move(values);
        return s;
    }

    static GraphonSpec product() {
        GraphonSpec s;
        s.kind = Kind::Product;
        return s;
    }

    static GraphonSpec mean() {
        GraphonSpec s;
        s.kind = Kind::Mean;
        return s;
    }

    // Piecewise-constant on the m x m cells, or bilinear between cell centres.
    static GraphonSpec grid_values(std::vector<std::vector<double>> g, bool bilinear) {
        const std::size_t m = g.size();
        if (m == 0) throw std::invalid_argument("graphon: empty grid");
        for (std::size_t i = 0; i < m; ++i) {
            if (g[i].size() != m) throw std::invalid_argument("graphon: grid not square");
            for (std::size_t j = 0; j < m; ++j) {
                if (!(g[i][j] >= 0 && g[i][j] <= 1)) throw std::invalid_argument("graphon: value outside [0,1]");
                if (g[i][j] != g[j][i]) throw std::invalid_argument("graphon: grid not symmetric");
            }
        }
        GraphonSpec s;
        s.kind = Kind::Grid;
        s.grid = std::move(g);
        s.bilinear = bilinear;
        return s;
    }

    // Block index of x for Step specs.
    int block(double x) const {
        double acc = 0;
        for (std::size_t i = 0; i + 1 < masses.size(); ++i) {
            acc += to_double(masses[i]);
            if (x < acc) return static_cast<int>(i);
        }
        return static_cast<int>(masses.size()) - 1;
    }

    double operator()(double x, double y) const {
        switch (kind) {
            case Kind::Constant: return to_double(p);
            case Kind::Step: return to_double(values[block(x)][block(y)]);
            case Kind::Product: return x * y;
            case Kind::Mean: return 0.5 * (x + y);
            case Kind::Grid: return grid_at(x, y);
        }
        return 0;
    }

    // Points where the function may fail to be polynomial, 0 and 1 included.
    std::vector<double> breakpoints() const {
        std::vector<double> b{0.0};
        if (kind == Kind::Step) {
            double acc = 0;
            for (std::size_t i = 0; i + 1 < masses.size(); ++i) b.push_back(acc += to_double(masses[i]));
        } else if (kind == Kind::Grid) {
            const int m = static_cast<int>(grid.size());
            for (int i = bilinear ? 0 : 1; i < m; ++i) b.push_back(bilinear ? (i + 0.5) / m : double(i) / m);
        }
        b.push_back(1.0);
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

private:
    double grid_at(double x, double y) const {
        const int m = static_cast<int>(grid.size());
        auto cell = [m](double t) { return std::clamp(static_cast<int>(t * m), 0, m - 1); };
        if (!bilinear) return grid[cell(x)][cell(y)];
        // Nodes at cell centres, clamped outside [1/2m, 1-1/2m].
        auto locate = [m](double t, int& i0, double& w) {
            double s = std::clamp(t * m - 0.5, 0.0, double(m - 1));
            i0 = std::min(static_cast<int>(s), m - 2 < 0 ? 0 : m - 2);
            w = m == 1 ? 0.0 : s - i0;
        };
        if (m == 1) return grid[0][0];
        int i, j;
        double u, v;
        locate(x, i, u);
        locate(y, j, v);
        return (1 - u) * (1 - v) * grid[i][j] + u * (1 - v) * grid[i + 1][j] + (1 - u) * v * grid[i][j + 1] +
               u * v * grid[i + 1][j + 1];
    }
};

inline Adjacency sample_adjacency(const GraphonSpec& spec, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_graph: n must be positive");
    Adjacency adj(n);
    std::vector<double> x(n);
    for (auto& xi : x) xi = rng.uniform();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < spec(x[i], x[j])) adj.add_edge(i, j);
    return adj;
}

inline Graph sample_graph(const GraphonSpec& spec, int n, RngSeed seed) {
    Rng rng(seed);
    return sample_adjacency(spec, n, rng).to_graph();
}

// Exact law of the labelled graph G_n for a step graphon (or a constant),
// by enumerating type assignments and edge outcomes.
inline std::map<Graph, Rational> exact_graph_law(const GraphonSpec& spec, int n) {
    GraphonSpec step = spec;
    if (spec.kind == GraphonSpec::Kind::Constant)
        step = GraphonSpec::step({Rational(1)}, {{spec.p}});
    else if (spec.kind != GraphonSpec::Kind::Step)
        throw std::invalid_argument("exact_graph_law: needs a constant or step graphon");
    if (n < 1 || n > 5) throw std::invalid_argument("exact_graph_law: n must be in 1..5");
    const int q = static_cast<int>(step.masses.size());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
    int types = 1;
    for (int i = 0; i < n; ++i) types *= q;
    std::map<Graph, Rational> law;
    for (int code = 0; code < types; ++code) {
        std::vector<int> ty(n + 1);
        Rational pt = 1;
        for (int i = 1, c = code; i <= n; ++i, c /= q) ty[i] = c % q, pt *= step.masses[ty[i]];
        for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
            Rational p = pt;
            std::vector<std::pair<int, int>> e;
            for (std::size_t t = 0; t < pairs.size() && p != 0; ++t) {
                const auto& v = step.values[ty[pairs[t].first]][ty[pairs[t].second]];
                if (mask >> t & 1) p *= v, e.push_back(pairs[t]);
                else p *= 1 - v;
            }
            if (p != 0) law[Graph(n, e)] += p;
        }
    }
    return law;
}

// Step function with |G| equal blocks and 0/1 values.
inline GraphonSpec embed_graph(const Graph& g) {
    const int q = g.k;
    if (q == 0) throw std::invalid_argument("embed_graph: empty vertex set");
    std::vector<Rational> masses(q, Rational(1, q));
    std::vector<std::vector<Rational>> values(q, std::vector<Rational>(q, 0));
    for (auto [i, j] : g.edges) values[i - 1][j - 1] = values[j - 1][i - 1] = 1;
    return GraphonSpec::step(masses, values);
}

// ---------------------------------------------------------------- permutons

struct PermutonSpec {
    enum class Kind { Uniform, FromPermutation, Grid, Disc };
    Kind kind = Kind::Uniform;
    Permutation sigma;                        // FromPermutation
    std::vector<std::vector<Rational>> cell;  // Grid: cell masses, rows and columns sum to 1/m

    static PermutonSpec uniform() { return {}; }

    static PermutonSpec from_permutation(Permutation s) {
        if (s.size() == 0) throw std::invalid_argument("permuton: empty permutation");
        PermutonSpec p;
        p.kind = Kind::FromPermutation;
        p.sigma = std::move(s);
        return p;
    }

    static PermutonSpec grid_density(std::vector<std::vector<Rational>> masses) {
        const std::size_t m = masses.size();
        if (m == 0) throw std::invalid_argument("permuton: empty grid");
        const Rational target(1, static_cast<long>(m));
        for (std::size_t i = 0; i < m; ++i) {
            if (masses[i].size() != m) throw std::invalid_argument("permuton: grid not square");
            Rational row = 0, col = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (masses[i][j] < 0) throw std::invalid_argument("permuton: negative mass");
                row += masses[i][j];
                col += masses[j][i];
            }
            if (row != target || col != target) throw std::invalid_argument("permuton: marginals are not uniform");
        }
        PermutonSpec p;
        p.kind = Kind::Grid;
        p.cell = std::move(masses);
        return p;
    }

    static PermutonSpec disc() {
        PermutonSpec p;
        p.kind = Kind::Disc;
        return p;
    }

    std::pair<double, double> draw(Rng& rng) const {
        switch (kind) {
            case Kind::Uniform: {
                double x = rng.uniform();
                return {x, rng.uniform()};
            }
            case Kind::FromPermutation: {
                const int q = sigma.size();
                int i = static_cast<int>(rng.below(q));
                double x = (i + rng.uniform()) / q;
                return {x, (sigma.v[i] - 1 + rng.uniform()) / q};
            }
            case Kind::Grid: {
                const int m = static_cast<int>(cell.size());
                double u = rng.uniform(), acc = 0;
                int idx = m * m - 1;
                for (int t = 0; t < m * m; ++t) {
                    acc += to_double(cell[t / m][t % m]);
                    if (u < acc) {
                        idx = t;
                        break;
                    }
                }
                const int ci = idx / m, cj = idx % m;
                double x = (ci + rng.uniform()) / m;
                return {x, (cj + rng.uniform()) / m};
            }
            case Kind::Disc: {
                // Projection of the uniform measure on the sphere of radius 1/2:
                // each coordinate of a uniform point on a sphere is uniform.
                double z = 2 * rng.uniform() - 1, phi = 6.283185307179586 * rng.uniform();
                double r = std::sqrt(std::max(0.0, 1 - z * z));
                return {0.5 + 0.5 * r * std::cos(phi), 0.5 + 0.5 * r * std::sin(phi)};
            }
        }
        return {0, 0};
    }
};

inline std::vector<std::pair<double, double>> sample_points(const PermutonSpec& spec, int n, Rng& rng) {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = spec.draw(rng);
    return pts;
}

inline Permutation sample_permutation(const PermutonSpec& spec, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_permutation: n must be positive");
    return conf(sample_points(spec, n, rng));
}

inline Permutation sample_permutation(const PermutonSpec& spec, int n, RngSeed seed) {
    Rng rng(seed);
    return sample_permutation(spec, n, rng);
}

inline PermutonSpec embed_permutation(const Permutation& s) { return PermutonSpec::from_permutation(s); }

// ---------------------------------------------------------------- Thoma simplex

struct ThomaParameter {
    std::vector<Rational> alpha, beta;

    ThomaParameter() = default;
    ThomaParameter(std::vector<Rational> a, std::vector<Rational> b) : alpha(std::move(a)), beta(std::move(b)) {
        auto check = [](const std::vector<Rational>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] < 0) throw std::invalid_argument("thoma: negative entry");
                if (i > 0 && v[i] > v[i - 1]) throw std::invalid_argument("thoma: entries must be non-increasing");
            }
        };
        check(alpha);
        check(beta);
        if (gamma() < 0) throw std::invalid_argument("thoma: sum of alpha and beta exceeds 1");
    }

    Rational gamma() const {
        Rational g = 1;
        for (const auto& a : alpha) g -= a;
        for (const auto& b : beta) g -= b;
        return g;
    }

    static ThomaParameter plancherel() { return {}; }
};

inline ThomaParameter embed_partition(const Partition& l) {
    const int n = l.size();
    if (n == 0) throw std::invalid_argument("embed_partition: empty partition");
    auto f = frobenius_coords(l);
    for (auto& a : f.a) a /= n;
    for (auto& b : f.b) b /= n;
    return ThomaParameter(f.a, f.b);
}

// t(k, omega); t(1, omega) = 1 by convention.
inline Rational thoma_moment(int k, const ThomaParameter& w) {
    if (k < 1) throw std::invalid_argument("thoma_moment: k must be positive");
    if (k == 1) return 1;
    Rational s = 0;
    for (const auto& a : w.alpha) s += pow(a, k);
    for (const auto& b : w.beta) s += (k % 2 ? 1 : -1) * pow(b, k);
    return s;
}

inline Rational thoma_density(const Partition& r, const ThomaParameter& w) {
    Rational v = 1;
    for (int k : r.parts) v *= thoma_moment(k, w);
    return v;
}

namespace detail {

// Letter classes: ordinary (row-weak), primed (column-weak), continuous.
struct Letter {
    int cls;
    int idx;
    double u;
    bool operator<(const Letter& o) const { return std::tie(cls, idx, u) < std::tie(o.cls, o.idx, o.u); }
    bool operator==(const Letter& o) const { return cls == o.cls && idx == o.idx && u == o.u; }
};

}  // namespace detail

// Shape of the super-RSK insertion tableau of n i.i.d. letters drawn from omega.
inline Partition sample_partition(const ThomaParameter& w, int n, Rng& rng) {
    if (n < 0) throw std::invalid_argument("sample_partition: negative n");
    std::vector<double> cum;
    double acc = 0;
    for (const auto& a : w.alpha) cum.push_back(acc += to_double(a));
    for (const auto& b : w.beta) cum.push_back(acc += to_double(b));
    const int na = static_cast<int>(w.alpha.size());
    std::vector<std::vector<detail::Letter>> rows;
    for (int step = 0; step < n; ++step) {
        double u = rng.uniform();
        auto pos = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
        detail::Letter x;
        if (pos < na)
            x = {0, static_cast<int>(pos), 0.0};
        else if (pos < static_cast<long>(cum.size()))
            x = {1, static_cast<int>(pos) - na, 0.0};
        else
            x = {2, 0, rng.uniform()};
        for (std::size_t r = 0;; ++r) {
            if (r == rows.size()) {
                rows.push_back({x});
                break;
            }
            auto& row = rows[r];
            auto it = x.cls == 1 ? std::lower_bound(row.begin(), row.end(), x) : std::upper_bound(row.begin(), row.end(), x);
            if (x.cls == 2 && it != row.begin() && *(it - 1) == x)
                throw std::runtime_error("sample_partition: continuous letter collision");
            if (it == row.end()) {
                row.push_back(x);
                break;
            }
            std::swap(*it, x);
        }
    }
    std::vector<int> shape;
    for (const auto& row : rows) shape.push_back(static_cast<int>(row.size()));
    return Partition(shape);
}

inline Partition sample_partition(const ThomaParameter& w, int n, RngSeed seed) {
    Rng rng(seed);
    return sample_partition(w, n, rng);
}

// P[lambda] = dim(lambda) sum_rho chi^lambda_rho p_rho(omega) / z_rho.
inline std::map<Partition, Rational> exact_central_measure(const ThomaParameter& w, int n) {
    if (n < 0 || n > 10) throw std::invalid_argument("exact_central_measure: n must be in 0..10");
    auto parts = partitions_of(n);
    std::vector<Rational> weight;
    for (const auto& r : parts) weight.push_back(thoma_density(r, w) / Rational(z_rho(r)));
    std::map<Partition, Rational> out;
    for (const auto& l : parts) {
        Rational s = 0;
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (weight[i] != 0) s += Rational(mn_character(l, parts[i])) * weight[i];
        out.emplace(l, Rational(hook_dimension(l)) * s);
    }
    return out;
}

// ---------------------------------------------------------------- model union

using ModelSpec = std::variant<GraphonSpec, PermutonSpec, ThomaParameter>;

}  // namespace modgauss
