#pragma once

#include "modgauss/formal_sum.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modgauss {

// Simple graph on vertices 1..k. Edges are stored as sorted pairs (i<j).
struct Graph {
    int k = 0;
    std::vector<std::pair<int, int>> edges;

    Graph() = default;
    Graph(int k_, std::vector<std::pair<int, int>> e) : k(k_), edges(std::move(e)) { normalize(); }

    std::size_t edge_count() const { return edges.size(); }

    std::vector<int> degrees() const {
        std::vector<int> d(k + 1, 0);
        for (auto [i, j] : edges) ++d[i], ++d[j];
        return d;
    }

    auto operator<=>(const Graph&) const = default;

private:
    void normalize() {
        if (k < 0) throw std::invalid_argument("graph: negative vertex count");
        for (auto& [i, j] : edges) {
            if (i == j) throw std::invalid_argument("graph: loop");
            if (i < 1 || j < 1 || i > k || j > k) throw std::invalid_argument("graph: endpoint out of range");
            if (i > j) std::swap(i, j);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw std::invalid_argument("graph: multi-edge");
    }
};

inline Graph complete_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) e.emplace_back(i, j);
    return Graph(k, e);
}

inline Graph path_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < k; ++i) e.emplace_back(i, i + 1);
    return Graph(k, e);
}

inline Graph graph_disjoint_union(const Graph& f, const Graph& g) {
    auto e = f.edges;
    for (auto [i, j] : g.edges) e.emplace_back(i + f.k, j + f.k);
    return Graph(f.k + g.k, e);
}

namespace detail {

inline void check_vertex(const Graph& g, int v) {
    if (v < 1 || v > g.k) throw std::invalid_argument("junction: vertex index out of range");
}

// Vertex relabeling of g appended after `offset` existing vertices, with some
// vertices of g sent onto already existing ones.
inline std::vector<int> glue_map(const Graph& g, int offset, const std::map<int, int>& glued) {
    std::vector<int> m(g.k + 1, 0);
    int next = offset;
    for (int v = 1; v <= g.k; ++v) {
        auto it = glued.find(v);
        m[v] = it != glued.end() ? it->second : ++next;
    }
    return m;
}

inline void append_edges(std::vector<std::pair<int, int>>& out, const Graph& g, const std::vector<int>& m) {
    for (auto [i, j] : g.edges) out.emplace_back(m[i], m[j]);
}

}  // namespace detail

// Identify vertex a of f with vertex b of g.
inline Graph graph_junction2(const Graph& f, const Graph& g, int a, int b) {
    detail::check_vertex(f, a);
    detail::check_vertex(g, b);
    auto e = f.edges;
    auto mg = detail::glue_map(g, f.k, {{b, a}});
    detail::append_edges(e, g, mg);
    return Graph(f.k + g.k - 1, e);
}

struct PointMode {
    int a, b, c;
};
// a in the first argument glued to b in the second; c in the second glued to d in the third.
struct PairMode {
    int a, b, c, d;
};

inline Graph graph_junction3(const Graph& f, const Graph& g, const Graph& h, PointMode m) {
    detail::check_vertex(f, m.a);
    detail::check_vertex(g, m.b);
    detail::check_vertex(h, m.c);
    auto e = f.edges;
    auto mg = detail::glue_map(g, f.k, {{m.b, m.a}});
    detail::append_edges(e, g, mg);
    auto mh = detail::glue_map(h, f.k + g.k - 1, {{m.c, m.a}});
    detail::append_edges(e, h, mh);
    return Graph(f.k + g.k + h.k - 2, e);
}

inline Graph graph_junction3(const Graph& f, const Graph& g, const Graph& h, PairMode m) {
    detail::check_vertex(f, m.a);
    detail::check_vertex(g, m.b);
    detail::check_vertex(g, m.c);
    detail::check_vertex(h, m.d);
    if (m.b == m.c) throw std::invalid_argument("junction3: pair mode needs b != c");
    auto e = f.edges;
    auto mg = detail::glue_map(g, f.k, {{m.b, m.a}});
    detail::append_edges(e, g, mg);
    auto mh = detail::glue_map(h, f.k + g.k - 1, {{m.d, mg[m.c]}});
    detail::append_edges(e, h, mh);
    return Graph(f.k + g.k + h.k - 2, e);
}

namespace detail {

inline Graph canonical_uncached(const Graph& g) {
    const int k = g.k;
    if (k > 10) throw std::invalid_argument("graph_canonical: more than 10 vertices");
    if (g.edges.empty()) return g;
    // Pair (i,j), i<j, 0-based, gets bit P-1-idx so that a larger mask means a
    // lexicographically smaller sorted edge list.
    std::vector<std::vector<int>> bit(k, std::vector<int>(k, 0));
    const int pairs = k * (k - 1) / 2;
    int idx = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++idx) bit[i][j] = bit[j][i] = pairs - 1 - idx;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = 0;
    do {
        std::uint64_t mask = 0;
        for (auto [i, j] : g.edges) mask |= std::uint64_t{1} << bit[perm[i - 1]][perm[j - 1]];
        best = std::max(best, mask);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (best >> bit[i][j] & 1) e.emplace_back(i + 1, j + 1);
    return Graph(k, e);
}

}  // namespace detail

// Representative of the isomorphism class with the lexicographically smallest
// sorted edge list.
inline Graph graph_canonical(const Graph& g) {
    static std::mutex mu;
    static std::map<Graph, Graph> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(g); it != cache.end()) return it->second;
    }
    Graph c = detail::canonical_uncached(g);
    std::lock_guard lock(mu);
    cache.emplace(g, c);
    return c;
}

inline bool graph_isomorphic(const Graph& f, const Graph& g) {
    return f.k == g.k && f.edges.size() == g.edges.size() && graph_canonical(f) == graph_canonical(g);
}

using GraphSum = FormalSum<Graph>;

inline GraphSum graph_term(const Graph& g, Rational c = 1) { return GraphSum(graph_canonical(g), std::move(c)); }

// Product in the graph algebra: disjoint union.
inline GraphSum graph_product(const GraphSum& a, const GraphSum& b) {
    return bilinear(a, b, [](const Graph& x, const Graph& y) { return graph_term(graph_disjoint_union(x, y)); });
}

inline std::string to_string(const Graph& g) {
    std::ostringstream os;
    os << "k=" << g.k << ";";
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        os << (i ? "," : " ") << g.edges[i].first << "-" << g.edges[i].second;
    return os.str();
}

// Parses "k=5; 1-2,2-3" (spaces optional).
inline Graph parse_graph(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.rfind("k=", 0) != 0) throw std::invalid_argument("parse_graph: expected 'k=' prefix");
    auto semi = s.find(';');
    int k = std::stoi(s.substr(2, semi == std::string::npos ? std::string::npos : semi - 2));
    std::vector<std::pair<int, int>> e;
    if (semi != std::string::npos) {
        std::stringstream rest(s.substr(semi + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            if (item.empty()) continue;
            auto dash = item.find('-');
            if (dash == std::string::npos) throw std::invalid_argument("parse_graph: bad edge '" + item + "'");
            e.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
        }
    }
    return Graph(k, e);
}

}  // namespace modgauss
