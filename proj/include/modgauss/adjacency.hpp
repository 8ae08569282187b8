#pragma once

#include "modgauss/graph.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace modgauss {

// Dense bitset adjacency for host graphs; vertices 0..n-1.
class Adjacency {
public:
    explicit Adjacency(int n = 0) : n_(n), words_((n + 63) / 64), rows_(static_cast<std::size_t>(n) * words_, 0) {}

    explicit Adjacency(const Graph& g) : Adjacency(g.k) {
        for (auto [i, j] : g.edges) add_edge(i - 1, j - 1);
    }

    int n() const { return n_; }
    int words() const { return words_; }

    void add_edge(int i, int j) {
        set(i, j);
        set(j, i);
    }
    bool has(int i, int j) const { return row(i)[j >> 6] >> (j & 63) & 1; }
    const std::uint64_t* row(int i) const { return rows_.data() + static_cast<std::size_t>(i) * words_; }

    int degree(int i) const {
        int d = 0;
        for (int w = 0; w < words_; ++w) d += std::popcount(row(i)[w]);
        return d;
    }

    long long edge_count() const {
        long long s = 0;
        for (int i = 0; i < n_; ++i) s += degree(i);
        return s / 2;
    }

    Graph to_graph() const {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (has(i, j)) e.emplace_back(i + 1, j + 1);
        return Graph(n_, e);
    }

private:
    void set(int i, int j) { rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63); }

    int n_;
    int words_;
    std::vector<std::uint64_t> rows_;
};

}  // namespace modgauss
