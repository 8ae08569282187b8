#pragma once

#include "modgauss/formal_sum.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modgauss {

// One-line notation, values 1..k.
struct Permutation {
    std::vector<int> v;

    Permutation() = default;
    explicit Permutation(std::vector<int> values) : v(std::move(values)) { validate(); }
    Permutation(std::initializer_list<int> values) : v(values) { validate(); }

    int size() const { return static_cast<int>(v.size()); }
    int operator()(int i) const { return v[i - 1]; }

    Permutation inverse() const {
        std::vector<int> w(v.size());
        for (int i = 0; i < size(); ++i) w[v[i] - 1] = i + 1;
        return Permutation(std::move(w));
    }

    auto operator<=>(const Permutation&) const = default;

private:
    void validate() const {
        std::vector<char> seen(v.size() + 1, 0);
        for (int x : v) {
            if (x < 1 || x > size() || seen[x]) throw std::invalid_argument("permutation: not a bijection of 1..k");
            seen[x] = 1;
        }
    }
};

inline Permutation identity_permutation(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    return Permutation(v);
}

// Relative order of a sequence of distinct values, as a permutation.
template <class T>
Permutation standardize(const std::vector<T>& values) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<int> out(values.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (r > 0 && !(values[idx[r - 1]] < values[idx[r]])) throw std::invalid_argument("standardize: tied values");
        out[idx[r]] = static_cast<int>(r) + 1;
    }
    return Permutation(out);
}

// Configuration of planar points in general position.
template <class T>
Permutation conf(const std::vector<std::pair<T, T>>& points) {
    std::vector<std::pair<T, T>> p = points;
    std::sort(p.begin(), p.end());
    std::vector<T> ys;
    ys.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0 && !(p[i - 1].first < p[i].first)) throw std::invalid_argument("conf: tied x-coordinates");
        ys.push_back(p[i].second);
    }
    return standardize(ys);
}

// Pattern induced on positions pos (increasing, 1-based).
inline Permutation pattern_at(const Permutation& s, const std::vector<int>& pos) {
    std::vector<int> vals;
    vals.reserve(pos.size());
    for (int p : pos) vals.push_back(s(p));
    return standardize(vals);
}

// Calls f on every increasing k-subset of 1..n (as a vector).
template <class F>
void for_each_subset(int n, int k, F&& f) {
    if (k < 0 || k > n) return;
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 1);
    while (true) {
        f(static_cast<const std::vector<int>&>(c));
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i + 1) --i;
        if (i < 0) return;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

// The (A,B)-shuffle: A and B are m-subsets of 1..m+n.
inline Permutation ab_shuffle(const Permutation& s, const Permutation& t, std::vector<int> A, std::vector<int> B) {
    const int m = s.size(), n = t.size(), N = m + n;
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    if (static_cast<int>(A.size()) != m || static_cast<int>(B.size()) != m)
        throw std::invalid_argument("ab_shuffle: |A| and |B| must equal |sigma|");
    auto complement = [N](const std::vector<int>& X) {
        std::vector<char> in(N + 1, 0);
        for (int x : X) {
            if (x < 1 || x > N || in[x]) throw std::invalid_argument("ab_shuffle: bad subset");
            in[x] = 1;
        }
        std::vector<int> c;
        for (int i = 1; i <= N; ++i)
            if (!in[i]) c.push_back(i);
        return c;
    };
    auto Ac = complement(A), Bc = complement(B);
    std::vector<int> r(N);
    for (int i = 1; i <= m; ++i) r[A[i - 1] - 1] = B[s(i) - 1];
    for (int j = 1; j <= n; ++j) r[Ac[j - 1] - 1] = Bc[t(j) - 1];
    return Permutation(r);
}

using PermSum = FormalSum<Permutation>;

inline PermSum graphical_shuffle(const Permutation& s, const Permutation& t) {
    const int m = s.size(), n = t.size();
    PermSum out;
    Rational w(factorial(m) * factorial(n), factorial(m + n));
    for_each_subset(m + n, m, [&](const std::vector<int>& A) {
        for_each_subset(m + n, m, [&](const std::vector<int>& B) { out.add(ab_shuffle(s, t, A, B), w); });
    });
    return out;
}

inline PermSum perm_product(const PermSum& a, const PermSum& b) { return bilinear(a, b, graphical_shuffle); }

// Enumerates the linear orders of `nodes` nodes that restrict to the given
// chains. f receives rank[node] (0-based).
template <class F>
void for_each_linear_extension(int nodes, const std::vector<std::vector<int>>& chains, F&& f) {
    std::vector<std::vector<std::pair<int, int>>> member(nodes);
    for (int c = 0; c < static_cast<int>(chains.size()); ++c)
        for (int p = 0; p < static_cast<int>(chains[c].size()); ++p) member[chains[c][p]].emplace_back(c, p);
    std::vector<int> ptr(chains.size(), 0), rank(nodes, -1);
    std::function<void(int)> rec = [&](int depth) {
        if (depth == nodes) {
            f(static_cast<const std::vector<int>&>(rank));
            return;
        }
        for (int v = 0; v < nodes; ++v) {
            if (rank[v] >= 0) continue;
            bool ready = true;
            for (auto [c, p] : member[v])
                if (ptr[c] != p) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            rank[v] = depth;
            for (auto [c, p] : member[v]) ++ptr[c];
            rec(depth + 1);
            for (auto [c, p] : member[v]) --ptr[c];
            rank[v] = -1;
        }
    };
    rec(0);
}

namespace detail {

struct Glue {
    int obj1, idx1, obj2, idx2;  // 1-based indices into the objects
};

// Multiset of permutations whose diagram is a union of copies of the given
// patterns, with the listed dots identified. Returns counts per permutation.
inline std::map<Permutation, long long> amalgam_multiset(const std::vector<Permutation>& objs,
                                                         const std::vector<Glue>& glues) {
    std::vector<int> offset(objs.size() + 1, 0);
    for (std::size_t o = 0; o < objs.size(); ++o) offset[o + 1] = offset[o] + objs[o].size();
    const int raw = offset.back();
    std::vector<int> parent(raw);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& g : glues) {
        int x = offset[g.obj1 - 1] + g.idx1 - 1, y = offset[g.obj2 - 1] + g.idx2 - 1;
        parent[find(x)] = find(y);
    }
    std::vector<int> id(raw, -1), node(raw);
    int nodes = 0;
    for (int x = 0; x < raw; ++x) {
        int r = find(x);
        if (id[r] < 0) id[r] = nodes++;
        node[x] = id[r];
    }
    std::vector<std::vector<int>> hor, ver;
    for (std::size_t o = 0; o < objs.size(); ++o) {
        const auto& p = objs[o];
        auto inv = p.inverse();
        std::vector<int> h, w;
        for (int i = 1; i <= p.size(); ++i) {
            h.push_back(node[offset[o] + i - 1]);
            w.push_back(node[offset[o] + inv(i) - 1]);
        }
        hor.push_back(h);
        ver.push_back(w);
    }
    std::vector<std::vector<int>> xs, ys;
    for_each_linear_extension(nodes, hor, [&](const std::vector<int>& r) { xs.push_back(r); });
    for_each_linear_extension(nodes, ver, [&](const std::vector<int>& r) { ys.push_back(r); });
    std::map<Permutation, long long> counts;
    std::vector<int> s(nodes);
    for (const auto& x : xs)
        for (const auto& y : ys) {
            for (int v = 0; v < nodes; ++v) s[x[v]] = y[v] + 1;
            ++counts[Permutation(s)];
        }
    return counts;
}

inline PermSum to_sum(const std::map<Permutation, long long>& counts, const Rational& w) {
    PermSum out;
    for (const auto& [p, c] : counts) out.add(p, w * c);
    return out;
}

inline void check_index(const Permutation& p, int i) {
    if (i < 1 || i > p.size()) throw std::invalid_argument("amalgamated shuffle: index out of range");
}

}  // namespace detail

inline std::map<Permutation, long long> amalgam_multiset2(const Permutation& t, const Permutation& r, int a, int b) {
    if (t.size() != r.size()) throw std::invalid_argument("amalgamated shuffle: size mismatch");
    detail::check_index(t, a);
    detail::check_index(r, b);
    return detail::amalgam_multiset({t, r}, {{1, a, 2, b}});
}

inline PermSum amalgamated_shuffle2(const Permutation& t, const Permutation& r, int a, int b) {
    const int k = t.size();
    Rational w(factorial(k) * factorial(k), factorial(2 * k - 1));
    return detail::to_sum(amalgam_multiset2(t, r, a, b), w);
}

struct PermPoint {
    int a, b, c;
};
// Index a of the first pattern glued to b of the second; c of the second glued to d of the third.
struct PermPair {
    int a, b, c, d;
};

inline std::map<Permutation, long long> amalgam_multiset3(const Permutation& t, const Permutation& r,
                                                          const Permutation& u, PermPoint m) {
    if (t.size() != r.size() || r.size() != u.size()) throw std::invalid_argument("amalgamated shuffle: size mismatch");
    detail::check_index(t, m.a);
    detail::check_index(r, m.b);
    detail::check_index(u, m.c);
    return detail::amalgam_multiset({t, r, u}, {{1, m.a, 2, m.b}, {1, m.a, 3, m.c}});
}

inline std::map<Permutation, long long> amalgam_multiset3(const Permutation& t, const Permutation& r,
                                                          const Permutation& u, PermPair m) {
    if (t.size() != r.size() || r.size() != u.size()) throw std::invalid_argument("amalgamated shuffle: size mismatch");
    detail::check_index(t, m.a);
    detail::check_index(r, m.b);
    detail::check_index(r, m.c);
    detail::check_index(u, m.d);
    if (m.b == m.c) throw std::invalid_argument("amalgamated shuffle: pair mode needs b != c");
    return detail::amalgam_multiset({t, r, u}, {{1, m.a, 2, m.b}, {2, m.c, 3, m.d}});
}

template <class Mode>
PermSum amalgamated_shuffle3(const Permutation& t, const Permutation& r, const Permutation& u, Mode m) {
    const int k = t.size();
    Rational w(factorial(k) * factorial(k) * factorial(k), factorial(3 * k - 2));
    return detail::to_sum(amalgam_multiset3(t, r, u, m), w);
}

inline BigInt amalgam_cardinality(const Permutation& t, const Permutation& r, int a, int b) {
    const int k = t.size();
    if (r.size() != k) throw std::invalid_argument("amalgam_cardinality: size mismatch");
    detail::check_index(t, a);
    detail::check_index(r, b);
    const int ta = t(a), rb = r(b);
    return binomial(a + b - 2, a - 1) * binomial(2 * k - a - b, k - a) * binomial(ta + rb - 2, ta - 1) *
           binomial(2 * k - ta - rb, k - ta);
}

inline long long occ(const Permutation& t, const Permutation& s) {
    const int k = t.size(), n = s.size();
    if (k > n) throw std::invalid_argument("occ: pattern longer than permutation");
    if (k > 8) throw std::invalid_argument("occ: pattern size above 8");
    if (k == 2) {
        long long inv = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) inv += s(i) > s(j);
        return t(1) == 2 ? inv : static_cast<long long>(n) * (n - 1) / 2 - inv;
    }
    long long count = 0;
    std::vector<int> vals(k);
    for_each_subset(n, k, [&](const std::vector<int>& pos) {
        // Compare relative orders without building a Permutation.
        for (int i = 0; i < k; ++i) vals[i] = s(pos[i]);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if ((vals[i] < vals[j]) != (t.v[i] < t.v[j])) return;
        ++count;
    });
    return count;
}

// Occurrence counts of every pattern of size r in s, in one pass.
inline std::map<Permutation, long long> pattern_profile(const Permutation& s, int r) {
    std::map<Permutation, long long> out;
    for_each_subset(s.size(), r, [&](const std::vector<int>& pos) { ++out[pattern_at(s, pos)]; });
    return out;
}

inline std::vector<Permutation> all_permutations(int k) {
    std::vector<Permutation> out;
    std::vector<int> v(k);
    std::iota(v.begin(), v.end(), 1);
    do out.emplace_back(v);
    while (std::next_permutation(v.begin(), v.end()));
    return out;
}

inline std::string to_string(const Permutation& p) {
    std::ostringstream os;
    bool wide = p.size() > 9;
    for (int i = 0; i < p.size(); ++i) os << (wide && i ? "," : "") << p.v[i];
    return os.str();
}

// Accepts "2413", "[2413]" or "2,4,1,3".
inline Permutation parse_permutation(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '[' && ch != ']') s += ch;
    std::vector<int> v;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
    } else {
        for (char ch : s) {
            if (ch < '1' || ch > '9') throw std::invalid_argument("parse_permutation: bad digit");
            v.push_back(ch - '0');
        }
    }
    return Permutation(v);
}

}  // namespace modgauss
