#pragma once

#include "modgauss/partition.hpp"

#include <map>
#include <mutex>
#include <set>
#include <utility>

namespace modgauss {

namespace detail {

// Murnaghan-Nakayama on beta-sets: removing a rim hook of length r moves one
// bead from x to x-r; the sign counts the beads jumped over.
inline long long mn_beta(const std::vector<int>& beta, const std::vector<int>& rho, std::size_t pos,
                         std::map<std::pair<std::vector<int>, std::size_t>, long long>& memo) {
    if (pos == rho.size()) return 1;
    auto key = std::make_pair(beta, pos);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int r = rho[pos];
    std::set<int> beads(beta.begin(), beta.end());
    long long total = 0;
    for (int x : beta) {
        int y = x - r;
        if (y < 0 || beads.count(y)) continue;
        int between = 0;
        for (int z : beta)
            if (z > y && z < x) ++between;
        std::vector<int> next;
        for (int z : beta) next.push_back(z == x ? y : z);
        std::sort(next.begin(), next.end(), std::greater<>());
        long long v = mn_beta(next, rho, pos + 1, memo);
        total += (between % 2 ? -v : v);
    }
    memo.emplace(std::move(key), total);
    return total;
}

}  // namespace detail

// Unnormalized irreducible character chi^lambda at cycle type rho.
inline long long mn_character(const Partition& l, const Partition& r) {
    if (l.size() != r.size()) throw std::invalid_argument("mn_character: size mismatch");
    if (l.size() > 14) throw std::invalid_argument("mn_character: size above 14");
    static std::mutex mu;
    static std::map<std::pair<Partition, Partition>, long long> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({l, r}); it != cache.end()) return it->second;
    }
    const int len = l.length();
    std::vector<int> beta;
    for (int i = 1; i <= len; ++i) beta.push_back(l[i] + len - i);
    std::map<std::pair<std::vector<int>, std::size_t>, long long> memo;
    long long v = detail::mn_beta(beta, r.parts, 0, memo);
    std::lock_guard lock(mu);
    cache.emplace(std::make_pair(l, r), v);
    return v;
}

// n(n-1)...(n-k+1) chi^lambda(rho u 1^{n-k}) / dim lambda, and 0 when n < k.
inline Rational sigma_rho(const Partition& r, const Partition& l) {
    const int n = l.size(), k = r.size();
    if (n < k) return 0;
    auto full = r.parts;
    for (int i = 0; i < n - k; ++i) full.push_back(1);
    Rational chi(mn_character(l, Partition::from_unsorted(full)));
    return Rational(falling(n, k)) * chi / Rational(hook_dimension(l));
}

inline Rational p_k(int k, const Partition& l) {
    auto f = frobenius_coords(l);
    Rational s = 0;
    for (const auto& a : f.a) s += pow(a, k);
    Rational t = 0;
    for (const auto& b : f.b) t += pow(b, k);
    return k % 2 ? s + t : s - t;
}

inline Rational p_rho(const Partition& r, const Partition& l) {
    Rational v = 1;
    for (int k : r.parts) v *= p_k(k, l);
    return v;
}

}  // namespace modgauss
