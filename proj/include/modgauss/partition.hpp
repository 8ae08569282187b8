#pragma once

#include "modgauss/formal_sum.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modgauss {

struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) { validate(); }
    Partition(std::initializer_list<int> p) : parts(p) { validate(); }

    // Sorts and drops zeros before validating.
    static Partition from_unsorted(std::vector<int> p) {
        std::sort(p.begin(), p.end(), std::greater<>());
        while (!p.empty() && p.back() == 0) p.pop_back();
        return Partition(std::move(p));
    }

    int size() const {
        int s = 0;
        for (int x : parts) s += x;
        return s;
    }
    int length() const { return static_cast<int>(parts.size()); }
    int operator[](int i) const { return parts[i - 1]; }  // 1-based

    Partition conjugate() const {
        std::vector<int> c(parts.empty() ? 0 : parts[0], 0);
        for (int x : parts)
            for (int j = 0; j < x; ++j) ++c[j];
        return Partition(c);
    }

    auto operator<=>(const Partition&) const = default;

private:
    void validate() const {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] < 1) throw std::invalid_argument("partition: parts must be positive");
            if (i > 0 && parts[i] > parts[i - 1]) throw std::invalid_argument("partition: parts must be non-increasing");
        }
    }
};

inline Partition partition_union(const Partition& a, const Partition& b) {
    auto p = a.parts;
    p.insert(p.end(), b.parts.begin(), b.parts.end());
    return Partition::from_unsorted(p);
}

namespace detail {
inline void check_part(const Partition& p, int i) {
    if (i < 1 || i > p.length()) throw std::invalid_argument("partition join: part index out of range");
}
inline std::vector<int> without(const Partition& p, std::vector<int> idx) {
    std::sort(idx.begin(), idx.end(), std::greater<>());
    auto v = p.parts;
    for (int i : idx) v.erase(v.begin() + (i - 1));
    return v;
}
}  // namespace detail

// Parts rho_a and mu_b merge into one part rho_a + mu_b - 1.
inline Partition partition_join(const Partition& r, const Partition& m, int a, int b) {
    detail::check_part(r, a);
    detail::check_part(m, b);
    auto v = detail::without(r, {a});
    auto w = detail::without(m, {b});
    v.insert(v.end(), w.begin(), w.end());
    v.push_back(r[a] + m[b] - 1);
    return Partition::from_unsorted(v);
}

struct PartPoint {
    int a, b, c;
};
struct PartPair {
    int a, b, c, d;
};

inline Partition partition_join3(const Partition& r, const Partition& m, const Partition& u, PartPoint j) {
    detail::check_part(r, j.a);
    detail::check_part(m, j.b);
    detail::check_part(u, j.c);
    auto v = detail::without(r, {j.a});
    auto w = detail::without(m, {j.b});
    auto x = detail::without(u, {j.c});
    v.insert(v.end(), w.begin(), w.end());
    v.insert(v.end(), x.begin(), x.end());
    v.push_back(r[j.a] + m[j.b] + u[j.c] - 2);
    return Partition::from_unsorted(v);
}

inline Partition partition_join3(const Partition& r, const Partition& m, const Partition& u, PartPair j) {
    detail::check_part(r, j.a);
    detail::check_part(m, j.b);
    detail::check_part(m, j.c);
    detail::check_part(u, j.d);
    if (j.b == j.c) throw std::invalid_argument("partition_join3: pair mode needs b != c");
    auto v = detail::without(r, {j.a});
    auto w = detail::without(m, {j.b, j.c});
    auto x = detail::without(u, {j.d});
    v.insert(v.end(), w.begin(), w.end());
    v.insert(v.end(), x.begin(), x.end());
    v.push_back(r[j.a] + m[j.b] - 1);
    v.push_back(m[j.c] + u[j.d] - 1);
    return Partition::from_unsorted(v);
}

using PartSum = FormalSum<Partition>;

inline PartSum part_product(const PartSum& a, const PartSum& b) {
    return bilinear(a, b, [](const Partition& x, const Partition& y) { return PartSum(partition_union(x, y)); });
}

struct Frobenius {
    std::vector<Rational> a, b;
};

inline Frobenius frobenius_coords(const Partition& l) {
    Frobenius f;
    auto c = l.conjugate();
    const Rational half(1, 2);
    for (int i = 1; i <= l.length() && l[i] >= i; ++i) {
        f.a.push_back(Rational(l[i] - i) + half);
        f.b.push_back(Rational(c[i] - i) + half);
    }
    return f;
}

inline BigInt hook_dimension(const Partition& l) {
    const int n = l.size();
    if (n > 30) throw std::invalid_argument("hook_dimension: size above 30");
    auto c = l.conjugate();
    BigInt hooks = 1;
    for (int i = 1; i <= l.length(); ++i)
        for (int j = 1; j <= l[i]; ++j) hooks *= (l[i] - j) + (c[j] - i) + 1;
    return factorial(n) / hooks;
}

inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxp) {
        if (rest == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rest, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

// Size of the centralizer of a permutation of cycle type rho.
inline BigInt z_rho(const Partition& r) {
    std::map<int, int> mult;
    for (int x : r.parts) ++mult[x];
    BigInt z = 1;
    for (auto [part, m] : mult) {
        for (int i = 0; i < m; ++i) z *= part;
        z *= factorial(m);
    }
    return z;
}

inline std::string to_string(const Partition& p) {
    std::ostringstream os;
    for (int i = 0; i < p.length(); ++i) os << (i ? "," : "") << p.parts[i];
    return os.str();
}

// Accepts "3,2,2", "(3,2,2)" or "" for the empty partition.
inline Partition parse_partition(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '(' && ch != ')') s += ch;
    std::vector<int> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) v.push_back(std::stoi(item));
    return Partition(v);
}

}  // namespace modgauss
