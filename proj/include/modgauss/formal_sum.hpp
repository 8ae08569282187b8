#pragma once

#include "modgauss/rational.hpp"

#include <map>
#include <utility>

namespace modgauss {

// Finite linear combination of basis objects with exact coefficients.
// Zero coefficients are never stored.
template <class Key>
class FormalSum {
public:
    using Map = std::map<Key, Rational>;

    FormalSum() = default;
    explicit FormalSum(const Key& k, Rational c = 1) { add(k, std::move(c)); }

    void add(const Key& k, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    FormalSum& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& kv : terms_) kv.second *= s;
        return *this;
    }

    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
    friend FormalSum operator*(const Rational& s, FormalSum a) { return a *= s; }
    friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms_ == b.terms_; }

    Rational coefficient(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational total() const {
        Rational s = 0;
        for (const auto& kv : terms_) s += kv.second;
        return s;
    }
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    // Apply a map Key -> FormalSum<Key2> linearly.
    template <class Key2, class F>
    FormalSum<Key2> transform(F&& f) const {
        FormalSum<Key2> out;
        for (const auto& [k, c] : terms_) {
            FormalSum<Key2> img = f(k);
            img *= c;
            out += img;
        }
        return out;
    }

private:
    Map terms_;
};

// Bilinear extension of a basis product mult(Key, Key) -> FormalSum<Key>.
template <class Key, class Mult>
FormalSum<Key> bilinear(const FormalSum<Key>& a, const FormalSum<Key>& b, Mult&& mult) {
    FormalSum<Key> out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            FormalSum<Key> p = mult(ka, kb);
            p *= ca * cb;
            out += p;
        }
    }
    return out;
}

}  // namespace modgauss
