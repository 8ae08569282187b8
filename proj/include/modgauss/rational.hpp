#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <regex>
#include <stdexcept>
#include <string>

namespace modgauss {

// Expression templates off: values behave like plain value types.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// n(n-1)...(n-k+1); zero when k > n.
inline BigInt falling(long long n, int k) {
    if (k < 0) throw std::invalid_argument("falling: negative k");
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        if (n - i <= 0) return 0;
        r *= (n - i);
    }
    return r;
}

inline BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Rational pow(const Rational& x, int e) {
    Rational r = 1;
    Rational b = e < 0 ? Rational(1) / x : x;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= b;
    return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

// Accepts "p", "p/q" or a plain decimal such as "0.25".
inline Rational parse_rational(const std::string& text) {
    static const std::regex frac(R"(\s*([+-]?)(\d+)(?:/(\d+)|\.(\d*))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, frac)) throw std::invalid_argument("not a rational number: '" + text + "'");
    // Leading zeros would make the BigInt parser read octal.
    auto integer = [](const std::string& d) {
        auto nz = d.find_first_not_of('0');
        return BigInt(nz == std::string::npos ? "0" : d.substr(nz));
    };
    Rational q;
    if (m[3].matched) {
        BigInt den = integer(m[3]);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        q = Rational(integer(m[2]), den);
    } else if (m[4].matched) {
        BigInt den = 1;
        for (long i = 0; i < m[4].length(); ++i) den *= 10;
        q = Rational(integer(m[2].str() + m[4].str()), den);
    } else {
        q = Rational(integer(m[2]));
    }
    return m[1] == "-" ? Rational(-q) : q;
}

}  // namespace modgauss
