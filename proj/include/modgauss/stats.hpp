#pragma once

#include "modgauss/cumulants.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace modgauss {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

struct StandardizedStatistic {
    enum class Mode { X, Y };
    Mode mode = Mode::Y;
    std::vector<double> values;
};

// Y_n = (S - mean) / sd with the empirical mean and standard deviation.
inline StandardizedStatistic standardize_y(const std::vector<double>& s) {
    auto k = k_statistics(s);
    if (k.k2 <= 0) throw std::invalid_argument("standardize_y: zero empirical variance");
    StandardizedStatistic out;
    const double sd = std::sqrt(k.k2);
    for (double v : s) out.values.push_back((v - k.k1) / sd);
    return out;
}

// X_n = (S - mean) / (N^(1/3) D^(2/3)).
inline StandardizedStatistic standardize_x(const std::vector<double>& s, const CumulantRegime& g) {
    auto k = k_statistics(s);
    const double scale = std::cbrt(to_double(g.N)) * std::pow(to_double(g.D), 2.0 / 3.0);
    StandardizedStatistic out;
    out.mode = StandardizedStatistic::Mode::X;
    for (double v : s) out.values.push_back((v - k.k1) / scale);
    return out;
}

// sup_t |F_emp(t) - Phi(t)|, evaluated on both sides of every jump.
inline double kolmogorov_distance(std::vector<double> x) {
    if (x.size() < 1000) throw std::invalid_argument("kolmogorov_distance: need at least 1000 samples");
    std::sort(x.begin(), x.end());
    const double N = static_cast<double>(x.size());
    double d = 0;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        const double phi = normal_cdf(x[i]);
        d = std::max({d, std::abs(phi - i / N), std::abs(j / N - phi)});
        i = j;
    }
    return d;
}

// 76.36 A^3 / sigma^3 * sqrt(D/N).
inline double kolmogorov_bound(const CumulantRegime& g, double sigma_n) {
    if (!(sigma_n > 0)) throw std::invalid_argument("kolmogorov_bound: sigma_n must be positive (singular point)");
    const double A = to_double(g.A);
    return 76.36 * A * A * A / (sigma_n * sigma_n * sigma_n) * std::sqrt(g.ratio());
}

// One-sided upper Clopper-Pearson bound for a binomial proportion.
inline double clopper_pearson_upper(long long k, long long n, double level = 0.99) {
    if (k >= n) return 1.0;
    return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), level);
}

struct TailRow {
    double x = 0;
    long long exceed = 0, reps = 0;
    double empirical = 0, upper = 0;  // upper: 99% Clopper-Pearson
    double bound = 0;                 // theoretical curve at x
    double gaussian = 0, corrected = 0;
    bool pass = true;
};

struct TailReport {
    std::string kind;
    double level = 0.99;
    std::vector<TailRow> rows;
    bool pass = true;
    double skewness = 0, skewness_se = 0, L = 0;
    std::string skewness_check;  // "consistent", "inconsistent" or "unresolved"
};

// P[|f - center| >= x] against prefactor * exp(-n x^2 / (9 k^2)).
inline TailReport concentration_check(const std::vector<double>& f, double center, int n, int k,
                                      const std::vector<double>& xs, double prefactor) {
    if (f.size() < 10000) throw std::invalid_argument("concentration_check: need at least 10^4 replicates");
    TailReport rep;
    rep.kind = "concentration";
    for (double x : xs) {
        TailRow row;
        row.x = x;
        row.reps = static_cast<long long>(f.size());
        for (double v : f) row.exceed += std::abs(v - center) >= x;
        row.empirical = double(row.exceed) / row.reps;
        row.upper = clopper_pearson_upper(row.exceed, row.reps, rep.level);
        row.bound = prefactor * std::exp(-n * x * x / (9.0 * k * k));
        row.pass = row.bound >= 1 || row.upper <= row.bound;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

inline double sample_skewness(const std::vector<double>& y) {
    auto k = k_statistics(y);
    return k.k3 / std::pow(k.k2, 1.5);
}

// Empirical, Gaussian and cubic-corrected tails of Y for y in [1,3]; the only
// gated quantity is the sign of the skewness against sign(L).
inline TailReport tail_report(const StandardizedStatistic& y, double sigma2, double L, const CumulantRegime& g) {
    if (!(sigma2 > 0)) throw std::invalid_argument("tail_report: singular variance");
    TailReport rep;
    rep.kind = "tails";
    rep.L = L;
    const double N = static_cast<double>(y.values.size());
    const double sigma3 = std::pow(sigma2, 1.5), r = std::sqrt(g.ratio());
    for (double t = 1.0; t <= 3.0 + 1e-9; t += 0.25) {
        TailRow row;
        row.x = t;
        row.reps = static_cast<long long>(N);
        for (double v : y.values) row.exceed += v >= t;
        row.empirical = row.exceed / N;
        row.upper = clopper_pearson_upper(row.exceed, row.reps, rep.level);
        row.gaussian = normal_tail(t);
        row.corrected = std::exp(-t * t / 2) / (t * std::sqrt(2 * M_PI)) * std::exp(L / (6 * sigma3) * r * t * t * t);
        rep.rows.push_back(row);
    }
    rep.skewness = sample_skewness(y.values);
    rep.skewness_se = std::sqrt(6.0 * N * (N - 1) / ((N - 2) * (N + 1) * (N + 3)));
    if (std::abs(rep.skewness) <= 3 * rep.skewness_se || L == 0)
        rep.skewness_check = "unresolved";
    else
        rep.skewness_check = (rep.skewness > 0) == (L > 0) ? "consistent" : "inconsistent";
    rep.pass = rep.skewness_check != "inconsistent";
    return rep;
}

struct TVResult {
    double tv = 0;
    bool pass = false;
};

// Half the l1 distance between empirical frequencies and exact probabilities.
template <class Key, class Prob>
TVResult tv_test(const std::map<Key, long long>& counts, const std::map<Key, Prob>& exact, double threshold) {
    long long total = 0;
    for (const auto& kv : counts) total += kv.second;
    if (total == 0) throw std::invalid_argument("tv_test: empty sample");
    std::set<Key> keys;
    for (const auto& kv : counts) keys.insert(kv.first);
    for (const auto& kv : exact) keys.insert(kv.first);
    double s = 0;
    for (const auto& key : keys) {
        auto c = counts.find(key);
        auto e = exact.find(key);
        double p = c == counts.end() ? 0.0 : double(c->second) / total;
        double q = 0;
        if (e != exact.end()) {
            if constexpr (std::is_same_v<Prob, Rational>) q = to_double(e->second);
            else q = static_cast<double>(e->second);
        }
        s += std::abs(p - q);
    }
    return {s / 2, s / 2 <= threshold};
}

}  // namespace modgauss
