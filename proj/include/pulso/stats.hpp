#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pulso/error.hpp"
#include "pulso/unicode.hpp"

namespace pulso {

struct OfficialResult {
    std::string province;
    std::uint64_t votes_scioli = 0;
    std::uint64_t votes_macri = 0;
    std::optional<std::uint64_t> population;

    friend bool operator==(const OfficialResult &, const OfficialResult &) = default;
};

/// Tab-separated: province, votes_scioli, votes_macri[, population], with a
/// header line whose first field is "province".
inline std::vector<OfficialResult> load_official(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open official results " + path.string());
    std::vector<OfficialResult> out;
    std::string line;
    std::size_t lineno = 0;
    auto count = [&](const std::string &s) -> std::uint64_t {
        try {
            std::size_t used = 0;
            if (s.empty() || s[0] == '-') throw std::invalid_argument("sign");
            const auto v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception &) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": bad count '" + s + "'");
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (unicode::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (;;) {
            const auto tab = line.find('\t', pos);
            f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (f[0] == "province") continue;
        if (f.size() != 3 && f.size() != 4)
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected 3 or 4 fields");
        OfficialResult r{f[0], count(f[1]), count(f[2]), std::nullopt};
        if (f.size() == 4 && !f[3].empty()) r.population = count(f[3]);
        out.push_back(std::move(r));
    }
    return out;
}

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool degenerate = false;  // |r| == 1, p reported as 0
};

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw StatsError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw StatsError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw StatsError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
inline double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw StatsError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatsError("pearson_r: length mismatch");
    if (x.size() < 2) throw StatsError("pearson_r: need at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw StatsError("pearson_r: constant vector has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// r with a two-sided p-value from t = r sqrt(n-2) / sqrt(1-r^2), df = n-2.
inline CorrelationResult correlation_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatsError("correlation_test: length mismatch");
    if (x.size() < 3) throw StatsError("correlation_test: need at least three points");
    CorrelationResult res;
    res.n = x.size();
    res.r = pearson_r(x, y);
    const double one_minus_r2 = 1.0 - res.r * res.r;
    if (one_minus_r2 <= 0.0) {
        res.p_value = 0.0;
        res.degenerate = true;
        return res;
    }
    const double df = static_cast<double>(res.n - 2);
    const double t = res.r * std::sqrt(df) / std::sqrt(one_minus_r2);
    res.p_value = student_t_two_sided(t, df);
    return res;
}

}  // namespace pulso
