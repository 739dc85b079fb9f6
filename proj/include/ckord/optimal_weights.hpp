#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ckord/errors.hpp"
#include "ckord/radical.hpp"

namespace ckord {

/// The distortion constant governing the weighted constructions:
///   C(n) = inf over positive weights summing to 1 of
///          max(2/w_1 - 1, max_{i>=2}(2/w_i + 1))
/// with closed form n + sqrt((n-1)(n+3)), attained at
///   w_1 = x := ((n+1) - sqrt((n-1)(n+3))) / 2,  w_i = (1-x)/(n-1).
struct OptimalWeights {
    std::vector<Radical> lambda; // w_1 distinguished (the "-1" branch)
    Radical constant;            // C(n), exact
};

inline Radical distortion_constant(const BigNat& n) {
    if (n.is_zero()) throw Error("distortion constant needs n >= 1");
    return Radical{Rational::make(1, n, BigNat{1})}
         + Radical::sqrt_of((n - BigNat{1}) * (n + BigNat{3}));
}

inline Radical distortion_constant(std::uint64_t n) { return distortion_constant(BigNat{n}); }

inline OptimalWeights optimal_lambda(std::uint64_t n) {
    if (n == 0) throw Error("optimal_lambda needs n >= 1");
    OptimalWeights out;
    out.constant = distortion_constant(n);
    if (n == 1) {
        out.lambda = {Radical{Rational{1}}};
        return out;
    }
    Radical root = Radical::sqrt_of(BigNat{n - 1} * BigNat{n + 3});
    Radical half{Rational{1, 2}};
    Radical x = (Radical{Rational{static_cast<std::int64_t>(n + 1)}} - root) * half;
    Radical rest = (Radical{1} - x) * Radical{Rational{1, static_cast<std::int64_t>(n - 1)}};
    out.lambda.push_back(x);
    for (std::uint64_t i = 1; i < n; ++i) out.lambda.push_back(rest);
    return out;
}

/// The objective behind C(n), for scrutiny of candidate weights.
inline double weight_objective(const std::vector<double>& lambda) {
    double m = 2.0 / lambda[0] - 1.0;
    for (std::size_t i = 1; i < lambda.size(); ++i)
        m = std::max(m, 2.0 / lambda[i] + 1.0);
    return m;
}

/// Independent numeric evaluation of C(n): reduce to one variable t = w_1
/// (the rest split evenly) and bracket the crossing of the decreasing branch
/// 2/t - 1 with the increasing branch 2(n-1)/(1-t) + 1 by bisection. The
/// returned value is within tol of the true minimum, certified by the
/// enclosure [max(dec(hi), inc(lo)), best evaluated point].
inline double numeric_min_C(std::uint64_t n, double tol) {
    if (n < 2) throw Error("numeric_min_C needs n >= 2");
    if (!(tol > 0)) throw Error("numeric_min_C needs tol > 0");
    auto dec = [](double t) { return 2.0 / t - 1.0; };
    auto inc = [n](double t) { return 2.0 * static_cast<double>(n - 1) / (1.0 - t) + 1.0; };
    auto g = [&](double t) { return std::max(dec(t), inc(t)); };

    double lo = 1e-12, hi = 1.0 - 1e-12;
    double best = std::min(g(lo), g(hi));
    for (int iter = 0; iter < 400; ++iter) {
        double lower_bound = std::max(dec(hi), inc(lo));
        if (best - lower_bound <= tol) return best;
        double mid = 0.5 * (lo + hi);
        best = std::min(best, g(mid));
        if (dec(mid) > inc(mid)) lo = mid; else hi = mid;
    }
    throw ToleranceNotMet("numeric_min_C did not reach the requested tolerance");
}

} // namespace ckord
