#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ckord/ordinal.hpp"

namespace ckord {

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t pick(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>{lo, hi}(rng);
}

// y < w^e, built from a few terms with exponents below e
inline Ordinal sample_below_power(Rng& rng, const Ordinal& e, int depth);

inline Ordinal sample_below_impl(Rng& rng, const Ordinal& bound, int depth) {
    if (bound == Ordinal{1} || depth <= 0) return Ordinal{};
    // keep a prefix of the bound's terms, shrink the coefficient at the
    // pivot, then continue with anything below that pivot's omega power
    const auto& ts = bound.terms();
    std::size_t pivot = pick(rng, 0, ts.size() - 1);
    Ordinal x;
    for (std::size_t i = 0; i < pivot; ++i)
        x = x + Ordinal::make_term(ts[i].exponent, ts[i].coefficient, Ordinal{});
    const BigNat& c = ts[pivot].coefficient;
    BigNat cap = c - BigNat{1};
    BigNat shrunk = cap;
    if (!cap.is_zero()) {
        if (cap.fits_u64()) shrunk = BigNat{pick(rng, 0, cap.to_u64())};
        else shrunk = BigNat{pick(rng, 0, 1u << 20)};
    }
    if (!shrunk.is_zero())
        x = x + Ordinal::make_term(ts[pivot].exponent, shrunk, Ordinal{});
    return x + sample_below_power(rng, ts[pivot].exponent, depth - 1);
}

inline Ordinal sample_below_power(Rng& rng, const Ordinal& e, int depth) {
    if (e.is_zero() || depth <= 0) return Ordinal{};
    Ordinal y;
    std::uint64_t parts = pick(rng, 0, 3);
    std::vector<Ordinal> exps;
    for (std::uint64_t i = 0; i < parts; ++i)
        exps.push_back(sample_below_impl(rng, e, depth - 1));
    std::sort(exps.begin(), exps.end(), [](const Ordinal& a, const Ordinal& b) { return b < a; });
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i > 0 && exps[i] == exps[i - 1]) continue;
        y = y + Ordinal::make_term(exps[i], BigNat{pick(rng, 1, 6)}, Ordinal{});
    }
    return y;
}

} // namespace detail

/// Deterministic sample of an ordinal x with x < bound (bound >= 1).
inline Ordinal sample_below(Rng& rng, const Ordinal& bound) {
    if (bound.is_zero()) throw Error("sample_below requires bound >= 1");
    return detail::sample_below_impl(rng, bound, 8);
}

/// Deterministic sample with 1 <= x <= top.
inline Ordinal sample_in(Rng& rng, const Ordinal& top) {
    if (detail::pick(rng, 0, 19) == 0) return top;
    Ordinal x = sample_below(rng, top);
    return x.is_zero() ? Ordinal{1} : x;
}

} // namespace ckord
