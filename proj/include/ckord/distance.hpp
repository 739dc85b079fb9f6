#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckord/optimal_weights.hpp"
#include "ckord/radical.hpp"
#include "ckord/topology.hpp"

namespace ckord {

enum class DistanceMode { classical, positive_directed };

/// Best bounds assembled from the catalog of published estimates. Values are
/// exact symbolic expressions; infinite means no (positive) isomorphism
/// exists at all. Every contributing bound carries its citation anchor.
struct DistanceBound {
    bool infinite = false;
    Radical lower{1};
    Radical upper{1};
    std::optional<Radical> exact;
    std::vector<std::string> citations;
    bool directed = false;
    std::string note;
};

namespace detail {

struct Candidate {
    Radical value;
    std::string citation;
};

struct MsForm {
    Ordinal alpha; // leading exponent
    BigNat count;  // leading coefficient
};

inline MsForm ms_form(const Ordinal& x) { return {x.degree(), x.leading_coefficient()}; }

/// Largest finite n >= 1 with alpha * n <= beta (requires alpha <= beta < alpha*w).
inline BigNat multiple_index(const Ordinal& alpha, const Ordinal& beta) {
    BigNat lo{1}, hi{2};
    while (!(beta < alpha * Ordinal{hi})) hi = hi * BigNat{2};
    // invariant: alpha*lo <= beta < alpha*hi
    while (lo + BigNat{1} < hi) {
        BigNat mid = (lo + hi) / BigNat{2};
        if (beta < alpha * Ordinal{mid}) hi = mid; else lo = mid;
    }
    return lo;
}

inline void push(std::vector<Candidate>& v, Radical value, std::string citation) {
    v.push_back({std::move(value), std::move(citation)});
}

struct DirectedBounds {
    std::vector<Candidate> lowers;
    std::vector<Candidate> uppers;
};

/// All catalog bounds for a positive isomorphism from C[1, w^a * k] onto
/// C[1, w^b * m]; call only when the positive direction exists.
inline DirectedBounds directed_bounds(const MsForm& from, const MsForm& to, bool homeo) {
    DirectedBounds out;
    push(out.lowers, Radical{1}, "isometry lower bound");
    if (homeo) {
        push(out.uppers, Radical{1}, "Banach-Stone");
        return out;
    }
    push(out.lowers, Radical{3}, "Gordon 1970");

    const bool same_exponent = from.alpha == to.alpha;
    const BigNat one{1};

    if (same_exponent && to.count == one && !(from.count == one)) {
        push(out.uppers, distortion_constant(from.count), "construction with better bound");
        push(out.lowers, Radical{Rational::make(1, from.count * BigNat{2} - one, BigNat{1})},
             "lower estimate same heights");
    }
    if (same_exponent && from.count == one && !(to.count == one)) {
        push(out.uppers, distortion_constant(2), "constructing the isomorphism (i)");
        if (from.alpha == Ordinal{1} && to.count == BigNat{2})
            push(out.uppers, Radical{2} + Radical::sqrt_of(BigNat{3}), "omega2 case");
    }

    const BigNat n = multiple_index(from.alpha, to.alpha);
    if (from.count == one && to.count == one && from.alpha * Ordinal{n} == to.alpha &&
        BigNat{1} < n) {
        push(out.uppers, distortion_constant(n), "constructing the isomorphism (ii)");
        push(out.lowers, Radical{Rational::make(1, n * BigNat{2} - one, BigNat{1})},
             "estimates for omega to alpha n");
        if (gamma(from.alpha) == from.alpha)
            push(out.lowers, distortion_constant(n), "exact values of the distances");
    }

    // generic route: fold the leading coefficient away, then stretch the
    // exponent (the chain behind the positive classification theorem)
    Radical fold = from.count == one ? Radical{1} : distortion_constant(from.count);
    Radical stretch = distortion_constant(n + one);
    push(out.uppers, fold * stretch, "classification chain");
    return out;
}

inline void assemble(DistanceBound& b, const std::vector<Candidate>& lowers,
                     const std::vector<Candidate>& uppers) {
    const Candidate* best_lo = &lowers.front();
    for (const auto& c : lowers)
        if (c.value.to_double() > best_lo->value.to_double()) best_lo = &c;
    const Candidate* best_up = &uppers.front();
    for (const auto& c : uppers)
        if (c.value.to_double() < best_up->value.to_double()) best_up = &c;
    b.lower = best_lo->value;
    b.upper = best_up->value;
    b.citations.push_back(best_lo->citation);
    if (best_up->citation != best_lo->citation) b.citations.push_back(best_up->citation);
    if (b.lower == b.upper) b.exact = b.lower;
}

} // namespace detail

inline DistanceBound distance_bounds(const Ordinal& a, const Ordinal& b, DistanceMode mode) {
    Classification cls = classify(a, b); // throws FiniteSpace below w
    DistanceBound out;
    out.directed = mode == DistanceMode::positive_directed;

    const bool exists = out.directed ? cls.pos_a_to_b : cls.iso;
    if (!exists) {
        out.infinite = true;
        out.citations.push_back(cls.iso ? "positive classification" : "Bessaga-Pelczynski");
        return out;
    }

    detail::MsForm fa = detail::ms_form(a);
    detail::MsForm fb = detail::ms_form(b);
    if (!(a == omega_pow(fa.alpha) * Ordinal{fa.count}) ||
        !(b == omega_pow(fb.alpha) * Ordinal{fb.count}))
        out.citations.push_back("Mazurkiewicz-Sierpinski");

    if (out.directed) {
        auto bounds = detail::directed_bounds(fa, fb, cls.homeo);
        detail::assemble(out, bounds.lowers, bounds.uppers);
    } else {
        // classical distance: uppers from whichever positive direction
        // exists, positive-only lower estimates dropped
        std::vector<detail::Candidate> lowers, uppers;
        auto collect = [&](const detail::MsForm& from, const detail::MsForm& to) {
            auto bounds = detail::directed_bounds(from, to, cls.homeo);
            for (auto& c : bounds.uppers) uppers.push_back(std::move(c));
            for (auto& c : bounds.lowers)
                if (c.citation != "lower estimate same heights") lowers.push_back(std::move(c));
        };
        if (cls.pos_a_to_b) collect(fa, fb);
        if (cls.pos_b_to_a) collect(fb, fa);
        // Gordon's exact value for the omega / omega*2 pair
        const bool gordon_pair =
            (fa.alpha == Ordinal{1} && fb.alpha == Ordinal{1}) &&
            ((fa.count == BigNat{1} && fb.count == BigNat{2}) ||
             (fa.count == BigNat{2} && fb.count == BigNat{1}));
        if (gordon_pair) {
            detail::push(lowers, Radical{3}, "Gordon 1970");
            detail::push(uppers, Radical{3}, "Gordon 1970");
        }
        detail::assemble(out, lowers, uppers);
    }

    // the exact value of the positive distance between C(w) and C(w*2)
    // (either direction) is an open question
    if (out.directed && !out.exact && fa.alpha == Ordinal{1} && fb.alpha == Ordinal{1}) {
        const bool omega2_pair =
            (fa.count == BigNat{1} && fb.count == BigNat{2}) ||
            (fa.count == BigNat{2} && fb.count == BigNat{1});
        if (omega2_pair) out.note = "exact value open";
    }
    return out;
}

} // namespace ckord
