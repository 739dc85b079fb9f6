#pragma once

#include <optional>

#include "ckord/ordinal.hpp"
#include "ckord/ordinal_text.hpp"

namespace ckord {

/// Compact ordinal interval [lo, hi], 1 <= lo <= hi.
struct ClosedInterval {
    Ordinal lo;
    Ordinal hi;

    ClosedInterval(Ordinal l, Ordinal h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.is_zero() || hi < lo)
            throw Error("ClosedInterval requires 1 <= lo <= hi");
    }

    static ClosedInterval from_one(const Ordinal& hi) { return ClosedInterval{Ordinal{1}, hi}; }

    bool contains(const Ordinal& x) const { return !(x < lo) && !(hi < x); }
};

/// The set { multiplier * i : i in index_range } for an omega-power
/// multiplier; empty when index_range is absent.
struct DerivedSet {
    Ordinal multiplier;
    std::optional<ClosedInterval> index_range;

    bool empty() const { return !index_range.has_value(); }

    bool contains(const Ordinal& x) const {
        if (empty() || x.is_zero()) return false;
        auto [q, r] = divmod_base(x, multiplier.degree());
        return r.is_zero() && index_range->contains(q);
    }
};

/// Derivative of order beta of [1, hi]: the multiples of w^beta that stay
/// below hi. Intervals with lo != 1 are out of scope.
inline DerivedSet cb_derivative(const ClosedInterval& k, const Ordinal& beta) {
    if (!(k.lo == Ordinal{1}))
        throw UnsupportedBase("cb_derivative requires lo = 1");
    auto [q, r] = divmod_base(k.hi, beta);
    DerivedSet out;
    out.multiplier = omega_pow(beta);
    if (!q.is_zero())
        out.index_range = ClosedInterval{Ordinal{1}, q};
    return out;
}

/// (h, last_count):  h is the least beta with empty derivative, last_count
/// the size of the final nonempty one. For hi with leading term w^a * n this
/// is (a + 1, n); the returned h is always a successor.
struct HeightInfo {
    Ordinal h;
    BigNat last_count;
};

inline HeightInfo height(const ClosedInterval& k) {
    if (!(k.lo == Ordinal{1}))
        throw UnsupportedBase("height requires lo = 1");
    return {k.hi.degree() + Ordinal{1}, k.hi.leading_coefficient()};
}

/// Decision procedures for the spaces [1, a], [1, b] with a, b >= w.
///
///   homeo        -- equal leading exponent and coefficient
///                   (the invariant classifying countable compacta)
///   iso          -- Gamma(ht_a) = Gamma(ht_b)
///   pos_a_to_b   -- ht_a <= ht_b and iso (positive surjection from C[1,a])
struct Classification {
    bool homeo = false;
    bool iso = false;
    bool pos_a_to_b = false;
    bool pos_b_to_a = false;
};

inline Classification classify(const Ordinal& a, const Ordinal& b) {
    if (a < Ordinal::omega() || b < Ordinal::omega())
        throw FiniteSpace("classify requires infinite spaces (a, b >= w)");
    Classification c;
    c.homeo = a.degree() == b.degree() && a.leading_coefficient() == b.leading_coefficient();
    Ordinal ht_a = a.degree() + Ordinal{1};
    Ordinal ht_b = b.degree() + Ordinal{1};
    c.iso = gamma(ht_a) == gamma(ht_b);
    c.pos_a_to_b = c.iso && !(ht_b < ht_a);
    c.pos_b_to_a = c.iso && !(ht_a < ht_b);
    return c;
}

} // namespace ckord
