#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ckord/bignat.hpp"
#include "ckord/errors.hpp"

namespace ckord {

struct OrdinalTerm;

/// How deep exponent nesting may go before construction fails.
/// Overridable per process (the CLI reads CK_DEPTH_CAP).
inline std::atomic<int>& ordinal_depth_cap() {
    static std::atomic<int> cap{32};
    return cap;
}

/// Ordinal below epsilon_0 in Cantor normal form:
/// sum of w^(exponent) * coefficient with strictly decreasing exponents
/// and coefficients >= 1. The empty sum is 0. Values are immutable once
/// built and every constructor canonicalizes, so structural equality is
/// ordinal equality.
class Ordinal {
public:
    Ordinal() = default;

    Ordinal(std::uint64_t n); // NOLINT: implicit, finite ordinals embed
    explicit Ordinal(const BigNat& n);

    /// w^exp * coeff + rest (rest must be < w^exp).
    static Ordinal make_term(const Ordinal& exp, const BigNat& coeff, const Ordinal& rest);

    static const Ordinal& zero();
    static const Ordinal& one();
    static const Ordinal& omega();

    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    bool is_successor() const;
    bool is_limit() const { return !is_zero() && !is_successor(); }

    std::size_t term_count() const { return terms_.size(); }
    const Ordinal& exponent_at(std::size_t i) const;
    const BigNat& coefficient_at(std::size_t i) const;

    /// Leading exponent; 0 for finite nonzero ordinals. Error on 0.
    const Ordinal& degree() const;
    const BigNat& leading_coefficient() const;

    /// Finite value when is_finite(); throws otherwise.
    const BigNat& finite_value() const;

    int nesting_depth() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b);

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

    std::vector<OrdinalTerm> const& terms() const { return terms_; }

private:
    void check_depth() const;

    // strictly decreasing exponents; invariant enforced by all factories
    std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
    Ordinal exponent;
    BigNat coefficient;
};

inline Ordinal::Ordinal(std::uint64_t n) {
    if (n > 0) terms_.push_back(OrdinalTerm{Ordinal{}, BigNat{n}});
}

inline Ordinal::Ordinal(const BigNat& n) {
    if (!n.is_zero()) terms_.push_back(OrdinalTerm{Ordinal{}, n});
}

inline const Ordinal& Ordinal::zero() {
    static const Ordinal z{};
    return z;
}
inline const Ordinal& Ordinal::one() {
    static const Ordinal o{1};
    return o;
}
inline const Ordinal& Ordinal::omega() {
    static const Ordinal w = make_term(Ordinal{1}, BigNat{1}, Ordinal{});
    return w;
}

inline bool Ordinal::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline bool Ordinal::is_successor() const {
    return !terms_.empty() && terms_.back().exponent.is_zero();
}

inline const Ordinal& Ordinal::exponent_at(std::size_t i) const { return terms_.at(i).exponent; }
inline const BigNat& Ordinal::coefficient_at(std::size_t i) const { return terms_.at(i).coefficient; }

inline const Ordinal& Ordinal::degree() const {
    if (terms_.empty()) throw Error("degree of 0 is undefined");
    return terms_.front().exponent;
}
inline const BigNat& Ordinal::leading_coefficient() const {
    if (terms_.empty()) throw Error("leading coefficient of 0 is undefined");
    return terms_.front().coefficient;
}

inline const BigNat& Ordinal::finite_value() const {
    static const BigNat zero_nat{};
    if (terms_.empty()) return zero_nat;
    if (!is_finite()) throw Error("ordinal is not finite");
    return terms_[0].coefficient;
}

inline int Ordinal::nesting_depth() const {
    if (terms_.empty()) return 0;
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exponent.nesting_depth());
    return d + 1;
}

inline void Ordinal::check_depth() const {
    if (nesting_depth() > ordinal_depth_cap().load())
        throw DepthCapExceeded("ordinal exponent nesting exceeds depth cap");
}

inline Ordinal Ordinal::make_term(const Ordinal& exp, const BigNat& coeff, const Ordinal& rest) {
    if (coeff.is_zero()) return rest;
    if (!rest.is_zero() && !(rest.degree() < exp))
        throw Error("make_term: tail not below leading term");
    Ordinal r;
    r.terms_.reserve(rest.terms_.size() + 1);
    r.terms_.push_back(OrdinalTerm{exp, coeff});
    for (const auto& t : rest.terms_) r.terms_.push_back(t);
    r.check_depth();
    return r;
}

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto ce = a.terms_[i].exponent <=> b.terms_[i].exponent;
        if (ce != 0) return ce;
        auto cc = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
        if (cc != 0) return cc;
    }
    return a.terms_.size() <=> b.terms_.size();
}

inline bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const Ordinal& lead = b.terms_.front().exponent;
    // keep the terms of a with exponent > lead, merge at equality, drop the rest
    Ordinal r;
    std::size_t i = 0;
    while (i < a.terms_.size() && lead < a.terms_[i].exponent) {
        r.terms_.push_back(a.terms_[i]);
        ++i;
    }
    if (i < a.terms_.size() && a.terms_[i].exponent == lead) {
        r.terms_.push_back(OrdinalTerm{lead, a.terms_[i].coefficient + b.terms_.front().coefficient});
    } else {
        r.terms_.push_back(b.terms_.front());
    }
    for (std::size_t j = 1; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    return r;
}

inline Ordinal operator*(const Ordinal& a, const Ordinal& b) {
    if (a.is_zero() || b.is_zero()) return Ordinal{};
    Ordinal r;
    const Ordinal& adeg = a.terms_.front().exponent;
    for (const auto& t : b.terms_) {
        if (t.exponent.is_zero()) {
            // a * n: multiply the leading coefficient, keep the tail of a
            Ordinal part;
            part.terms_ = a.terms_;
            part.terms_.front().coefficient = a.terms_.front().coefficient * t.coefficient;
            r = r + part;
        } else {
            r = r + Ordinal::make_term(adeg + t.exponent, t.coefficient, Ordinal{});
        }
    }
    return r;
}

/// w^x (single-term ordinal with coefficient 1).
inline Ordinal omega_pow(const Ordinal& x) {
    return Ordinal::make_term(x, BigNat{1}, Ordinal{});
}

/// The unique d with a + d = b; requires a <= b.
inline Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
    const auto& at = a.terms();
    const auto& bt = b.terms();
    std::size_t i = 0;
    while (i < at.size() && i < bt.size()) {
        if (!(at[i].exponent == bt[i].exponent)) {
            if (bt[i].exponent < at[i].exponent)
                throw SubtractUnderflow("left_subtract: minuend smaller");
            break;
        }
        if (!(at[i].coefficient == bt[i].coefficient)) {
            if (bt[i].coefficient < at[i].coefficient)
                throw SubtractUnderflow("left_subtract: minuend smaller");
            // same exponent, b has the larger coefficient: difference starts here
            Ordinal r = Ordinal::make_term(bt[i].exponent, bt[i].coefficient - at[i].coefficient, Ordinal{});
            for (std::size_t j = i + 1; j < bt.size(); ++j)
                r = r + Ordinal::make_term(bt[j].exponent, bt[j].coefficient, Ordinal{});
            return r;
        }
        ++i;
    }
    if (i == at.size()) {
        // a is a prefix of b; the suffix is the difference
        Ordinal r;
        for (std::size_t j = i; j < bt.size(); ++j)
            r = r + Ordinal::make_term(bt[j].exponent, bt[j].coefficient, Ordinal{});
        return r;
    }
    if (i == bt.size())
        throw SubtractUnderflow("left_subtract: minuend smaller");
    // exponents differ at i with b's larger: b's suffix absorbs the rest of a
    Ordinal r;
    for (std::size_t j = i; j < bt.size(); ++j)
        r = r + Ordinal::make_term(bt[j].exponent, bt[j].coefficient, Ordinal{});
    return r;
}

/// Least ordinal of the form w^e that is >= a; requires a >= 1.
inline Ordinal gamma(const Ordinal& a) {
    if (a.is_zero()) throw ZeroInput("gamma requires a >= 1");
    const Ordinal& d = a.degree();
    if (a.term_count() == 1 && a.leading_coefficient() == BigNat{1})
        return a; // already an omega power
    return omega_pow(d + Ordinal{1});
}

/// y = w^beta * q + r with r < w^beta. Exact; beta is the exponent.
inline std::pair<Ordinal, Ordinal> divmod_base(const Ordinal& y, const Ordinal& beta) {
    Ordinal q, r;
    for (const auto& t : y.terms()) {
        if (!(t.exponent < beta)) {
            q = q + Ordinal::make_term(left_subtract(beta, t.exponent), t.coefficient, Ordinal{});
        } else {
            r = r + Ordinal::make_term(t.exponent, t.coefficient, Ordinal{});
        }
    }
    return {q, r};
}

/// Successor and predecessor helpers.
inline Ordinal successor(const Ordinal& a) { return a + Ordinal{1}; }

inline Ordinal predecessor(const Ordinal& a) {
    if (!a.is_successor()) throw Error("predecessor requires a successor ordinal");
    Ordinal r;
    const auto& ts = a.terms();
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        r = r + Ordinal::make_term(ts[i].exponent, ts[i].coefficient, Ordinal{});
    BigNat c = ts.back().coefficient;
    if (!(c == BigNat{1}))
        r = r + Ordinal{c - BigNat{1}};
    return r;
}

/// Canonical fundamental sequence of a limit ordinal: strictly increasing
/// in m with supremum g. For g = d + w^(e+1) the m-th element is d + w^e * m;
/// for g = d + w^l with l limit it is d + w^(fundamental_sequence(l, m)).
inline Ordinal fundamental_sequence(const Ordinal& g, const BigNat& m) {
    if (!g.is_limit()) throw NotLimit("fundamental_sequence requires a limit ordinal");
    if (m.is_zero()) throw Error("fundamental_sequence index starts at 1");
    // split off one copy of the last term's omega power
    const auto& ts = g.terms();
    Ordinal prefix;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        prefix = prefix + Ordinal::make_term(ts[i].exponent, ts[i].coefficient, Ordinal{});
    const Ordinal& e = ts.back().exponent;
    const BigNat& c = ts.back().coefficient;
    if (!(c == BigNat{1}))
        prefix = prefix + Ordinal::make_term(e, c - BigNat{1}, Ordinal{});
    if (e.is_successor()) {
        return prefix + Ordinal::make_term(predecessor(e), m, Ordinal{});
    }
    return prefix + omega_pow(fundamental_sequence(e, m));
}

inline Ordinal fundamental_sequence(const Ordinal& g, std::uint64_t m) {
    return fundamental_sequence(g, BigNat{m});
}

/// Base-w^a digit expansions (unique positional representations).
///
/// bounded variant: 1 <= y <= w^(a*n) * beta, digits (g_1..g_k) with
///   y = sum w^(a*(n-i+1)) * g_i, g_1 in [0, beta], g_i in [0, w^a) for i >= 2,
///   g_k != 0, 1 <= k <= n+1.
/// power variant:   1 <= y < w^(a*n), digits with positions w^(a*(n-i)),
///   all digits in [0, w^a), g_k != 0, 1 <= k <= n.
struct DigitExpansion {
    std::vector<Ordinal> digits; // g_1 .. g_k
    std::size_t k = 0;
};

namespace detail {
inline DigitExpansion digits_common(const Ordinal& y, const Ordinal& a, std::uint64_t n,
                                    bool with_beta) {
    DigitExpansion out;
    const std::uint64_t positions = with_beta ? n + 1 : n;
    Ordinal rem = y;
    for (std::uint64_t i = 1; i <= positions; ++i) {
        const std::uint64_t power = with_beta ? (n - i + 1) : (n - i);
        auto [q, r] = divmod_base(rem, a * Ordinal{power});
        out.digits.push_back(q);
        rem = r;
    }
    if (!rem.is_zero()) throw Error("digit expansion: nonzero remainder"); // unreachable
    while (!out.digits.empty() && out.digits.back().is_zero()) out.digits.pop_back();
    out.k = out.digits.size();
    return out;
}
} // namespace detail

inline DigitExpansion digits_base_bounded(const Ordinal& y, const Ordinal& a, std::uint64_t n,
                                          const Ordinal& beta) {
    if (a.is_zero() || n == 0 || beta.is_zero())
        throw Error("digits_base: need a >= 1, n >= 1, beta >= 1");
    if (y.is_zero() || omega_pow(a * Ordinal{n}) * beta < y)
        throw OutOfRange("digits_base (bounded): y outside [1, w^(a n) beta]");
    DigitExpansion out = detail::digits_common(y, a, n, true);
    if (beta < out.digits[0]) throw OutOfRange("digits_base: first digit above beta"); // unreachable
    return out;
}

inline DigitExpansion digits_base_power(const Ordinal& y, const Ordinal& a, std::uint64_t n) {
    if (a.is_zero() || n == 0) throw Error("digits_base: need a >= 1, n >= 1");
    if (y.is_zero() || !(y < omega_pow(a * Ordinal{n})))
        throw OutOfRange("digits_base (power): y outside [1, w^(a n))");
    return detail::digits_common(y, a, n, false);
}

inline Ordinal from_digits_bounded(const std::vector<Ordinal>& digits, const Ordinal& a,
                                   std::uint64_t n) {
    Ordinal y;
    for (std::size_t i = 0; i < digits.size(); ++i)
        y = y + omega_pow(a * Ordinal{n - i}) * digits[i];
    return y;
}

inline Ordinal from_digits_power(const std::vector<Ordinal>& digits, const Ordinal& a,
                                 std::uint64_t n) {
    Ordinal y;
    for (std::size_t i = 0; i < digits.size(); ++i)
        y = y + omega_pow(a * Ordinal{n - 1 - i}) * digits[i];
    return y;
}

} // namespace ckord
