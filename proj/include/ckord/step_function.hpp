#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ckord/ordinal.hpp"
#include "ckord/rational.hpp"
#include "ckord/sampling.hpp"

namespace ckord {

template <class S> inline S scalar_abs(const S& v) { return v < S{0} ? S{0} - v : v; }
template <class S> inline S scalar_from_fraction(std::int64_t num, std::int64_t den);
template <> inline Rational scalar_from_fraction<Rational>(std::int64_t n, std::int64_t d) {
    return Rational{n, d};
}
template <> inline double scalar_from_fraction<double>(std::int64_t n, std::int64_t d) {
    return static_cast<double>(n) / static_cast<double>(d);
}

/// Finitely-described continuous function on [1, top]: constant on the
/// clopen pieces (b_{i-1}, b_i] of an increasing breakpoint chain ending at
/// top. Canonical form (no two adjacent pieces share a value) is restored by
/// every operation, so structural equality decides function equality.
template <class S>
class StepFunction {
public:
    struct Piece {
        Ordinal upto; // piece is (previous upto, upto]
        S value;
    };

    StepFunction(Ordinal domain_top, std::vector<Piece> pieces)
        : top_(std::move(domain_top)), pieces_(std::move(pieces)) {
        if (top_.is_zero()) throw Error("StepFunction domain needs top >= 1");
        if (pieces_.empty()) throw Error("StepFunction needs at least one piece");
        Ordinal prev;
        for (const auto& p : pieces_) {
            if (!(prev < p.upto)) throw Error("StepFunction breakpoints must increase");
            prev = p.upto;
        }
        if (!(pieces_.back().upto == top_))
            throw Error("StepFunction last breakpoint must equal the domain top");
        canonicalize();
    }

    static StepFunction constant(Ordinal domain_top, S value) {
        std::vector<Piece> ps;
        ps.push_back(Piece{domain_top, std::move(value)});
        return StepFunction{std::move(domain_top), std::move(ps)};
    }

    static StepFunction zero(Ordinal domain_top) { return constant(std::move(domain_top), S{0}); }

    /// 1 on (0, upto], 0 after.
    static StepFunction indicator_initial(Ordinal domain_top, Ordinal upto) {
        std::vector<Piece> ps;
        ps.push_back(Piece{std::move(upto), S{1}});
        ps.push_back(Piece{domain_top, S{0}});
        return StepFunction{std::move(domain_top), std::move(ps)};
    }

    /// 1 on (after, upto], 0 elsewhere.
    static StepFunction indicator_block(Ordinal domain_top, Ordinal after, Ordinal upto) {
        std::vector<Piece> ps;
        if (!after.is_zero()) ps.push_back(Piece{std::move(after), S{0}});
        const bool reaches_top = upto == domain_top;
        ps.push_back(Piece{std::move(upto), S{1}});
        if (!reaches_top) ps.push_back(Piece{domain_top, S{0}});
        return StepFunction{std::move(domain_top), std::move(ps)};
    }

    const Ordinal& domain_top() const { return top_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    S evaluate(const Ordinal& x) const {
        if (x.is_zero() || top_ < x) throw OutOfDomain("evaluate: point outside [1, top]");
        auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const Piece& p, const Ordinal& v) { return p.upto < v; });
        return it->value;
    }

    friend bool operator==(const StepFunction& f, const StepFunction& g) {
        if (!(f.top_ == g.top_) || f.pieces_.size() != g.pieces_.size()) return false;
        for (std::size_t i = 0; i < f.pieces_.size(); ++i)
            if (!(f.pieces_[i].upto == g.pieces_[i].upto) ||
                !(f.pieces_[i].value == g.pieces_[i].value))
                return false;
        return true;
    }

    template <class Op>
    static StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
        if (!(f.top_ == g.top_))
            throw DomainMismatch("StepFunction operands live on different intervals");
        std::vector<Piece> out;
        std::size_t i = 0, j = 0;
        // both chains end at the common top, so they exhaust together
        while (i < f.pieces_.size() && j < g.pieces_.size()) {
            const Ordinal& fu = f.pieces_[i].upto;
            const Ordinal& gu = g.pieces_[j].upto;
            Ordinal cut = fu < gu ? fu : gu;
            out.push_back(Piece{cut, op(f.pieces_[i].value, g.pieces_[j].value)});
            if (fu == cut) ++i;
            if (gu == cut) ++j;
        }
        return StepFunction{f.top_, std::move(out)};
    }

    friend StepFunction operator+(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const S& a, const S& b) { return a + b; });
    }
    friend StepFunction operator-(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const S& a, const S& b) { return a - b; });
    }

    StepFunction scale(const S& c) const {
        StepFunction r = *this;
        for (auto& p : r.pieces_) p.value = p.value * c;
        r.canonicalize();
        return r;
    }

    friend StepFunction min(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const S& a, const S& b) { return a < b ? a : b; });
    }
    friend StepFunction max(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const S& a, const S& b) { return a < b ? b : a; });
    }
    friend StepFunction abs(const StepFunction& f) {
        StepFunction r = f;
        for (auto& p : r.pieces_) p.value = scalar_abs(p.value);
        r.canonicalize();
        return r;
    }

    S sup_norm() const {
        S m{0};
        for (const auto& p : pieces_) {
            S a = scalar_abs(p.value);
            if (m < a) m = a;
        }
        return m;
    }

    bool nonnegative() const {
        for (const auto& p : pieces_)
            if (p.value < S{0}) return false;
        return true;
    }

    /// Force the value on the final piece (membership in the vanishing-at-top
    /// subspace is "last piece value 0").
    StepFunction with_top_value(const S& v) const {
        StepFunction r = *this;
        r.pieces_.back().value = v;
        r.canonicalize();
        return r;
    }

    S value_at_top() const { return pieces_.back().value; }

    /// Largest |value| over the pieces meeting the closed interval [lo, hi].
    S max_abs_over(const Ordinal& lo, const Ordinal& hi) const {
        S m{0};
        Ordinal prev;
        for (const auto& p : pieces_) {
            const bool meets = prev < hi && !(p.upto < lo);
            if (meets) {
                S a = scalar_abs(p.value);
                if (m < a) m = a;
            }
            prev = p.upto;
        }
        return m;
    }

private:
    void canonicalize() {
        std::vector<Piece> merged;
        for (auto& p : pieces_) {
            if (!merged.empty() && merged.back().value == p.value)
                merged.back().upto = p.upto;
            else
                merged.push_back(std::move(p));
        }
        pieces_ = std::move(merged);
    }

    Ordinal top_;
    std::vector<Piece> pieces_;
};

/// Deterministic generator: r pieces over breakpoints drawn from the pool
/// (ordinals strictly below domain_top), values rational in [-1, 1] with
/// adjacent pieces forced distinct so the canonical piece count is exactly r.
template <class S>
StepFunction<S> sample_step(Rng& rng, const Ordinal& domain_top, std::uint64_t r,
                            const std::vector<Ordinal>& pool) {
    if (r == 0) throw Error("sample_step needs r >= 1");
    if (pool.size() + 1 < r)
        throw PoolTooSmall("breakpoint pool smaller than the requested piece count");
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        std::swap(idx[i], idx[detail::pick(rng, i, idx.size() - 1)]);
    idx.resize(r - 1);
    std::vector<Ordinal> cuts;
    for (std::size_t i : idx) {
        if (domain_top < pool[i] || pool[i] == domain_top || pool[i].is_zero())
            throw PoolTooSmall("pool entries must lie strictly between 0 and the top");
        cuts.push_back(pool[i]);
    }
    std::sort(cuts.begin(), cuts.end(), [](const Ordinal& a, const Ordinal& b) { return a < b; });
    cuts.push_back(domain_top);

    std::vector<typename StepFunction<S>::Piece> pieces;
    for (const auto& cut : cuts) {
        S v{0};
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::int64_t den = static_cast<std::int64_t>(detail::pick(rng, 1, 12));
            std::int64_t num = static_cast<std::int64_t>(detail::pick(rng, 0, 2 * den)) - den;
            v = scalar_from_fraction<S>(num, den);
            if (pieces.empty() || !(pieces.back().value == v)) break;
        }
        pieces.push_back({cut, v});
    }
    return StepFunction<S>{domain_top, std::move(pieces)};
}

template <class S>
StepFunction<S> sample_step(std::uint64_t seed, const Ordinal& domain_top, std::uint64_t r,
                            const std::vector<Ordinal>& pool) {
    Rng rng{seed};
    return sample_step<S>(rng, domain_top, r, pool);
}

/// Breakpoint pool mixing the structural grid of [1, top] (fundamental
/// sequence chains, block multiples) with seeded samples.
inline std::vector<Ordinal> breakpoint_pool(Rng& rng, const Ordinal& top, std::size_t extra) {
    std::vector<Ordinal> pool;
    auto add = [&](const Ordinal& x) {
        if (!x.is_zero() && x < top) pool.push_back(x);
    };
    Ordinal probe = top;
    for (int level = 0; level < 3 && probe.is_limit(); ++level) {
        for (std::uint64_t m = 1; m <= 6; ++m) add(fundamental_sequence(probe, m));
        probe = fundamental_sequence(probe, 3);
    }
    for (std::uint64_t m = 1; m <= 8; ++m) add(Ordinal{m});
    for (std::size_t i = 0; i < extra; ++i) add(sample_below(rng, top));
    std::sort(pool.begin(), pool.end(), [](const Ordinal& a, const Ordinal& b) { return a < b; });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

} // namespace ckord
