#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckord/ordinal.hpp"
#include "ckord/ordinal_text.hpp"

namespace ckord {

/// Computable order isomorphism between countable unions of ordinal blocks.
/// On each block the map is a prefix translation x = s + d |-> t + d, so it
/// is strictly increasing; apply and invert are mutually inverse on the
/// whole domain.
class PiecewiseTranslationMap {
public:
    struct BlockInfo {
        std::string id;
        Ordinal source_lo, source_hi;
        Ordinal target_prefix;
    };

    using PointFn = std::function<std::optional<Ordinal>(const Ordinal&)>;
    using BlockFn = std::function<std::optional<BlockInfo>(const Ordinal&)>;

    PiecewiseTranslationMap() = default;
    PiecewiseTranslationMap(std::string name, PointFn forward, PointFn backward, BlockFn blocks)
        : name_(std::move(name)), forward_(std::move(forward)),
          backward_(std::move(backward)), blocks_(std::move(blocks)) {}

    const std::string& name() const { return name_; }

    Ordinal apply(const Ordinal& x) const {
        auto y = forward_(x);
        if (!y) throw NotInUnion("point outside the domain of " + name_);
        return *y;
    }

    Ordinal invert(const Ordinal& y) const {
        auto x = backward_(y);
        if (!x) throw NotInUnion("point outside the codomain of " + name_);
        return *x;
    }

    bool domain_contains(const Ordinal& x) const { return forward_(x).has_value(); }
    bool codomain_contains(const Ordinal& y) const { return backward_(y).has_value(); }

    std::optional<BlockInfo> block_of(const Ordinal& x) const { return blocks_(x); }

private:
    std::string name_;
    PointFn forward_, backward_;
    BlockFn blocks_;
};

namespace detail {
constexpr std::uint64_t kScanCap = 1u << 20;

/// Least n >= 1 with x <= w^(fs(alpha, n)); alpha limit, x < w^alpha.
inline std::uint64_t least_level(const Ordinal& alpha, const Ordinal& x) {
    for (std::uint64_t n = 1; n <= kScanCap; ++n) {
        if (!(omega_pow(fundamental_sequence(alpha, n)) < x)) return n;
    }
    throw Error("level scan exceeded iteration cap");
}
} // namespace detail

// ---------------------------------------------------------------------------
// The p_{i,j} system: disjoint pieces I_1..I_k inside [1, w^a) together with
// surjective order isomorphisms p_{i,j} : I_i -> (w^a (j-1), w^a j), realized
// blockwise by prefix translations. The composition law
// p_{w,j} o p_{w,v}^{-1} o p_{i,v} = p_{i,j} holds exactly because all four
// maps route through the same per-block canonical offset.
// ---------------------------------------------------------------------------

class PijSystem {
public:
    PijSystem(Ordinal alpha, std::uint64_t k) : alpha_(std::move(alpha)), k_(k) {
        if (alpha_.is_zero() || k_ < 2) throw Error("PijSystem requires alpha >= 1, k >= 2");
        successor_case_ = alpha_.is_successor();
        if (successor_case_) beta_ = predecessor(alpha_);
    }

    const Ordinal& alpha() const { return alpha_; }
    std::uint64_t k() const { return k_; }

    struct Located {
        std::uint64_t piece;  // i (source) or j (target)
        std::uint64_t block;  // n
        Ordinal offset;       // canonical offset within block n
    };

    /// x in I_i for which (i, n)? Empty when x lies in no piece.
    std::optional<Located> locate_source(const Ordinal& x) const {
        if (x.is_zero() || !(x < omega_pow(alpha_))) return std::nullopt;
        if (successor_case_) {
            auto [q, r] = divmod_base(x, beta_);
            // x in (w^b m, w^b (m+1)]
            BigNat m = r.is_zero() ? q.finite_value() - BigNat{1} : q.finite_value();
            if (m < BigNat{k_}) return std::nullopt; // leftover prefix [1, w^b k]
            BigNat n_big = m / BigNat{k_};
            std::uint64_t i = (m % BigNat{k_}).to_u64() + 1;
            Ordinal base = omega_pow(beta_) * Ordinal{m};
            return Located{i, n_big.to_u64(), left_subtract(base, x)};
        }
        // limit case: band n is the least with x <= w^(b_n) * k
        std::uint64_t n = 1;
        while (omega_pow(level(n)) * Ordinal{k_} < x) {
            if (++n > detail::kScanCap) throw Error("pij band scan exceeded cap");
        }
        Ordinal power = omega_pow(level(n));
        Ordinal prev = prev_power(n);
        if (!(power < x)) { // piece 1: I_{1,n} = [prev*k + 1, w^(b_n)]
            Ordinal sigma = prev * Ordinal{k_};
            if (!(sigma < x)) return std::nullopt; // below the band (n minimality gives x > sigma)
            return Located{1, n, prev + left_subtract(sigma, x)};
        }
        auto [q, r] = divmod_base(x, level(n));
        if (r.is_zero()) {
            std::uint64_t i = q.finite_value().to_u64();
            return Located{i, n, power};
        }
        std::uint64_t i = q.finite_value().to_u64() + 1;
        if (!(prev < r)) return std::nullopt; // gap between w^(b_n)(i-1) and +prev
        return Located{i, n, r};
    }

    /// y in (w^a (j-1), w^a j) for which (j, n)? Empty outside the target union.
    std::optional<Located> locate_target(const Ordinal& y) const {
        if (y.is_zero() || !(y < omega_pow(alpha_) * Ordinal{k_})) return std::nullopt;
        auto [q, rem] = divmod_base(y, alpha_);
        if (rem.is_zero()) return std::nullopt; // the points w^a * j are not in any J_j
        std::uint64_t j = q.finite_value().to_u64() + 1;
        if (successor_case_) {
            auto [qq, rr] = divmod_base(rem, beta_);
            BigNat m = rr.is_zero() ? qq.finite_value() - BigNat{1} : qq.finite_value();
            Ordinal base = omega_pow(beta_) * Ordinal{m};
            return Located{j, m.to_u64() + 1, left_subtract(base, rem)};
        }
        std::uint64_t n = 1;
        while (omega_pow(level(n)) < rem) {
            if (++n > detail::kScanCap) throw Error("pij band scan exceeded cap");
        }
        return Located{j, n, rem};
    }

    Ordinal source_point(std::uint64_t i, std::uint64_t n, const Ordinal& offset) const {
        check_piece(i);
        if (successor_case_) {
            BigNat m = BigNat{k_} * BigNat{n} + BigNat{i - 1};
            return omega_pow(beta_) * Ordinal{m} + offset;
        }
        if (i == 1) return prev_power(n) * Ordinal{k_} + left_subtract(prev_power(n), offset);
        return omega_pow(level(n)) * Ordinal{i - 1} + offset;
    }

    Ordinal target_point(std::uint64_t j, std::uint64_t n, const Ordinal& offset) const {
        check_piece(j);
        if (successor_case_) {
            return omega_pow(alpha_) * Ordinal{j - 1} + omega_pow(beta_) * Ordinal{n - 1} + offset;
        }
        return omega_pow(alpha_) * Ordinal{j - 1} + offset;
    }

    Ordinal map(std::uint64_t i, std::uint64_t j, const Ordinal& x) const {
        auto loc = locate_source(x);
        if (!loc || loc->piece != i)
            throw NotInUnion("p_{i,j}: point not in I_i");
        return target_point(j, loc->block, loc->offset);
    }

    Ordinal unmap(std::uint64_t i, std::uint64_t j, const Ordinal& y) const {
        auto loc = locate_target(y);
        if (!loc || loc->piece != j)
            throw NotInUnion("p_{i,j}^{-1}: point not in J_j");
        return source_point(i, loc->block, loc->offset);
    }

    /// Largest point of I_{i,n}; these tend to w^a as n grows and stay in I_i.
    Ordinal source_block_top(std::uint64_t i, std::uint64_t n) const {
        check_piece(i);
        if (successor_case_)
            return omega_pow(beta_) * Ordinal{BigNat{k_} * BigNat{n} + BigNat{i}};
        if (i == 1) return omega_pow(level(n));
        return omega_pow(level(n)) * Ordinal{i};
    }

    Ordinal source_block_min(std::uint64_t i, std::uint64_t n) const {
        check_piece(i);
        if (successor_case_)
            return omega_pow(beta_) * Ordinal{BigNat{k_} * BigNat{n} + BigNat{i - 1}} + Ordinal{1};
        if (i == 1) return prev_power(n) * Ordinal{k_} + Ordinal{1};
        return omega_pow(level(n)) * Ordinal{i - 1} + prev_power(n) + Ordinal{1};
    }

    PiecewiseTranslationMap p(std::uint64_t i, std::uint64_t j) const {
        check_piece(i);
        check_piece(j);
        PijSystem self = *this;
        auto fwd = [self, i, j](const Ordinal& x) -> std::optional<Ordinal> {
            auto loc = self.locate_source(x);
            if (!loc || loc->piece != i) return std::nullopt;
            return self.target_point(j, loc->block, loc->offset);
        };
        auto bwd = [self, i, j](const Ordinal& y) -> std::optional<Ordinal> {
            auto loc = self.locate_target(y);
            if (!loc || loc->piece != j) return std::nullopt;
            return self.source_point(i, loc->block, loc->offset);
        };
        auto blocks = [self, i, j](const Ordinal& x) -> std::optional<PiecewiseTranslationMap::BlockInfo> {
            auto loc = self.locate_source(x);
            if (!loc || loc->piece != i) return std::nullopt;
            PiecewiseTranslationMap::BlockInfo info;
            info.id = "n=" + std::to_string(loc->block);
            info.source_lo = self.source_block_min(i, loc->block);
            info.source_hi = self.source_block_top(i, loc->block);
            info.target_prefix = omega_pow(self.alpha_) * Ordinal{j - 1};
            return info;
        };
        std::string name = "p_{" + std::to_string(i) + "," + std::to_string(j) + "}";
        return PiecewiseTranslationMap{name, fwd, bwd, blocks};
    }

private:
    void check_piece(std::uint64_t i) const {
        if (i < 1 || i > k_) throw UnknownPiece("piece index out of range");
    }

    Ordinal level(std::uint64_t n) const { return fundamental_sequence(alpha_, n); }
    Ordinal prev_power(std::uint64_t n) const {
        return n == 1 ? Ordinal{} : omega_pow(level(n - 1));
    }

    Ordinal alpha_;
    std::uint64_t k_;
    bool successor_case_ = false;
    Ordinal beta_; // alpha - 1 in the successor case
};

inline PijSystem build_pij_system(const Ordinal& alpha, std::uint64_t k) {
    return PijSystem{alpha, k};
}

// ---------------------------------------------------------------------------
// Splitting [0, w^a) into countably many self-similar families I_1, I_2, ...
// Each family is a disjoint union of compact blocks laid out along the
// triangular enumeration, family minima tend to w^a.
// ---------------------------------------------------------------------------

class SplitFamily {
public:
    explicit SplitFamily(Ordinal alpha) : alpha_(std::move(alpha)) {
        if (alpha_.is_zero()) throw Error("SplitFamily requires alpha >= 1");
        successor_case_ = alpha_.is_successor();
        if (successor_case_) beta_ = predecessor(alpha_);
    }

    const Ordinal& alpha() const { return alpha_; }

    struct Piece {
        Ordinal lo, hi; // closed block; lo is 0 exactly for family 1, index 1
    };

    Piece piece(const BigNat& family, const BigNat& index) const {
        if (family.is_zero() || index.is_zero()) throw UnknownPiece("piece indices start at 1");
        if (successor_case_) {
            if (family == BigNat{1} && index == BigNat{1})
                return {Ordinal{}, omega_pow(beta_)};
            BigNat row = family + index - BigNat{2};
            BigNat m = row * (row + BigNat{1}) / BigNat{2} + (index - BigNat{1});
            return {omega_pow(beta_) * Ordinal{m} + Ordinal{1},
                    omega_pow(beta_) * Ordinal{m + BigNat{1}}};
        }
        if (family == BigNat{1} && index == BigNat{1})
            return {Ordinal{}, omega_pow(level(BigNat{1}))};
        BigNat row = family + index - BigNat{2};
        Ordinal row_power = omega_pow(level(row));
        Ordinal prev = index == BigNat{1} ? Ordinal{} : omega_pow(level(index - BigNat{1}));
        return {row_power + prev + Ordinal{1}, row_power + omega_pow(level(index))};
    }

    struct Location {
        BigNat family;
        BigNat index;
    };

    /// Which (family, index) block contains x? Throws NotInUnion above w^a.
    Location member(const Ordinal& x) const {
        if (!(x < omega_pow(alpha_)))
            throw NotInUnion("point is not below w^alpha");
        if (successor_case_) {
            if (x < omega_pow(beta_) + Ordinal{1}) return {BigNat{1}, BigNat{1}};
            auto [q, r] = divmod_base(x, beta_);
            BigNat m = r.is_zero() ? q.finite_value() - BigNat{1} : q.finite_value();
            // m = row(row+1)/2 + (index-1): invert the triangular enumeration
            BigNat row = triangular_row(m);
            BigNat offset = m - row * (row + BigNat{1}) / BigNat{2};
            return {row + BigNat{1} - offset, offset + BigNat{1}};
        }
        if (!(omega_pow(level(BigNat{1})) < x)) return {BigNat{1}, BigNat{1}};
        std::uint64_t n = 1;
        while (omega_pow(level(BigNat{n + 1})) < x) {
            if (++n > detail::kScanCap) throw Error("split band scan exceeded cap");
        }
        // x in (w^(b_n), w^(b_(n+1))]
        Ordinal rem = left_subtract(omega_pow(level(BigNat{n})), x);
        std::uint64_t c = 1;
        while (omega_pow(level(BigNat{c})) < rem) ++c;
        return {BigNat{n} + BigNat{2} - BigNat{c}, BigNat{c}};
    }

    Ordinal family_min(const BigNat& family) const {
        return piece(family, BigNat{1}).lo;
    }

private:
    friend class CoveringSplit;

    Ordinal level(const BigNat& n) const { return fundamental_sequence(alpha_, n); }

    static BigNat triangular_row(const BigNat& m) {
        BigNat lo{0}, hi{2};
        auto tri = [](const BigNat& r) { return r * (r + BigNat{1}) / BigNat{2}; };
        while (!(m < tri(hi))) hi = hi * BigNat{2};
        while (lo + BigNat{1} < hi) {
            BigNat mid = (lo + hi) / BigNat{2};
            if (m < tri(mid)) hi = mid; else lo = mid;
        }
        return lo;
    }

    Ordinal alpha_;
    bool successor_case_ = false;
    Ordinal beta_;
};

inline SplitFamily split_subintervals(const Ordinal& alpha) { return SplitFamily{alpha}; }

// ---------------------------------------------------------------------------
// Exact covers of [1, w^a) by translation-friendly families, one per tuple
// prefix, used by the operator constructions. Three layouts:
//   identity    -- a single family, rho is the identity
//   round_robin -- finitely many families, primitive blocks dealt cyclically
//   triangular  -- infinitely many families from the split above (family 1
//                  loses the point 0, which the ambient spaces never contain)
// rho_point(f, .) is the order isomorphism [1, w^a] -> closure(I_f) fixing
// w^a; locate is its inverse on [1, w^a).
// ---------------------------------------------------------------------------

class CoveringSplit {
public:
    enum class Kind { identity, round_robin, triangular };

    static CoveringSplit identity(Ordinal alpha) {
        CoveringSplit c{std::move(alpha)};
        c.kind_ = Kind::identity;
        return c;
    }
    static CoveringSplit round_robin(Ordinal alpha, const BigNat& families) {
        if (families.is_zero()) throw Error("round_robin needs at least one family");
        if (families == BigNat{1}) return identity(std::move(alpha));
        CoveringSplit c{std::move(alpha)};
        c.kind_ = Kind::round_robin;
        c.families_ = families;
        return c;
    }
    static CoveringSplit triangular(Ordinal alpha) {
        CoveringSplit c{std::move(alpha)};
        c.kind_ = Kind::triangular;
        c.split_ = std::make_shared<SplitFamily>(c.alpha_);
        return c;
    }

    Kind kind() const { return kind_; }
    const Ordinal& alpha() const { return alpha_; }

    Ordinal rho_point(const BigNat& family, const Ordinal& t) const {
        Ordinal top = omega_pow(alpha_);
        if (t.is_zero() || top < t) throw OutOfRange("rho argument outside [1, w^a]");
        if (t == top) return top; // required fixed point
        switch (kind_) {
        case Kind::identity:
            return t;
        case Kind::round_robin: {
            if (family.is_zero() || !(family < families_ + BigNat{1}))
                throw UnknownPiece("round robin family out of range");
            if (alpha_.is_successor()) {
                Ordinal beta = predecessor(alpha_);
                auto [q, r] = divmod_base(t, beta);
                BigNat c = r.is_zero() ? q.finite_value() - BigNat{1} : q.finite_value();
                BigNat m = c * families_ + (family - BigNat{1});
                Ordinal delta = left_subtract(omega_pow(beta) * Ordinal{c}, t);
                return omega_pow(beta) * Ordinal{m} + delta;
            }
            // domain block c maps to band m_c = (c-1)*families + family;
            // block boundaries are the assigned bands' levels
            BigNat c{1};
            std::uint64_t guard = 0;
            while (omega_pow(level((c - BigNat{1}) * families_ + family)) < t) {
                c = c + BigNat{1};
                if (++guard > detail::kScanCap) throw Error("rho band scan exceeded cap");
            }
            BigNat band = (c - BigNat{1}) * families_ + family;
            Ordinal sigma = c == BigNat{1}
                ? Ordinal{}
                : omega_pow(level((c - BigNat{2}) * families_ + family));
            Ordinal tau = band == BigNat{1} ? Ordinal{} : omega_pow(level(band - BigNat{1}));
            return tau + left_subtract(sigma, t);
        }
        case Kind::triangular: {
            if (alpha_.is_successor()) {
                Ordinal beta = predecessor(alpha_);
                auto [q, r] = divmod_base(t, beta);
                BigNat c = r.is_zero() ? q.finite_value() - BigNat{1} : q.finite_value();
                Ordinal delta = left_subtract(omega_pow(beta) * Ordinal{c}, t);
                BigNat row = family + c - BigNat{1}; // index = c+1 when c >= 1
                BigNat m = c.is_zero()
                    ? (family - BigNat{1}) * family / BigNat{2}
                    : row * (row + BigNat{1}) / BigNat{2} + c;
                return omega_pow(beta) * Ordinal{m} + delta;
            }
            std::uint64_t c = 1;
            while (omega_pow(level(BigNat{c})) < t) {
                if (++c > detail::kScanCap) throw Error("rho band scan exceeded cap");
            }
            Ordinal sigma = c == 1 ? Ordinal{} : omega_pow(level(BigNat{c - 1}));
            Ordinal delta = left_subtract(sigma, t);
            BigNat row = family + BigNat{c} - BigNat{2};
            Ordinal tau = (family == BigNat{1} && c == 1)
                ? Ordinal{}
                : omega_pow(level(row)) + sigma;
            return tau + delta;
        }
        }
        throw Error("unreachable");
    }

    struct Located {
        BigNat family;
        Ordinal t; // rho_point(family, t) == x
    };

    Located locate(const Ordinal& x) const {
        if (x.is_zero() || !(x < omega_pow(alpha_)))
            throw NotInUnion("locate requires x in [1, w^a)");
        switch (kind_) {
        case Kind::identity:
            return {BigNat{1}, x};
        case Kind::round_robin: {
            if (alpha_.is_successor()) {
                Ordinal beta = predecessor(alpha_);
                auto [q, r] = divmod_base(x, beta);
                BigNat m = r.is_zero() ? q.finite_value() - BigNat{1} : q.finite_value();
                BigNat family = m % families_ + BigNat{1};
                BigNat c = m / families_;
                Ordinal delta = left_subtract(omega_pow(beta) * Ordinal{m}, x);
                return {family, omega_pow(beta) * Ordinal{c} + delta};
            }
            std::uint64_t band = 1;
            while (omega_pow(level(BigNat{band})) < x) {
                if (++band > detail::kScanCap) throw Error("locate band scan exceeded cap");
            }
            BigNat family = (BigNat{band} - BigNat{1}) % families_ + BigNat{1};
            BigNat c = (BigNat{band} - BigNat{1}) / families_ + BigNat{1};
            Ordinal tau = band == 1 ? Ordinal{} : omega_pow(level(BigNat{band - 1}));
            // previous band assigned to this family sits b slots earlier
            Ordinal sigma = c == BigNat{1}
                ? Ordinal{}
                : omega_pow(level(BigNat{band} - families_));
            return {family, sigma + left_subtract(tau, x)};
        }
        case Kind::triangular: {
            auto loc = split_->member(x);
            auto blk = split_->piece(loc.family, loc.index);
            Ordinal base = blk.lo.is_zero() ? Ordinal{} : predecessor(blk.lo);
            Ordinal delta = left_subtract(base, x);
            Ordinal sigma;
            if (!alpha_.is_successor() && !(loc.index == BigNat{1}))
                sigma = omega_pow(level(loc.index - BigNat{1}));
            return {loc.family, sigma_for(loc.index, sigma) + delta};
        }
        }
        throw Error("unreachable");
    }

    Ordinal family_min(const BigNat& family) const {
        switch (kind_) {
        case Kind::identity:
            return Ordinal{1};
        case Kind::round_robin:
            if (alpha_.is_successor())
                return omega_pow(predecessor(alpha_)) * Ordinal{family - BigNat{1}} + Ordinal{1};
            return family == BigNat{1}
                ? Ordinal{1}
                : omega_pow(level(family - BigNat{1})) + Ordinal{1};
        case Kind::triangular: {
            Ordinal lo = split_->family_min(family);
            return lo.is_zero() ? Ordinal{1} : lo; // family 1 lost its 0
        }
        }
        throw Error("unreachable");
    }

private:
    explicit CoveringSplit(Ordinal alpha) : alpha_(std::move(alpha)) {
        if (alpha_.is_zero()) throw Error("CoveringSplit requires alpha >= 1");
    }

    Ordinal level(const BigNat& n) const { return fundamental_sequence(alpha_, n); }

    Ordinal sigma_for(const BigNat& index, const Ordinal& sigma) const {
        if (alpha_.is_successor())
            return omega_pow(predecessor(alpha_)) * Ordinal{index - BigNat{1}};
        return sigma;
    }

    Kind kind_ = Kind::identity;
    Ordinal alpha_;
    BigNat families_{1};
    std::shared_ptr<const SplitFamily> split_;
};

/// The order isomorphism [1, w^a] -> closure(I_family) for a covering split,
/// fixing w^a, packaged with its inverse.
inline PiecewiseTranslationMap rho_homeomorphism(std::shared_ptr<const CoveringSplit> cover,
                                                 const BigNat& family) {
    if (!cover) throw Error("rho_homeomorphism: null cover");
    Ordinal top = omega_pow(cover->alpha());
    auto fwd = [cover, family, top](const Ordinal& t) -> std::optional<Ordinal> {
        if (t.is_zero() || top < t) return std::nullopt;
        return cover->rho_point(family, t);
    };
    auto bwd = [cover, family, top](const Ordinal& y) -> std::optional<Ordinal> {
        if (y == top) return top;
        if (y.is_zero() || top < y) return std::nullopt;
        auto loc = cover->locate(y);
        if (!(loc.family == family)) return std::nullopt;
        return loc.t;
    };
    auto blocks = [cover, family, top](const Ordinal& t) -> std::optional<PiecewiseTranslationMap::BlockInfo> {
        if (t.is_zero() || top < t) return std::nullopt;
        PiecewiseTranslationMap::BlockInfo info;
        info.id = "rho";
        info.source_lo = Ordinal{1};
        info.source_hi = top;
        info.target_prefix = cover->rho_point(family, t);
        return info;
    };
    std::string name = "rho_" + family.to_string();
    return PiecewiseTranslationMap{name, fwd, bwd, blocks};
}

/// Convenience form over the canonical triangular cover of [1, w^a).
inline PiecewiseTranslationMap rho_homeomorphism(const Ordinal& alpha, const BigNat& family) {
    if (family.is_zero()) throw UnknownPiece("family indices start at 1");
    auto cover = std::make_shared<const CoveringSplit>(CoveringSplit::triangular(alpha));
    return rho_homeomorphism(std::move(cover), family);
}

// ---------------------------------------------------------------------------
// Registration table: a partial bijection between tuple prefixes and family
// indices, extended on demand from either side. Prefix-side queries take the
// smallest free family; family-side queries take the next unused prefix from
// a deterministic candidate stream supplied by the construction. Concurrent
// registrations see a consistent table.
// ---------------------------------------------------------------------------

class TupleRegistry {
public:
    using CandidateFn = std::function<std::vector<Ordinal>(std::uint64_t)>;

    explicit TupleRegistry(CandidateFn candidates) : candidates_(std::move(candidates)) {}

    BigNat family_for(const std::vector<Ordinal>& prefix) {
        std::scoped_lock lock(mu_);
        auto it = by_prefix_.find(prefix);
        if (it != by_prefix_.end()) return it->second;
        while (by_family_.count(next_family_)) next_family_ = next_family_ + BigNat{1};
        BigNat f = next_family_;
        bind(prefix, f);
        return f;
    }

    std::vector<Ordinal> prefix_for(const BigNat& family) {
        std::scoped_lock lock(mu_);
        auto it = by_family_.find(family);
        if (it != by_family_.end()) return it->second;
        while (true) {
            std::vector<Ordinal> cand = candidates_(candidate_cursor_++);
            if (!by_prefix_.count(cand)) {
                bind(cand, family);
                return cand;
            }
        }
    }

    std::size_t size() const {
        std::scoped_lock lock(mu_);
        return by_prefix_.size();
    }

private:
    void bind(const std::vector<Ordinal>& prefix, const BigNat& family) {
        by_prefix_.emplace(prefix, family);
        by_family_.emplace(family, prefix);
    }

    struct PrefixLess {
        bool operator()(const std::vector<Ordinal>& a, const std::vector<Ordinal>& b) const {
            if (a.size() != b.size()) return a.size() < b.size();
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] < b[i]) return true;
                if (b[i] < a[i]) return false;
            }
            return false;
        }
    };

    CandidateFn candidates_;
    std::map<std::vector<Ordinal>, BigNat, PrefixLess> by_prefix_;
    std::map<BigNat, std::vector<Ordinal>> by_family_;
    BigNat next_family_{1};
    std::uint64_t candidate_cursor_ = 0;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Tuple coordinates for the interval [1, w^(a n) b] (with_beta) or
// [1, w^(a n)] (power_only, whose maximum is a dedicated top marker).
// encode/decode are mutually inverse and agree with the lexicographic order.
// ---------------------------------------------------------------------------

struct TupleTheta {
    std::vector<Ordinal> coords;
    bool is_top = false; // the w^(a n) marker of the power_only variant

    std::size_t length() const { return is_top ? 1 : coords.size(); }
};

class TupleCodec {
public:
    enum class Variant { with_beta, power_only };

    TupleCodec(Variant v, Ordinal alpha, std::uint64_t n, std::optional<Ordinal> beta)
        : variant_(v), alpha_(std::move(alpha)), n_(n), beta_(std::move(beta)) {
        if (alpha_.is_zero() || n_ == 0) throw Error("TupleCodec requires alpha >= 1, n >= 1");
        if (variant_ == Variant::with_beta && (!beta_ || beta_->is_zero()))
            throw Error("with_beta variant requires beta >= 1");
    }

    Variant variant() const { return variant_; }
    const Ordinal& alpha() const { return alpha_; }
    std::uint64_t n() const { return n_; }

    Ordinal top() const {
        Ordinal power = omega_pow(alpha_ * Ordinal{n_});
        return variant_ == Variant::with_beta ? power * *beta_ : power;
    }

    TupleTheta decode(const Ordinal& y) const {
        TupleTheta t;
        if (variant_ == Variant::power_only && y == top()) {
            t.is_top = true;
            return t;
        }
        DigitExpansion d = variant_ == Variant::with_beta
            ? digits_base_bounded(y, alpha_, n_, *beta_)
            : digits_base_power(y, alpha_, n_);
        t.coords = std::move(d.digits);
        return t;
    }

    Ordinal encode(const TupleTheta& t) const {
        if (t.is_top) {
            if (variant_ != Variant::power_only)
                throw OutOfRange("top marker only exists in the power_only variant");
            return top();
        }
        if (t.coords.empty() || t.coords.back().is_zero())
            throw OutOfRange("tuples must end in a nonzero coordinate");
        const std::size_t max_len = variant_ == Variant::with_beta ? n_ + 1 : n_;
        if (t.coords.size() > max_len) throw OutOfRange("tuple longer than the variant allows");
        for (std::size_t i = 0; i < t.coords.size(); ++i) {
            const bool first = i == 0;
            if (variant_ == Variant::with_beta && first) {
                if (*beta_ < t.coords[0]) throw OutOfRange("first coordinate above beta");
                if (t.coords[0] == *beta_ && t.coords.size() > 1)
                    throw OutOfRange("(beta, ...) only the length-1 top tuple is admissible");
            } else if (!(t.coords[i] < omega_pow(alpha_))) {
                throw OutOfRange("coordinate not below w^a");
            }
        }
        return variant_ == Variant::with_beta
            ? from_digits_bounded(t.coords, alpha_, n_)
            : from_digits_power(t.coords, alpha_, n_);
    }

    /// Lexicographic order with "proper prefix precedes extension".
    static bool lex_less(const TupleTheta& a, const TupleTheta& b) {
        if (a.is_top || b.is_top) return !a.is_top && b.is_top;
        const std::size_t n = std::min(a.coords.size(), b.coords.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coords[i] < b.coords[i]) return true;
            if (b.coords[i] < a.coords[i]) return false;
        }
        return a.coords.size() < b.coords.size();
    }

private:
    Variant variant_;
    Ordinal alpha_;
    std::uint64_t n_;
    std::optional<Ordinal> beta_;
};

} // namespace ckord
