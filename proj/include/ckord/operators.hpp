#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckord/decomp.hpp"
#include "ckord/optimal_weights.hpp"
#include "ckord/step_function.hpp"

namespace ckord {

template <class S> inline bool scalar_eq(const S& a, const S& b) { return a == b; }
template <> inline bool scalar_eq<double>(const double& a, const double& b) {
    return std::abs(a - b) <= 1e-9;
}
template <class S> inline double scalar_to_double(const S& v) { return v.to_double(); }
template <> inline double scalar_to_double<double>(const double& v) { return v; }

/// f |-> sum w_i * f(p_i) with distinct evaluation points.
template <class S>
struct PointFunctional {
    std::vector<std::pair<S, Ordinal>> terms;

    void add(S w, Ordinal p) {
        for (auto& [weight, point] : terms) {
            if (point == p) {
                weight = weight + w;
                return;
            }
        }
        terms.emplace_back(std::move(w), std::move(p));
    }

    S evaluate(const StepFunction<S>& f) const {
        S acc{0};
        for (const auto& [w, p] : terms) acc = acc + w * f.evaluate(p);
        return acc;
    }
};

/// One region of a finite decomposition of the codomain: all rows inside a
/// region share the same weight profile, only the evaluation points move.
template <class S>
struct Region {
    struct Hull {
        S weight;
        Ordinal lo, hi; // the component's evaluation point stays in [lo, hi]
    };

    std::string name;
    std::function<bool(const Ordinal&)> contains;
    std::function<PointFunctional<S>(const Ordinal&)> row;
    std::vector<S> weights;      // declared profile, aligned with row term order
    std::vector<Hull> hulls;     // aligned with weights
    std::vector<Ordinal> probes; // representative points of the region

    S weight_sum() const {
        S acc{0};
        for (const auto& w : weights) acc = acc + w;
        return acc;
    }
    S abs_weight_sum() const {
        S acc{0};
        for (const auto& w : weights) acc = acc + scalar_abs(w);
        return acc;
    }
};

/// Positive-isomorphism style operator between spaces of functions on
/// ordinal intervals, given by a finite region decomposition. Immutable
/// after construction; all evaluation is pure.
template <class S>
class CkOperator {
public:
    std::string name;
    Ordinal domain_top;
    Ordinal codomain_top;                 // top of the enclosing interval
    std::vector<Region<S>> regions;
    bool domain_vanishes_at_top = false;  // domain is the vanishing-at-top subspace

    // codomain space model: by default the whole interval [1, codomain_top];
    // subset codomains (unions of blocks plus glue points) override these
    std::function<bool(const Ordinal&)> codomain_member;
    std::function<std::optional<Ordinal>(const Ordinal&, std::uint64_t)> approach_override;
    std::vector<Ordinal> limit_samples;

    std::optional<S> claimed_norm;        // published bound for this operator

    bool contains_codomain_point(const Ordinal& y) const {
        if (y.is_zero() || codomain_top < y) return false;
        return codomain_member ? codomain_member(y) : true;
    }

    /// m-th member of the canonical approach sequence to a limit point of
    /// the codomain; empty when that member falls outside the space.
    std::optional<Ordinal> approach(const Ordinal& y, std::uint64_t m) const {
        if (approach_override) return approach_override(y, m);
        Ordinal x = fundamental_sequence(y, m);
        if (!contains_codomain_point(x)) return std::nullopt;
        return x;
    }

    const Region<S>& region_at(const Ordinal& y) const {
        if (contains_codomain_point(y))
            for (const auto& r : regions)
                if (r.contains(y)) return r;
        throw OutOfDomain("operator has no region containing the point");
    }

    std::size_t region_index_at(const Ordinal& y) const {
        if (contains_codomain_point(y))
            for (std::size_t i = 0; i < regions.size(); ++i)
                if (regions[i].contains(y)) return i;
        throw OutOfDomain("operator has no region containing the point");
    }

    PointFunctional<S> row_at(const Ordinal& y) const { return region_at(y).row(y); }

    S apply(const StepFunction<S>& f, const Ordinal& y) const {
        if (!(f.domain_top() == domain_top))
            throw DomainMismatch("function lives on a different interval than the operator domain");
        return row_at(y).evaluate(f);
    }

    /// Exact operator norm: the largest region sum of absolute weights.
    /// Regions whose probe rows contradict the declared profile are rejected.
    S op_norm() const {
        S best{0};
        for (const auto& r : regions) {
            validate_region(r);
            S s = r.abs_weight_sum();
            if (best < s) best = s;
        }
        return best;
    }

    bool positive() const {
        for (const auto& r : regions)
            for (const auto& w : r.weights)
                if (w < S{0}) return false;
        return true;
    }

    bool unital() const {
        for (const auto& r : regions)
            if (!scalar_eq(r.weight_sum(), S{1})) return false;
        return true;
    }

    bool row_sums_region_constant() const { return true; } // by the profile invariant

private:
    void validate_region(const Region<S>& r) const {
        for (const auto& p : r.probes) {
            PointFunctional<S> pf = r.row(p);
            std::vector<S> got;
            for (const auto& [w, pt] : pf.terms) got.push_back(scalar_abs(w));
            std::vector<S> want;
            for (const auto& w : r.weights) want.push_back(scalar_abs(w));
            auto less = [](const S& a, const S& b) { return a < b; };
            std::sort(got.begin(), got.end(), less);
            std::sort(want.begin(), want.end(), less);
            if (got.size() != want.size())
                throw RegionInvariantViolated("row arity differs from the declared profile in " +
                                              r.name);
            for (std::size_t i = 0; i < got.size(); ++i)
                if (!scalar_eq(got[i], want[i]))
                    throw RegionInvariantViolated("row weights differ from the declared profile in " +
                                                  r.name);
        }
    }
};

template <class S>
struct OperatorPair {
    CkOperator<S> forward;  // the positive operator T
    CkOperator<S> inverse;  // its two-sided inverse S
};

template <class S>
inline S distortion(const OperatorPair<S>& pair) {
    return pair.forward.op_norm() * pair.inverse.op_norm();
}

/// Returns a copy with one weight of one region nudged by delta (both the
/// rows and the declared profile move together).
template <class S>
CkOperator<S> perturb_weight(const CkOperator<S>& op, std::size_t region_index,
                             std::size_t component, const S& delta) {
    if (region_index >= op.regions.size())
        throw Error("perturb_weight: region index out of range");
    CkOperator<S> out = op;
    Region<S>& r = out.regions[region_index];
    if (component >= r.weights.size())
        throw Error("perturb_weight: component out of range");
    r.weights[component] = r.weights[component] + delta;
    auto base = r.row;
    r.row = [base, component, delta](const Ordinal& y) {
        PointFunctional<S> pf = base(y);
        if (component < pf.terms.size())
            pf.terms[component].first = pf.terms[component].first + delta;
        return pf;
    };
    out.name += " (perturbed)";
    return out;
}

namespace detail {

template <class S>
void check_simplex(const std::vector<S>& lambda) {
    if (lambda.empty()) throw BadWeights("empty weight vector");
    S sum{0};
    for (const auto& l : lambda) {
        if (!(S{0} < l)) throw BadWeights("weights must be strictly positive");
        if (S{1} < l) throw BadWeights("weights must lie in (0, 1]");
        sum = sum + l;
    }
    if (!scalar_eq(sum, S{1})) throw BadWeights("weights must sum to 1");
}

/// Exact tail sum lambda_{l+1} + ... + lambda_n (zero for l = n); used for
/// the residual mass on the top point so it vanishes exactly at full depth.
template <class S>
S tail_sum(const std::vector<S>& lambda, std::size_t l) {
    S acc{0};
    for (std::size_t i = l; i < lambda.size(); ++i) acc = acc + lambda[i];
    return acc;
}

} // namespace detail

// ---------------------------------------------------------------------------
// The coefficient-folding pair: T : C[1, w^a k] -> C(I union {w^a + i}) with
// S its two-sided inverse built from the three-term closed formula.
// T is positive and unital; ||S|| = max(2/l_k - 1, 1 + 2/l_j for j < k).
// ---------------------------------------------------------------------------

template <class S>
OperatorPair<S> build_tk(const Ordinal& alpha, std::uint64_t k, const std::vector<S>& lambda,
                         std::string tag = {}) {
    if (k < 2) throw Error("build_tk requires k >= 2");
    if (lambda.size() != k) throw BadWeights("build_tk needs k weights");
    detail::check_simplex(lambda);
    auto pij = std::make_shared<const PijSystem>(alpha, k);
    const Ordinal W = omega_pow(alpha);
    if (tag.empty()) tag = "tk(alpha=" + format_ordinal(alpha) + ",k=" + std::to_string(k) + ")";

    OperatorPair<S> out;
    CkOperator<S>& T = out.forward;
    T.name = tag;
    T.domain_top = W * Ordinal{k};
    T.codomain_top = W + Ordinal{k - 1};
    T.codomain_member = [pij, W](const Ordinal& y) {
        if (!(y < W)) return true; // W itself or one of the points W + i
        return pij->locate_source(y).has_value();
    };

    for (std::uint64_t j = 1; j <= k - 1; ++j) {
        Region<S> r;
        r.name = "top_point_" + std::to_string(j);
        Ordinal point = W + Ordinal{j};
        Ordinal image = W * Ordinal{j};
        r.contains = [point](const Ordinal& y) { return y == point; };
        r.row = [image](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, image);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, image, image}};
        r.probes = {point};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "glue";
        r.contains = [W](const Ordinal& y) { return y == W; };
        std::vector<std::pair<S, Ordinal>> terms;
        for (std::uint64_t j = 1; j <= k; ++j) terms.emplace_back(lambda[j - 1], W * Ordinal{j});
        r.row = [terms](const Ordinal&) {
            PointFunctional<S> pf;
            for (const auto& [w, p] : terms) pf.add(w, p);
            return pf;
        };
        for (const auto& [w, p] : terms) {
            r.weights.push_back(w);
            r.hulls.push_back({w, p, p});
        }
        r.probes = {W};
        T.regions.push_back(std::move(r));
    }
    for (std::uint64_t i = 1; i <= k; ++i) {
        Region<S> r;
        r.name = "piece_" + std::to_string(i);
        r.contains = [pij, i](const Ordinal& y) {
            auto loc = pij->locate_source(y);
            return loc && loc->piece == i;
        };
        std::vector<S> lam = lambda;
        r.row = [pij, i, lam, k, W](const Ordinal& y) {
            PointFunctional<S> pf;
            for (std::uint64_t j = i; j <= k; ++j) pf.add(lam[j - 1], pij->map(i, j, y));
            for (std::uint64_t j = 1; j < i; ++j) pf.add(lam[j - 1], W * Ordinal{j});
            return pf;
        };
        for (std::uint64_t j = i; j <= k; ++j) {
            r.weights.push_back(lambda[j - 1]);
            r.hulls.push_back({lambda[j - 1], W * Ordinal{j - 1} + Ordinal{1}, W * Ordinal{j}});
        }
        for (std::uint64_t j = 1; j < i; ++j) {
            r.weights.push_back(lambda[j - 1]);
            r.hulls.push_back({lambda[j - 1], W * Ordinal{j}, W * Ordinal{j}});
        }
        r.probes = {pij->source_block_min(i, 1), pij->source_block_top(i, 2)};
        T.regions.push_back(std::move(r));
    }
    T.approach_override = [pij, k, W](const Ordinal& y, std::uint64_t m) -> std::optional<Ordinal> {
        if (y == W) // approach the glue point through the pieces' block tops
            return pij->source_block_top(1 + (m - 1) % k, 1 + (m - 1) / k);
        Ordinal x = fundamental_sequence(y, m);
        if (x == W || !(x < W)) return std::nullopt;
        auto loc = pij->locate_source(x);
        if (!loc) return std::nullopt;
        return x;
    };
    T.limit_samples.push_back(W);
    for (std::uint64_t i = 1; i <= k; ++i) {
        Ordinal top = pij->source_block_top(i, 2);
        if (top.is_limit()) T.limit_samples.push_back(top);
    }
    T.claimed_norm = S{1};

    CkOperator<S>& Sop = out.inverse;
    Sop.name = tag + " inverse";
    Sop.domain_top = T.codomain_top;
    Sop.codomain_top = T.domain_top;
    for (std::uint64_t j = 1; j <= k - 1; ++j) {
        Region<S> r;
        r.name = "endpoint_" + std::to_string(j);
        Ordinal point = W * Ordinal{j};
        Ordinal source = W + Ordinal{j};
        r.contains = [point](const Ordinal& y) { return y == point; };
        r.row = [source](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, source);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, source, source}};
        r.probes = {point};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "endpoint_" + std::to_string(k);
        Ordinal point = W * Ordinal{k};
        std::vector<S> lam = lambda;
        r.contains = [point](const Ordinal& y) { return y == point; };
        r.row = [lam, k, W](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1} / lam[k - 1], W);
            for (std::uint64_t j = 1; j < k; ++j)
                pf.add(S{0} - lam[j - 1] / lam[k - 1], W + Ordinal{j});
            return pf;
        };
        r.weights.push_back(S{1} / lambda[k - 1]);
        r.hulls.push_back({r.weights[0], W, W});
        for (std::uint64_t j = 1; j < k; ++j) {
            S w = S{0} - lambda[j - 1] / lambda[k - 1];
            r.weights.push_back(w);
            r.hulls.push_back({w, W + Ordinal{j}, W + Ordinal{j}});
        }
        r.probes = {point};
        Sop.regions.push_back(std::move(r));
    }
    for (std::uint64_t l = 1; l <= k; ++l) {
        Region<S> r;
        r.name = "block_" + std::to_string(l);
        const Ordinal lo = W * Ordinal{l - 1};
        const Ordinal hi = W * Ordinal{l};
        r.contains = [lo, hi](const Ordinal& y) { return lo < y && y < hi; };
        std::vector<S> lam = lambda;
        if (l < k) {
            r.row = [pij, l, lam, W](const Ordinal& y) {
                Ordinal x1 = pij->unmap(l, l, y);
                Ordinal x2 = pij->unmap(l + 1, l + 1, pij->map(l, l + 1, x1));
                PointFunctional<S> pf;
                pf.add(S{1} / lam[l - 1], x1);
                pf.add(S{1}, W + Ordinal{l});
                pf.add(S{0} - S{1} / lam[l - 1], x2);
                return pf;
            };
            r.weights = {S{1} / lambda[l - 1], S{1}, S{0} - S{1} / lambda[l - 1]};
            r.hulls = {{r.weights[0], Ordinal{1}, W},
                       {S{1}, W + Ordinal{l}, W + Ordinal{l}},
                       {r.weights[2], Ordinal{1}, W}};
        } else {
            r.row = [pij, lam, k, W](const Ordinal& y) {
                PointFunctional<S> pf;
                pf.add(S{1} / lam[k - 1], pij->unmap(k, k, y));
                for (std::uint64_t j = 1; j < k; ++j)
                    pf.add(S{0} - lam[j - 1] / lam[k - 1], W + Ordinal{j});
                return pf;
            };
            r.weights.push_back(S{1} / lambda[k - 1]);
            r.hulls.push_back({r.weights[0], Ordinal{1}, W});
            for (std::uint64_t j = 1; j < k; ++j) {
                S w = S{0} - lambda[j - 1] / lambda[k - 1];
                r.weights.push_back(w);
                r.hulls.push_back({w, W + Ordinal{j}, W + Ordinal{j}});
            }
        }
        r.probes = {lo + Ordinal{1}, pij->map(1, l, pij->source_block_top(1, 3))};
        Sop.regions.push_back(std::move(r));
    }
    {
        // ||S|| <= max(2/l_k - 1, 1 + 2/l_j)
        S claimed = S{2} / lambda[k - 1] - S{1};
        for (std::uint64_t l = 1; l < k; ++l) {
            S c = S{1} + S{2} / lambda[l - 1];
            if (claimed < c) claimed = c;
        }
        Sop.claimed_norm = claimed;
    }
    for (std::uint64_t j = 1; j <= k; ++j) Sop.limit_samples.push_back(W * Ordinal{j});
    return out;
}

// ---------------------------------------------------------------------------
// Exponent-stretching pairs built on tuple coordinates. The shared context
// resolves tuples to points through the covering split and the registration
// table; T and S of one pair share the context, so their rho assignments
// agree.
// ---------------------------------------------------------------------------

namespace detail {

struct PowerContext {
    TupleCodec codec;
    std::shared_ptr<const CoveringSplit> cover;
    std::shared_ptr<TupleRegistry> registry; // null when the cover is structural
    Ordinal alpha;
    Ordinal w_alpha;   // w^a, the domain's distinguished limit point
    Ordinal tail_base; // with_beta: rho of length-1 tuples is tail_base + g_1
    bool with_beta = false;
    Ordinal beta;      // with_beta only

    BigNat family_for_prefix(const std::vector<Ordinal>& prefix) const {
        if (cover->kind() == CoveringSplit::Kind::identity) {
            // single family; the construction uses exactly one prefix
            return BigNat{1};
        }
        if (cover->kind() == CoveringSplit::Kind::round_robin) {
            if (prefix.size() != 1 || !prefix[0].is_finite())
                throw Error("round robin cover expects finite length-1 prefixes");
            return prefix[0].finite_value() + BigNat{1};
        }
        return registry->family_for(prefix);
    }

    std::vector<Ordinal> prefix_for_family(const BigNat& family) const {
        if (cover->kind() == CoveringSplit::Kind::identity)
            return with_beta ? std::vector<Ordinal>{Ordinal{}} : std::vector<Ordinal>{};
        if (cover->kind() == CoveringSplit::Kind::round_robin)
            return {Ordinal{family - BigNat{1}}};
        return registry->prefix_for(family);
    }

    /// rho of a tuple: length-1 tuples go to the tail (with_beta) or through
    /// the empty prefix's family (power form); longer tuples through their
    /// prefix's family.
    Ordinal rho(const TupleTheta& t) const {
        if (t.is_top) return w_alpha;
        const std::size_t l = t.coords.size();
        if (with_beta && l == 1) return tail_base + t.coords[0];
        std::vector<Ordinal> prefix(t.coords.begin(), t.coords.end() - 1);
        if (!with_beta && l == 1) prefix.clear();
        return cover->rho_point(family_for_prefix(prefix), t.coords.back());
    }

    /// Inverse of rho on [1, w^a) union the tail.
    TupleTheta rho_inverse(const Ordinal& x) const {
        TupleTheta t;
        if (with_beta && w_alpha < x) {
            t.coords = {left_subtract(tail_base, x)};
            return t;
        }
        auto loc = cover->locate(x);
        t.coords = prefix_for_family(loc.family);
        t.coords.push_back(loc.t);
        return t;
    }
};

inline TupleTheta truncate_plus_one(const TupleTheta& t, std::size_t i) {
    TupleTheta out;
    out.coords.assign(t.coords.begin(), t.coords.begin() + i);
    out.coords.back() = out.coords.back() + Ordinal{1};
    return out;
}

/// A valid tuple of the given depth, for region probes: all coordinates 1,
/// except that a longer with_beta tuple keeps its first coordinate below
/// beta (0 when beta = 1).
inline TupleTheta make_depth_probe(const PowerContext& ctx, std::uint64_t depth) {
    TupleTheta probe;
    for (std::uint64_t i = 0; i < depth; ++i) probe.coords.push_back(Ordinal{1});
    if (ctx.with_beta && depth > 1 && !(Ordinal{1} < ctx.beta))
        probe.coords[0] = Ordinal{};
    return probe;
}

template <class S>
void add_power_regions(CkOperator<S>& T, std::shared_ptr<const PowerContext> ctx,
                       const std::vector<S>& lambda, std::uint64_t depth) {
    const Ordinal top = ctx->codec.top();
    const bool top_is_tuple = ctx->with_beta; // power form keeps a separate top marker
    for (std::uint64_t l = 1; l <= depth; ++l) {
        Region<S> r;
        r.name = "depth_" + std::to_string(l);
        auto codec = ctx->codec;
        r.contains = [codec, top, l, top_is_tuple](const Ordinal& y) {
            if (y.is_zero() || top < y) return false;
            if (y == top && !top_is_tuple) return false;
            return codec.decode(y).length() == l;
        };
        std::vector<S> lam = lambda;
        r.row = [ctx, lam, l](const Ordinal& y) {
            TupleTheta t = ctx->codec.decode(y);
            PointFunctional<S> pf;
            S residual = tail_sum(lam, l);
            if (!(residual == S{0})) pf.add(residual, ctx->w_alpha);
            for (std::uint64_t i = 1; i < l; ++i)
                pf.add(lam[i - 1], ctx->rho(truncate_plus_one(t, i)));
            pf.add(lam[l - 1], ctx->rho(t));
            return pf;
        };
        S residual = tail_sum(lambda, l);
        if (!(residual == S{0})) {
            r.weights.push_back(residual);
            r.hulls.push_back({residual, ctx->w_alpha, ctx->w_alpha});
        }
        for (std::uint64_t i = 1; i <= l; ++i) {
            r.weights.push_back(lambda[i - 1]);
            r.hulls.push_back({lambda[i - 1], Ordinal{1}, T.domain_top});
        }
        r.probes = {ctx->codec.encode(make_depth_probe(*ctx, l))};
        T.regions.push_back(std::move(r));
    }
}

template <class S>
void add_power_inverse_regions(CkOperator<S>& Sop, std::shared_ptr<const PowerContext> ctx,
                               const std::vector<S>& lambda, const Ordinal& top_image) {
    // regions of the inverse, one per tuple depth over [1, w^a) plus the
    // tail when present
    const Ordinal W = ctx->w_alpha;
    const std::uint64_t depth = lambda.size();
    for (std::uint64_t l = 1; l <= depth; ++l) {
        Region<S> r;
        r.name = "depth_" + std::to_string(l);
        auto ctx_local = ctx;
        const bool tail_region = ctx->with_beta && l == 1;
        r.contains = [ctx_local, W, l, tail_region](const Ordinal& x) {
            if (x.is_zero()) return false;
            if (tail_region) return W < x;
            if (!(x < W) || (ctx_local->with_beta && l == 1)) return false;
            return ctx_local->rho_inverse(x).coords.size() == l;
        };
        std::vector<S> lam = lambda;
        r.row = [ctx_local, lam, l, top_image](const Ordinal& x) {
            TupleTheta t = ctx_local->rho_inverse(x);
            PointFunctional<S> pf;
            if (l == 1) {
                pf.add(S{1} - S{1} / lam[0], top_image);
                pf.add(S{1} / lam[0], ctx_local->codec.encode(t));
            } else {
                pf.add(S{1}, top_image);
                pf.add(S{1} / lam[l - 1], ctx_local->codec.encode(t));
                pf.add(S{0} - S{1} / lam[l - 1], ctx_local->codec.encode(truncate_plus_one(t, l - 1)));
            }
            return pf;
        };
        if (l == 1) {
            r.weights = {S{1} - S{1} / lambda[0], S{1} / lambda[0]};
            r.hulls = {{r.weights[0], top_image, top_image},
                       {r.weights[1], Ordinal{1}, top_image}};
        } else {
            r.weights = {S{1}, S{1} / lambda[l - 1], S{0} - S{1} / lambda[l - 1]};
            r.hulls = {{S{1}, top_image, top_image},
                       {r.weights[1], Ordinal{1}, top_image},
                       {r.weights[2], Ordinal{1}, top_image}};
        }
        // probe: rho of a canonical tuple of this depth
        r.probes = {ctx->rho(make_depth_probe(*ctx, l))};
        Sop.regions.push_back(std::move(r));
    }
    // ||S|| <= max(2/l_1 - 1, 2/l_i + 1)
    S claimed = S{2} / lambda[0] - S{1};
    for (std::size_t i = 1; i < lambda.size(); ++i) {
        S c = S{2} / lambda[i] + S{1};
        if (claimed < c) claimed = c;
    }
    Sop.claimed_norm = claimed;
}

} // namespace detail

/// T : C[1, w^a] -> C[1, w^(a n)] through depth-n tuple coordinates, with S
/// its two-sided inverse; distortion at the optimal weights is
/// n + sqrt((n-1)(n+3)).
template <class S>
OperatorPair<S> build_power_iso(const Ordinal& alpha, std::uint64_t n,
                                const std::vector<S>& lambda) {
    if (n == 0) throw Error("build_power_iso requires n >= 1");
    if (lambda.size() != n) throw BadWeights("build_power_iso needs n weights");
    detail::check_simplex(lambda);

    auto ctx = std::make_shared<detail::PowerContext>(detail::PowerContext{
        TupleCodec{TupleCodec::Variant::power_only, alpha, n, std::nullopt},
        nullptr, nullptr, alpha, omega_pow(alpha), Ordinal{}, false, Ordinal{}});
    if (n == 1) {
        ctx->cover = std::make_shared<const CoveringSplit>(CoveringSplit::identity(alpha));
    } else {
        ctx->cover = std::make_shared<const CoveringSplit>(CoveringSplit::triangular(alpha));
        ctx->registry = std::make_shared<TupleRegistry>([](std::uint64_t c) {
            if (c == 0) return std::vector<Ordinal>{};
            return std::vector<Ordinal>{Ordinal{c - 1}};
        });
    }

    std::string tag = "power(alpha=" + format_ordinal(alpha) + ",n=" + std::to_string(n) + ")";
    OperatorPair<S> out;
    CkOperator<S>& T = out.forward;
    T.name = tag;
    T.domain_top = omega_pow(alpha);
    T.codomain_top = ctx->codec.top();
    {
        Region<S> r;
        r.name = "top";
        Ordinal top = T.codomain_top;
        Ordinal W = ctx->w_alpha;
        r.contains = [top](const Ordinal& y) { return y == top; };
        r.row = [W](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, W);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, W, W}};
        r.probes = {top};
        T.regions.push_back(std::move(r));
    }
    detail::add_power_regions<S>(T, ctx, lambda, n);
    T.claimed_norm = S{1};
    T.limit_samples.push_back(T.codomain_top);
    if (!(alpha * Ordinal{n - 1}).is_zero()) {
        TupleTheta one_tuple;
        one_tuple.coords = {Ordinal{1}};
        T.limit_samples.push_back(ctx->codec.encode(one_tuple)); // w^(a(n-1))
    }

    CkOperator<S>& Sop = out.inverse;
    Sop.name = tag + " inverse";
    Sop.domain_top = T.codomain_top;
    Sop.codomain_top = T.domain_top;
    {
        Region<S> r;
        r.name = "top";
        Ordinal W = ctx->w_alpha;
        Ordinal top_image = T.codomain_top;
        r.contains = [W](const Ordinal& x) { return x == W; };
        r.row = [top_image](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, top_image);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, top_image, top_image}};
        r.probes = {W};
        Sop.regions.push_back(std::move(r));
    }
    detail::add_power_inverse_regions<S>(Sop, ctx, lambda, T.codomain_top);
    Sop.limit_samples.push_back(Sop.codomain_top);
    return out;
}

/// T : C[1, w^a + b] -> C[1, w^(a n) b + 1] (the final isolated point plays
/// the star), with S its inverse; distortion at the optimal weights is
/// n + 1 + sqrt(n(n+4)).
template <class S>
OperatorPair<S> build_power_beta_iso(const Ordinal& alpha, const Ordinal& beta, std::uint64_t n,
                                     const std::vector<S>& lambda) {
    if (n == 0) throw Error("build_power_beta_iso requires n >= 1");
    if (beta.is_zero()) throw Error("build_power_beta_iso requires beta >= 1");
    if (lambda.size() != n + 1) throw BadWeights("build_power_beta_iso needs n + 1 weights");
    detail::check_simplex(lambda);

    auto ctx = std::make_shared<detail::PowerContext>(detail::PowerContext{
        TupleCodec{TupleCodec::Variant::with_beta, alpha, n, beta},
        nullptr, nullptr, alpha, omega_pow(alpha), omega_pow(alpha), true, beta});
    const bool finite_prefixes = n == 1 && beta.is_finite();
    if (finite_prefixes) {
        ctx->cover = std::make_shared<const CoveringSplit>(
            CoveringSplit::round_robin(alpha, beta.finite_value()));
    } else {
        ctx->cover = std::make_shared<const CoveringSplit>(CoveringSplit::triangular(alpha));
        Ordinal beta_copy = beta;
        ctx->registry = std::make_shared<TupleRegistry>([beta_copy](std::uint64_t c) {
            if (Ordinal{c} < beta_copy) return std::vector<Ordinal>{Ordinal{c}};
            // beta exhausted: fall through to length-2 prefixes
            BigNat shift = beta_copy.is_finite() ? beta_copy.finite_value() : BigNat{0};
            return std::vector<Ordinal>{Ordinal{0}, Ordinal{BigNat{c} - shift}};
        });
    }

    std::string tag = "powerbeta(alpha=" + format_ordinal(alpha) +
                      ",beta=" + format_ordinal(beta) + ",n=" + std::to_string(n) + ")";
    OperatorPair<S> out;
    CkOperator<S>& T = out.forward;
    T.name = tag;
    T.domain_top = omega_pow(alpha) + beta;
    const Ordinal star = ctx->codec.top() + Ordinal{1};
    T.codomain_top = star;
    {
        Region<S> r;
        r.name = "star";
        Ordinal W = ctx->w_alpha;
        r.contains = [star](const Ordinal& y) { return y == star; };
        r.row = [W](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, W);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, W, W}};
        r.probes = {star};
        T.regions.push_back(std::move(r));
    }
    detail::add_power_regions<S>(T, ctx, lambda, n + 1);
    T.claimed_norm = S{1};
    T.limit_samples.push_back(ctx->codec.top());

    CkOperator<S>& Sop = out.inverse;
    Sop.name = tag + " inverse";
    Sop.domain_top = star;
    Sop.codomain_top = T.domain_top;
    {
        Region<S> r;
        r.name = "glue";
        Ordinal W = ctx->w_alpha;
        r.contains = [W](const Ordinal& x) { return x == W; };
        r.row = [star](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, star);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, star, star}};
        r.probes = {W};
        Sop.regions.push_back(std::move(r));
    }
    detail::add_power_inverse_regions<S>(Sop, ctx, lambda, star);
    Sop.limit_samples.push_back(ctx->w_alpha);
    return out;
}

/// The lambda-weighted pair between C[1, w] and C[1, w*2]; at
/// lambda = (3 - sqrt(3))/2 its distortion is 2 + sqrt(3).
template <class S>
OperatorPair<S> build_omega2_family(const S& lambda) {
    if (!(S{0} < lambda) || !(lambda < S{1}))
        throw BadWeights("omega2 family needs lambda in (0, 1)");
    const Ordinal w = Ordinal::omega();
    const Ordinal w2 = w * Ordinal{2};
    const S one{1};
    const S half = S{1} / S{2};

    OperatorPair<S> out;
    CkOperator<S>& T = out.forward;
    T.name = "omega2";
    T.domain_top = w;
    T.codomain_top = w2;
    {
        Region<S> r;
        r.name = "one";
        r.contains = [](const Ordinal& y) { return y == Ordinal{1}; };
        r.row = [half](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(half, Ordinal{1});
            pf.add(half, Ordinal{2});
            return pf;
        };
        r.weights = {half, half};
        r.hulls = {{half, Ordinal{1}, Ordinal{1}}, {half, Ordinal{2}, Ordinal{2}}};
        r.probes = {Ordinal{1}};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "omega";
        r.contains = [w](const Ordinal& y) { return y == w; };
        r.row = [lambda, one, w](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(lambda, w);
            pf.add(one - lambda, Ordinal{1});
            return pf;
        };
        r.weights = {lambda, one - lambda};
        r.hulls = {{lambda, w, w}, {one - lambda, Ordinal{1}, Ordinal{1}}};
        r.probes = {w};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "omega2";
        r.contains = [w2](const Ordinal& y) { return y == w2; };
        r.row = [lambda, one, w](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(lambda, w);
            pf.add(one - lambda, Ordinal{2});
            return pf;
        };
        r.weights = {lambda, one - lambda};
        r.hulls = {{lambda, w, w}, {one - lambda, Ordinal{2}, Ordinal{2}}};
        r.probes = {w2};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "finite";
        r.contains = [w](const Ordinal& y) { return Ordinal{1} < y && y < w; };
        r.row = [lambda, one](const Ordinal& y) {
            // y = n + 1 evaluates at 2n + 1
            BigNat n = y.finite_value() - BigNat{1};
            PointFunctional<S> pf;
            pf.add(one - lambda, Ordinal{1});
            pf.add(lambda, Ordinal{n * BigNat{2} + BigNat{1}});
            return pf;
        };
        r.weights = {one - lambda, lambda};
        r.hulls = {{one - lambda, Ordinal{1}, Ordinal{1}}, {lambda, Ordinal{3}, w}};
        r.probes = {Ordinal{2}, Ordinal{5}};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "after_omega";
        r.contains = [w, w2](const Ordinal& y) { return w < y && y < w2; };
        r.row = [lambda, one, w](const Ordinal& y) {
            BigNat n = left_subtract(w, y).finite_value();
            PointFunctional<S> pf;
            pf.add(one - lambda, Ordinal{2});
            pf.add(lambda, Ordinal{n * BigNat{2} + BigNat{2}});
            return pf;
        };
        r.weights = {one - lambda, lambda};
        r.hulls = {{one - lambda, Ordinal{2}, Ordinal{2}}, {lambda, Ordinal{4}, w}};
        r.probes = {w + Ordinal{1}, w + Ordinal{4}};
        T.regions.push_back(std::move(r));
    }
    T.claimed_norm = S{1};
    T.limit_samples = {w, w2};

    CkOperator<S>& Sop = out.inverse;
    Sop.name = "omega2 inverse";
    Sop.domain_top = w2;
    Sop.codomain_top = w;
    const S inv2l = S{1} / (S{2} * lambda);
    const S inv2m = S{1} / (S{2} * (one - lambda));
    {
        Region<S> r;
        r.name = "one";
        r.contains = [](const Ordinal& x) { return x == Ordinal{1}; };
        r.row = [inv2m, one, w, w2](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(inv2m, w);
            pf.add(S{0} - inv2m, w2);
            pf.add(one, Ordinal{1});
            return pf;
        };
        r.weights = {inv2m, S{0} - inv2m, one};
        r.hulls = {{inv2m, w, w}, {S{0} - inv2m, w2, w2}, {one, Ordinal{1}, Ordinal{1}}};
        r.probes = {Ordinal{1}};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "two";
        r.contains = [](const Ordinal& x) { return x == Ordinal{2}; };
        r.row = [inv2m, one, w, w2](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{0} - inv2m, w);
            pf.add(inv2m, w2);
            pf.add(one, Ordinal{1});
            return pf;
        };
        r.weights = {S{0} - inv2m, inv2m, one};
        r.hulls = {{S{0} - inv2m, w, w}, {inv2m, w2, w2}, {one, Ordinal{1}, Ordinal{1}}};
        r.probes = {Ordinal{2}};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "omega";
        r.contains = [w](const Ordinal& x) { return x == w; };
        r.row = [inv2l, lambda, one, w, w2](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(inv2l, w);
            pf.add(inv2l, w2);
            pf.add(S{0} - (one - lambda) / lambda, Ordinal{1});
            return pf;
        };
        r.weights = {inv2l, inv2l, S{0} - (one - lambda) / lambda};
        r.hulls = {{inv2l, w, w}, {inv2l, w2, w2},
                   {S{0} - (one - lambda) / lambda, Ordinal{1}, Ordinal{1}}};
        r.probes = {w};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "odd";
        r.contains = [w](const Ordinal& x) {
            if (!x.is_finite() || x < Ordinal{3}) return false;
            return x.finite_value() % BigNat{2} == BigNat{1};
        };
        r.row = [inv2l, lambda, one, w, w2](const Ordinal& x) {
            // x = 2n + 1 pulls from n + 1
            BigNat n = (x.finite_value() - BigNat{1}) / BigNat{2};
            PointFunctional<S> pf;
            pf.add(S{0} - inv2l, w);
            pf.add(inv2l, w2);
            pf.add(S{0} - (one - lambda) / lambda, Ordinal{1});
            pf.add(S{1} / lambda, Ordinal{n + BigNat{1}});
            return pf;
        };
        r.weights = {S{0} - inv2l, inv2l, S{0} - (one - lambda) / lambda, S{1} / lambda};
        r.hulls = {{S{0} - inv2l, w, w}, {inv2l, w2, w2},
                   {S{0} - (one - lambda) / lambda, Ordinal{1}, Ordinal{1}},
                   {S{1} / lambda, Ordinal{2}, w}};
        r.probes = {Ordinal{3}, Ordinal{7}};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "even";
        r.contains = [w](const Ordinal& x) {
            if (!x.is_finite() || x < Ordinal{4}) return false;
            return x.finite_value() % BigNat{2} == BigNat{0};
        };
        r.row = [inv2l, lambda, one, w, w2](const Ordinal& x) {
            // x = 2n + 2 pulls from w + n
            BigNat n = (x.finite_value() - BigNat{2}) / BigNat{2};
            PointFunctional<S> pf;
            pf.add(inv2l, w);
            pf.add(S{0} - inv2l, w2);
            pf.add(S{0} - (one - lambda) / lambda, Ordinal{1});
            pf.add(S{1} / lambda, w + Ordinal{n});
            return pf;
        };
        r.weights = {inv2l, S{0} - inv2l, S{0} - (one - lambda) / lambda, S{1} / lambda};
        r.hulls = {{inv2l, w, w}, {S{0} - inv2l, w2, w2},
                   {S{0} - (one - lambda) / lambda, Ordinal{1}, Ordinal{1}},
                   {S{1} / lambda, w + Ordinal{1}, w2}};
        r.probes = {Ordinal{4}, Ordinal{8}};
        Sop.regions.push_back(std::move(r));
    }
    {
        S claimed = one + one / (one - lambda);
        S other = S{3} / lambda - one;
        Sop.claimed_norm = claimed < other ? other : claimed;
    }
    Sop.limit_samples = {w};
    return out;
}

/// The positive isomorphism witnessing that the vanishing-at-top subspace of
/// C[1, w] is positively isomorphic to all of C[1, w]; both norms are 2.
template <class S>
OperatorPair<S> build_c0_c() {
    const Ordinal w = Ordinal::omega();
    OperatorPair<S> out;
    CkOperator<S>& T = out.forward;
    T.name = "c0c";
    T.domain_top = w;
    T.codomain_top = w;
    T.domain_vanishes_at_top = true;
    {
        Region<S> r;
        r.name = "omega";
        r.contains = [w](const Ordinal& y) { return y == w; };
        r.row = [](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, Ordinal{1});
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, Ordinal{1}, Ordinal{1}}};
        r.probes = {w};
        T.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "finite";
        r.contains = [w](const Ordinal& y) { return y < w; };
        r.row = [](const Ordinal& y) {
            PointFunctional<S> pf;
            pf.add(S{1}, Ordinal{1});
            pf.add(S{1}, y + Ordinal{1});
            return pf;
        };
        r.weights = {S{1}, S{1}};
        r.hulls = {{S{1}, Ordinal{1}, Ordinal{1}}, {S{1}, Ordinal{2}, w}};
        r.probes = {Ordinal{1}, Ordinal{6}};
        T.regions.push_back(std::move(r));
    }
    T.claimed_norm = S{2};
    T.limit_samples = {w};

    CkOperator<S>& Sop = out.inverse;
    Sop.name = "c0c inverse";
    Sop.domain_top = w;
    Sop.codomain_top = w;
    {
        Region<S> r;
        r.name = "one";
        r.contains = [](const Ordinal& x) { return x == Ordinal{1}; };
        r.row = [w](const Ordinal&) {
            PointFunctional<S> pf;
            pf.add(S{1}, w);
            return pf;
        };
        r.weights = {S{1}};
        r.hulls = {{S{1}, w, w}};
        r.probes = {Ordinal{1}};
        Sop.regions.push_back(std::move(r));
    }
    {
        Region<S> r;
        r.name = "successors";
        r.contains = [w](const Ordinal& x) { return Ordinal{1} < x && x < w; };
        r.row = [w](const Ordinal& x) {
            PointFunctional<S> pf;
            pf.add(S{1}, predecessor(x));
            pf.add(S{0} - S{1}, w);
            return pf;
        };
        r.weights = {S{1}, S{0} - S{1}};
        r.hulls = {{S{1}, Ordinal{1}, w}, {S{0} - S{1}, w, w}};
        r.probes = {Ordinal{2}, Ordinal{9}};
        Sop.regions.push_back(std::move(r));
    }
    {
        // the image vanishes at the top: the zero functional
        Region<S> r;
        r.name = "omega";
        r.contains = [w](const Ordinal& x) { return x == w; };
        r.row = [](const Ordinal&) { return PointFunctional<S>{}; };
        r.probes = {w};
        Sop.regions.push_back(std::move(r));
    }
    Sop.claimed_norm = S{2};
    Sop.limit_samples = {w};
    return out;
}

/// Scale the rows pointwise by the image of the constant one function
/// (region sums). The result is unital with norm one; a unit image that is
/// non-constant across regions that share limit structure is rejected.
template <class S>
CkOperator<S> normalize_unital(const CkOperator<S>& op) {
    std::vector<S> sums;
    for (const auto& r : op.regions) {
        S s = r.weight_sum();
        if (!(S{0} < s))
            throw NonPositiveUnitImage("unit image vanishes on region " + r.name);
        sums.push_back(s);
    }
    bool uniform = true;
    for (const auto& s : sums) uniform = uniform && scalar_eq(s, sums.front());
    if (!uniform) {
        // dividing by a discontinuous unit image would leave the image space:
        // probe stabilization of the region sums along each limit point
        for (const auto& y : op.limit_samples) {
            const S at_limit = op.region_at(y).weight_sum();
            for (std::uint64_t m = 24; m <= 32; ++m) {
                auto x = op.approach(y, m);
                if (!x) continue;
                if (!scalar_eq(op.region_at(*x).weight_sum(), at_limit))
                    throw NonConstantUnitImage("unit image is discontinuous at " +
                                               format_ordinal(y));
            }
        }
    }
    CkOperator<S> out = op;
    out.name = op.name + " (unitalized)";
    for (std::size_t i = 0; i < out.regions.size(); ++i) {
        Region<S>& r = out.regions[i];
        const S s = sums[i];
        auto base = r.row;
        r.row = [base, s](const Ordinal& y) {
            PointFunctional<S> pf = base(y);
            for (auto& [w, p] : pf.terms) w = w / s;
            return pf;
        };
        for (auto& w : r.weights) w = w / s;
        for (auto& h : r.hulls) h.weight = h.weight / s;
    }
    out.claimed_norm = S{1};
    return out;
}

/// Certified lower bound on the distortion of any positive isomorphism pair
/// extending T, from a nonnegative norm-one witness with small image: when
/// ||Tf|| <= a ||T||, every inverse satisfies ||T|| ||T^{-1}|| >= 2/a - 1.
/// The image norm is bounded above region by region through the component
/// hulls, so the certificate is sound.
template <class S>
S triv1_certificate(const CkOperator<S>& op, const StepFunction<S>& witness) {
    std::optional<S> norm_scale;
    for (const auto& r : op.regions) {
        S s = r.weight_sum();
        if (!norm_scale) norm_scale = s;
        else if (!scalar_eq(*norm_scale, s))
            throw BadWitness("certificate needs T(1) = ||T|| * 1 (region sums constant)");
        for (const auto& w : r.weights)
            if (w < S{0}) throw BadWitness("certificate needs a positive operator");
        if (r.hulls.size() != r.weights.size())
            throw BadWitness("operator carries no hull analysis for " + r.name);
    }
    if (!witness.nonnegative() || !scalar_eq(witness.sup_norm(), S{1}))
        throw BadWitness("witness must be nonnegative of norm one");
    S image_norm{0};
    for (const auto& r : op.regions) {
        S bound{0};
        for (const auto& h : r.hulls)
            bound = bound + scalar_abs(h.weight) * witness.max_abs_over(h.lo, h.hi);
        if (image_norm < bound) image_norm = bound;
    }
    if (!(S{0} < image_norm))
        throw BadWitness("witness image vanishes; the certificate degenerates");
    return S{2} * *norm_scale / image_norm - S{1};
}

/// Optimal weights in builder order: the distinguished branch weight comes
/// first for the exponent-stretching pairs and last for the folding pair.
inline std::vector<double> optimal_weights_power(std::uint64_t n) {
    OptimalWeights w = optimal_lambda(n);
    std::vector<double> out;
    for (const auto& l : w.lambda) out.push_back(l.to_double());
    return out;
}

inline std::vector<double> optimal_weights_tk(std::uint64_t k) {
    std::vector<double> out = optimal_weights_power(k);
    std::rotate(out.begin(), out.begin() + 1, out.end());
    return out;
}

} // namespace ckord
