#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckord/operators.hpp"

namespace ckord {

struct VerifyConfig {
    std::uint64_t samples = 100;    // step functions per direction
    std::uint64_t points = 40;      // evaluation points per function
    std::uint64_t seed = 1;
    std::uint64_t depth = 64;       // stabilization horizon
    std::uint64_t stab_funcs = 20;  // step inputs per limit point
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string witness; // first failing case, or a short note
};

template <class S>
struct VerifyReport {
    std::string operator_name;
    std::vector<CheckResult> checks;
    S norm_forward{0};
    S norm_inverse{0};
    S distortion_value{0};
    std::optional<S> claimed_forward, claimed_inverse;
    bool inverse_positive = false; // recorded, not required

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

namespace detail {

template <class S>
std::string scalar_text(const S& v) {
    if constexpr (std::is_same_v<S, double>) return std::to_string(v);
    else return v.to_string();
}

/// Deterministic sample of points of the operator's codomain (region probes
/// plus rejection-sampled interval points).
template <class S>
std::vector<Ordinal> codomain_points(const CkOperator<S>& op, Rng& rng, std::uint64_t want) {
    std::vector<Ordinal> pts;
    for (const auto& r : op.regions)
        for (const auto& p : r.probes) pts.push_back(p);
    for (std::uint64_t tries = 0; tries < want * 8 && pts.size() < want + 8; ++tries) {
        Ordinal y = sample_in(rng, op.codomain_top);
        if (op.contains_codomain_point(y)) pts.push_back(y);
    }
    return pts;
}

} // namespace detail

/// Count the sampled (function, point) pairs where the round trips
/// S(Tf) = f or T(Sh) = h fail; exact in rational mode. Returns the failure
/// count and a witness description of the first failure.
template <class S>
std::pair<std::uint64_t, std::string>
round_trip_failures(const OperatorPair<S>& pair, std::uint64_t funcs, std::uint64_t points,
                    std::uint64_t seed) {
    const CkOperator<S>& T = pair.forward;
    const CkOperator<S>& Sop = pair.inverse;
    Rng rng{seed};
    std::uint64_t failures = 0;
    std::string witness;
    auto note = [&](const std::string& w) {
        ++failures;
        if (witness.empty()) witness = w;
    };

    auto domain_pool = breakpoint_pool(rng, T.domain_top, 24);
    auto codomain_pool = breakpoint_pool(rng, Sop.domain_top, 24);
    std::vector<Ordinal> xs;
    for (std::uint64_t i = 0; i < points; ++i) xs.push_back(sample_in(rng, T.domain_top));
    std::vector<Ordinal> ys = detail::codomain_points(T, rng, points);

    for (std::uint64_t i = 0; i < funcs; ++i) {
        StepFunction<S> f = sample_step<S>(rng, T.domain_top, 1 + i % 6, domain_pool);
        if (T.domain_vanishes_at_top) f = f.with_top_value(S{0});
        for (const auto& x : xs) {
            // (S o T) f at x: S's row pulls values of Tf
            PointFunctional<S> srow = Sop.row_at(x);
            S value{0};
            for (const auto& [w, p] : srow.terms) value = value + w * T.apply(f, p);
            if (!scalar_eq(value, f.evaluate(x)))
                note("S(Tf) != f at " + format_ordinal(x) + " (function " + std::to_string(i) + ")");
        }
        StepFunction<S> h = sample_step<S>(rng, Sop.domain_top, 1 + i % 6, codomain_pool);
        for (const auto& y : ys) {
            PointFunctional<S> trow = T.row_at(y);
            S value{0};
            for (const auto& [w, p] : trow.terms) value = value + w * Sop.apply(h, p);
            if (!scalar_eq(value, h.evaluate(y)))
                note("T(Sh) != h at " + format_ordinal(y) + " (function " + std::to_string(i) + ")");
        }
    }
    return {failures, witness};
}

/// Exact continuity test: along the canonical approach sequence of every
/// sampled limit point, the operator's values on a step input must become
/// literally constant, equal to the value at the limit, within the horizon.
template <class S>
std::pair<std::uint64_t, std::string>
stabilization_failures(const CkOperator<S>& op, std::uint64_t funcs, std::uint64_t depth,
                       std::uint64_t seed) {
    Rng rng{seed};
    std::uint64_t failures = 0;
    std::string witness;
    auto pool = breakpoint_pool(rng, op.domain_top, 24);

    std::vector<Ordinal> limits = op.limit_samples;
    for (int tries = 0; tries < 64 && limits.size() < op.limit_samples.size() + 4; ++tries) {
        Ordinal y = sample_in(rng, op.codomain_top);
        if (y.is_limit() && op.contains_codomain_point(y)) limits.push_back(y);
    }

    for (const auto& y : limits) {
        for (std::uint64_t i = 0; i < funcs; ++i) {
            StepFunction<S> f = sample_step<S>(rng, op.domain_top, 1 + i % 6, pool);
            if (op.domain_vanishes_at_top) f = f.with_top_value(S{0});
            const S at_limit = op.apply(f, y);
            std::uint64_t valid = 0;
            for (std::uint64_t m = 1; m <= depth; ++m)
                if (op.approach(y, m)) ++valid;
            // demand an eventually-constant tail: the last three valid
            // members must all equal the limit value
            std::uint64_t tail_ok = 0;
            for (std::uint64_t m = depth; m >= 1 && tail_ok < 3; --m) {
                auto x = op.approach(y, m);
                if (!x) continue;
                if (!scalar_eq(op.apply(f, *x), at_limit)) break;
                ++tail_ok;
            }
            if (valid == 0 || tail_ok < std::min<std::uint64_t>(3, valid)) {
                ++failures;
                if (witness.empty())
                    witness = "no stabilization at " + format_ordinal(y) + " (function " +
                              std::to_string(i) + ")";
            }
        }
    }
    return {failures, witness};
}

template <class S>
VerifyReport<S> verify_operator(const OperatorPair<S>& pair, const VerifyConfig& cfg) {
    const CkOperator<S>& T = pair.forward;
    const CkOperator<S>& Sop = pair.inverse;
    VerifyReport<S> report;
    report.operator_name = T.name;
    report.claimed_forward = T.claimed_norm;
    report.claimed_inverse = Sop.claimed_norm;
    report.inverse_positive = Sop.positive();

    auto add = [&](std::string name, bool ok, std::string w = {}) {
        report.checks.push_back({std::move(name), ok, std::move(w)});
    };

    add("positivity", T.positive());

    const bool claims_unital = T.claimed_norm && scalar_eq(*T.claimed_norm, S{1});
    if (claims_unital)
        add("unitality", T.unital());
    else
        add("unitality", true, "not claimed unital");

    try {
        report.norm_forward = T.op_norm();
        report.norm_inverse = Sop.op_norm();
        report.distortion_value = report.norm_forward * report.norm_inverse;
        add("region_profiles", true);
    } catch (const RegionInvariantViolated& e) {
        add("region_profiles", false, e.what());
    }

    if (T.claimed_norm) {
        bool ok = !( *T.claimed_norm < report.norm_forward);
        std::string w = "computed " + detail::scalar_text(report.norm_forward) + ", claimed " +
                        detail::scalar_text(*T.claimed_norm) +
                        (scalar_eq(report.norm_forward, *T.claimed_norm) ? " (equal)" : " (strict)");
        add("norm_forward_vs_claimed", ok, w);
    }
    if (Sop.claimed_norm) {
        bool ok = !( *Sop.claimed_norm < report.norm_inverse);
        std::string w = "computed " + detail::scalar_text(report.norm_inverse) + ", claimed " +
                        detail::scalar_text(*Sop.claimed_norm) +
                        (scalar_eq(report.norm_inverse, *Sop.claimed_norm) ? " (equal)" : " (strict)");
        add("norm_inverse_vs_claimed", ok, w);
    }

    {
        auto [failures, w] = round_trip_failures(pair, cfg.samples, cfg.points, cfg.seed);
        add("inverse_identities", failures == 0, w);
    }
    {
        auto [tf, tw] = stabilization_failures(T, cfg.stab_funcs, cfg.depth, cfg.seed + 1);
        add("stabilization_forward", tf == 0, tw);
        auto [sf, sw] = stabilization_failures(Sop, cfg.stab_funcs, cfg.depth, cfg.seed + 2);
        add("stabilization_inverse", sf == 0, sw);
    }
    return report;
}

template <class S>
nlohmann::json report_to_json(const VerifyReport<S>& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json entry{{"name", c.name}, {"status", c.passed ? "pass" : "fail"}};
        if (!c.witness.empty()) entry["witness"] = c.witness;
        checks.push_back(entry);
    }
    nlohmann::json norms{
        {"T", {{"exact", detail::scalar_text(report.norm_forward)},
               {"value", scalar_to_double(report.norm_forward)}}},
        {"S", {{"exact", detail::scalar_text(report.norm_inverse)},
               {"value", scalar_to_double(report.norm_inverse)}}},
        {"distortion", {{"exact", detail::scalar_text(report.distortion_value)},
                        {"value", scalar_to_double(report.distortion_value)}}},
    };
    if (report.claimed_forward)
        norms["claimed_T"] = detail::scalar_text(*report.claimed_forward);
    if (report.claimed_inverse)
        norms["claimed_S"] = detail::scalar_text(*report.claimed_inverse);
    norms["inverse_positive"] = report.inverse_positive;
    return nlohmann::json{{"schema", 1},
                          {"operator", report.operator_name},
                          {"checks", checks},
                          {"norms", norms}};
}

} // namespace ckord
