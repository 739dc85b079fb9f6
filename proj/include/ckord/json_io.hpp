#pragma once

#include <json.hpp>

#include "ckord/decomp.hpp"
#include "ckord/distance.hpp"
#include "ckord/step_function.hpp"

namespace ckord {

/// {domain_top, pieces: [{upto, value}]} with ordinals in the text grammar
/// and values as exact rational strings.
inline nlohmann::json step_function_to_json(const StepFunction<Rational>& f) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& p : f.pieces())
        pieces.push_back({{"upto", format_ordinal(p.upto)}, {"value", p.value.to_string()}});
    return {{"domain_top", format_ordinal(f.domain_top())}, {"pieces", pieces}};
}

inline StepFunction<Rational> step_function_from_json(const nlohmann::json& j) {
    Ordinal top = parse_ordinal(j.at("domain_top").get<std::string>());
    std::vector<StepFunction<Rational>::Piece> pieces;
    for (const auto& p : j.at("pieces"))
        pieces.push_back({parse_ordinal(p.at("upto").get<std::string>()),
                          Rational::parse(p.at("value").get<std::string>())});
    return StepFunction<Rational>{std::move(top), std::move(pieces)};
}

/// {family, index, blocks: [[lo, hi], ...]} truncated to the requested depth.
inline nlohmann::json split_family_to_json(const SplitFamily& split, const BigNat& family,
                                           std::uint64_t depth) {
    nlohmann::json blocks = nlohmann::json::array();
    for (std::uint64_t c = 1; c <= depth; ++c) {
        auto piece = split.piece(family, BigNat{c});
        blocks.push_back({format_ordinal(piece.lo), format_ordinal(piece.hi)});
    }
    return {{"family", family.to_string()},
            {"index", "1.." + std::to_string(depth)},
            {"blocks", blocks}};
}

inline nlohmann::json distance_bound_to_json(const DistanceBound& b) {
    nlohmann::json j{{"directed", b.directed}};
    if (b.infinite) {
        j["lower"] = "infinity";
        j["upper"] = "infinity";
    } else {
        j["lower"] = {{"exact", b.lower.to_string()}, {"value", b.lower.to_double()}};
        j["upper"] = {{"exact", b.upper.to_string()}, {"value", b.upper.to_double()}};
        if (b.exact)
            j["exact"] = {{"exact", b.exact->to_string()}, {"value", b.exact->to_double()}};
    }
    j["citations"] = b.citations;
    if (!b.note.empty()) j["note"] = b.note;
    return j;
}

} // namespace ckord
