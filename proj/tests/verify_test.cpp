#include <gtest/gtest.h>

#include "ckord/verify.hpp"

using namespace ckord;

namespace {

Ordinal O(const char* text) { return parse_ordinal(text); }

VerifyConfig small_config() {
    VerifyConfig cfg;
    cfg.samples = 15;
    cfg.points = 15;
    cfg.seed = 7;
    cfg.depth = 64;
    cfg.stab_funcs = 8;
    return cfg;
}

TEST(Verify, Omega2AllChecksPass) {
    auto pair = build_omega2_family<Rational>(Rational{1, 3});
    auto report = verify_operator(pair, small_config());
    for (const auto& c : report.checks)
        EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
    EXPECT_FALSE(report.inverse_positive);
    EXPECT_EQ(report.norm_forward, Rational{1});
}

TEST(Verify, CorruptedInverseFailsRoundTrip) {
    auto pair = build_omega2_family<Rational>(Rational{1, 2});
    std::size_t region = pair.inverse.region_index_at(Ordinal{3}); // the odd block
    pair.inverse = perturb_weight(pair.inverse, region, 3, Rational{1, 1000});
    auto report = verify_operator(pair, small_config());
    const CheckResult* failed = report.first_failure();
    ASSERT_NE(failed, nullptr);
    bool roundtrip_failed = false;
    for (const auto& c : report.checks)
        if (c.name == "inverse_identities") roundtrip_failed = !c.passed;
    EXPECT_TRUE(roundtrip_failed);
}

TEST(Verify, PowerIsoStabilizes) {
    auto pair = build_power_iso<Rational>(Ordinal{1}, 2,
                                          {Rational{1, 2}, Rational{1, 2}});
    auto report = verify_operator(pair, small_config());
    for (const auto& c : report.checks)
        EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
}

TEST(Verify, SubsetCodomainStabilizes) {
    auto pair = build_tk<Rational>(Ordinal::omega(), 2, {Rational{1, 2}, Rational{1, 2}});
    auto report = verify_operator(pair, small_config());
    for (const auto& c : report.checks)
        EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
}

TEST(Verify, C0CRecordsNonUnital) {
    auto pair = build_c0_c<Rational>();
    auto report = verify_operator(pair, small_config());
    for (const auto& c : report.checks)
        EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
    bool note_found = false;
    for (const auto& c : report.checks)
        if (c.name == "unitality") note_found = c.witness == "not claimed unital";
    EXPECT_TRUE(note_found);
}

TEST(Verify, ReportJsonShapeAndDeterminism) {
    auto pair = build_omega2_family<Rational>(Rational{2, 7});
    auto report1 = verify_operator(pair, small_config());
    auto report2 = verify_operator(pair, small_config());
    auto j1 = report_to_json(report1);
    auto j2 = report_to_json(report2);
    EXPECT_EQ(j1, j2);
    EXPECT_EQ(j1["schema"], 1);
    EXPECT_EQ(j1["operator"], "omega2");
    EXPECT_TRUE(j1["checks"].is_array());
    EXPECT_TRUE(j1["norms"].contains("distortion"));
    EXPECT_EQ(j1["norms"]["T"]["exact"], "1");
}

TEST(Verify, MutationSensitivityAcrossAllWeights) {
    // every single weight of the inverse matters: nudging any one of them by
    // 1/1000 must break the round trip
    auto pair = build_tk<Rational>(Ordinal{1}, 2, {Rational{1, 2}, Rational{1, 2}});
    for (std::size_t r = 0; r < pair.inverse.regions.size(); ++r) {
        for (std::size_t c = 0; c < pair.inverse.regions[r].weights.size(); ++c) {
            OperatorPair<Rational> mutated = pair;
            mutated.inverse = perturb_weight(pair.inverse, r, c, Rational{1, 1000});
            auto [failures, witness] = round_trip_failures(mutated, 10, 20, 99);
            EXPECT_GT(failures, 0u)
                << "perturbing region " << pair.inverse.regions[r].name << " component " << c
                << " went unnoticed";
        }
    }
}

} // namespace
