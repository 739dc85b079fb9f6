#include <gtest/gtest.h>

#include <cmath>

#include "ckord/operators.hpp"
#include "ckord/distance.hpp"
#include "ckord/verify.hpp"

using namespace ckord;

namespace {

Ordinal O(const char* text) { return parse_ordinal(text); }
using F = StepFunction<Rational>;
const Rational half{1, 2};

std::vector<Rational> even_weights(std::uint64_t k) {
    return std::vector<Rational>(k, Rational{1, static_cast<std::int64_t>(k)});
}

// Independent oracle for the folding pair's inverse: the recursive
// elimination that defines S block by block, descending from the last block.
Rational recursive_tk_inverse(const PijSystem& pij, const std::vector<Rational>& lam,
                              const StepFunction<Rational>& h, const Ordinal& y) {
    const std::uint64_t k = pij.k();
    const Ordinal W = omega_pow(pij.alpha());
    auto [q, rem] = divmod_base(y, pij.alpha());
    if (rem.is_zero()) {
        std::uint64_t j = q.finite_value().to_u64();
        if (j < k) return h.evaluate(W + Ordinal{j});
        Rational acc = h.evaluate(W);
        for (std::uint64_t i = 1; i < k; ++i)
            acc -= lam[i - 1] * h.evaluate(W + Ordinal{i});
        return acc / lam[k - 1];
    }
    std::uint64_t l = q.finite_value().to_u64() + 1;
    if (l == k) {
        Rational acc = h.evaluate(pij.unmap(k, k, y));
        for (std::uint64_t j = 1; j < k; ++j)
            acc -= lam[j - 1] * h.evaluate(W + Ordinal{j});
        return acc / lam[k - 1];
    }
    Rational acc = h.evaluate(pij.unmap(l, l, y));
    Ordinal x = pij.unmap(l, l, y);
    for (std::uint64_t j = l + 1; j <= k; ++j)
        acc -= lam[j - 1] * recursive_tk_inverse(pij, lam, h, pij.map(l, j, x));
    for (std::uint64_t j = 1; j < l; ++j)
        acc -= lam[j - 1] * h.evaluate(W + Ordinal{j});
    return acc / lam[l - 1];
}

TEST(Apply, Omega2RowsAndLinearity) {
    auto pair = build_omega2_family<Rational>(half);
    F indicator = F::indicator_initial(Ordinal::omega(), Ordinal{1});
    EXPECT_EQ(pair.forward.apply(indicator, Ordinal::omega()), half);

    F one = F::constant(Ordinal::omega(), Rational{1});
    Rng rng{3};
    for (int s = 0; s < 50; ++s) {
        Ordinal y = sample_in(rng, pair.forward.codomain_top);
        EXPECT_EQ(pair.forward.apply(one, y), Rational{1});
        EXPECT_EQ(pair.forward.apply(F::zero(Ordinal::omega()), y), Rational{0});
    }
    EXPECT_THROW(pair.forward.apply(one, O("w*2+1")), OutOfDomain);
}

TEST(OpNorm, UnitalForwardAndClosedFormInverse) {
    auto tk = build_tk<Rational>(Ordinal{1}, 2, even_weights(2));
    EXPECT_EQ(tk.forward.op_norm(), Rational{1});
    EXPECT_EQ(tk.inverse.op_norm(), Rational{5}); // max(2/l2 - 1, 1 + 2/l1) = max(3, 5)

    auto om = build_omega2_family<Rational>(half);
    EXPECT_EQ(om.inverse.op_norm(), Rational{5}); // max(1 + 1/(1-l), 3/l - 1) at 1/2

    auto c0 = build_c0_c<Rational>();
    EXPECT_EQ(c0.forward.op_norm(), Rational{2});
    EXPECT_EQ(c0.inverse.op_norm(), Rational{2});

    auto omd = build_omega2_family<double>((3.0 - std::sqrt(3.0)) / 2.0);
    EXPECT_NEAR(distortion(omd), 2.0 + std::sqrt(3.0), 1e-12);
}

TEST(OpNorm, RegionInvariantGuard) {
    auto pair = build_omega2_family<Rational>(half);
    auto broken = perturb_weight(pair.forward, pair.forward.region_index_at(Ordinal{5}), 0,
                                 Rational{1, 7});
    // rows moved with the profile, so the probe validation still agrees
    EXPECT_NO_THROW(broken.op_norm());
    // but tearing only the profile apart must be caught
    CkOperator<Rational> torn = pair.forward;
    torn.regions[3].weights[0] += Rational{1, 7};
    EXPECT_THROW(torn.op_norm(), RegionInvariantViolated);
}

TEST(BuildTk, RowShapeAndNorms) {
    auto pair = build_tk<Rational>(Ordinal{1}, 2, even_weights(2));
    // row at a point of I_1 is (f(p11 y) + f(p12 y)) / 2
    PijSystem pij{Ordinal{1}, 2};
    Ordinal y{3};
    auto row = pair.forward.row_at(y);
    ASSERT_EQ(row.terms.size(), 2u);
    EXPECT_EQ(row.terms[0].first, half);
    EXPECT_EQ(row.terms[0].second, pij.map(1, 1, y));
    EXPECT_EQ(row.terms[1].first, half);
    EXPECT_EQ(row.terms[1].second, pij.map(1, 2, y));
}

TEST(BuildTk, InverseIdentitiesExact) {
    for (const char* alpha : {"1", "w"}) {
        for (std::uint64_t k : {2u, 3u}) {
            std::vector<Rational> lam = even_weights(k);
            if (k == 3) lam = {Rational{1, 2}, Rational{1, 3}, Rational{1, 6}};
            auto pair = build_tk<Rational>(O(alpha), k, lam);
            auto [failures, witness] = round_trip_failures(pair, 25, 25, 7);
            EXPECT_EQ(failures, 0u) << witness;
        }
    }
}

TEST(BuildTk, RecursiveInverseOracleAgrees) {
    for (const char* alpha : {"1", "w"}) {
        std::vector<Rational> lam{Rational{1, 2}, Rational{1, 3}, Rational{1, 6}};
        auto pair = build_tk<Rational>(O(alpha), 3, lam);
        PijSystem pij{O(alpha), 3};
        Rng rng{11};
        auto pool = breakpoint_pool(rng, pair.inverse.domain_top, 20);
        for (int s = 0; s < 40; ++s) {
            F h = sample_step<Rational>(rng, pair.inverse.domain_top, 1 + s % 5, pool);
            Ordinal y = sample_in(rng, pair.inverse.codomain_top);
            EXPECT_EQ(pair.inverse.apply(h, y), recursive_tk_inverse(pij, lam, h, y));
        }
    }
}

TEST(BuildTk, OptimalWeightsReachTheConstant) {
    auto lam = optimal_weights_tk(2);
    EXPECT_NEAR(lam[1], (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
    auto pair = build_tk<double>(Ordinal{1}, 2, lam);
    EXPECT_NEAR(distortion(pair), 2.0 + std::sqrt(5.0), 1e-9);
}

TEST(BuildPowerIso, IdentityAtDepthOne) {
    auto pair = build_power_iso<Rational>(Ordinal::omega(), 1, {Rational{1}});
    EXPECT_EQ(distortion(pair), Rational{1});
    Rng rng{5};
    for (int s = 0; s < 30; ++s) {
        Ordinal y = sample_in(rng, pair.forward.codomain_top);
        // weights of the depth-1 inverse row are (0, 1); the top is a pure copy
        bool at_top = y == pair.inverse.codomain_top;
        EXPECT_EQ(pair.inverse.row_at(y).terms.size(), at_top ? 1u : 2u);
    }
    auto [failures, witness] = round_trip_failures(pair, 20, 20, 3);
    EXPECT_EQ(failures, 0u) << witness;
}

TEST(BuildPowerIso, NormsAndIdentities) {
    auto pair = build_power_iso<Rational>(Ordinal{1}, 2, even_weights(2));
    EXPECT_EQ(pair.forward.op_norm(), Rational{1});
    EXPECT_EQ(pair.inverse.op_norm(), Rational{5}); // max(2/l1 - 1, 2/l2 + 1) = max(3, 5)
    auto [failures, witness] = round_trip_failures(pair, 25, 25, 13);
    EXPECT_EQ(failures, 0u) << witness;

    auto deeper = build_power_iso<Rational>(Ordinal::omega(), 2,
                                            {Rational{1, 3}, Rational{2, 3}});
    auto [failures2, witness2] = round_trip_failures(deeper, 20, 20, 17);
    EXPECT_EQ(failures2, 0u) << witness2;
}

TEST(BuildPowerIso, OptimalWeightsReachTheConstant) {
    for (std::uint64_t n : {2u, 3u}) {
        auto pair = build_power_iso<double>(Ordinal{1}, n, optimal_weights_power(n));
        EXPECT_NEAR(distortion(pair), distortion_constant(n).to_double(), 1e-9);
    }
}

TEST(BuildPowerBeta, NormFormulaAndIdentities) {
    for (const char* beta : {"1", "w"}) {
        for (std::uint64_t n : {1u, 2u}) {
            std::vector<Rational> lam = even_weights(n + 1);
            auto pair = build_power_beta_iso<Rational>(Ordinal{1}, O(beta), n, lam);
            // ||S|| <= max(2/l1 - 1, 2/li + 1)
            Rational expected = Rational{2} / lam[0] - Rational{1};
            for (std::size_t i = 1; i < lam.size(); ++i) {
                Rational c = Rational{2} / lam[i] + Rational{1};
                if (expected < c) expected = c;
            }
            EXPECT_EQ(pair.inverse.op_norm(), expected);
            EXPECT_EQ(pair.forward.op_norm(), Rational{1});
            auto [failures, witness] = round_trip_failures(pair, 20, 20, 23);
            EXPECT_EQ(failures, 0u) << pair.forward.name << ": " << witness;
        }
    }
}

TEST(BuildPowerBeta, OptimalWeightsWithinTheConstant) {
    for (std::uint64_t n : {1u, 2u}) {
        auto pair = build_power_beta_iso<double>(Ordinal{1}, Ordinal::omega(), n,
                                                 optimal_weights_power(n + 1));
        EXPECT_LE(distortion(pair), distortion_constant(n + 1).to_double() + 1e-9);
        EXPECT_NEAR(distortion(pair), distortion_constant(n + 1).to_double(), 1e-9);
    }
}

TEST(Omega2, ClosedFormNormAndIdentities) {
    auto pair = build_omega2_family<Rational>(Rational{1, 3});
    EXPECT_EQ(pair.inverse.op_norm(), Rational{8}); // 3/(1/3) - 1
    auto [failures, witness] = round_trip_failures(pair, 30, 30, 29);
    EXPECT_EQ(failures, 0u) << witness;
    EXPECT_THROW(build_omega2_family<Rational>(Rational{1}), BadWeights);
    EXPECT_THROW(build_omega2_family<Rational>(Rational{0}), BadWeights);
}

TEST(C0C, NormsPositivityIdentities) {
    auto pair = build_c0_c<Rational>();
    EXPECT_TRUE(pair.forward.positive());
    EXPECT_FALSE(pair.inverse.positive());
    EXPECT_EQ(distortion(pair), Rational{4});
    auto [failures, witness] = round_trip_failures(pair, 30, 30, 31);
    EXPECT_EQ(failures, 0u) << witness;
}

TEST(NormalizeUnital, FixedPointAndScaling) {
    auto pair = build_omega2_family<Rational>(Rational{2, 5});
    auto same = normalize_unital(pair.forward);
    Rng rng{41};
    auto pool = breakpoint_pool(rng, Ordinal::omega(), 15);
    for (int s = 0; s < 40; ++s) {
        F f = sample_step<Rational>(rng, Ordinal::omega(), 3, pool);
        Ordinal y = sample_in(rng, pair.forward.codomain_top);
        EXPECT_EQ(same.apply(f, y), pair.forward.apply(f, y));
    }
    // scaling by 3 and normalizing recovers the original rows
    CkOperator<Rational> scaled = pair.forward;
    for (auto& r : scaled.regions) {
        auto base = r.row;
        r.row = [base](const Ordinal& y) {
            auto pf = base(y);
            for (auto& [w, p] : pf.terms) w = w * Rational{3};
            return pf;
        };
        for (auto& w : r.weights) w = w * Rational{3};
        for (auto& h : r.hulls) h.weight = h.weight * Rational{3};
    }
    auto recovered = normalize_unital(scaled);
    for (int s = 0; s < 40; ++s) {
        F f = sample_step<Rational>(rng, Ordinal::omega(), 4, pool);
        Ordinal y = sample_in(rng, pair.forward.codomain_top);
        EXPECT_EQ(recovered.apply(f, y), pair.forward.apply(f, y));
    }
    // the unit image is bounded below by 1/||T^{-1}|| on every region
    Rational floor = Rational{1} / pair.inverse.op_norm();
    for (const auto& r : pair.forward.regions)
        EXPECT_FALSE(r.weight_sum() < floor);
}

TEST(NormalizeUnital, RejectsDiscontinuousUnitImage) {
    auto pair = build_c0_c<Rational>();
    EXPECT_THROW(normalize_unital(pair.forward), NonConstantUnitImage);
}

TEST(OptimalLambda, ClosedFormAndObjective) {
    auto w2 = optimal_lambda(2);
    Radical x = (Radical{3} - Radical::sqrt_of(BigNat{5})) * Radical{Rational{1, 2}};
    EXPECT_EQ(w2.lambda[0], x);
    EXPECT_EQ(w2.constant, Radical{2} + Radical::sqrt_of(BigNat{5}));

    auto w1 = optimal_lambda(1);
    EXPECT_EQ(w1.constant, Radical{1});
    ASSERT_EQ(w1.lambda.size(), 1u);
    EXPECT_EQ(w1.lambda[0], Radical{1});

    // F(lambda*) = C(n) exactly: 2/x - 1 = C(n) via the root identity
    for (std::uint64_t n = 2; n <= 6; ++n) {
        auto w = optimal_lambda(n);
        Radical first_branch = Radical{2} * w.lambda[0].inverse() - Radical{1};
        EXPECT_EQ(first_branch, w.constant);
        Radical other_branch = Radical{2} * w.lambda[1].inverse() + Radical{1};
        EXPECT_EQ(other_branch, w.constant);
        // weights sum to one
        Radical sum;
        for (const auto& l : w.lambda) sum = sum + l;
        EXPECT_EQ(sum, Radical{1});
    }
}

TEST(OptimalLambda, MinimizesTheObjectiveOnSamples) {
    Rng rng{606};
    for (std::uint64_t n : {2u, 3u, 5u}) {
        std::vector<double> best;
        for (const auto& l : optimal_lambda(n).lambda) best.push_back(l.to_double());
        double target = weight_objective(best);
        for (int s = 0; s < 10000; ++s) {
            // random point of the open simplex
            std::vector<double> lam(n);
            double sum = 0;
            for (auto& l : lam) {
                l = -std::log(std::uniform_real_distribution<double>{1e-9, 1.0}(rng));
                sum += l;
            }
            for (auto& l : lam) l /= sum;
            EXPECT_GE(weight_objective(lam) + 1e-12, target);
        }
    }
}

TEST(NumericMinC, MatchesClosedForm) {
    EXPECT_NEAR(numeric_min_C(2, 1e-6), 4.2360680, 1e-6);
    EXPECT_NEAR(numeric_min_C(3, 1e-6), 3.0 + 2.0 * std::sqrt(3.0), 1e-6);
    double prev = 0;
    for (std::uint64_t n = 2; n <= 12; ++n) {
        double c = numeric_min_C(n, 1e-9);
        EXPECT_NEAR(c, distortion_constant(n).to_double(), 1e-9);
        EXPECT_GT(c, prev);
        prev = c;
    }
    EXPECT_THROW(numeric_min_C(1, 1e-9), Error);
}

TEST(Builders, UnusualParameterCorners) {
    // limit alpha with the registration table and a tail
    {
        auto pair = build_power_beta_iso<Rational>(Ordinal::omega(), Ordinal::omega(), 2,
                                                   {Rational{1, 2}, Rational{1, 4}, Rational{1, 4}});
        auto [failures, witness] = round_trip_failures(pair, 12, 15, 73);
        EXPECT_EQ(failures, 0u) << witness;
        auto [sf, sw] = stabilization_failures(pair.forward, 6, 64, 74);
        EXPECT_EQ(sf, 0u) << sw;
    }
    // successor alpha above 1 at depth three
    {
        auto pair = build_power_iso<Rational>(Ordinal{2}, 3,
                                              {Rational{1, 2}, Rational{1, 4}, Rational{1, 4}});
        auto [failures, witness] = round_trip_failures(pair, 12, 15, 75);
        EXPECT_EQ(failures, 0u) << witness;
    }
    // a non-principal limit exponent for the folding pair
    {
        auto pair = build_tk<Rational>(O("w*2"), 3,
                                       {Rational{1, 2}, Rational{1, 4}, Rational{1, 4}});
        auto [failures, witness] = round_trip_failures(pair, 12, 15, 76);
        EXPECT_EQ(failures, 0u) << witness;
        auto [sf, sw] = stabilization_failures(pair.forward, 6, 64, 77);
        EXPECT_EQ(sf, 0u) << sw;
    }
    // finite beta of size two: the round robin cover with two families
    {
        auto pair = build_power_beta_iso<Rational>(Ordinal::omega(), Ordinal{2}, 1,
                                                   {Rational{1, 3}, Rational{2, 3}});
        auto [failures, witness] = round_trip_failures(pair, 12, 15, 78);
        EXPECT_EQ(failures, 0u) << witness;
    }
}

TEST(Catalog, ConstructedDistortionWithinCatalogUppers) {
    // wherever a constructed pair exists, its distortion never exceeds the
    // directed positive upper bound the catalog reports for that pair
    auto check = [](double dist, const Ordinal& from, const Ordinal& to) {
        auto bound = distance_bounds(from, to, DistanceMode::positive_directed);
        ASSERT_FALSE(bound.infinite);
        EXPECT_LE(dist, bound.upper.to_double() + 1e-9)
            << format_ordinal(from) << " -> " << format_ordinal(to);
    };
    for (const char* alpha : {"1", "w"}) {
        for (std::uint64_t k : {2u, 3u}) {
            auto pair = build_tk<double>(O(alpha), k, optimal_weights_tk(k));
            check(distortion(pair), omega_pow(O(alpha)) * Ordinal{k}, omega_pow(O(alpha)));
        }
        for (std::uint64_t n : {2u, 3u}) {
            auto pair = build_power_iso<double>(O(alpha), n, optimal_weights_power(n));
            check(distortion(pair), omega_pow(O(alpha)), omega_pow(O(alpha) * Ordinal{n}));
        }
    }
    {
        auto pair = build_power_beta_iso<double>(Ordinal{1}, Ordinal::omega(), 2,
                                                 optimal_weights_power(3));
        check(distortion(pair), Ordinal::omega() + Ordinal::omega(),
              omega_pow(Ordinal{2}) * Ordinal::omega());
    }
    {
        auto pair = build_omega2_family<double>((3.0 - std::sqrt(3.0)) / 2.0);
        check(distortion(pair), Ordinal::omega(), Ordinal::omega() * Ordinal{2});
    }
}

TEST(Triv1, CanonicalWitnessesAndSoundness) {
    // Tf = 1 gives the trivial bound 1
    auto om = build_omega2_family<Rational>(Rational{1, 3});
    F one = F::constant(Ordinal::omega(), Rational{1});
    EXPECT_EQ(triv1_certificate(om.forward, one), Rational{1});

    // the indicator of the last summand certifies >= 2k - 1 on the folding pair
    for (std::uint64_t k : {2u, 3u, 4u}) {
        auto lam = optimal_weights_tk(k);
        auto pair = build_tk<double>(Ordinal{1}, k, lam);
        Ordinal W = Ordinal::omega();
        StepFunction<double> witness = StepFunction<double>::indicator_block(
            pair.forward.domain_top, W * Ordinal{k - 1}, W * Ordinal{k});
        double bound = triv1_certificate(pair.forward, witness);
        EXPECT_GE(bound, 2.0 * k - 1.0 - 1e-9);
        // soundness: never above the distortion of the pair itself
        EXPECT_LE(bound, distortion(pair) + 1e-9);
    }

    // bad witnesses are rejected
    auto tk = build_tk<Rational>(Ordinal{1}, 2, even_weights(2));
    F neg = F::constant(tk.forward.domain_top, Rational{-1});
    EXPECT_THROW(triv1_certificate(tk.forward, neg), BadWitness);
    F small = F::constant(tk.forward.domain_top, half);
    EXPECT_THROW(triv1_certificate(tk.forward, small), BadWitness);
    EXPECT_THROW(triv1_certificate(build_c0_c<Rational>().forward,
                                   F::constant(Ordinal::omega(), Rational{1})),
                 BadWitness);
}

} // namespace
