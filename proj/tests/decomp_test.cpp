#include <gtest/gtest.h>

#include <memory>
#include <set>

#include "ckord/decomp.hpp"
#include "ckord/json_io.hpp"
#include "ckord/sampling.hpp"

using namespace ckord;

namespace {

Ordinal O(const char* text) { return parse_ordinal(text); }

Ordinal sample_source_point(Rng& rng, const PijSystem& sys, std::uint64_t i) {
    std::uint64_t n = detail::pick(rng, 1, 6);
    Ordinal block_len = sys.alpha().is_successor()
        ? omega_pow(predecessor(sys.alpha()))
        : omega_pow(fundamental_sequence(sys.alpha(), n));
    Ordinal prev;
    if (!sys.alpha().is_successor() && n > 1)
        prev = omega_pow(fundamental_sequence(sys.alpha(), n - 1));
    Ordinal offset = prev + sample_in(rng, block_len);
    return sys.source_point(i, n, offset);
}

TEST(Pij, SuccessorCaseAlphaOneParity) {
    PijSystem sys{Ordinal{1}, 2};
    // I_1 = odd integers >= 3 (blockwise 2n+1), I_2 = even integers >= 4
    for (std::uint64_t n = 1; n <= 20; ++n) {
        auto odd = sys.locate_source(Ordinal{2 * n + 1});
        ASSERT_TRUE(odd.has_value());
        EXPECT_EQ(odd->piece, 1u);
        auto even = sys.locate_source(Ordinal{2 * n + 2});
        ASSERT_TRUE(even.has_value());
        EXPECT_EQ(even->piece, 2u);
    }
    EXPECT_FALSE(sys.locate_source(Ordinal{1}).has_value());
    EXPECT_FALSE(sys.locate_source(Ordinal{2}).has_value());
    EXPECT_EQ(sys.map(1, 2, Ordinal{5}), O("w+2"));
}

TEST(Pij, BlocksArePairwiseDisjoint) {
    for (const char* alpha : {"1", "2", "w", "w+1"}) {
        PijSystem sys{O(alpha), 3};
        Rng rng{42};
        for (int s = 0; s < 500; ++s) {
            Ordinal x = sample_in(rng, omega_pow(sys.alpha()));
            if (!(x < omega_pow(sys.alpha()))) continue;
            auto loc = sys.locate_source(x);
            if (!loc) continue;
            // membership in I_i is unique: round trip through the block data
            EXPECT_EQ(sys.source_point(loc->piece, loc->block, loc->offset), x);
        }
    }
}

TEST(Pij, MapsAreBijectionsOntoTargetBlocks) {
    for (const char* alpha : {"1", "2", "w"}) {
        PijSystem sys{O(alpha), 3};
        Rng rng{7};
        for (std::uint64_t i = 1; i <= 3; ++i) {
            auto p = sys.p(i, 2);
            for (int s = 0; s < 300; ++s) {
                Ordinal x = sample_source_point(rng, sys, i);
                Ordinal y = p.apply(x);
                EXPECT_EQ(p.invert(y), x);
                // the image lies strictly inside (w^a, w^a * 2)
                EXPECT_TRUE(omega_pow(sys.alpha()) < y);
                EXPECT_TRUE(y < omega_pow(sys.alpha()) * Ordinal{2});
            }
        }
    }
}

TEST(Pij, TargetsAreOnto) {
    for (const char* alpha : {"1", "w"}) {
        PijSystem sys{O(alpha), 3};
        Rng rng{11};
        Ordinal top = omega_pow(sys.alpha());
        for (std::uint64_t j = 1; j <= 3; ++j) {
            Ordinal base = top * Ordinal{j - 1};
            for (int s = 0; s < 300; ++s) {
                Ordinal y = base + sample_in(rng, top);
                auto loc = sys.locate_target(y);
                if (!loc) continue; // y == w^a * j endpoint
                ASSERT_EQ(loc->piece, j);
                Ordinal x = sys.unmap(2, j, y);
                EXPECT_EQ(sys.map(2, j, x), y);
            }
        }
    }
}

TEST(Pij, CompositionLawExact) {
    for (const char* alpha : {"1", "w"}) {
        PijSystem sys{O(alpha), 3};
        Rng rng{314};
        int checked = 0;
        for (int s = 0; s < 1000; ++s) {
            std::uint64_t i = detail::pick(rng, 1, 3), j = detail::pick(rng, 1, 3);
            std::uint64_t v = detail::pick(rng, 1, 3), w = detail::pick(rng, 1, 3);
            Ordinal x = sample_source_point(rng, sys, i);
            Ordinal lhs = sys.map(w, j, sys.unmap(w, v, sys.map(i, v, x)));
            EXPECT_EQ(lhs, sys.map(i, j, x));
            ++checked;
        }
        EXPECT_EQ(checked, 1000);
    }
}

TEST(Pij, ConvergenceToTopsIsCofinal) {
    for (const char* alpha : {"1", "2", "w"}) {
        PijSystem sys{O(alpha), 3};
        Ordinal top = omega_pow(sys.alpha());
        for (std::uint64_t i = 1; i <= 3; ++i) {
            for (std::uint64_t j = 1; j <= 3; ++j) {
                Ordinal target_top = top * Ordinal{j};
                Ordinal prev_img;
                for (std::uint64_t m = 1; m <= 12; ++m) {
                    Ordinal x = sys.source_block_top(i, m);
                    Ordinal img = sys.map(i, j, x);
                    EXPECT_TRUE(prev_img < img);
                    EXPECT_TRUE(img < target_top);
                    prev_img = img;
                }
                // images exceed every sampled threshold below w^a * j
                for (std::uint64_t t = 1; t <= 10; ++t) {
                    Ordinal threshold = top * Ordinal{j - 1} + fundamental_sequence(top, t);
                    bool exceeded = false;
                    for (std::uint64_t m = 1; m <= 64 && !exceeded; ++m)
                        exceeded = threshold < sys.map(i, j, sys.source_block_top(i, m));
                    EXPECT_TRUE(exceeded);
                }
            }
        }
    }
}

TEST(Split, SuccessorCaseAlphaOne) {
    SplitFamily split{Ordinal{1}};
    auto p11 = split.piece(BigNat{1}, BigNat{1});
    EXPECT_EQ(p11.lo, Ordinal{});
    EXPECT_EQ(p11.hi, Ordinal{1});
    auto p21 = split.piece(BigNat{2}, BigNat{1});
    EXPECT_EQ(p21.lo, Ordinal{2});
    EXPECT_EQ(p21.hi, Ordinal{2});
    // min I_{n+1} = n(n+1)/2 + 1, strictly increasing toward w
    Ordinal prev;
    for (std::uint64_t n = 1; n <= 12; ++n) {
        Ordinal lo = split.family_min(BigNat{n + 1});
        EXPECT_EQ(lo, Ordinal{n * (n + 1) / 2 + 1});
        EXPECT_TRUE(prev < lo);
        prev = lo;
    }
}

TEST(Split, LimitCaseOmega) {
    SplitFamily split{Ordinal::omega()};
    auto p12 = split.piece(BigNat{1}, BigNat{2});
    EXPECT_EQ(p12.lo, O("w*2+1"));
    EXPECT_EQ(p12.hi, O("w^2"));
    auto p11 = split.piece(BigNat{1}, BigNat{1});
    EXPECT_EQ(p11.lo, Ordinal{});
    EXPECT_EQ(p11.hi, Ordinal::omega());
    auto p31 = split.piece(BigNat{3}, BigNat{1});
    EXPECT_EQ(p31.lo, O("w^2+1"));
    EXPECT_EQ(p31.hi, O("w^2+w"));
}

TEST(Split, MemberLocatesEveryPoint) {
    for (const char* alpha : {"1", "2", "w", "w*2"}) {
        SplitFamily split{O(alpha)};
        Rng rng{99};
        Ordinal top = omega_pow(split.alpha());
        for (int s = 0; s < 800; ++s) {
            Ordinal x = sample_below(rng, top);
            auto loc = split.member(x);
            auto piece = split.piece(loc.family, loc.index);
            EXPECT_FALSE(x < piece.lo);
            EXPECT_FALSE(piece.hi < x);
        }
        EXPECT_THROW(split.member(top), NotInUnion);
    }
}

TEST(Split, MinimaExceedThresholds) {
    for (const char* alpha : {"1", "w", "w^2"}) {
        SplitFamily split{O(alpha)};
        Ordinal top = omega_pow(split.alpha());
        for (std::uint64_t t = 1; t <= 10; ++t) {
            Ordinal threshold = fundamental_sequence(top, t);
            bool exceeded = false;
            for (std::uint64_t f = 2; f <= 300 && !exceeded; ++f)
                exceeded = threshold < split.family_min(BigNat{f});
            EXPECT_TRUE(exceeded) << alpha << " threshold " << t;
        }
        // minima never decrease along the family order
        Ordinal prev;
        for (std::uint64_t f = 2; f <= 40; ++f) {
            Ordinal lo = split.family_min(BigNat{f});
            EXPECT_TRUE(prev < lo);
            prev = lo;
        }
    }
}

TEST(Covering, RoundTripsAllKinds) {
    for (const char* alpha : {"1", "2", "w", "w*2", "w^2"}) {
        Ordinal a = O(alpha);
        Ordinal top = omega_pow(a);
        std::vector<CoveringSplit> covers;
        covers.push_back(CoveringSplit::identity(a));
        covers.push_back(CoveringSplit::round_robin(a, BigNat{3}));
        covers.push_back(CoveringSplit::triangular(a));
        for (const auto& cover : covers) {
            Rng rng{2024};
            for (int s = 0; s < 600; ++s) {
                Ordinal x = sample_in(rng, top);
                if (!(x < top)) continue;
                auto loc = cover.locate(x);
                EXPECT_EQ(cover.rho_point(loc.family, loc.t), x);
                EXPECT_TRUE(loc.t < top);
                EXPECT_FALSE(loc.t.is_zero());
            }
            // required fixed point
            BigNat fam{1};
            EXPECT_EQ(cover.rho_point(fam, top), top);
        }
    }
}

TEST(Covering, RhoIsStrictlyIncreasing) {
    for (const char* alpha : {"2", "w"}) {
        Ordinal a = O(alpha);
        Ordinal top = omega_pow(a);
        auto cover = std::make_shared<CoveringSplit>(CoveringSplit::triangular(a));
        for (std::uint64_t f = 1; f <= 4; ++f) {
            auto rho = rho_homeomorphism(cover, BigNat{f});
            Rng rng{f};
            for (int s = 0; s < 500; ++s) {
                Ordinal t1 = sample_in(rng, top);
                Ordinal t2 = sample_in(rng, top);
                if (t2 < t1) std::swap(t1, t2);
                if (t1 == t2) continue;
                EXPECT_TRUE(rho.apply(t1) < rho.apply(t2));
            }
        }
    }
}

TEST(Covering, RhoInverseAndUnknownFamily) {
    Ordinal a = Ordinal::omega();
    auto cover = std::make_shared<CoveringSplit>(CoveringSplit::triangular(a));
    auto rho2 = rho_homeomorphism(cover, BigNat{2});
    Rng rng{5};
    Ordinal top = omega_pow(a);
    for (int s = 0; s < 1000; ++s) {
        Ordinal t = sample_in(rng, top);
        EXPECT_EQ(rho2.invert(rho2.apply(t)), t);
    }
    // a point in family 1 is outside rho_2's codomain
    Ordinal in_family1 = Ordinal{1};
    EXPECT_THROW(rho2.invert(in_family1), NotInUnion);
}

TEST(Covering, FamiliesAreDisjointAndExhaustive) {
    Ordinal a = O("w");
    CoveringSplit cover = CoveringSplit::round_robin(a, BigNat{4});
    Rng rng{17};
    Ordinal top = omega_pow(a);
    for (int s = 0; s < 800; ++s) {
        Ordinal x = sample_in(rng, top);
        if (!(x < top)) continue;
        auto loc = cover.locate(x); // never throws below the top
        // rho of any other family never hits x
        for (std::uint64_t f = 1; f <= 4; ++f) {
            if (BigNat{f} == loc.family) continue;
            EXPECT_FALSE(cover.rho_point(BigNat{f}, loc.t) == x);
        }
    }
}

TEST(Covering, FamilyMinima) {
    CoveringSplit rr = CoveringSplit::round_robin(O("w"), BigNat{3});
    EXPECT_EQ(rr.family_min(BigNat{1}), Ordinal{1});
    EXPECT_EQ(rr.family_min(BigNat{2}), O("w+1"));
    EXPECT_EQ(rr.family_min(BigNat{3}), O("w^2+1"));
    CoveringSplit tri = CoveringSplit::triangular(Ordinal{1});
    EXPECT_EQ(tri.family_min(BigNat{1}), Ordinal{1}); // the 0 point is dropped
}

TEST(Fundamental, CanonicalRules) {
    for (std::uint64_t m = 1; m <= 6; ++m) {
        EXPECT_EQ(fundamental_sequence(Ordinal::omega(), m), Ordinal{m});
        EXPECT_EQ(fundamental_sequence(O("w^2"), m), Ordinal::omega() * Ordinal{m});
        EXPECT_EQ(fundamental_sequence(O("w^w"), m), omega_pow(Ordinal{m}));
        EXPECT_EQ(fundamental_sequence(O("w*3"), m), O("w*2") + Ordinal{m});
    }
    EXPECT_THROW(fundamental_sequence(Ordinal{5}, 1), NotLimit);
    EXPECT_THROW(fundamental_sequence(O("w+1"), 1), NotLimit);
    // strictly increasing with supremum below the target
    Rng rng{8};
    Ordinal bound = O("w^(w+2)*2+w^3");
    for (int s = 0; s < 300; ++s) {
        Ordinal g = sample_below(rng, bound);
        if (!g.is_limit()) continue;
        Ordinal prev;
        for (std::uint64_t m = 1; m <= 8; ++m) {
            Ordinal v = fundamental_sequence(g, m);
            EXPECT_TRUE(v < g);
            EXPECT_TRUE(prev < v);
            prev = v;
        }
    }
}

TEST(Tuples, PowerVariantMatchesDigits) {
    TupleCodec codec{TupleCodec::Variant::power_only, Ordinal{1}, 3, std::nullopt};
    auto t = codec.decode(O("w^2*2+w"));
    ASSERT_EQ(t.length(), 2u);
    EXPECT_EQ(t.coords[0], Ordinal{2});
    EXPECT_EQ(t.coords[1], Ordinal{1});
    EXPECT_EQ(codec.encode(t), O("w^2*2+w"));
    auto topt = codec.decode(O("w^3"));
    EXPECT_TRUE(topt.is_top);
    EXPECT_EQ(codec.encode(topt), O("w^3"));
}

TEST(Tuples, WithBetaEndpoint) {
    Ordinal beta = O("w+2");
    TupleCodec codec{TupleCodec::Variant::with_beta, Ordinal{2}, 3, beta};
    auto t = codec.decode(codec.top());
    ASSERT_EQ(t.length(), 1u);
    EXPECT_EQ(t.coords[0], beta);
    EXPECT_THROW(codec.encode(TupleTheta{{beta, Ordinal{1}}, false}), OutOfRange);
}

TEST(Tuples, OrderAgreement) {
    for (auto variant : {TupleCodec::Variant::with_beta, TupleCodec::Variant::power_only}) {
        std::optional<Ordinal> beta;
        if (variant == TupleCodec::Variant::with_beta) beta = O("w*2");
        TupleCodec codec{variant, Ordinal::omega(), 2, beta};
        Rng rng{64};
        Ordinal top = codec.top();
        for (int s = 0; s < 10000; ++s) {
            Ordinal y1 = sample_in(rng, top);
            Ordinal y2 = sample_in(rng, top);
            auto t1 = codec.decode(y1);
            auto t2 = codec.decode(y2);
            EXPECT_EQ(y1 < y2, TupleCodec::lex_less(t1, t2));
            EXPECT_EQ(codec.encode(t1), y1);
        }
    }
}

TEST(Pij, StrictlyIncreasingOnOrderedPairs) {
    for (const char* alpha : {"1", "w"}) {
        PijSystem sys{O(alpha), 3};
        Rng rng{909};
        for (std::uint64_t i = 1; i <= 3; ++i) {
            auto p = sys.p(i, 2);
            for (int s = 0; s < 600; ++s) {
                Ordinal x1 = sample_source_point(rng, sys, i);
                Ordinal x2 = sample_source_point(rng, sys, i);
                if (x2 < x1) std::swap(x1, x2);
                if (x1 == x2) continue;
                EXPECT_TRUE(p.apply(x1) < p.apply(x2));
            }
        }
    }
}

TEST(Split, PieceJsonTruncatedToDepth) {
    SplitFamily split{Ordinal::omega()};
    auto j = split_family_to_json(split, BigNat{1}, 3);
    EXPECT_EQ(j["family"], "1");
    ASSERT_EQ(j["blocks"].size(), 3u);
    EXPECT_EQ(j["blocks"][0][0], "0");
    EXPECT_EQ(j["blocks"][0][1], "w");
    EXPECT_EQ(j["blocks"][1][0], "w*2+1");
    EXPECT_EQ(j["blocks"][1][1], "w^2");
}

TEST(Registry, BothDirectionsStayConsistent) {
    // candidate stream: single finite coordinates
    TupleRegistry reg{[](std::uint64_t c) {
        return std::vector<Ordinal>{Ordinal{c}};
    }};
    std::vector<Ordinal> p0{Ordinal{5}};
    std::vector<Ordinal> p1{Ordinal{7}, Ordinal::omega()};
    BigNat f0 = reg.family_for(p0);
    BigNat f1 = reg.family_for(p1);
    EXPECT_FALSE(f0 == f1);
    EXPECT_EQ(reg.family_for(p0), f0);
    EXPECT_EQ(reg.prefix_for(f0), p0);
    // a family-side query binds a fresh candidate prefix, skipping used ones
    BigNat f9{9};
    auto candidate = reg.prefix_for(f9);
    EXPECT_EQ(reg.family_for(candidate), f9);
    EXPECT_FALSE(candidate == p0);
    EXPECT_FALSE(candidate == p1);
    EXPECT_EQ(reg.size(), 3u);
}

} // namespace
