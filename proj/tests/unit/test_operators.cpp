#include "lotop/instances.hpp"
#include "lotop/operators.hpp"
#include "lotop/tables.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lotop;

namespace {

const Bounds kB{};

Collection coll(const char* t) { return parse_collection(t); }

} // namespace

TEST(Operators, GrMemberExamples)
{
    EXPECT_TRUE(gr_member(encode_pair(codes::id(), codes::id()), coll("{{1}}"), SetExpr::fin({1}), kB).is_verified());
    EXPECT_TRUE(gr_member(encode_pair(codes::suc(), codes::pred()), coll("{{1}}"), SetExpr::fin({2}), kB).is_verified());
    EXPECT_TRUE(gr_member(encode_pair(codes::id(), codes::id()), coll("{}"), SetExpr::fin({2}), kB).is_refuted());
    EXPECT_TRUE(gr_member(encode_pair(codes::id(), codes::id()), coll("{{1}}"), SetExpr::fin({2}), kB).is_refuted());
}

TEST(Operators, MoMemberExamples)
{
    ensure_standard_predicates();
    ThetaSeq c0 = ThetaSeq::constant(coll("{{0}}"));
    EXPECT_TRUE(mo_member(encode_pair(7, codes::id()), c0, SetExpr::fin({0}), kB).is_verified());
    ThetaSeq rho = ThetaSeq::rho("evens");
    EXPECT_TRUE(mo_member(encode_pair(3, codes::id()), rho, SetExpr::fin({1}), kB).is_verified());
    EXPECT_TRUE(mo_member(encode_pair(4, codes::id()), rho, SetExpr::fin({1}), kB).is_refuted());
    // Infinite family: a witness among the first members suffices.
    ThetaSeq om = ThetaSeq::constant(o_omega());
    EXPECT_TRUE(mo_member(encode_pair(0, codes::constant(5)), om, SetExpr::fin({5}), kB).is_upto());
    EXPECT_TRUE(mo_member(encode_pair(0, codes::id()), om, SetExpr::fin({5}), kB).is_unknown());
}

TEST(Operators, MoIterExamples)
{
    ThetaSeq c0 = ThetaSeq::constant(coll("{{0}}"));
    SetExpr p = SetExpr::fin({3});
    EXPECT_TRUE(mo_iter_member(encode_pair(0, 3), c0, p, 0, kB).is_verified());
    EXPECT_TRUE(mo_iter_member(encode_pair(1, 3), c0, p, 0, kB).is_refuted());
    Nat z = encode_pair(1, encode_pair(0, codes::constant(encode_pair(0, 3))));
    EXPECT_TRUE(mo_iter_member(z, c0, p, 0, kB).is_refuted());
    EXPECT_TRUE(mo_iter_member(z, c0, p, 1, kB).is_verified());
    Nat z2 = encode_pair(1, encode_pair(0, codes::constant(z)));
    EXPECT_TRUE(mo_iter_member(z2, c0, p, 1, kB).is_refuted());
    EXPECT_TRUE(mo_iter_member(z2, c0, p, 2, kB).is_verified());
}

TEST(Operators, LoVerifyExamples)
{
    ThetaSeq th = ThetaSeq::constant(coll("{{},{1}}"));
    SetExpr p = SetExpr::fin({4});
    EXPECT_TRUE(lo_verify(Certificate::dedicated(Sight::nil(), encode_pair(0, 4), th, p, 1000)).is_verified());
    for (std::uint64_t e : {0, 17, 12345})
        EXPECT_TRUE(lo_verify(Certificate::dedicated(Sight::node({}), encode_pair(1, encode_pair(9, e)), th, p, 1000))
                        .is_verified());
    auto bad = Certificate::dedicated(Sight::flat({0}), encode_pair(1, encode_pair(0, codes::id())), th, p, 1000);
    EXPECT_TRUE(lo_verify(bad).is_refuted());
    Certificate broken = bad;
    broken.sight.reset();
    EXPECT_THROW(lo_verify(broken), std::invalid_argument);
    auto sup = Certificate::supporting(Sight::nil(), PartialSeqFn::coded(codes::constant(encode_pair(0, 4))), th, p, 1000);
    EXPECT_TRUE(lo_verify(sup).is_verified());
}

TEST(Operators, SearchExamples)
{
    ThetaSeq th = ThetaSeq::constant(coll("{{0,1},{2}}"));
    SetExpr p = SetExpr::fin({4});
    auto r = search_dedicated(encode_pair(0, 4), th, p, {});
    ASSERT_TRUE(r.verdict.is_verified());
    EXPECT_TRUE(r.cert->sight->is_nil());
    // z from fwd of a known supporting w.
    Sight s = parse_sight("(0:Nil,1:Nil)");
    std::map<Seq, Nat> w{{{}, encode_pair(1, 0)}, {{0}, encode_pair(0, 4)}, {{1}, encode_pair(0, 4)}};
    auto z = fwd_transform(PartialSeqFn::coded(table_seq_code(w)), 100000);
    ASSERT_TRUE(z.is_defined());
    auto r2 = search_dedicated(z.value, th, p, {});
    ASSERT_TRUE(r2.verdict.is_verified());
    EXPECT_EQ(*r2.cert->sight, s);
    // Diverging e.
    Code loop = compile("fix (λself x. self x)");
    auto r3 = search_dedicated(encode_pair(1, encode_pair(0, loop)), th, p, {3, 8, 2000});
    EXPECT_TRUE(r3.verdict.is_unknown());
    EXPECT_FALSE(r3.cert.has_value());
}

TEST(Operators, PittsRealizer)
{
    Code a = codes::suc();
    Code b = compile("λq. ⟨q_1, q_2 5⟩");
    Code c = pitts_c_realizer(a, b);
    EXPECT_EQ(apply(c, encode_pair(0, 9), 100000), apply(a, 9, 100000));
    Code e = compile("λm. ⟨0, m⟩");
    EXPECT_EQ(apply(c, encode_pair(1, encode_pair(4, e)), 100000), AppResult::defined(encode_pair(4, 6)));
    Code zero = codes::constant(0);
    EXPECT_EQ(apply(pitts_c_realizer(zero, zero), encode_pair(0, 9), 100000), AppResult::defined(0));
    EXPECT_TRUE(apply(c, encode_pair(2, 0), 100000).is_stuck());
    // Nested: e(m) = <1,<m, e'>>, two unfoldings of the second clause.
    Code inner = compile("λm. ⟨1, ⟨m, E⟩⟩", {{"E", e}});
    EXPECT_EQ(apply(c, encode_pair(1, encode_pair(4, inner)), 100000),
              AppResult::defined(encode_pair(4, encode_pair(5, 6))));
}

TEST(Operators, ClassifyExtremes)
{
    auto a = classify_extremes(coll("{{1,2},{2,3}}"));
    EXPECT_TRUE(a.is_id.is_verified());
    EXPECT_FALSE(a.is_top);
    EXPECT_TRUE(classify_extremes(coll("{{}}")).is_top);
    EXPECT_TRUE(classify_extremes(o_omega()).is_id.is_refuted());
    EXPECT_TRUE(classify_extremes(ThetaSeq::rho("evens")).is_id.is_verified());
    EXPECT_FALSE(classify_extremes(ThetaSeq::rho("evens")).is_top);
    ThetaSeq fs = ThetaSeq::fin_supported(coll("{{1}}"), {{Nat(3), coll("{{0},{1}}")}});
    EXPECT_TRUE(classify_extremes(fs).is_id.is_refuted());
    EXPECT_FALSE(classify_extremes(fs).is_top);
    ThetaSeq fs2 = ThetaSeq::fin_supported(coll("{{1}}"), {{Nat(3), coll("{{}}")}});
    EXPECT_TRUE(classify_extremes(fs2).is_top);
    ThetaSeq m = ThetaSeq::meet(ThetaSeq::constant(o_omega()), ThetaSeq::constant(coll("{{1}}")));
    EXPECT_TRUE(classify_extremes(m).is_id.is_verified());
    ThetaSeq j = ThetaSeq::join(ThetaSeq::constant(o_omega()), ThetaSeq::constant(coll("{{1}}")));
    EXPECT_TRUE(classify_extremes(j).is_id.is_refuted());
}

// Stage k membership yields a certificate of depth <= k, for every z < 1024.
TEST(OperatorsProperty, StageSoundnessSmallCodes)
{
    std::mt19937_64 rng(2001);
    InstanceParams params;
    params.universe = 4;
    for (int t = 0; t < 4; ++t) {
        ThetaSeq th = random_theta(rng, params);
        SetExpr p = random_fin(rng, 4, 1, 2);
        for (std::uint64_t z = 0; z < 1024; ++z)
            for (std::size_t k = 0; k <= 3; ++k) {
                Bounds b;
                b.fuel = 2000;
                if (!mo_iter_member(z, th, p, k, b).is_verified()) continue;
                auto r = search_dedicated(z, th, p, {k, 64, 2000});
                ASSERT_TRUE(r.verdict.is_verified()) << "z=" << z << " k=" << k;
                EXPECT_LE(r.cert->sight->depth(), k);
            }
    }
}

// Both directions: z in mo^k(p) iff a dedicated sight of depth <= k exists.
TEST(OperatorsProperty, StageAgreementConst)
{
    std::vector<Collection> colls = {coll("{{0}}"), coll("{{0,1},{2,3}}"), make_builtin("O:1:3"),
                                     make_builtin("K:4"), coll("{{},{1}}"), coll("{}")};
    std::size_t hits = 0;
    for (const auto& c : colls) {
        ThetaSeq th = ThetaSeq::constant(c);
        for (unsigned mask = 0; mask < 16; ++mask) {
            std::vector<Nat> xs;
            for (unsigned i = 0; i < 4; ++i)
                if (mask >> i & 1) xs.emplace_back(i);
            SetExpr p = SetExpr::fin(xs);
            for (std::uint64_t z = 0; z < 1024; ++z)
                for (std::size_t k = 0; k <= 3; ++k) {
                    Bounds b;
                    b.fuel = 2000;
                    bool mo = mo_iter_member(z, th, p, k, b).is_verified();
                    bool found = search_dedicated(z, th, p, {k, 64, 2000}).verdict.is_verified();
                    ASSERT_EQ(mo, found) << c.to_string() << " p=" << p.to_string() << " z=" << z << " k=" << k;
                    hits += mo;
                }
        }
    }
    EXPECT_GT(hits, 0u);
}

TEST(OperatorsProperty, StageSoundnessTables)
{
    std::mt19937_64 rng(2002);
    InstanceParams params;
    params.universe = 4;
    params.max_depth = 3;
    for (int t = 0; t < 200; ++t) {
        Instance in = random_instance(rng, params);
        std::size_t k = in.sight.depth();
        EXPECT_TRUE(mo_iter_member(in.z, in.theta, in.p, k, kB).is_verified());
        auto r = search_dedicated(in.z, in.theta, in.p, {k, 64, 100000});
        ASSERT_TRUE(r.verdict.is_verified());
        EXPECT_LE(r.cert->sight->depth(), k);
    }
}

TEST(OperatorsProperty, DegenerateShortcut)
{
    std::mt19937_64 rng(2003);
    ThetaSeq th = ThetaSeq::fin_supported(coll("{{1}}"), {{Nat(5), coll("{{0},{}}")}});
    ASSERT_TRUE(classify_extremes(th).is_top);
    for (int i = 0; i < 100; ++i) {
        Nat z = encode_pair(1, encode_pair(5, Nat(rng() % 100000)));
        SetExpr p = random_fin(rng, 6, 0, 3);
        auto r = search_dedicated(z, th, p, {1, 1, 1});
        ASSERT_TRUE(r.verdict.is_verified());
        EXPECT_TRUE(r.cert->sight->is_degenerate());
    }
}
