#include "lotop/relations.hpp"
#include "lotop/tables.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lotop;

namespace {

const Bounds kB{};

Collection coll(const char* t) { return parse_collection(t); }

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

} // namespace

TEST(Relations, LeqMoExamples)
{
    EXPECT_TRUE(check_leq_mo(co_m_tons(1, 5), co_m_tons(2, 5), codes::id(), kB).verdict.is_verified());
    auto fs = check_leq_mo(cofinites(), up_n(), codes::id(), kB);
    EXPECT_TRUE(fs.verdict.is_upto()) << to_string(fs.verdict);
    EXPECT_TRUE(check_leq_mo(coll("{{0}}"), coll("{{1}}"), codes::id(), kB).verdict.is_refuted());
    // A non-identity realizer goes through arrow checks.
    EXPECT_TRUE(check_leq_mo(coll("{{1}}"), coll("{{0}}"), codes::suc(), kB).verdict.is_verified());
    auto r = check_leq_mo(co_m_tons(1, 5), co_m_tons(2, 5), codes::id(), kB);
    EXPECT_EQ(r.cert.mo_evidence.size(), 5u);
    EXPECT_TRUE(reverify(r.cert).is_verified());
}

TEST(Relations, LeqMoReflexive)
{
    for (const auto& name : finite_builtin_names()) {
        Collection c = make_builtin(name);
        EXPECT_TRUE(check_leq_mo(c, c, codes::id(), kB).verdict.is_verified()) << name;
    }
}

TEST(Relations, LeqMoMonotoneEmbedding)
{
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; 2 * (m + 1) < alpha; ++m) {
            auto r = check_leq_mo(co_m_tons_checked(m, alpha), co_m_tons_checked(m + 1, alpha), codes::id(), kB);
            EXPECT_TRUE(r.verdict.is_verified()) << m << " " << alpha;
            // The converse fails for id.
            EXPECT_TRUE(check_leq_mo(co_m_tons_checked(m + 1, alpha), co_m_tons_checked(m, alpha), codes::id(), kB)
                            .verdict.is_refuted());
        }
}

TEST(Relations, FstarUpNBothWays)
{
    EXPECT_TRUE(check_leq_mo(cofinites(), up_n(), codes::id(), kB).verdict.is_upto());
    EXPECT_TRUE(check_leq_mo(up_n(), cofinites(), codes::id(), kB).verdict.is_upto());
}

TEST(Relations, LeqLoExamples)
{
    ThetaSeq c0 = ThetaSeq::constant(coll("{{0}}"));
    Code w = codes::constant(encode_pair(0, 0));
    Code r = codes::constant(w);
    auto res = check_leq_lo(c0, c0, r, {});
    EXPECT_TRUE(res.verdict.is_verified()) << to_string(res.verdict);
    ASSERT_EQ(res.cert.lo_evidence.size(), 1u);
    EXPECT_TRUE(res.cert.lo_evidence[0].second.sight->is_nil());
    EXPECT_TRUE(reverify(res.cert).is_verified());
    // r undefined.
    EXPECT_TRUE(check_leq_lo(c0, c0, table_code({}), {}).verdict.is_unknown());
    // A one-level tree: w() = <1,0>, w((x)) = <0,x>, over {{0,1}}: {0,1} <=_lo {{0,1}} via leaves.
    ThetaSeq c01 = ThetaSeq::constant(coll("{{0,1}}"));
    Code w1 = compile("λs. ifz ($len s) ⟨1, 0⟩ ⟨0, $nth ⟨s, 0⟩⟩");
    auto r1 = check_leq_lo(c01, c01, codes::constant(w1), {});
    EXPECT_TRUE(r1.verdict.is_verified());
}

TEST(Relations, DiagonalSupport)
{
    ThetaSeq om = ThetaSeq::constant(o_omega());
    for (std::size_t m : {1u, 2u, 3u}) {
        std::vector<Nat> a;
        for (std::size_t i = 0; i < m; ++i) a.emplace_back(7 * i + 3);
        SetExpr p = SetExpr::cofin(a);
        SupportBounds b;
        b.child_bound = 40;
        b.max_nodes = 3000;
        auto r = check_supporting(diagonal_tree(a), diagonal_zeta(m), om, p, b);
        EXPECT_TRUE(r.verdict.is_upto()) << m << " " << to_string(r.verdict);
        EXPECT_GT(r.leaves_checked, 0u);
    }
    // Against a wrong p the leaves are caught.
    std::vector<Nat> a{encode_tuple({1, 2}), encode_tuple({5, 6})};
    SupportBounds b;
    b.child_bound = 10;
    b.max_nodes = 200000;
    auto bad = check_supporting(diagonal_tree(a), diagonal_zeta(2), om, SetExpr::cofin({encode_tuple({0, 0})}), b);
    EXPECT_TRUE(bad.verdict.is_refuted());
}

TEST(Relations, DiagonalLeqLo)
{
    // O_2^omega <=_lo O_1^omega with r = n -> zeta and the trees S_a as certificates.
    ThetaSeq o2 = ThetaSeq::constant(co_m_tons(2, std::nullopt));
    ThetaSeq om = ThetaSeq::constant(o_omega());
    PartialSeqFn zeta = diagonal_zeta(2);
    LeqLoOptions opts;
    opts.search.enum_bound = 20;
    opts.host_w = [zeta](const Nat&) { return zeta; };
    opts.provider = [&](const Nat&, const SetExpr& a, const PartialSeqFn& w) -> std::optional<Certificate> {
        SupportBounds b;
        b.child_bound = 30;
        b.max_nodes = 500;
        return Certificate::supporting(diagonal_tree(a.elems()), w, om, a, b);
    };
    auto r = check_leq_lo(o2, om, codes::constant(*zeta.code()), opts);
    EXPECT_TRUE(r.verdict.is_upto()) << to_string(r.verdict);
    EXPECT_EQ(r.cert.lo_evidence.size(), 20u);
}

TEST(Relations, RefuteByIPExamples)
{
    auto r = refute_leq_lo_by_ip(co_m_tons(3, 5), co_m_tons(2, 5), kB);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->cert.n, 2u);
    EXPECT_TRUE(r->verdict.is_verified());
    EXPECT_TRUE(reverify(r->cert).is_verified());
    auto nn = refute_leq_lo_by_ip(coll("{{0},{1}}"), cofinites(), kB);
    ASSERT_TRUE(nn.has_value());
    EXPECT_EQ(nn->cert.n, 2u);
    EXPECT_TRUE(reverify(nn->cert).passed());
    EXPECT_FALSE(refute_leq_lo_by_ip(coll("{{0,1},{1,2}}"), cofinites(), kB).has_value());
    // F contains the empty set: refuted against anything with 1-IP.
    auto f = refute_leq_lo_by_ip(finites(), co_m_tons(1, 5), kB);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->cert.n, 1u);
}

TEST(Relations, RefuteByIPCoMTons)
{
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; m + 1 < alpha; ++m) {
            bool gap = ceil_div(alpha, m + 1) < ceil_div(alpha, m);
            auto r = refute_leq_lo_by_ip(co_m_tons(m + 1, alpha), co_m_tons(m, alpha), kB);
            EXPECT_EQ(r.has_value(), gap) << m << " " << alpha;
            if (r) {
                EXPECT_EQ(r->cert.n, ceil_div(alpha, m + 1));
                EXPECT_TRUE(reverify(r->cert).is_verified());
            }
        }
}

TEST(Relations, ReverifyCatchesTampering)
{
    auto r = refute_leq_lo_by_ip(co_m_tons(3, 5), co_m_tons(2, 5), kB);
    ASSERT_TRUE(r);
    auto bad = r->cert;
    bad.witness[1] = bad.witness[0];
    EXPECT_TRUE(reverify(bad).is_refuted());
    auto mo = check_leq_mo(co_m_tons(1, 5), co_m_tons(2, 5), codes::id(), kB).cert;
    std::swap(mo.mo_evidence[0].first, mo.mo_evidence[0].second);
    EXPECT_TRUE(reverify(mo).is_refuted());
}

TEST(Relations, MeetJoinExamples)
{
    EXPECT_EQ(meet_ovee(coll("{{0}}"), coll("{{1}}")).members()[0],
              SetExpr::fin({encode_pair(0, 0), encode_pair(1, 1)}));
    EXPECT_EQ(meet_ovee(coll("{{0}}"), coll("{{0}}")).members()[0],
              SetExpr::fin({encode_pair(0, 0), encode_pair(1, 0)}));
    EXPECT_EQ(join_owedge(coll("{{0}}"), coll("{{1}}")).members()[0], SetExpr::fin({encode_pair(0, 1)}));
}

// Leg laws and universal properties on seeded pairs of finite built-ins.
TEST(Relations, MeetJoinLaws)
{
    auto names = finite_builtin_names();
    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t) {
        const std::string& x = names[rng() % names.size()];
        const std::string& y = names[rng() % names.size()];
        Collection a = make_builtin(x), b = make_builtin(y);
        Collection m = meet_ovee(a, b), j = join_owedge(a, b);
        auto ml = meet_legs();
        EXPECT_TRUE(check_leq_mo(m, a, ml.left, kB).verdict.is_verified()) << x << " " << y;
        EXPECT_TRUE(check_leq_mo(m, b, ml.right, kB).verdict.is_verified()) << x << " " << y;
        EXPECT_TRUE(check_leq_mo(m, m, meet_universal(ml.left, ml.right), kB).verdict.is_verified());
        auto jl = join_legs();
        EXPECT_TRUE(check_leq_mo(a, j, jl.left, kB).verdict.is_verified()) << x << " " << y;
        EXPECT_TRUE(check_leq_mo(b, j, jl.right, kB).verdict.is_verified()) << x << " " << y;
    }
}

TEST(Relations, MeetJoinSeqLegs)
{
    ThetaSeq a = ThetaSeq::fin_supported(coll("{{0}}"), {{Nat(1), coll("{{1},{2}}")}});
    ThetaSeq b = ThetaSeq::constant(coll("{{3,4}}"));
    EXPECT_TRUE(check_leq_mo_seq(meet_ovee(a, b), a, meet_legs_seq().left, kB, 12).is_upto());
    EXPECT_TRUE(check_leq_mo_seq(meet_ovee(a, b), b, meet_legs_seq().right, kB, 12).is_upto());
    EXPECT_TRUE(check_leq_mo_seq(a, join_owedge(a, b), join_legs_seq().left, kB, 6).is_upto());
    EXPECT_TRUE(check_leq_mo_seq(b, join_owedge(a, b), join_legs_seq().right, kB, 6).is_upto());
    EXPECT_TRUE(check_leq_mo_seq(a, join_owedge(a, b), join_legs_seq().right, kB, 6).is_refuted());
}

TEST(Relations, JoinUpperBound)
{
    // alpha: A <=_lo A /\ B by reading first components, beta by second components.
    Code wa = compile("λs. ifz ($len s) ⟨1, 0⟩ ⟨0, ($nth ⟨s, 0⟩)_1⟩");
    Code wb = compile("λs. ifz ($len s) ⟨1, 0⟩ ⟨0, ($nth ⟨s, 0⟩)_2⟩");
    for (auto [x, y] : {std::pair{"K:3", "L:3"}, {"O:1:3", "C:4"}, {"{{0}}", "{{1,2}}"}}) {
        Collection a = parse_collection(x), b = parse_collection(y);
        ThetaSeq ta = ThetaSeq::constant(a), tb = ThetaSeq::constant(b);
        ThetaSeq z = ThetaSeq::constant(join_owedge(a, b));
        Code alpha = codes::constant(wa), beta = codes::constant(wb);
        ASSERT_TRUE(check_leq_lo(ta, z, alpha, {}).verdict.is_verified());
        ASSERT_TRUE(check_leq_lo(tb, z, beta, {}).verdict.is_verified());
        Verdict v = check_join_upper(ta, tb, z, alpha, beta, {});
        EXPECT_TRUE(v.is_verified()) << x << " " << y << " " << to_string(v);
    }
}

TEST(Relations, ImpliesNotNot)
{
    ensure_standard_predicates();
    SupportBounds b;
    b.child_bound = 60;
    b.max_nodes = 2000;
    auto eo = implies_notnot(coll("{@evens,!@evens}"), 6, b);
    ASSERT_TRUE(eo.has_value());
    EXPECT_TRUE(eo->verdict.is_upto()) << to_string(eo->verdict);
    auto k4 = implies_notnot(make_builtin("K:4"), 6, b);
    ASSERT_TRUE(k4.has_value());
    EXPECT_TRUE(k4->verdict.is_verified()) << to_string(k4->verdict);
    EXPECT_FALSE(implies_notnot(coll("{{0}}"), 3, b).has_value());
    EXPECT_FALSE(implies_notnot(make_builtin("K:3"), 3, b).has_value());
    // The tree S_0 has leaves exactly at B.
    ImplicitTree t = notnot_tree(SetExpr::fin({0, 1}), SetExpr::fin({2, 3}), 0);
    EXPECT_EQ(t.status({2}).kind, NodeStatus::Kind::Leaf);
    EXPECT_EQ(t.status({0}).kind, NodeStatus::Kind::NotNode);
}

TEST(Relations, AtomCheck)
{
    EXPECT_TRUE(atom_check(make_builtin("O:1:3"), kB).is_verified());
    Verdict na = atom_check(coll("{{0,1},{1,2}}"), kB);
    EXPECT_TRUE(na.is_unknown());
    EXPECT_NE(na.note.find("not applicable"), std::string::npos);
    EXPECT_TRUE(atom_check(cofinites(), kB).is_upto());
}
