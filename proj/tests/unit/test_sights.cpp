#include "lotop/instances.hpp"
#include "lotop/sights.hpp"
#include "lotop/tables.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lotop;

namespace {

const std::uint64_t kFuel = 200000;

ThetaSeq any_theta() { return ThetaSeq::constant(parse_collection("{{0},{1}}")); }

PartialSeqFn seq_table(const std::map<Seq, Nat>& m) { return PartialSeqFn::coded(table_seq_code(m), "t"); }

// Set of pairs <y,z>, y in p, z in q.
SetExpr pairs(const SetExpr& p, const SetExpr& q) { return SetExpr::wedge(p, q); }

std::size_t ref_count(const Sight& s)
{
    std::size_t n = 1;
    for (const auto& [_, c] : s.children()) n += ref_count(c);
    return n;
}

} // namespace

TEST(Sights, NotationRoundTrip)
{
    for (const char* t : {"Nil", "()", "(0:Nil,1:(2:Nil))", "(3:(),5:Nil)"}) EXPECT_EQ(parse_sight(t).to_string(), t);
    EXPECT_THROW(parse_sight("(0:Nil,0:Nil)"), std::invalid_argument);
    EXPECT_THROW(parse_sight("(0 Nil)"), std::invalid_argument);
    EXPECT_TRUE(parse_sight("(3:(),5:Nil)").is_degenerate());
    EXPECT_FALSE(parse_sight("(0:Nil)").is_degenerate());
}

TEST(Sights, DedicatedExamples)
{
    SetExpr p3 = SetExpr::singleton(3);
    EXPECT_TRUE(check_dedicated(Sight::nil(), encode_pair(0, 3), any_theta(), p3, kFuel).is_verified());
    EXPECT_TRUE(check_dedicated(Sight::nil(), encode_pair(0, 3), any_theta(), SetExpr::singleton(4), kFuel).is_refuted());
    ThetaSeq with_empty = ThetaSeq::constant(parse_collection("{{},{1}}"));
    Nat z = encode_pair(1, encode_pair(5, 0));
    EXPECT_TRUE(check_dedicated(Sight::node({}), z, with_empty, p3, kFuel).is_verified());
    EXPECT_TRUE(check_dedicated(Sight::node({}), z, any_theta(), p3, kFuel).is_refuted());
    // One level, e = id, children labelled <0,a>.
    Sight s = parse_sight("(0:Nil,1:Nil)");
    ThetaSeq th = ThetaSeq::constant(parse_collection("{{0,1}}"));
    Nat idz = encode_pair(1, encode_pair(0, table_code({{0, encode_pair(0, 3)}, {1, encode_pair(0, 3)}})));
    EXPECT_TRUE(check_dedicated(s, idz, th, p3, kFuel).is_verified());
    Nat bad = encode_pair(1, encode_pair(0, table_code({{0, encode_pair(0, 3)}})));
    EXPECT_TRUE(check_dedicated(s, bad, th, p3, kFuel).is_refuted());
}

TEST(Sights, SupportingExamples)
{
    SetExpr p7 = SetExpr::singleton(7);
    auto w = PartialSeqFn::coded(codes::constant(encode_pair(0, 7)));
    EXPECT_TRUE(check_supporting(Sight::nil(), w, any_theta(), p7, kFuel).is_verified());
    EXPECT_TRUE(check_supporting(WfTree{Seq{}}, w, any_theta(), p7, kFuel).is_verified());
    Sight s = parse_sight("(0:(1:Nil),1:Nil)");
    ThetaSeq th = ThetaSeq::constant(parse_collection("{{0,1},{1}}"));
    std::map<Seq, Nat> good{{{}, encode_pair(1, 0)},
                            {{0}, encode_pair(1, 0)},
                            {{0, 1}, encode_pair(0, 7)},
                            {{1}, encode_pair(0, 7)}};
    EXPECT_TRUE(check_supporting(s, seq_table(good), th, p7, kFuel).is_verified());
    auto bad = good;
    bad[{1}] = encode_pair(1, 0);
    auto v = check_supporting(s, seq_table(bad), th, p7, kFuel);
    EXPECT_TRUE(v.is_refuted());
    EXPECT_NE(v.note.find("(1)"), std::string::npos);
}

TEST(Sights, ImplicitSupport)
{
    WfTree t{{}, {0}, {1}, {1, 2}};
    ThetaSeq th = ThetaSeq::constant(parse_collection("{{0,1},{2}}"));
    SetExpr p = SetExpr::singleton(7);
    std::map<Seq, Nat> w{{{}, encode_pair(1, 0)}, {{0}, encode_pair(0, 7)}, {{1}, encode_pair(1, 0)},
                         {{1, 2}, encode_pair(0, 7)}};
    SupportBounds b;
    b.child_bound = 10;
    auto r = check_supporting(implicit_of(t), seq_table(w), th, p, b);
    EXPECT_TRUE(r.verdict.is_verified()) << to_string(r.verdict);
    EXPECT_EQ(r.nodes_checked, 4u);
    EXPECT_EQ(r.leaves_checked, 2u);
    // A too-small depth bound rejects the tree.
    ImplicitTree shallow = implicit_of(t);
    shallow.depth_bound = 1;
    EXPECT_TRUE(check_supporting(shallow, seq_table(w), th, p, b).verdict.is_refuted());
    // Status inconsistent with the out-set.
    ImplicitTree liar = implicit_of(t);
    liar.status = [](const Seq& s) {
        if (s.empty()) return NodeStatus::inner(SetExpr::fin({0, 1}));
        return s == Seq{0} ? NodeStatus::leaf() : NodeStatus::not_node();
    };
    EXPECT_TRUE(check_supporting(liar, seq_table(w), th, p, b).verdict.is_refuted());
}

TEST(Sights, ImplicitInfiniteIsUpTo)
{
    // Root with cofinite out-set, every child a leaf.
    ImplicitTree t;
    t.depth_bound = 1;
    t.status = [](const Seq& s) {
        if (s.empty()) return NodeStatus::inner(SetExpr::cofin({0}));
        if (s.size() == 1 && s[0] != 0) return NodeStatus::leaf();
        return NodeStatus::not_node();
    };
    ThetaSeq th = ThetaSeq::constant(o_omega());
    auto w = PartialSeqFn::native("test_cofin_w", [](const Seq& s, Meter&) {
        return AppResult::defined(s.empty() ? encode_pair(1, 0) : encode_pair(0, s[0]));
    });
    SupportBounds b;
    b.child_bound = 50;
    b.max_nodes = 20;
    auto r = check_supporting(t, w, th, SetExpr::cofin({0}), b);
    EXPECT_TRUE(r.verdict.is_upto()) << to_string(r.verdict);
    EXPECT_FALSE(r.exhaustive);
    EXPECT_LE(r.nodes_checked, 21u);
}

TEST(Sights, BwdExamples)
{
    EXPECT_EQ(bwd_transform(encode_pair(0, 7)).eval(Seq{}, kFuel), AppResult::defined(encode_pair(0, 7)));
    Nat z = encode_pair(1, encode_pair(4, codes::id()));
    EXPECT_EQ(bwd_transform(z).eval(Seq{}, kFuel), AppResult::defined(encode_pair(1, 4)));
    EXPECT_EQ(bwd_transform(z).eval(Seq{encode_pair(0, 9)}, kFuel), AppResult::defined(encode_pair(0, 9)));
    EXPECT_TRUE(bwd_transform(encode_pair(0, 7)).eval(Seq{1}, kFuel).is_stuck());
    EXPECT_TRUE(bwd_transform(encode_pair(2, 7)).eval(Seq{}, kFuel).is_stuck());
}

TEST(Sights, FwdExamples)
{
    auto w0 = PartialSeqFn::coded(codes::constant(encode_pair(0, 7)));
    auto r0 = fwd_transform(w0, kFuel);
    ASSERT_TRUE(r0.is_defined());
    EXPECT_EQ(decode_pair(r0.value), std::make_pair(Nat(0), Nat(7)));
    // w(()) = <1,2>, w((a)) = <0,a>
    auto w1 = PartialSeqFn::coded(compile("λs. ifz ($len s) ⟨1, 2⟩ ⟨0, $nth ⟨s, 0⟩⟩"));
    auto r1 = fwd_transform(w1, kFuel);
    ASSERT_TRUE(r1.is_defined());
    auto [tag, rest] = decode_pair(r1.value);
    EXPECT_EQ(tag, 1);
    EXPECT_EQ(fst(rest), 2);
    EXPECT_EQ(apply(snd(rest), 5, kFuel), AppResult::defined(encode_pair(0, 5)));
}

TEST(Sights, ShiftedFunction)
{
    auto w = PartialSeqFn::coded(compile("λs. ⟨0, $len s⟩"));
    auto v = shifted(w, 3);
    Meter m(kFuel);
    EXPECT_EQ(v.eval(Seq{1, 2}, kFuel), AppResult::defined(encode_pair(0, 3)));
    EXPECT_EQ(v.eval_coded(Seq{1, 2}, m), AppResult::defined(encode_pair(0, 3)));
}

TEST(Sights, ConcatExamples)
{
    EXPECT_EQ(concat_sights({{}}, {{}}), (WfTree{{}}));
    EXPECT_EQ(concat_sights({{}, {0}}, {{}}), (WfTree{{}, {0}}));
    EXPECT_EQ(concat_sights({{}, {1}}, {{}, {2}}), (WfTree{{}, {1}, {1, 2}}));
}

TEST(Sights, StarExamples)
{
    auto k = [](Nat v) { return PartialSeqFn::coded(codes::constant(v)); };
    Meter m(kFuel);
    EXPECT_EQ(star_action(k(encode_pair(0, 4)), k(encode_pair(0, 5))).eval_coded(Seq{}, m),
              AppResult::defined(encode_pair(0, encode_pair(4, 5))));
    EXPECT_EQ(star_action(k(encode_pair(1, 6)), k(encode_pair(0, 5))).eval_coded(Seq{}, m),
              AppResult::defined(encode_pair(1, 6)));
    EXPECT_EQ(star_action(k(encode_pair(0, 4)), k(encode_pair(1, 8))).eval_coded(Seq{}, m),
              AppResult::defined(encode_pair(1, 8)));
    EXPECT_EQ(star_action(k(encode_pair(0, 4)), k(encode_pair(1, 8))).eval(Seq{}, kFuel),
              AppResult::defined(encode_pair(1, 8)));
}

TEST(Sights, SectorExamples)
{
    EXPECT_EQ(full_nary_sector(Sight::nil(), 2), Sight::nil());
    EXPECT_EQ(full_nary_sector(parse_sight("(0:Nil,1:Nil,2:Nil)"), 2).to_string(), "(0:Nil,1:Nil)");
    Sight u = parse_sight("(0:(0:Nil,1:Nil,2:Nil),1:(0:Nil,1:Nil,2:Nil),2:(0:Nil,1:Nil,2:Nil))");
    EXPECT_EQ(full_nary_sector(u, 3), u);
    EXPECT_THROW(full_nary_sector(parse_sight("(0:Nil)"), 2), std::invalid_argument);
}

TEST(Sights, JointNodeExamples)
{
    EXPECT_EQ(joint_intersection_node({Sight::nil(), Sight::nil()}), Seq{});
    EXPECT_EQ(joint_intersection_node({Sight::nil(), parse_sight("(0:Nil)")}), Seq{});
    Collection o13 = make_builtin("O:1:3");
    auto d = joint_intersection_node({parse_sight("(0:Nil,1:Nil)"), parse_sight("(1:Nil,2:Nil)")}, {o13, o13});
    EXPECT_EQ(d, Seq{1});
    EXPECT_THROW(joint_intersection_node({parse_sight("(0:Nil)"), parse_sight("(1:Nil)")}), std::runtime_error);
    EXPECT_THROW(joint_intersection_node({parse_sight("(0:Nil)")}, {o13}), std::invalid_argument);
}

TEST(Sights, RImageExamples)
{
    auto r = r_image(encode_pair(0, 5), Sight::nil(), kFuel);
    EXPECT_TRUE(r.verdict.is_verified());
    EXPECT_EQ(r.values, (std::set<Nat>{5}));
    Sight s = Sight::flat({encode_pair(0, 3)});
    auto r2 = r_image(encode_pair(1, encode_pair(0, codes::id())), s, kFuel);
    EXPECT_TRUE(r2.verdict.is_verified());
    EXPECT_EQ(r2.values, (std::set<Nat>{3}));
    auto r3 = r_image(encode_pair(1, encode_pair(0, table_code({}))), s, kFuel);
    EXPECT_TRUE(r3.verdict.is_refuted());
}

TEST(Sights, TreeBijectionExamples)
{
    EXPECT_EQ(tree_of(Sight::nil()), (WfTree{{}}));
    EXPECT_EQ(tree_of(parse_sight("(0:Nil,1:Nil)")), (WfTree{{}, {0}, {1}}));
    EXPECT_EQ(sight_of(WfTree{{}, {0}, {1}}).to_string(), "(0:Nil,1:Nil)");
    EXPECT_THROW(tree_of(parse_sight("(0:())")), std::invalid_argument);
    EXPECT_THROW(sight_of(WfTree{{}, {0, 1}}), std::invalid_argument);
    WfTree t{{}, {0}, {0, 4}, {2}};
    EXPECT_EQ(foundation_number(t), 1u);
    EXPECT_EQ(tree_leaves(t), (std::vector<Seq>{{0, 4}, {2}}));
    EXPECT_EQ(subtree(t, {0}), (WfTree{{}, {4}}));
}

TEST(Sights, DotExport)
{
    std::string d = to_dot(parse_sight("(0:Nil,1:(2:Nil))"));
    EXPECT_NE(d.find("digraph"), std::string::npos);
    EXPECT_NE(d.find("doublecircle"), std::string::npos);
    EXPECT_NE(d.find("label=\"(1,2)\""), std::string::npos);
    EXPECT_EQ(to_dot(WfTree{{}, {3}}).find("digraph wftree"), 0u);
}

// Properties ----------------------------------------------------------------

TEST(SightsProperty, BwdSoundness)
{
    std::mt19937_64 rng(1001);
    InstanceParams params;
    for (int i = 0; i < 200; ++i) {
        Instance in = random_instance(rng, params);
        ASSERT_TRUE(check_dedicated(in.sight, in.z, in.theta, in.p, kFuel).is_verified()) << in.sight.to_string();
        auto v = check_supporting(in.sight, bwd_transform(in.z), in.theta, in.p, kFuel);
        EXPECT_TRUE(v.is_verified()) << in.sight.to_string() << " " << to_string(v);
    }
}

TEST(SightsProperty, FwdSoundness)
{
    std::mt19937_64 rng(1002);
    InstanceParams params;
    for (int i = 0; i < 200; ++i) {
        Instance in = random_instance(rng, params);
        ASSERT_TRUE(check_supporting(in.sight, in.w, in.theta, in.p, kFuel).is_verified());
        AppResult z = fwd_transform(in.w, kFuel);
        ASSERT_TRUE(z.is_defined());
        auto v = check_dedicated(in.sight, z.value, in.theta, in.p, kFuel);
        EXPECT_TRUE(v.is_verified()) << in.sight.to_string() << " " << to_string(v);
    }
}

TEST(SightsProperty, JoinAction)
{
    std::mt19937_64 rng(1003);
    InstanceParams params;
    params.max_depth = 2;
    params.max_branch = 3;
    for (int i = 0; i < 60; ++i) {
        ThetaSeq theta = random_theta(rng, params);
        SetExpr p = random_fin(rng, 6, 1, 2), q = random_fin(rng, 6, 1, 2);
        Instance a = random_instance(rng, params, theta, p);
        Instance b = random_instance(rng, params, theta, q);
        WfTree st = concat_sights(tree_of(a.sight), tree_of(b.sight));
        PartialSeqFn ab = star_action(a.w, b.w);
        EXPECT_TRUE(check_supporting(st, ab, theta, pairs(p, q), kFuel).is_verified());
        // The machine-only realizer agrees with the host path on every node.
        for (const auto& s : st) {
            Meter m(kFuel);
            EXPECT_EQ(ab.eval_coded(s, m), ab.eval(s, kFuel)) << seq_to_string(s);
        }
    }
}

TEST(SightsProperty, KoenigNodeCount)
{
    std::mt19937_64 rng(1004);
    for (int i = 0; i < 500; ++i) {
        Sight s = sight_of(random_tree(rng, 5, 4, 8));
        EXPECT_EQ(node_count(s), ref_count(s));
        EXPECT_EQ(node_count(s), sight_nodes(s).size());
    }
}

TEST(SightsProperty, TreeRoundTrip)
{
    std::mt19937_64 rng(1005);
    for (int i = 0; i < 100; ++i) {
        WfTree t = random_tree(rng, 4, 4, 6);
        ASSERT_TRUE(is_tree(t));
        EXPECT_EQ(tree_of(sight_of(t)), t);
        Sight s = sight_of(t);
        EXPECT_EQ(sight_of(tree_of(s)), s);
        EXPECT_EQ(parse_sight(s.to_string()), s);
    }
}

// A dedicated sight that contains (0,0) forces the empty set into some theta(n).
TEST(SightsProperty, Degeneracy)
{
    std::mt19937_64 rng(1006);
    InstanceParams params;
    params.allow_empty_branch = true;
    int degenerate_seen = 0;
    for (int i = 0; i < 200; ++i) {
        Instance in = random_instance(rng, params);
        if (!in.sight.is_degenerate()) continue;
        ++degenerate_seen;
        EXPECT_TRUE(check_dedicated(in.sight, in.z, in.theta, in.p, kFuel).is_verified());
        EXPECT_EQ(in.theta.has_empty_somewhere(), std::optional<bool>(true));
    }
    EXPECT_GT(degenerate_seen, 0);
    // Without the empty set anywhere, no z dedicates (0,0).
    ThetaSeq th = ThetaSeq::constant(parse_collection("{{0},{1}}"));
    for (std::uint64_t n = 0; n < 5; ++n)
        EXPECT_TRUE(check_dedicated(Sight::node({}), encode_pair(1, encode_pair(n, 0)), th, SetExpr::naturals(), kFuel)
                        .is_refuted());
}

namespace {

// z with tables defined on all of {0..u-1}, so several sights follow it.
struct WideZ {
    Nat z;
    std::map<Seq, Nat> index;  // theta index at each inner path
};

Nat wide_z(std::mt19937_64& rng, Seq& path, std::size_t depth, std::uint64_t u, std::uint64_t nidx,
           std::map<Seq, Nat>& index)
{
    if (path.size() >= depth || rng() % 3 == 0) return encode_pair(0, 0);
    Nat n = rng() % nidx;
    index[path] = n;
    std::map<Nat, Nat> e;
    for (std::uint64_t a = 0; a < u; ++a) {
        path.emplace_back(a);
        e[a] = wide_z(rng, path, depth, u, nidx, index);
        path.pop_back();
    }
    return encode_pair(1, encode_pair(n, table_code(e)));
}

Sight follow(std::mt19937_64& rng, const ThetaSeq& th, const std::map<Seq, Nat>& index, Seq& path)
{
    auto it = index.find(path);
    if (it == index.end()) return Sight::nil();
    Collection c = th.at(it->second);
    const SetExpr& br = c.members()[rng() % c.size()];
    std::vector<std::pair<Nat, Sight>> ch;
    const std::vector<Nat> elems = br.finite_elements().value();
    for (const auto& a : elems) {
        path.push_back(a);
        ch.emplace_back(a, follow(rng, th, index, path));
        path.pop_back();
    }
    return Sight::node(std::move(ch));
}

} // namespace

// If z is r-defined on S and T, a common node that is a leaf of S is a leaf of T.
TEST(SightsProperty, LeafAgreement)
{
    std::mt19937_64 rng(1007);
    InstanceParams params;
    params.universe = 4;
    params.max_branch = 3;
    for (int i = 0; i < 200; ++i) {
        ThetaSeq th = random_theta(rng, params);
        std::map<Seq, Nat> index;
        Seq root;
        Nat z = wide_z(rng, root, 3, params.universe, params.theta_indices + 1, index);
        Sight s = follow(rng, th, index, root), t = follow(rng, th, index, root);
        SetExpr p = SetExpr::singleton(0);
        ASSERT_TRUE(check_dedicated(s, z, th, p, kFuel).is_verified());
        ASSERT_TRUE(check_dedicated(t, z, th, p, kFuel).is_verified());
        for (const auto& d : sight_nodes(s))
            if (t.is_node(d)) EXPECT_EQ(s.is_leaf(d), t.is_leaf(d)) << seq_to_string(d);
    }
}
