#include "lotop/collections.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lotop;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Least d with d members meeting emptily, by trying all index combinations.
std::optional<std::size_t> brute_min_empty(const Collection& c)
{
    std::size_t n = c.size();
    for (std::size_t d = 1; d <= n; ++d) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(d), true);
        do {
            std::vector<SetExpr> ss;
            for (std::size_t i = 0; i < n; ++i)
                if (pick[i]) ss.push_back(c.members()[i]);
            if (intersection_empty(ss)) return d;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return std::nullopt;
}

} // namespace

TEST(Collections, Examples)
{
    EXPECT_EQ(make_builtin("O:1:3").to_string(), "{1,2},{0,2},{0,1}");
    EXPECT_EQ(make_builtin("K:3").to_string(), "{0,1},{0,2},{1,2}");
    EXPECT_EQ(up_n().at(2), SetExpr::cofin({0, 1}));
    EXPECT_TRUE(member(up_n().at(2), 2));
    EXPECT_FALSE(member(up_n().at(2), 1));
    EXPECT_THROW(make_builtin("O:3:5"), std::invalid_argument);
    EXPECT_THROW(make_builtin("O:1:2"), std::invalid_argument);
    EXPECT_THROW(make_builtin("K:1"), std::invalid_argument);
    EXPECT_THROW(make_builtin("C:2"), std::invalid_argument);
    EXPECT_EQ(parse_collection("O:3:5").size(), 10u);
    EXPECT_EQ(make_builtin("C:4").to_string(), "{0,1},{1,2},{2,3},{0,3}");
}

TEST(Collections, Duals)
{
    EXPECT_EQ(dual(make_builtin("K:3")).to_string(), "{2},{1},{0}");
    EXPECT_EQ(dual(parse_collection("{{0}}")).to_string(), "{}");
    EXPECT_EQ(dual(make_builtin("L:3")).to_string(), "{2},{0}");
    EXPECT_THROW(dual(cofinites()), std::invalid_argument);
}

TEST(Collections, DualInvolution)
{
    for (const auto& name : finite_builtin_names()) {
        Collection c = make_builtin(name);
        // The union of the dual is the original union exactly when the members meet emptily.
        if (!intersection_empty(c.members())) continue;
        EXPECT_EQ(dual(dual(c)).to_string(), c.to_string()) << name;
    }
}

TEST(Collections, ParseLists)
{
    auto a = parse_collection("{{0},{1}}");
    EXPECT_EQ(a.size(), 2u);
    auto b = parse_collection("[{0}; N\\{1,2}; @evens]");
    EXPECT_EQ(b.size(), 3u);
    EXPECT_EQ(b.members()[1], SetExpr::cofin({1, 2}));
    EXPECT_EQ(parse_collection("{}").size(), 0u);
    EXPECT_EQ(parse_collection("{{0},{0}}").size(), 1u);
}

TEST(Collections, CoMTonsCount)
{
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; 2 * m < alpha; ++m)
            EXPECT_EQ(co_m_tons_checked(m, alpha).size(), choose(alpha, m));
}

TEST(Collections, OmegaUnrankRoundTrip)
{
    for (std::uint64_t m = 1; m <= 4; ++m) {
        Collection c = co_m_tons(m, std::nullopt);
        std::set<std::string> seen;
        for (std::uint64_t i = 0; i < 300; ++i) {
            SetExpr s = c.at(i);
            EXPECT_EQ(s.kind(), SetExpr::Kind::CoFin);
            EXPECT_EQ(s.elems().size(), m);
            EXPECT_TRUE(c.contains(s));
            EXPECT_EQ(c.index_of(s), std::optional<Nat>(i));
            EXPECT_TRUE(seen.insert(s.to_string()).second);
        }
    }
    EXPECT_EQ(o_omega().at(7), SetExpr::cofin({7}));
    EXPECT_EQ(cofinites().index_of(SetExpr::up_from(3)), std::optional<Nat>(7));
    EXPECT_EQ(finites().at(5), SetExpr::fin({0, 2}));
}

TEST(Collections, MinEmptyExamples)
{
    EXPECT_EQ(min_empty_intersection(make_builtin("O:1:3"))->d, 3u);
    EXPECT_EQ(min_empty_intersection(make_builtin("O:2:5"))->d, 3u);
    EXPECT_FALSE(min_empty_intersection(parse_collection("{{0,1},{1,2}}")).has_value());
    EXPECT_EQ(min_empty_intersection(parse_collection("{{},{1}}"))->d, 1u);
}

TEST(Collections, MinEmptyCeilLaw)
{
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; 2 * m < alpha; ++m) {
            Collection c = co_m_tons_checked(m, alpha);
            auto r = min_empty_intersection(c);
            ASSERT_TRUE(r.has_value());
            EXPECT_EQ(r->d, (alpha + m - 1) / m) << "m=" << m << " alpha=" << alpha;
            std::vector<SetExpr> w;
            for (auto i : r->witness) w.push_back(c.members()[i]);
            EXPECT_TRUE(intersection_empty(w));
        }
}

// BFS agrees with brute-force combinations on random small lists.
TEST(Collections, PropertyMinEmptyBrute)
{
    std::mt19937_64 rng(77);
    for (int t = 0; t < 300; ++t) {
        std::vector<SetExpr> ms;
        int k = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < k; ++i) {
            std::vector<Nat> xs;
            for (int j = 0; j < 6; ++j)
                if (rng() % 2) xs.emplace_back(j);
            ms.push_back(rng() % 4 == 0 ? SetExpr::cofin(xs) : SetExpr::fin(xs));
        }
        Collection c = Collection::list(ms);
        auto got = min_empty_intersection(c);
        auto want = brute_min_empty(c);
        ASSERT_EQ(got.has_value(), want.has_value());
        if (got) EXPECT_EQ(got->d, *want);
    }
}

TEST(Collections, IntersectionProperty)
{
    Bounds b;
    EXPECT_TRUE(has_n_intersection_property(make_builtin("O:2:5"), 2, b).is_verified());
    auto r = has_n_intersection_property(make_builtin("O:1:3"), 3, b);
    EXPECT_TRUE(r.is_refuted());
    EXPECT_EQ(r.note, "{1,2} {0,2} {0,1}");
    for (std::size_t n : {1, 2, 5, 50}) {
        EXPECT_TRUE(has_n_intersection_property(cofinites(), n, b).is_verified());
        EXPECT_TRUE(has_n_intersection_property(up_n(), n, b).is_verified());
        EXPECT_TRUE(has_n_intersection_property(o_omega(), n, b).is_verified());
        EXPECT_TRUE(has_n_intersection_property(finites(), n, b).is_refuted());
    }
    EXPECT_TRUE(has_n_intersection_property(parse_collection("{@evens,!@evens}"), 2, b).is_refuted());
    EXPECT_TRUE(has_n_intersection_property(parse_collection("{@evens,!@evens}"), 1, b).is_verified());
}

TEST(Collections, IntersectionPropertyAntitone)
{
    Bounds b;
    for (const auto& name : finite_builtin_names()) {
        Collection c = make_builtin(name);
        for (std::size_t n = 2; n <= 8; ++n)
            if (has_n_intersection_property(c, n, b).is_verified())
                EXPECT_TRUE(has_n_intersection_property(c, n - 1, b).is_verified()) << name << " n=" << n;
    }
}

TEST(Collections, SeparablePairs)
{
    EXPECT_FALSE(find_recursively_separable_pair(make_builtin("K:3")).has_value());
    auto k4 = find_recursively_separable_pair(make_builtin("K:4"));
    ASSERT_TRUE(k4.has_value());
    EXPECT_EQ(k4->a, SetExpr::fin({0, 1}));
    EXPECT_EQ(k4->b, SetExpr::fin({2, 3}));
    EXPECT_EQ(k4->separator, k4->a);
    auto eo = find_recursively_separable_pair(parse_collection("{@evens,!@evens}"));
    ASSERT_TRUE(eo.has_value());
    EXPECT_EQ(eo->a.to_string(), "@evens");
    EXPECT_EQ(eo->b.to_string(), "!@evens");
    EXPECT_FALSE(find_recursively_separable_pair(parse_collection("{{0}}")).has_value());
    EXPECT_FALSE(find_recursively_separable_pair(o_omega()).has_value());
}

TEST(Collections, MeetJoinLists)
{
    auto v = ovee(parse_collection("{{0}}"), parse_collection("{{1}}"));
    EXPECT_EQ(v.members()[0], SetExpr::fin({encode_pair(0, 0), encode_pair(1, 1)}));
    auto w = owedge(parse_collection("{{0}}"), parse_collection("{{1}}"));
    EXPECT_EQ(w.members()[0], SetExpr::fin({encode_pair(0, 1)}));
}
