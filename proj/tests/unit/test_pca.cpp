#include "lotop/pca.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lotop;

namespace {

// Independent oracle for the Cantor pairing: walk the diagonals.
std::pair<std::uint64_t, std::uint64_t> unpair_by_walking(std::uint64_t z)
{
    std::uint64_t d = 0;
    while ((d + 1) * (d + 2) / 2 <= z) ++d;
    std::uint64_t x = z - d * (d + 1) / 2;
    return {x, d - x};
}

Nat run(const std::string& src, const Nat& arg, std::uint64_t fuel = 10000)
{
    auto r = apply(compile(src), arg, fuel);
    EXPECT_TRUE(r.is_defined()) << src << " -> " << to_string(r);
    return r.value;
}

} // namespace

TEST(Pairing, SmallValues)
{
    EXPECT_EQ(encode_pair(0, 0), 0);
    EXPECT_EQ(encode_pair(0, 1), 1);
    EXPECT_EQ(encode_pair(1, 0), 2);
}

TEST(Pairing, GridRoundTripAndInjectivity)
{
    std::vector<bool> seen(200 * 400, false);
    for (std::uint64_t x = 0; x < 200; ++x)
        for (std::uint64_t y = 0; y < 200; ++y) {
            Nat z = encode_pair(x, y);
            auto [a, b] = decode_pair(z);
            ASSERT_EQ(a, x);
            ASSERT_EQ(b, y);
            auto zz = static_cast<std::uint64_t>(z);
            auto [wx, wy] = unpair_by_walking(zz);
            ASSERT_EQ(wx, x);
            ASSERT_EQ(wy, y);
            ASSERT_LT(zz, seen.size());
            ASSERT_FALSE(seen[zz]);
            seen[zz] = true;
        }
}

TEST(Pairing, HugeValuesRoundTrip)
{
    Nat x = Nat(1) << 300, y = (Nat(1) << 299) + 12345;
    auto [a, b] = decode_pair(encode_pair(x, y));
    EXPECT_EQ(a, x);
    EXPECT_EQ(b, y);
}

TEST(Tuples, Examples)
{
    EXPECT_EQ(encode_tuple({7}), 7);
    EXPECT_EQ(encode_tuple({0, 0, 0}), 0);
    EXPECT_EQ(project(encode_tuple({1, 0}), 2, 1), 1);
    EXPECT_THROW(encode_tuple({}), std::invalid_argument);
}

TEST(Tuples, ProjectionLaws)
{
    std::mt19937_64 rng(11);
    for (std::size_t k = 1; k <= 5; ++k)
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<Nat> xs;
            for (std::size_t i = 0; i < k; ++i) xs.push_back(Nat(rng() % 50));
            Nat z = encode_tuple(xs);
            for (std::size_t i = 1; i <= k; ++i) ASSERT_EQ(project(z, k, i), xs[i - 1]);
        }
}

TEST(Sequences, Examples)
{
    EXPECT_EQ(encode_seq({}), encode_pair(0, 0));
    EXPECT_EQ(encode_seq({5}), encode_pair(1, 5));
    auto s = decode_seq(encode_seq({2, 3}));
    ASSERT_TRUE(s);
    EXPECT_EQ(*s, (Seq{2, 3}));
    // <0,1> is not a sequence code
    EXPECT_FALSE(decode_seq(encode_pair(0, 1)));
}

TEST(Codec, RoundTripOfCompiledTerms)
{
    for (const char* src : {"\\x.x", "\\x y. y x", "fix (\\f x. f x)", "\\p. <p_2, p_1>", "$eq", "12345678901234567890123"}) {
        TermPtr t = parse_term(src);
        auto back = decode_term(encode_term(t));
        ASSERT_TRUE(back) << src;
        EXPECT_TRUE(term_equal(t, *back)) << src;
    }
}

TEST(Codec, DecodingIsTotal)
{
    std::size_t terms = 0;
    for (std::uint64_t c = 0; c < 5000; ++c) {
        auto t = decode_term(c);
        if (t) {
            ++terms;
            EXPECT_EQ(encode_term(*t), c);
        }
    }
    EXPECT_GT(terms, 0u);
}

TEST(Apply, SpecExamples)
{
    EXPECT_EQ(apply(compile("λx.x"), 5, 100), AppResult::defined(5));
    EXPECT_EQ(apply(compile("λx.⟨0,x⟩"), 3, 100), AppResult::defined(encode_pair(0, 3)));
    EXPECT_TRUE(apply(compile("fix (λf.λx. f x)"), 0, 50).is_exhausted());
}

TEST(Apply, StuckCases)
{
    EXPECT_TRUE(apply(compile("λx.λy.x"), 3, 100).is_stuck());  // non-numeral result
    EXPECT_TRUE(apply(0, 3, 100).is_stuck());                     // 0 decodes to nothing
    EXPECT_TRUE(apply(compile("λx. $nosuchbuiltin x"), 3, 100).is_stuck());
    EXPECT_TRUE(apply(compile("λx. $bot x"), 3, 100).is_stuck());
}

TEST(Compile, Corpus)
{
    struct Case {
        const char* src;
        Nat arg;
        Nat expect;
    };
    std::vector<Case> corpus = {
        {"λx.x", 9, 9},
        {"λp. ⟨p_2, p_1⟩", encode_pair(2, 5), encode_pair(5, 2)},
        {"λn. ifz n 1 0", 0, 1},
        {"λn. ifz n 1 0", 7, 0},
        {"λx. suc (suc x)", 3, 5},
        {"λx. pred x", 0, 0},
        {"λx. pred x", 10, 9},
        {"\\x. <x, x, x>", 2, encode_tuple({2, 2, 2})},
        {"\\x. (\\y z. z) x 4", 1, 4},
        {"\\x. let y = suc x in <y, y>", 1, encode_pair(2, 2)},
        {"\\x. $add <x, 10>", 5, 15},
        {"\\x. $mul <x, x>", 12, 144},
        {"\\x. $eq <x, 3>", 3, 1},
        {"\\x. $len x", encode_seq({4, 5, 6}), 3},
        {"\\x. $snoc <x, 9>", encode_seq({1}), encode_seq({1, 9})},
        // recursion: sum 0..n
        {"fix (\\s n. ifz n 0 ($add <n, s (pred n)>))", 10, 55},
        // factorial
        {"fix (\\f n. ifz n 1 ($mul <n, f (pred n)>))", 5, 120},
        // call by name: an unused divergent argument is never evaluated
        {"\\x. (\\a b. a) x (fix (\\f y. f y) 0)", 8, 8},
        // numerals in function position run the term they code
        {"\\x. c x", 6, 7},
        {"\\x. x_1_2", encode_pair(encode_pair(1, 2), 3), 2},
    };
    for (auto& c : corpus) {
        CodeEnv env{{"c", codes::suc()}};
        auto r = apply(compile(c.src, env), c.arg, 100000);
        ASSERT_TRUE(r.is_defined()) << c.src << " " << to_string(r);
        EXPECT_EQ(r.value, c.expect) << c.src;
    }
}

TEST(Compile, Errors)
{
    EXPECT_THROW(compile("λx. y"), ParseError);
    EXPECT_THROW(compile("(λx. x"), ParseError);
    EXPECT_THROW(compile("⟨1⟩"), ParseError);
}

TEST(Fixpoint, Examples)
{
    Code c = fixpoint_code(compile("λself.λx.42"));
    EXPECT_EQ(apply(c, 0, 1000), AppResult::defined(42));
    Code d = fixpoint_code(compile("λself.λx. suc x"));
    EXPECT_EQ(apply(d, 4, 1000), AppResult::defined(5));
    // self-reference: the generator receives exactly the code c
    Code e = fixpoint_code(compile("λself.λx. self"));
    EXPECT_EQ(apply(e, 0, 1000), AppResult::defined(e));
    // c x agrees with g c x
    Code g = compile("λself.λx. ifz x 0 ($add <x, self (pred x)>)");
    Code f = fixpoint_code(g);
    for (int x = 0; x < 10; ++x) EXPECT_EQ(apply(f, x, 100000), apply_n(g, {f, Nat(x)}, 100000));
}

namespace {
std::optional<Nat> chi_evens(const Nat& n) { return Nat(n % 2 == 0 ? 1 : 0); }
std::optional<Nat> chi_odds(const Nat& n) { return Nat(n % 2 == 1 ? 1 : 0); }
} // namespace

TEST(Builtins, Registry)
{
    Code c = register_builtin("test_evens", chi_evens);
    EXPECT_EQ(apply(c, 4, 10), AppResult::defined(1));
    EXPECT_EQ(apply(c, 3, 10), AppResult::defined(0));
    EXPECT_EQ(register_builtin("test_evens", chi_evens), c);
    EXPECT_THROW(register_builtin("test_evens", chi_odds), BuiltinError);
    EXPECT_EQ(apply(compile("\\x. $test_evens (suc x)"), 3, 100), AppResult::defined(1));
}

TEST(Apply, FuelMonotonicity)
{
    std::mt19937_64 rng(2024);
    std::vector<Code> pool = {codes::id(), codes::suc(), codes::inl(), compile("fix (\\f n. ifz n 0 (f (pred n)))"),
                              compile("fix (\\f x. f x)"), compile("\\x. x_1"), compile("\\x. x x")};
    for (int i = 0; i < 1000; ++i) {
        Code e = i % 3 == 0 ? Nat(rng() % 100000) : pool[rng() % pool.size()];
        Nat arg = rng() % 64;
        std::uint64_t f = 1 + rng() % 400;
        auto a = apply(e, arg, f);
        auto b = apply(e, arg, 2 * f);
        if (a.is_defined()) ASSERT_EQ(a, b);
        if (a.is_stuck()) ASSERT_TRUE(b.is_stuck());
        ASSERT_EQ(a, apply(e, arg, f));
    }
}
