#include "lotop/suite.hpp"

#include "lotop/arith.hpp"
#include "lotop/instances.hpp"
#include "lotop/tables.hpp"
#include "lotop/turing.hpp"

#include <fmt/format.h>

#include <chrono>
#include <random>

namespace lotop {

namespace {

// Check outcome before timing is attached.
struct Outcome {
    Verdict verdict;
    std::string bounds;
    std::optional<json> certificate;
};

// Counts failures and keeps the first message.
struct Tally {
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::string first;
    bool upto = false;
    std::string upto_note;

    void fail(std::string msg)
    {
        ++failed;
        if (first.empty()) first = std::move(msg);
    }
    void expect(bool ok, const std::string& msg)
    {
        ++checked;
        if (!ok) fail(msg);
    }
    // Records a verdict: Refuted or Unknown fail, VerifiedUpTo taints the total.
    void take(const Verdict& v, const std::string& what)
    {
        ++checked;
        if (!v.passed()) {
            fail(what + ": " + to_string(v));
            return;
        }
        if (v.is_upto() && !upto) {
            upto = true;
            upto_note = what + ": " + v.note;
        }
    }
    Verdict verdict() const
    {
        if (failed) return Verdict::refuted(fmt::format("{} of {} failed; first: {}", failed, checked, first));
        if (upto) return Verdict::upto(fmt::format("{} checks; {}", checked, upto_note));
        return Verdict::verified(fmt::format("{} checks", checked));
    }
};

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Cantor unpairing by walking the diagonals.
std::pair<std::uint64_t, std::uint64_t> unpair_walk(std::uint64_t z)
{
    std::uint64_t d = 0;
    while ((d + 1) * (d + 2) / 2 <= z) ++d;
    std::uint64_t x = z - d * (d + 1) / 2;
    return {x, d - x};
}

// Intersection of finite members by set arithmetic, nullopt if some member is infinite.
std::optional<std::set<Nat>> brute_intersection(const Collection& c)
{
    std::optional<std::set<Nat>> acc;
    for (const auto& m : c.members()) {
        auto el = m.finite_elements();
        if (!el) return std::nullopt;
        std::set<Nat> s(el->begin(), el->end());
        if (!acc) {
            acc = s;
            continue;
        }
        std::set<Nat> out;
        for (const auto& x : *acc)
            if (s.count(x)) out.insert(x);
        acc = std::move(out);
    }
    return acc ? acc : std::set<Nat>{};
}

std::size_t count_nodes(const Sight& s)
{
    std::size_t n = 1;
    for (const auto& [_, c] : s.children()) n += count_nodes(c);
    return n;
}

std::size_t count_leaves(const Sight& s)
{
    if (s.is_nil()) return 1;
    std::size_t n = 0;
    for (const auto& [_, c] : s.children()) n += count_leaves(c);
    return n;
}

constexpr std::uint64_t kFuel = 100000;

// 1 ------------------------------------------------------------------------
Outcome pca_laws(std::mt19937_64& rng)
{
    Tally t;
    for (std::uint64_t x = 0; x < 200; ++x)
        for (std::uint64_t y = 0; y < 200; ++y) {
            Nat z = encode_pair(x, y);
            auto [a, b] = decode_pair(z);
            auto w = unpair_walk(static_cast<std::uint64_t>(z));
            t.expect(a == x && b == y && w.first == x && w.second == y, fmt::format("pair ({},{})", x, y));
            std::vector<Nat> tup{x, y, Nat(x + y)};
            t.expect(decode_tuple(encode_tuple(tup), 3) == tup, fmt::format("tuple ({},{})", x, y));
            t.expect(project(encode_tuple(tup), 3, 2) == y, fmt::format("projection ({},{})", x, y));
            std::vector<Nat> seq(x % 5, Nat(y));
            seq.emplace_back(x);
            t.expect(decode_seq(encode_seq(seq)) == seq, fmt::format("sequence ({},{})", x, y));
        }
    std::vector<Code> pool = {codes::id(), codes::suc(), codes::inl(), compile("fix (λf n. ifz n 0 (f (pred n)))"),
                              compile("fix (λf x. f x)"), compile("λx. x_1"), compile("λx. x x"),
                              compile("λx. $add ⟨x, x⟩")};
    for (int i = 0; i < 1000; ++i) {
        Code e = i % 3 == 0 ? Nat(rng() % 100000) : pool[rng() % pool.size()];
        Nat arg = rng() % 64;
        std::uint64_t f = 1 + rng() % 400;
        AppResult a = apply(e, arg, f), b = apply(e, arg, 2 * f);
        bool ok = (!a.is_defined() || a == b) && (!a.is_stuck() || b.is_stuck()) && a == apply(e, arg, f);
        t.expect(ok, fmt::format("fuel monotonicity at code {} arg {}", e.str(), arg.str()));
    }
    return {t.verdict(), "pairs [0,200)^2; 1000 (code,arg) pairs", std::nullopt};
}

// 2 ------------------------------------------------------------------------
Outcome bwd_fwd(std::mt19937_64& rng)
{
    Tally t;
    InstanceParams params;  // depth <= 4, branch <= 4, universe 6
    for (int i = 0; i < 200; ++i) {
        Instance in = random_instance(rng, params);
        t.take(check_dedicated(in.sight, in.z, in.theta, in.p, kFuel), "instance dedication");
        t.take(check_supporting(in.sight, bwd_transform(in.z), in.theta, in.p, kFuel), "bwd support");
    }
    for (int i = 0; i < 200; ++i) {
        Instance in = random_instance(rng, params);
        t.take(check_supporting(in.sight, in.w, in.theta, in.p, kFuel), "instance support");
        AppResult z = fwd_transform(in.w, kFuel);
        if (!z.is_defined()) {
            t.fail("fwd undefined");
            continue;
        }
        t.take(check_dedicated(in.sight, z.value, in.theta, in.p, kFuel), "fwd dedication");
    }
    return {t.verdict(), "200 + 200 instances, depth<=4, branch<=4, universe 6", std::nullopt};
}

// 3 ------------------------------------------------------------------------
Outcome stage_agreement(std::mt19937_64& rng)
{
    std::vector<Collection> colls = {parse_collection("{{0}}"),     parse_collection("{{0,1},{2,3}}"),
                                     make_builtin("O:1:3"),         make_builtin("K:4"),
                                     parse_collection("{{},{1}}"),  parse_collection("{}"),
                                     parse_collection("{{0,1,2,3}}"), make_builtin("C:4")};
    for (int i = 0; i < 8; ++i) colls.push_back(random_theta(rng, {3, 3, 4, 1, false}).at(0));
    Tally t;
    std::uint64_t members = 0;
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
                    Verdict mo = mo_iter_member(z, th, p, k, b);
                    SearchResult s = search_dedicated(z, th, p, {k, 64, 2000});
                    bool found = s.verdict.is_verified() && s.cert->sight->depth() <= k;
                    members += found;
                    t.expect(mo.is_verified() == found,
                             fmt::format("{} p={} z={} k={}", c.to_string(), p.to_string(), z, k));
                }
        }
    }
    Verdict v = t.verdict();
    if (v.is_verified()) v.note += fmt::format(", {} memberships", members);
    return {v, fmt::format("z<1024, k<=3, {} constant collections, all p within 4", colls.size()), std::nullopt};
}

// 4 ------------------------------------------------------------------------
Outcome min_empty_law(std::mt19937_64&)
{
    Tally t;
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; 2 * m < alpha; ++m) {
            Collection c = co_m_tons_checked(m, alpha);
            auto r = min_empty_intersection(c);
            t.expect(r && r->d == ceil_div(alpha, m), fmt::format("O({},{})", m, alpha));
            if (r) {
                std::vector<SetExpr> w;
                for (auto i : r->witness) w.push_back(c.members()[i]);
                t.expect(intersection_empty(w), fmt::format("witness O({},{})", m, alpha));
            }
        }
    return {t.verdict(), "1 < 2m < alpha <= 9", std::nullopt};
}

// 5 ------------------------------------------------------------------------
Outcome ip_refutations(std::mt19937_64&)
{
    Tally t;
    Bounds b;
    std::optional<json> sample;
    for (std::uint64_t alpha = 3; alpha <= 9; ++alpha)
        for (std::uint64_t m = 1; 2 * m < alpha && m + 1 < alpha; ++m) {
            bool gap = ceil_div(alpha, m + 1) < ceil_div(alpha, m);
            auto r = refute_leq_lo_by_ip(co_m_tons(m + 1, alpha), co_m_tons(m, alpha), b);
            std::string what = fmt::format("O({},{}) vs O({},{})", m + 1, alpha, m, alpha);
            t.expect(r.has_value() == gap, what + (gap ? " not refuted" : " refuted without a gap"));
            if (!r) continue;
            t.expect(r->cert.n == ceil_div(alpha, m + 1), what + " wrong n");
            t.take(r->verdict, what);
            t.take(reverify(r->cert), what + " reverify");
            if (m == 2 && alpha == 5) sample = to_json(r->cert);
        }
    auto nn = refute_leq_lo_by_ip(parse_collection("{{0},{1}}"), cofinites(), b);
    t.expect(nn.has_value(), "{{0},{1}} vs F* not refuted");
    if (nn) {
        t.take(nn->verdict, "{{0},{1}} vs F*");
        t.take(reverify(nn->cert), "{{0},{1}} vs F* reverify");
    }
    return {t.verdict(), "alpha <= 9; F* intersection property up to bounds", sample};
}

// 6 ------------------------------------------------------------------------
Outcome extremes(std::mt19937_64&)
{
    Tally t;
    for (const auto& name : finite_builtin_names()) {
        Collection c = make_builtin(name);
        auto inter = brute_intersection(c);
        bool nonempty = inter && !inter->empty();
        Verdict v = classify_extremes(c).is_id;
        t.expect(nonempty ? v.is_verified() : v.is_refuted(), name + " is_id " + to_string(v));
        t.expect(!classify_extremes(c).is_top, name + " is_top");
    }
    for (const char* text : {"{{0}}", "{{0,1},{1,2}}", "{{0},{1}}", "{{5,6,7}}"}) {
        Collection c = parse_collection(text);
        auto inter = brute_intersection(c);
        Verdict v = classify_extremes(c).is_id;
        t.expect(!inter->empty() ? v.is_verified() : v.is_refuted(), std::string(text) + " is_id");
    }
    t.expect(classify_extremes(parse_collection("{{}}")).is_top, "{{}} is_top");
    return {t.verdict(), "every finite built-in", std::nullopt};
}

// 7 ------------------------------------------------------------------------
Outcome fstar_upn(std::mt19937_64&)
{
    Tally t;
    Bounds b;
    b.enum_bound = 1000;
    auto ab = check_leq_mo(cofinites(), up_n(), codes::id(), b);
    auto ba = check_leq_mo(up_n(), cofinites(), codes::id(), b);
    t.take(ab.verdict, "F* <=_mo UpN");
    t.take(ba.verdict, "UpN <=_mo F*");
    return {t.verdict(), describe(b), std::nullopt};
}

// 8 ------------------------------------------------------------------------
Outcome diagonal(std::mt19937_64& rng)
{
    Tally t;
    ThetaSeq om = ThetaSeq::constant(o_omega());
    SupportBounds sb;
    sb.child_bound = 200;
    sb.max_nodes = 1500;
    for (std::size_t m : {1u, 2u, 3u}) {
        PartialSeqFn zeta = diagonal_zeta(m);
        for (int i = 0; i < 20; ++i) {
            std::set<Nat> pts;
            while (pts.size() < m) pts.insert(rng() % 50);
            std::vector<Nat> a(pts.begin(), pts.end());
            std::shuffle(a.begin(), a.end(), rng);
            sb.seed = rng();
            auto r = check_supporting(diagonal_tree(a), zeta, om, SetExpr::cofin(a), sb);
            t.take(r.verdict, fmt::format("m={} a={}", m, seq_to_string(a)));
        }
    }
    return {t.verdict(), describe(sb), std::nullopt};
}

// 9 ------------------------------------------------------------------------
Outcome notnot(std::mt19937_64& rng)
{
    SupportBounds sb;
    sb.child_bound = 300;
    sb.max_nodes = 1500;
    sb.seed = rng();
    auto r = implies_notnot(parse_collection("{@evens,!@evens}"), 20, sb);
    if (!r) return {Verdict::refuted("no recursively separable pair found"), describe(sb), std::nullopt};
    Tally t;
    for (std::size_t y = 0; y < r->trees.size(); ++y) t.take(r->trees[y].verdict, fmt::format("S_{}", y));
    t.expect(r->trees.size() == 21, "trees S_0..S_20");
    return {t.verdict(), "y <= 20, " + describe(sb), std::nullopt};
}

// 10 -----------------------------------------------------------------------
Outcome meet_join(std::mt19937_64& rng)
{
    Tally t;
    Bounds b;
    auto ml = meet_legs();
    auto jl = join_legs();
    Code wa = compile("λs. ifz ($len s) ⟨1, 0⟩ ⟨0, ($nth ⟨s, 0⟩)_1⟩");
    Code wb = compile("λs. ifz ($len s) ⟨1, 0⟩ ⟨0, ($nth ⟨s, 0⟩)_2⟩");
    Code alpha = codes::constant(wa), beta = codes::constant(wb);
    auto names = finite_builtin_names();
    for (const auto& x : names)
        for (const auto& y : names) {
            Collection a = make_builtin(x), c = make_builtin(y);
            Collection m = meet_ovee(a, c), j = join_owedge(a, c);
            std::string tag = x + " " + y;
            t.take(check_leq_mo(m, a, ml.left, b).verdict, tag + " meet left leg");
            t.take(check_leq_mo(m, c, ml.right, b).verdict, tag + " meet right leg");
            t.take(check_leq_mo(m, m, meet_universal(ml.left, ml.right), b).verdict, tag + " meet universal");
            t.take(check_leq_mo(a, j, jl.left, b).verdict, tag + " join left leg");
            t.take(check_leq_mo(c, j, jl.right, b).verdict, tag + " join right leg");
            ThetaSeq ta = ThetaSeq::constant(a), tc = ThetaSeq::constant(c), tj = ThetaSeq::constant(j);
            t.take(check_join_upper(ta, tc, tj, alpha, beta, {}), tag + " join upper bound");
        }
    InstanceParams params;
    params.max_depth = 2;
    params.max_branch = 3;
    for (int i = 0; i < 200; ++i) {
        ThetaSeq theta = random_theta(rng, params);
        SetExpr p = random_fin(rng, 6, 1, 2), q = random_fin(rng, 6, 1, 2);
        Instance ia = random_instance(rng, params, theta, p);
        Instance ib = random_instance(rng, params, theta, q);
        WfTree st = concat_sights(tree_of(ia.sight), tree_of(ib.sight));
        PartialSeqFn ab = star_action(ia.w, ib.w);
        t.take(check_supporting(st, ab, theta, SetExpr::wedge(p, q), kFuel), fmt::format("join action {}", i));
        for (const auto& s : st) {
            Meter mm(kFuel);
            t.expect(ab.eval_coded(s, mm) == ab.eval(s, kFuel), "coded and host star disagree");
        }
    }
    return {t.verdict(), fmt::format("{} built-ins pairwise; 200 join-action pairs", names.size()), std::nullopt};
}

// 11 -----------------------------------------------------------------------
Outcome turing(std::mt19937_64&)
{
    Tally t;
    for (const char* d : {"evens", "mult3"}) {
        Code gamma = dedicated_gamma(effectiveness_realizer(d).r);
        auto ex = extract_characteristic(gamma, 1, 3, 100, kFuel, d);
        t.take(ex.verdict, d);
        for (std::uint64_t n = 0; n < 100; ++n) {
            bool member = n % (std::string(d) == "evens" ? 2 : 3) == 0;
            t.expect(ex.values[n] == Nat(member ? 1 : 0), fmt::format("{} at {}", d, n));
        }
    }
    return {t.verdict(), "m=1, alpha=3, n<100", std::nullopt};
}

// 12 -----------------------------------------------------------------------
Outcome fstar_arith(std::mt19937_64& rng)
{
    Tally t;
    PiKSpec spec = evens_spec();
    SupportBounds sb;
    sb.child_bound = 30;
    sb.max_nodes = 1500;
    for (std::uint64_t n = 0; n < 20; ++n) {
        sb.seed = rng();
        EpsilonReport r = epsilon_report(spec, n, sb, 30);
        t.expect(r.member == (n % 2 == 0), fmt::format("bounded truth at {}", n));
        t.take(r.tau_root, fmt::format("tau root at {}", n));
        t.take(r.ceiling, fmt::format("ceiling at {}", n));
        t.take(r.support.verdict, fmt::format("eps support at {}", n));
    }
    return {t.verdict(), "phi = x1 < 3 | x2 + x2 = n, B = 30, D = evens, " + describe(sb), std::nullopt};
}

// 13 -----------------------------------------------------------------------
Sight sight_on(std::mt19937_64& rng, const Collection& c, std::size_t depth)
{
    if (depth == 0 || rng() % 3 == 0) return Sight::nil();
    const SetExpr& br = c.members()[rng() % c.size()];
    const std::vector<Nat> elems = br.finite_elements().value();
    std::vector<std::pair<Nat, Sight>> ch;
    for (const auto& a : elems) ch.emplace_back(a, sight_on(rng, c, depth - 1));
    return Sight::node(std::move(ch));
}

Outcome sight_combinatorics(std::mt19937_64& rng)
{
    Tally t;
    for (int i = 0; i < 500; ++i) {
        Sight s = sight_of(random_tree(rng, 5, 4, 8));
        std::size_t n = node_count(s);
        t.expect(n == count_nodes(s) && n == sight_nodes(s).size(), "node count");
        t.expect(count_leaves(s) == sight_leaves(s).size(), "leaf count");
    }
    // Joint nodes: k sights on O(m,alpha) with k below ceil(alpha/m).
    for (int i = 0; i < 200; ++i) {
        std::uint64_t alpha = 3 + rng() % 5;
        std::uint64_t m = 1 + rng() % ((alpha - 1) / 2);
        std::size_t k = 1 + rng() % (ceil_div(alpha, m) - 1);
        Collection c = co_m_tons_checked(m, alpha);
        std::vector<Sight> ss;
        std::vector<Collection> cs;
        for (std::size_t j = 0; j < k; ++j) {
            ss.push_back(sight_on(rng, c, 3));
            cs.push_back(c);
        }
        Seq d = joint_intersection_node(ss, cs);
        bool all_nodes = true, some_leaf = false;
        for (const auto& s : ss) {
            all_nodes = all_nodes && s.is_node(d);
            some_leaf = some_leaf || s.is_leaf(d);
        }
        t.expect(all_nodes && some_leaf, fmt::format("joint node {} on O({},{})", seq_to_string(d), m, alpha));
    }
    // Leaf agreement: sights followed by one z agree on leaves at common nodes.
    InstanceParams params;
    params.universe = 4;
    params.max_branch = 3;
    for (int i = 0; i < 200; ++i) {
        ThetaSeq th = random_theta(rng, params);
        std::map<Seq, Nat> index;
        std::function<Nat(Seq&, std::size_t)> wide = [&](Seq& path, std::size_t depth) -> Nat {
            if (depth == 0 || rng() % 3 == 0) return encode_pair(0, 0);
            Nat n = rng() % (params.theta_indices + 1);
            index[path] = n;
            std::map<Nat, Nat> e;
            for (std::uint64_t a = 0; a < params.universe; ++a) {
                path.emplace_back(a);
                e[a] = wide(path, depth - 1);
                path.pop_back();
            }
            return encode_pair(1, encode_pair(n, table_code(e)));
        };
        std::function<Sight(Seq&)> follow = [&](Seq& path) -> Sight {
            auto it = index.find(path);
            if (it == index.end()) return Sight::nil();
            Collection c = th.at(it->second);
            const SetExpr& br = c.members()[rng() % c.size()];
            const std::vector<Nat> elems = br.finite_elements().value();
            std::vector<std::pair<Nat, Sight>> ch;
            for (const auto& a : elems) {
                path.push_back(a);
                ch.emplace_back(a, follow(path));
                path.pop_back();
            }
            return Sight::node(std::move(ch));
        };
        Seq root;
        Nat z = wide(root, 3);
        Sight s = follow(root), u = follow(root);
        SetExpr p = SetExpr::singleton(0);
        t.take(check_dedicated(s, z, th, p, kFuel), "S dedicated");
        t.take(check_dedicated(u, z, th, p, kFuel), "T dedicated");
        for (const auto& d : sight_nodes(s))
            if (u.is_node(d)) t.expect(s.is_leaf(d) == u.is_leaf(d), "leaf agreement at " + seq_to_string(d));
    }
    return {t.verdict(), "500 sights; 200 joint-node instances; 200 leaf-agreement instances", std::nullopt};
}

using CheckFn = Outcome (*)(std::mt19937_64&);

const std::vector<std::pair<SuiteCheck, CheckFn>>& registry()
{
    static const std::vector<std::pair<SuiteCheck, CheckFn>> r = {
        {{1, "pca-laws", "pairing, tuple and sequence round trips on [0,200)^2; fuel monotonicity", true, 10},
         pca_laws},
        {{2, "bwd-fwd-round-trip", "bwd turns dedicated sights into support, fwd turns support into dedication",
          true, 60},
         bwd_fwd},
        {{3, "stage-oracle-agreement", "z in mo^k(p) iff a dedicated sight of depth <= k exists", true, 300},
         stage_agreement},
        {{4, "co-m-ton-min-empty", "least d with d members of O(m,alpha) meeting emptily is ceil(alpha/m)", true,
          10},
         min_empty_law},
        {{5, "ip-refutations", "O(m+1,alpha) not <=_lo O(m,alpha) on a ceil gap; {{0},{1}} not <=_lo F*", false,
          30},
         ip_refutations},
        {{6, "extreme-classification", "is_id iff nonempty total intersection; {{}} is top", true, 60}, extremes},
        {{7, "fstar-upn-mo-equivalence", "F* and UpN are mo-equivalent via id", false, 60}, fstar_upn},
        {{8, "diagonal-support", "S_a supports the diagonal realizer for O_m^omega <=_lo O_1^omega", false, 60},
         diagonal},
        {{9, "separable-implies-notnot", "a recursively separable pair gives notnot <= lo_A", false, 120}, notnot},
        {{10, "meet-join-laws", "meet and join leg, universal and a*b upper-bound realizers", true, 600},
         meet_join},
        {{11, "turing-extraction", "f . gamma recovers chi_D from an effectiveness realizer in O(1,3)", true, 30},
         turing},
        {{12, "fstar-arithmetic-pipeline", "tau root is membership and eps_n supports {chi_D(n)} over F*", false,
          120},
         fstar_arith},
        {{13, "sight-combinatorics", "node counts, joint intersection nodes and leaf agreement", true, 60},
         sight_combinatorics},
    };
    return r;
}

} // namespace

const std::vector<SuiteCheck>& chapter3_checks()
{
    static const std::vector<SuiteCheck> v = [] {
        std::vector<SuiteCheck> out;
        for (const auto& [c, _] : registry()) out.push_back(c);
        return out;
    }();
    return v;
}

std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opts,
                                   const std::function<void(const CheckResult&)>& on_result)
{
    if (suite != "chapter3") throw std::invalid_argument("unknown suite: " + suite);
    ensure_standard_predicates();
    std::vector<CheckResult> out;
    for (const auto& [meta, fn] : registry()) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), meta.id) == opts.only.end())
            continue;
        CheckResult r;
        r.id = meta.id;
        r.name = meta.name;
        r.statement = meta.statement;
        r.exact = meta.exact;
        r.time_limit = meta.time_limit;
        std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(meta.id));
        auto t0 = std::chrono::steady_clock::now();
        try {
            Outcome o = fn(rng);
            r.verdict = o.verdict;
            r.bounds = o.bounds;
            r.certificate = o.certificate;
        } catch (const std::exception& e) {
            r.verdict = Verdict::unknown(std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

json to_json(const CheckResult& r)
{
    json j = check_json(r.name, r.statement, r.verdict, r.bounds, r.certificate);
    j["expect"] = r.exact ? "Verified" : "Verified or VerifiedUpTo";
    j["passed"] = r.passed();
    return j;
}

} // namespace lotop
