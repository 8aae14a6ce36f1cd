#include "lotop/collections.hpp"

#include <boost/dynamic_bitset.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace lotop {

// ---------------------------------------------------------------------------
// Collection

Collection Collection::list(std::vector<SetExpr> members, std::string name)
{
    Collection c;
    c.kind_ = Kind::FiniteList;
    c.name_ = std::move(name);
    std::set<std::string> seen;
    for (auto& s : members)
        if (seen.insert(s.to_string()).second) c.members_.push_back(std::move(s));
    bool has_empty = false;
    for (const auto& s : c.members_) has_empty = has_empty || s.is_empty_fin();
    c.facts_.contains_empty = has_empty;
    return c;
}

Collection Collection::family(std::string name, std::function<SetExpr(const Nat&)> generator,
                              std::function<bool(const SetExpr&)> contains, FamilyFacts facts,
                              std::function<std::optional<Nat>(const SetExpr&)> index_of)
{
    Collection c;
    c.kind_ = Kind::IndexedFamily;
    c.name_ = std::move(name);
    c.gen_ = std::move(generator);
    c.contains_ = std::move(contains);
    c.index_of_ = std::move(index_of);
    c.facts_ = std::move(facts);
    return c;
}

SetExpr Collection::at(const Nat& i) const
{
    if (kind_ == Kind::IndexedFamily) return gen_(i);
    if (i >= members_.size()) throw std::out_of_range("collection index " + i.str());
    return members_[static_cast<std::size_t>(i)];
}

bool Collection::contains(const SetExpr& s) const
{
    if (kind_ == Kind::IndexedFamily) return contains_(s);
    for (const auto& m : members_)
        if (m == s) return true;
    return false;
}

std::optional<Nat> Collection::index_of(const SetExpr& s) const
{
    if (kind_ == Kind::IndexedFamily) {
        if (index_of_) return index_of_(s);
        return std::nullopt;
    }
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i] == s) return Nat(i);
    return std::nullopt;
}

bool Collection::contains_empty() const { return facts_.contains_empty; }

std::string Collection::to_string() const
{
    if (kind_ == Kind::IndexedFamily) return name_;
    std::string out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out += ",";
        out += members_[i].to_string();
    }
    return out;
}

std::string Collection::label() const
{
    if (!name_.empty()) return name_;
    return "{" + to_string() + "}";
}

// ---------------------------------------------------------------------------
// Built-in families

namespace {

Nat binom(const Nat& n, std::uint64_t k)
{
    if (n < k) return 0;
    Nat r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Colex unranking: index = sum C(c_i, i) over c_1 < ... < c_m.
std::vector<Nat> unrank_subset(Nat index, std::uint64_t m)
{
    std::vector<Nat> out(m);
    for (std::uint64_t i = m; i >= 1; --i) {
        // largest c with C(c,i) <= index
        Nat lo = i - 1, hi = i;
        while (binom(hi, i) <= index) hi *= 2;
        while (hi - lo > 1) {
            Nat mid = (lo + hi) / 2;
            if (binom(mid, i) <= index)
                lo = mid;
            else
                hi = mid;
        }
        out[i - 1] = lo;
        index -= binom(lo, i);
    }
    return out;
}

Nat rank_subset(const std::vector<Nat>& sorted)
{
    Nat r = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) r += binom(sorted[i], i + 1);
    return r;
}

void lex_subsets(std::uint64_t n, std::uint64_t k, std::vector<std::vector<std::uint64_t>>& out)
{
    std::vector<std::uint64_t> cur;
    std::function<void(std::uint64_t)> rec = [&](std::uint64_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::uint64_t x = start; x < n; ++x) {
            cur.push_back(x);
            rec(x + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

std::vector<Nat> bits_of(Nat n)
{
    std::vector<Nat> out;
    std::uint64_t i = 0;
    while (n > 0) {
        if (bit_test(n, 0)) out.emplace_back(i);
        n >>= 1;
        ++i;
    }
    return out;
}

std::optional<Nat> bits_index(const std::vector<Nat>& xs)
{
    Nat r = 0;
    for (const auto& x : xs) {
        if (x > 1 << 16) return std::nullopt;
        bit_set(r, static_cast<unsigned>(x));
    }
    return r;
}

std::string alpha_text(std::optional<std::uint64_t> alpha)
{
    return alpha ? std::to_string(*alpha) : std::string("omega");
}

} // namespace

Collection co_m_tons(std::uint64_t m, std::optional<std::uint64_t> alpha)
{
    if (m < 1) throw std::invalid_argument("co-m-tons need m >= 1");
    std::string name = fmt::format("O:{}:{}", m, alpha_text(alpha));
    if (alpha) {
        if (m >= *alpha) throw std::invalid_argument("co-m-tons need m < alpha");
        if (*alpha > 24) throw std::invalid_argument("finite alpha above 24 is not materialized");
        std::vector<std::vector<std::uint64_t>> removed;
        lex_subsets(*alpha, m, removed);
        std::vector<SetExpr> members;
        for (const auto& r : removed) {
            std::vector<Nat> ex(r.begin(), r.end());
            members.push_back(SetExpr::cofin(Universe::finite(*alpha), ex));
        }
        return Collection::list(std::move(members), name);
    }
    FamilyFacts facts;
    facts.all_n_ip = true;
    facts.intersection_empty = true;
    facts.citation = "finitely many cofinite sets meet; every n misses the member N\\{n,...}";
    return Collection::family(
        name, [m](const Nat& i) { return SetExpr::cofin(unrank_subset(i, m)); },
        [m](const SetExpr& s) { return s.kind() == SetExpr::Kind::CoFin && s.elems().size() == m; }, facts,
        [m](const SetExpr& s) -> std::optional<Nat> {
            if (s.kind() != SetExpr::Kind::CoFin || s.elems().size() != m) return std::nullopt;
            return rank_subset(s.elems());
        });
}

Collection co_m_tons_checked(std::uint64_t m, std::optional<std::uint64_t> alpha)
{
    if (!(1 < 2 * m) || (alpha && !(2 * m < *alpha)))
        throw std::invalid_argument(fmt::format("O(m,alpha) needs 1 < 2m < alpha, got m={}, alpha={}", m,
                                                alpha_text(alpha)));
    return co_m_tons(m, alpha);
}

Collection o_omega()
{
    Collection c = co_m_tons(1, std::nullopt);
    FamilyFacts facts = c.facts();
    return Collection::family(
        "Oomega", [](const Nat& i) { return SetExpr::cofin({i}); },
        [](const SetExpr& s) { return s.kind() == SetExpr::Kind::CoFin && s.elems().size() == 1; }, facts,
        [](const SetExpr& s) -> std::optional<Nat> {
            if (s.kind() != SetExpr::Kind::CoFin || s.elems().size() != 1) return std::nullopt;
            return s.elems()[0];
        });
}

Collection finites()
{
    FamilyFacts facts;
    facts.all_n_ip = false;
    facts.intersection_empty = true;
    facts.contains_empty = true;
    facts.citation = "the empty set is a finite set";
    return Collection::family(
        "F", [](const Nat& i) { return SetExpr::fin(bits_of(i)); },
        [](const SetExpr& s) { return s.kind() == SetExpr::Kind::Fin; }, facts,
        [](const SetExpr& s) -> std::optional<Nat> {
            if (s.kind() != SetExpr::Kind::Fin) return std::nullopt;
            return bits_index(s.elems());
        });
}

Collection cofinites()
{
    FamilyFacts facts;
    facts.all_n_ip = true;
    facts.intersection_empty = true;
    facts.citation = "finitely many cofinite sets meet; N\\{n} is cofinite for each n";
    return Collection::family(
        "Fstar", [](const Nat& i) { return SetExpr::cofin(bits_of(i)); },
        [](const SetExpr& s) { return s.kind() == SetExpr::Kind::CoFin; }, facts,
        [](const SetExpr& s) -> std::optional<Nat> {
            if (s.kind() != SetExpr::Kind::CoFin) return std::nullopt;
            return bits_index(s.elems());
        });
}

Collection up_n()
{
    FamilyFacts facts;
    facts.all_n_ip = true;
    facts.intersection_empty = true;
    facts.citation = "up-sets are nested: the meet of finitely many is the smallest; n is not in up(n+1)";
    auto is_up = [](const SetExpr& s) {
        if (s.kind() != SetExpr::Kind::CoFin) return false;
        for (std::size_t i = 0; i < s.elems().size(); ++i)
            if (s.elems()[i] != i) return false;
        return true;
    };
    return Collection::family(
        "UpN",
        [](const Nat& i) {
            auto k = to_u64(i);
            if (!k || *k > (1u << 20)) throw std::out_of_range("UpN index too large");
            return SetExpr::up_from(*k);
        },
        is_up, facts, [is_up](const SetExpr& s) -> std::optional<Nat> {
            if (!is_up(s)) return std::nullopt;
            return Nat(s.elems().size());
        });
}

Collection line_graph(std::uint64_t m)
{
    if (m < 2) throw std::invalid_argument("L_m needs m >= 2");
    std::vector<SetExpr> members;
    for (std::uint64_t i = 0; i + 1 < m; ++i) members.push_back(SetExpr::fin({i, i + 1}));
    return Collection::list(std::move(members), fmt::format("L:{}", m));
}

Collection circle_graph(std::uint64_t m)
{
    if (m < 3) throw std::invalid_argument("C_m needs m >= 3");
    std::vector<SetExpr> members;
    for (std::uint64_t i = 0; i + 1 < m; ++i) members.push_back(SetExpr::fin({i, i + 1}));
    members.push_back(SetExpr::fin({0, m - 1}));
    return Collection::list(std::move(members), fmt::format("C:{}", m));
}

Collection complete_graph(std::uint64_t m)
{
    if (m < 2) throw std::invalid_argument("K_m needs m >= 2");
    std::vector<SetExpr> members;
    for (std::uint64_t i = 0; i < m; ++i)
        for (std::uint64_t j = i + 1; j < m; ++j) members.push_back(SetExpr::fin({i, j}));
    return Collection::list(std::move(members), fmt::format("K:{}", m));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::uint64_t parse_count(const std::string& s)
{
    auto v = to_u64(parse_nat(s));
    if (!v) throw std::invalid_argument("number too large: " + s);
    return *v;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

// Splits on sep at nesting depth zero.
std::vector<std::string> split_top(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '{' || c == '(') ++depth;
        if (c == '}' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

} // namespace

Collection make_builtin(const std::string& name)
{
    if (name.rfind("dual:", 0) == 0) return dual(make_builtin(name.substr(5)));
    auto parts = split(name, ':');
    const std::string& head = parts[0];
    try {
        if (head == "O" && parts.size() == 3) {
            std::uint64_t m = parse_count(parts[1]);
            if (parts[2] == "omega" || parts[2] == "ω") return co_m_tons_checked(m, std::nullopt);
            return co_m_tons_checked(m, parse_count(parts[2]));
        }
        if (parts.size() == 1) {
            if (head == "Oomega" || head == "O_omega") return o_omega();
            if (head == "F") return finites();
            if (head == "Fstar" || head == "F_star" || head == "F*") return cofinites();
            if (head == "UpN") return up_n();
        }
        if (parts.size() == 2) {
            std::uint64_t m = parse_count(parts[1]);
            if (head == "L") return line_graph(m);
            if (head == "C") return circle_graph(m);
            if (head == "K") return complete_graph(m);
        }
    } catch (const std::invalid_argument&) {
        throw;
    }
    throw std::invalid_argument("unknown collection: " + name);
}

Collection parse_collection(const std::string& text)
{
    std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty collection text");
    if (t.front() == '[' && t.back() == ']') {
        std::vector<SetExpr> members;
        for (const auto& p : split_top(t.substr(1, t.size() - 2), ';'))
            if (!p.empty()) members.push_back(parse_set(p));
        return Collection::list(std::move(members));
    }
    if (t.front() == '{' && t.back() == '}') {
        std::vector<SetExpr> members;
        for (const auto& p : split_top(t.substr(1, t.size() - 2), ','))
            if (!p.empty()) members.push_back(parse_set(p));
        return Collection::list(std::move(members));
    }
    // O:3:5 and similar fall back to the relaxed constraint 1 <= m < alpha.
    auto parts = split(t, ':');
    if (parts[0] == "O" && parts.size() == 3) {
        try {
            return make_builtin(t);
        } catch (const std::invalid_argument&) {
            std::uint64_t m = parse_count(parts[1]);
            if (parts[2] == "omega") return co_m_tons(m, std::nullopt);
            return co_m_tons(m, parse_count(parts[2]));
        }
    }
    return make_builtin(t);
}

std::vector<std::string> finite_builtin_names()
{
    std::vector<std::string> out;
    for (std::uint64_t alpha = 3; alpha <= 7; ++alpha)
        for (std::uint64_t m = 1; 2 * m < alpha; ++m) out.push_back(fmt::format("O:{}:{}", m, alpha));
    for (std::uint64_t m = 2; m <= 5; ++m) out.push_back(fmt::format("L:{}", m));
    for (std::uint64_t m = 3; m <= 5; ++m) out.push_back(fmt::format("C:{}", m));
    for (std::uint64_t m = 2; m <= 5; ++m) out.push_back(fmt::format("K:{}", m));
    return out;
}

// ---------------------------------------------------------------------------
// Operations

Collection dual(const Collection& c)
{
    if (!c.is_finite()) throw std::invalid_argument("dual needs a finite list");
    std::set<Nat> uni;
    for (const auto& s : c.members()) {
        if (s.kind() != SetExpr::Kind::Fin) throw std::invalid_argument("dual needs finite member sets");
        uni.insert(s.elems().begin(), s.elems().end());
    }
    std::vector<SetExpr> out;
    for (const auto& s : c.members()) {
        std::vector<Nat> comp;
        for (const auto& x : uni)
            if (!std::binary_search(s.elems().begin(), s.elems().end(), x)) comp.push_back(x);
        out.push_back(SetExpr::fin(comp));
    }
    Collection d = Collection::list(std::move(out), c.name().empty() ? std::string() : "dual:" + c.name());
    return d;
}

Collection ovee(const Collection& a, const Collection& b)
{
    if (!a.is_finite() || !b.is_finite()) throw std::invalid_argument("ovee needs finite lists");
    std::vector<SetExpr> out;
    for (const auto& x : a.members())
        for (const auto& y : b.members()) out.push_back(SetExpr::vee(x, y));
    return Collection::list(std::move(out));
}

Collection owedge(const Collection& a, const Collection& b)
{
    if (!a.is_finite() || !b.is_finite()) throw std::invalid_argument("owedge needs finite lists");
    std::vector<SetExpr> out;
    for (const auto& x : a.members())
        for (const auto& y : b.members()) out.push_back(SetExpr::wedge(x, y));
    return Collection::list(std::move(out));
}

namespace {

bool in_fragment(const SetExpr& s)
{
    return s.kind() == SetExpr::Kind::Fin || s.kind() == SetExpr::Kind::CoFin;
}

// Emptiness of an intersection outside the Fin/CoFin fragment where decidable.
std::optional<bool> meets_empty(const std::vector<SetExpr>& ss)
{
    bool fragment = true;
    for (const auto& s : ss) fragment = fragment && in_fragment(s);
    bool has_fin = false;
    for (const auto& s : ss) has_fin = has_fin || s.kind() == SetExpr::Kind::Fin;
    if (fragment || has_fin) return intersection_empty(ss);
    for (std::size_t i = 0; i < ss.size(); ++i)
        for (std::size_t j = i + 1; j < ss.size(); ++j)
            if (disjoint(ss[i], ss[j]) == std::optional<bool>(true)) return true;
    // A common member is an exact witness of nonemptiness.
    for (std::uint64_t n = 0; n < 1000; ++n) {
        bool all = true;
        for (const auto& s : ss) all = all && member(s, n);
        if (all) return false;
    }
    return std::nullopt;
}

std::string sets_text(const std::vector<SetExpr>& ss)
{
    std::string out;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        if (i) out += " ";
        out += ss[i].to_string();
    }
    return out;
}

} // namespace

std::optional<EmptyIntersection> min_empty_intersection(const Collection& c)
{
    if (!c.is_finite()) throw std::invalid_argument("min_empty_intersection needs a finite list");
    const auto& ms = c.members();
    if (ms.empty()) return std::nullopt;
    for (const auto& s : ms)
        if (!in_fragment(s)) throw std::invalid_argument("min_empty_intersection: " + s.to_string() +
                                                         " is outside the finite/cofinite fragment");
    // Points that distinguish members, plus one point standing for the rest of N.
    std::vector<Nat> pts;
    for (const auto& s : ms) pts.insert(pts.end(), s.elems().begin(), s.elems().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t rest = pts.size();
    using Mask = boost::dynamic_bitset<>;
    std::vector<Mask> masks;
    for (const auto& s : ms) {
        Mask m(rest + 1);
        for (std::size_t i = 0; i < rest; ++i) m[i] = member(s, pts[i]);
        m[rest] = s.kind() == SetExpr::Kind::CoFin;
        masks.push_back(std::move(m));
    }
    // Breadth-first over reachable intersections; the first empty one is least.
    struct Item {
        Mask m;
        std::vector<std::size_t> idx;
    };
    std::map<Mask, bool> seen;
    std::deque<Item> frontier;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (masks[i].none()) return EmptyIntersection{1, {i}};
        if (seen.emplace(masks[i], true).second) frontier.push_back({masks[i], {i}});
    }
    for (std::size_t d = 2; !frontier.empty(); ++d) {
        std::deque<Item> next;
        for (const auto& it : frontier) {
            for (std::size_t j = 0; j < masks.size(); ++j) {
                Mask m = it.m & masks[j];
                if (m == it.m) continue;
                auto idx = it.idx;
                idx.push_back(j);
                if (m.none()) return EmptyIntersection{d, idx};
                if (seen.emplace(m, true).second) next.push_back({std::move(m), std::move(idx)});
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

Verdict has_n_intersection_property(const Collection& c, std::size_t n, const Bounds& bounds)
{
    if (n == 0) return Verdict::verified("vacuous");
    if (!c.is_finite()) {
        const auto& f = c.facts();
        if (f.all_n_ip) return Verdict::verified("recorded: " + f.citation);
        if (f.contains_empty) return Verdict::refuted("{} is a member");
        // Sample n-subsets of the first indices.
        std::uint64_t lim = std::min<std::uint64_t>(bounds.enum_bound, 12);
        std::vector<std::vector<std::uint64_t>> subs;
        lex_subsets(lim, std::min<std::uint64_t>(n, lim), subs);
        for (const auto& sub : subs) {
            std::vector<SetExpr> ss;
            for (auto i : sub) ss.push_back(c.at(i));
            auto e = meets_empty(ss);
            if (e && *e) return Verdict::refuted(sets_text(ss));
        }
        return Verdict::upto(fmt::format("indices<{}", lim));
    }
    bool fragment = true;
    for (const auto& s : c.members()) fragment = fragment && in_fragment(s);
    if (fragment) {
        auto me = min_empty_intersection(c);
        if (!me || me->d > n) return Verdict::verified();
        std::vector<SetExpr> ss;
        for (auto i : me->witness) ss.push_back(c.members()[i]);
        return Verdict::refuted(sets_text(ss));
    }
    AllOf all;
    for (std::size_t k = 1; k <= std::min(n, c.size()); ++k) {
        std::vector<std::vector<std::uint64_t>> subs;
        lex_subsets(c.size(), k, subs);
        for (const auto& sub : subs) {
            std::vector<SetExpr> ss;
            for (auto i : sub) ss.push_back(c.members()[i]);
            auto e = meets_empty(ss);
            if (!e)
                all.add(Verdict::unknown("undecided: " + sets_text(ss)));
            else if (*e)
                return Verdict::refuted(sets_text(ss));
        }
    }
    return all.acc;
}

std::optional<SeparablePair> find_recursively_separable_pair(const Collection& c)
{
    std::vector<SetExpr> cand;
    if (c.is_finite()) {
        cand = c.members();
    } else {
        for (std::uint64_t i = 0; i < 64; ++i) cand.push_back(c.at(i));
    }
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (disjoint(cand[i], cand[j]) == std::optional<bool>(true)) return SeparablePair{cand[i], cand[j], cand[i]};
    return std::nullopt;
}

} // namespace lotop
