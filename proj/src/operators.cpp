#include "lotop/operators.hpp"

#include <fmt/format.h>

#include <functional>

namespace lotop {

namespace {

// Calls f on members of c in order; families stop after `limit` members.
// Returns false when a family was cut short.
bool for_members(const Collection& c, std::uint64_t limit, const std::function<bool(const SetExpr&)>& f)
{
    if (c.is_finite()) {
        for (const auto& m : c.members())
            if (!f(m)) break;
        return true;
    }
    for (std::uint64_t i = 0; i < limit; ++i)
        if (!f(c.at(i))) return true;
    return false;
}

Verdict exists_member(const Collection& c, const Bounds& bounds, const std::function<Verdict(const SetExpr&)>& test)
{
    AnyOf any;
    bool complete = for_members(c, bounds.enum_bound, [&](const SetExpr& a) {
        any.add(test(a));
        return !any.verified();
    });
    if (any.first) return Verdict::refuted("collection has no members");
    if (!complete && !any.acc.passed())
        return Verdict::unknown(fmt::format("no witness among the first {} members", bounds.enum_bound));
    return any.acc;
}

} // namespace

Verdict gr_member(const Nat& z, const Collection& c, const SetExpr& p, const Bounds& bounds)
{
    auto [z1, z2] = decode_pair(z);
    return exists_member(c, bounds, [&](const SetExpr& a) {
        Verdict there = arrow_check(z1, a, p, bounds);
        if (there.is_refuted()) return there;
        return conj(there, arrow_check(z2, p, a, bounds));
    });
}

Verdict mo_member(const Nat& z, const ThetaSeq& theta, const SetExpr& p, const Bounds& bounds)
{
    auto [n, e] = decode_pair(z);
    return exists_member(theta.at(n), bounds, [&](const SetExpr& a) { return arrow_check(e, a, p, bounds); });
}

namespace {

// e: A => mo^k(p), elementwise.
Verdict arrow_into_stage(const Nat& e, const SetExpr& a, const ThetaSeq& theta, const SetExpr& p, std::size_t k,
                         const Bounds& bounds)
{
    std::vector<Nat> dom;
    bool exact = true;
    if (auto fe = a.finite_elements()) {
        dom = *fe;
    } else {
        dom = enumerate(a, bounds.enum_bound);
        exact = false;
    }
    AllOf all;
    for (const auto& x : dom) {
        AppResult r = apply(e, x, bounds.fuel);
        if (r.is_stuck()) return Verdict::refuted(fmt::format("a={}: e(a) stuck", x.str()));
        if (r.is_exhausted()) {
            all.add(Verdict::unknown(fmt::format("a={}: fuel exhausted", x.str())));
            continue;
        }
        Verdict v = mo_iter_member(r.value, theta, p, k, bounds);
        if (v.is_refuted()) return Verdict::refuted(fmt::format("a={}: {}", x.str(), v.note));
        all.add(v);
    }
    if (!exact && all.acc.is_verified()) return Verdict::upto(describe(bounds));
    return all.acc;
}

} // namespace

Verdict mo_iter_member(const Nat& z, const ThetaSeq& theta, const SetExpr& p, std::size_t k, const Bounds& bounds)
{
    auto [tag, rest] = decode_pair(z);
    if (tag == 0) {
        if (member(p, rest)) return Verdict::verified();
        return Verdict::refuted(fmt::format("{} not in {}", rest.str(), p.to_string()));
    }
    if (tag != 1) return Verdict::refuted(fmt::format("tag {} is neither 0 nor 1", tag.str()));
    if (k == 0) return Verdict::refuted("tag 1 at stage 0");
    auto [n, e] = decode_pair(rest);
    return exists_member(theta.at(n), bounds,
                         [&](const SetExpr& a) { return arrow_into_stage(e, a, theta, p, k - 1, bounds); });
}

Certificate Certificate::dedicated(Sight s, Nat z, ThetaSeq theta, SetExpr p, std::uint64_t fuel)
{
    Certificate c{Kind::Dedicated, std::move(theta), std::move(p), std::move(s), std::nullopt, std::move(z),
                  std::nullopt, fuel, {}};
    return c;
}

Certificate Certificate::supporting(Sight s, PartialSeqFn w, ThetaSeq theta, SetExpr p, std::uint64_t fuel)
{
    Certificate c{Kind::Supporting, std::move(theta), std::move(p), std::move(s), std::nullopt, 0,
                  std::move(w), fuel, {}};
    return c;
}

Certificate Certificate::supporting(ImplicitTree t, PartialSeqFn w, ThetaSeq theta, SetExpr p, SupportBounds b)
{
    Certificate c{Kind::Supporting, std::move(theta), std::move(p), std::nullopt, std::move(t), 0,
                  std::move(w), b.fuel, b};
    return c;
}

Verdict lo_verify(const Certificate& cert)
{
    if (cert.kind == Certificate::Kind::Dedicated) {
        if (!cert.sight) throw std::invalid_argument("dedicated certificate needs an explicit sight");
        return check_dedicated(*cert.sight, cert.z, cert.theta, cert.p, cert.fuel);
    }
    if (!cert.w) throw std::invalid_argument("supporting certificate needs w");
    if (cert.sight) return check_supporting(*cert.sight, *cert.w, cert.theta, cert.p, cert.fuel);
    if (cert.implicit) return check_supporting(*cert.implicit, *cert.w, cert.theta, cert.p, cert.support).verdict;
    throw std::invalid_argument("supporting certificate needs a sight or an implicit tree");
}

namespace {

struct Searcher {
    const ThetaSeq& theta;
    const SetExpr& p;
    const SearchLimits& lim;
    bool cut = false;  // some branch was abandoned for lack of fuel or depth

    std::optional<Sight> find(const Nat& z, std::size_t depth)
    {
        auto [tag, rest] = decode_pair(z);
        if (tag == 0) return member(p, rest) ? std::optional<Sight>(Sight::nil()) : std::nullopt;
        if (tag != 1) return std::nullopt;
        if (depth == 0) {
            cut = true;
            return std::nullopt;
        }
        auto [n, e] = decode_pair(rest);
        Collection c = theta.at(n);
        if (c.contains(SetExpr::empty())) return Sight::node({});
        std::optional<Sight> found;
        bool complete = for_members(c, lim.enum_bound, [&](const SetExpr& a) {
            auto elems = a.finite_elements();
            if (!elems) return true;  // explicit sights need finite branches
            std::vector<std::pair<Nat, Sight>> ch;
            for (const auto& x : *elems) {
                AppResult r = apply(e, x, lim.fuel);
                if (r.is_exhausted()) cut = true;
                if (!r.is_defined()) return true;
                auto sub = find(r.value, depth - 1);
                if (!sub) return true;
                ch.emplace_back(x, std::move(*sub));
            }
            found = Sight::node(std::move(ch));
            return false;
        });
        if (!complete) cut = true;
        return found;
    }
};

} // namespace

SearchResult search_dedicated(const Nat& z, const ThetaSeq& theta, const SetExpr& p, const SearchLimits& limits)
{
    Searcher s{theta, p, limits};
    auto sight = s.find(z, limits.depth);
    if (!sight)
        return {Verdict::unknown(s.cut ? fmt::format("no certificate within depth={},enum={},fuel={}", limits.depth,
                                                     limits.enum_bound, limits.fuel)
                                       : "no certificate follows z"),
                std::nullopt};
    Certificate c = Certificate::dedicated(*sight, z, theta, p, limits.fuel);
    Verdict v = lo_verify(c);
    return {v, std::move(c)};
}

namespace {

struct SupportSearcher {
    const PartialSeqFn& w;
    const ThetaSeq& theta;
    const SetExpr& p;
    const SearchLimits& lim;
    bool cut = false;

    std::optional<Sight> find(Seq& s, std::size_t depth)
    {
        AppResult v = w.eval(s, lim.fuel);
        if (v.is_exhausted()) cut = true;
        if (!v.is_defined()) return std::nullopt;
        auto [tag, y] = decode_pair(v.value);
        if (tag == 0) return member(p, y) ? std::optional<Sight>(Sight::nil()) : std::nullopt;
        if (tag != 1) return std::nullopt;
        if (depth == 0) {
            cut = true;
            return std::nullopt;
        }
        std::optional<Sight> found;
        bool complete = for_members(theta.at(y), lim.enum_bound, [&](const SetExpr& a) {
            auto elems = a.finite_elements();
            if (!elems || elems->empty()) return true;
            std::vector<std::pair<Nat, Sight>> ch;
            for (const auto& x : *elems) {
                s.push_back(x);
                auto sub = find(s, depth - 1);
                s.pop_back();
                if (!sub) return true;
                ch.emplace_back(x, std::move(*sub));
            }
            found = Sight::node(std::move(ch));
            return false;
        });
        if (!complete) cut = true;
        return found;
    }
};

} // namespace

SearchResult search_supporting(const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                               const SearchLimits& limits)
{
    SupportSearcher s{w, theta, p, limits};
    Seq root;
    auto sight = s.find(root, limits.depth);
    if (!sight)
        return {Verdict::unknown(s.cut ? fmt::format("no supporting tree within depth={},enum={},fuel={}",
                                                     limits.depth, limits.enum_bound, limits.fuel)
                                       : "no supporting tree follows w"),
                std::nullopt};
    Certificate c = Certificate::supporting(*sight, w, theta, p, limits.fuel);
    Verdict v = lo_verify(c);
    return {v, std::move(c)};
}

Code pitts_c_realizer(const Code& a, const Code& b)
{
    static const Code pk = compile("λq m. q_1 (q_2 m)");
    Code g = compile(R"(λself x.
        ifz x_1 (A x_2)
            (ifz ($eq ⟨x_1, 1⟩) ($bot 0) (B ⟨x_2_1, $smn ⟨PK, ⟨self, x_2_2⟩⟩⟩)))",
                     {{"A", a}, {"B", b}, {"PK", pk}});
    return fixpoint_code(g);
}

Extremes classify_extremes(const Collection& c)
{
    Extremes out;
    out.is_top = c.contains_empty();
    if (!c.is_finite()) {
        const auto& f = c.facts();
        out.is_id = f.intersection_empty ? Verdict::refuted("intersection of " + c.name() + " is empty (" + f.citation + ")")
                                         : Verdict::verified("intersection of " + c.name() + " is inhabited (" + f.citation + ")");
        return out;
    }
    try {
        out.is_id = intersection_empty(c.members()) ? Verdict::refuted("intersection is empty")
                                                    : Verdict::verified("intersection is inhabited");
    } catch (const std::invalid_argument& e) {
        out.is_id = Verdict::unknown(e.what());
    }
    return out;
}

Extremes classify_extremes(const ThetaSeq& theta)
{
    Extremes out;
    out.is_top = theta.has_empty_somewhere().value_or(false);
    switch (theta.kind()) {
    case ThetaSeq::Kind::Const: out.is_id = classify_extremes(*theta.constant_collection()).is_id; break;
    case ThetaSeq::Kind::FinSupported: {
        AllOf all;
        for (const auto& [n, c] : theta.overrides()) all.add(classify_extremes(c).is_id);
        // The default is used at every index outside the overrides.
        Nat fresh = theta.overrides().empty() ? Nat(0) : theta.overrides().rbegin()->first + 1;
        all.add(classify_extremes(theta.at(fresh)).is_id);
        out.is_id = all.acc;
        break;
    }
    case ThetaSeq::Kind::RhoD: out.is_id = Verdict::verified("every rho_D(n) is {{c}}"); break;
    // Meet: the intersection of A \/ B over a pair is (/\A) \/ (/\B).
    case ThetaSeq::Kind::Meet:
        out.is_id = disj(classify_extremes(theta.left()).is_id, classify_extremes(theta.right()).is_id);
        break;
    case ThetaSeq::Kind::Join:
        out.is_id = conj(classify_extremes(theta.left()).is_id, classify_extremes(theta.right()).is_id);
        break;
    }
    return out;
}

} // namespace lotop
