#include "lotop/relations.hpp"

#include <fmt/format.h>

namespace lotop {

std::string kind_name(RelationCertificate::Kind k)
{
    switch (k) {
    case RelationCertificate::Kind::LeqMoWitness: return "LeqMoWitness";
    case RelationCertificate::Kind::LeqLoWitness: return "LeqLoWitness";
    case RelationCertificate::Kind::NotLeqLoByIP: return "NotLeqLoByIP";
    }
    return "?";
}

namespace {

// Members of a list, or the first `limit` members of a family. Second is false when cut short.
std::pair<std::vector<SetExpr>, bool> members_upto(const Collection& c, std::uint64_t limit)
{
    if (c.is_finite()) return {c.members(), true};
    std::vector<SetExpr> out;
    for (std::uint64_t i = 0; i < limit; ++i) out.push_back(c.at(i));
    return {out, false};
}

Verdict arrow(const Code& r, const SetExpr& from, const SetExpr& to, const Bounds& bounds)
{
    if (r == codes::id()) {
        if (auto sub = subset(from, to))
            return *sub ? Verdict::verified() : Verdict::refuted(fmt::format("{} not a subset of {}", from.to_string(), to.to_string()));
    }
    return arrow_check(r, from, to, bounds);
}

} // namespace

RelationResult check_leq_mo(const Collection& a, const Collection& b, const Code& r, const Bounds& bounds)
{
    RelationResult res;
    res.cert.kind = RelationCertificate::Kind::LeqMoWitness;
    res.cert.realizer = r;
    res.cert.bounds = bounds;
    auto [as, a_complete] = members_upto(a, bounds.enum_bound);
    auto [bs, b_complete] = members_upto(b, bounds.enum_bound);
    AllOf all;
    for (const auto& x : as) {
        // The set itself is the natural candidate when it lies on the right.
        std::vector<const SetExpr*> cands;
        std::optional<SetExpr> self;
        if (!b.is_finite() && b.contains(x)) {
            self = x;
            cands.push_back(&*self);
        }
        for (const auto& y : bs) cands.push_back(&y);
        AnyOf any;
        const SetExpr* chosen = nullptr;
        for (const SetExpr* y : cands) {
            Verdict v = arrow(r, *y, x, bounds);
            if (v.passed() && (!chosen || v.is_verified())) chosen = y;
            any.add(v);
            if (any.verified()) break;
        }
        Verdict v = any.acc;
        if (any.first) v = Verdict::refuted("right-hand collection is empty");
        if (v.is_refuted()) {
            v = b_complete ? Verdict::refuted(fmt::format("A={}: no B with r: B => A", x.to_string()))
                           : Verdict::unknown(fmt::format("A={}: no B among the first {} members", x.to_string(),
                                                          bounds.enum_bound));
        }
        if (chosen) res.cert.mo_evidence.emplace_back(x, *chosen);
        all.add(v);
        if (all.refuted()) break;
    }
    res.verdict = all.acc;
    if (!a_complete && res.verdict.is_verified())
        res.verdict = Verdict::upto(fmt::format("first {} members of {}", bounds.enum_bound, a.label()));
    return res;
}

Verdict check_leq_mo_seq(const ThetaSeq& theta, const ThetaSeq& zeta, const Code& r, const Bounds& bounds,
                         std::uint64_t n_bound)
{
    AllOf all;
    bool exact = true;
    for (std::uint64_t n = 0; n < n_bound; ++n) {
        AppResult v = apply(r, n, bounds.fuel);
        if (v.is_stuck()) return Verdict::refuted(fmt::format("n={}: r(n) undefined", n));
        if (v.is_exhausted()) {
            all.add(Verdict::unknown(fmt::format("n={}: fuel exhausted", n)));
            continue;
        }
        auto [m, e] = decode_pair(v.value);
        auto [cs, c_complete] = members_upto(theta.at(n), bounds.enum_bound);
        auto [as, a_complete] = members_upto(zeta.at(m), bounds.enum_bound);
        exact = exact && c_complete;
        for (const auto& c : cs) {
            AnyOf any;
            for (const auto& a : as) {
                any.add(arrow(e, a, c, bounds));
                if (any.verified()) break;
            }
            Verdict w = any.first ? Verdict::refuted("zeta(m) is empty") : any.acc;
            if (w.is_refuted() && !a_complete) w = Verdict::unknown("no witness among the enumerated members");
            if (w.is_refuted()) return Verdict::refuted(fmt::format("n={}, C={}: {}", n, c.to_string(), w.note));
            all.add(w);
        }
    }
    if (all.acc.is_verified()) return Verdict::upto(fmt::format("n<{}", n_bound) + (exact ? "" : ",enum"));
    return all.acc;
}

RelationResult check_leq_lo(const ThetaSeq& theta, const ThetaSeq& zeta, const Code& r, const LeqLoOptions& opts)
{
    RelationResult res;
    res.cert.kind = RelationCertificate::Kind::LeqLoWitness;
    res.cert.realizer = r;
    bool constant = theta.kind() == ThetaSeq::Kind::Const;
    bool exact = constant;
    std::uint64_t n_end = constant ? 1 : opts.n_bound;
    AllOf all;
    for (std::uint64_t n = 0; n < n_end && !all.refuted(); ++n) {
        std::optional<PartialSeqFn> w;
        if (opts.host_w) {
            w = opts.host_w(n);
        } else {
            AppResult v = apply(r, n, opts.search.fuel);
            if (!v.is_defined()) {
                all.add(Verdict::unknown(fmt::format("n={}: r(n) {}", n, v.is_stuck() ? "stuck" : "out of fuel")));
                continue;
            }
            w = PartialSeqFn::coded(v.value, "r(" + std::to_string(n) + ")");
        }
        auto [as, complete] = members_upto(theta.at(n), opts.search.enum_bound);
        exact = exact && complete;
        for (const auto& a : as) {
            std::optional<Certificate> cert;
            if (opts.provider) cert = opts.provider(n, a, *w);
            Verdict v;
            if (cert) {
                v = lo_verify(*cert);
            } else {
                SearchResult sr = search_supporting(*w, zeta, a, opts.search);
                v = sr.verdict;
                cert = sr.cert;
            }
            if (!v.passed()) v.note = fmt::format("n={}, A={}: {}", n, a.to_string(), v.note);
            if (cert) res.cert.lo_evidence.emplace_back(Nat(n), *cert);
            all.add(v);
            if (all.refuted()) break;
        }
    }
    res.verdict = all.acc;
    if (!exact && res.verdict.is_verified())
        res.verdict = Verdict::upto(fmt::format("n<{},enum={}", n_end, opts.search.enum_bound));
    return res;
}

std::optional<RelationResult> refute_leq_lo_by_ip(const Collection& a, const Collection& b, const Bounds& bounds)
{
    std::optional<EmptyIntersection> ei;
    std::vector<SetExpr> pool;
    if (a.contains_empty()) {
        ei = EmptyIntersection{1, {0}};
        pool = {SetExpr::empty()};
    } else {
        pool = members_upto(a, 64).first;
        ei = min_empty_intersection(Collection::list(pool));
    }
    if (!ei) return std::nullopt;
    std::vector<SetExpr> witness;
    for (auto i : ei->witness) witness.push_back(pool[i]);
    Verdict ip = has_n_intersection_property(b, ei->d, bounds);
    if (!ip.passed()) return std::nullopt;
    RelationResult res;
    res.cert.kind = RelationCertificate::Kind::NotLeqLoByIP;
    res.cert.n = ei->d;
    res.cert.witness = std::move(witness);
    res.cert.left = a;
    res.cert.right = b;
    res.cert.ip_evidence = ip;
    res.cert.bounds = bounds;
    res.verdict = ip.is_verified()
                      ? Verdict::verified(fmt::format("n={}", ei->d))
                      : Verdict::upto(fmt::format("n={}; {}", ei->d, ip.note));
    return res;
}

Verdict reverify(const RelationCertificate& cert)
{
    switch (cert.kind) {
    case RelationCertificate::Kind::LeqMoWitness: {
        if (!cert.realizer) return Verdict::refuted("certificate has no realizer");
        AllOf all;
        for (const auto& [a, b] : cert.mo_evidence) all.add(arrow(*cert.realizer, b, a, cert.bounds));
        return all.acc;
    }
    case RelationCertificate::Kind::LeqLoWitness: {
        AllOf all;
        for (const auto& [n, c] : cert.lo_evidence) all.add(lo_verify(c));
        return all.acc;
    }
    case RelationCertificate::Kind::NotLeqLoByIP: {
        if (!cert.right || !cert.left) return Verdict::refuted("certificate lacks its collections");
        if (cert.witness.size() != cert.n || cert.n == 0) return Verdict::refuted("witness size differs from n");
        for (const auto& w : cert.witness)
            if (!cert.left->contains(w)) return Verdict::refuted(w.to_string() + " is not a member");
        if (!intersection_empty(cert.witness)) return Verdict::refuted("witness sets meet");
        return has_n_intersection_property(*cert.right, cert.n, cert.bounds);
    }
    }
    return Verdict::unknown("unknown certificate kind");
}

Collection meet_ovee(const Collection& a, const Collection& b) { return ovee(a, b); }
ThetaSeq meet_ovee(const ThetaSeq& a, const ThetaSeq& b) { return ThetaSeq::meet(a, b); }
Collection join_owedge(const Collection& a, const Collection& b) { return owedge(a, b); }
ThetaSeq join_owedge(const ThetaSeq& a, const ThetaSeq& b) { return ThetaSeq::join(a, b); }

LegRealizers meet_legs() { return {codes::inl(), codes::inr()}; }

LegRealizers meet_legs_seq()
{
    static const LegRealizers r{compile("λn. ⟨n_1, L⟩", {{"L", codes::inl()}}),
                                compile("λn. ⟨n_2, R⟩", {{"R", codes::inr()}})};
    return r;
}

Code meet_universal(const Code& r1, const Code& r2) { return codes::cases(r1, r2); }

LegRealizers join_legs() { return {codes::proj1(), codes::proj2()}; }

LegRealizers join_legs_seq()
{
    static const LegRealizers r{compile("λn. ⟨n, P⟩", {{"P", codes::proj1()}}),
                                compile("λn. ⟨n, P⟩", {{"P", codes::proj2()}})};
    return r;
}

Code join_upper_realizer(const Code& alpha, const Code& beta)
{
    return compile("λn. $smn ⟨K, ⟨A n, B n⟩⟩", {{"K", star_kernel()}, {"A", alpha}, {"B", beta}});
}

Verdict check_join_upper(const ThetaSeq& theta, const ThetaSeq& eta, const ThetaSeq& zeta, const Code& alpha,
                         const Code& beta, const LeqLoOptions& opts)
{
    bool constant = theta.kind() == ThetaSeq::Kind::Const && eta.kind() == ThetaSeq::Kind::Const;
    std::uint64_t n_end = constant ? 1 : opts.n_bound;
    Code upper = join_upper_realizer(alpha, beta);
    std::uint64_t fuel = opts.search.fuel;
    AllOf all;
    bool exact = constant;
    for (std::uint64_t n = 0; n < n_end; ++n) {
        AppResult a = apply(alpha, n, fuel), b = apply(beta, n, fuel), u = apply(upper, n, fuel);
        if (!a.is_defined() || !b.is_defined() || !u.is_defined()) {
            all.add(Verdict::unknown(fmt::format("n={}: a realizer is undefined", n)));
            continue;
        }
        PartialSeqFn wa = PartialSeqFn::coded(a.value), wb = PartialSeqFn::coded(b.value);
        PartialSeqFn ab = star_action(wa, wb);
        if (*ab.code() != u.value) return Verdict::refuted(fmt::format("n={}: upper realizer is not alpha(n)*beta(n)", n));
        auto [as, ca] = members_upto(theta.at(n), opts.search.enum_bound);
        auto [bs, cb] = members_upto(eta.at(n), opts.search.enum_bound);
        exact = exact && ca && cb;
        for (const auto& x : as)
            for (const auto& y : bs) {
                SearchResult s = search_supporting(wa, zeta, x, opts.search);
                SearchResult t = search_supporting(wb, zeta, y, opts.search);
                if (!s.cert || !t.cert) {
                    all.add(Verdict::unknown(fmt::format("n={}: no tree for a leg", n)));
                    continue;
                }
                WfTree st = concat_sights(tree_of(*s.cert->sight), tree_of(*t.cert->sight));
                Verdict v = check_supporting(st, ab, zeta, SetExpr::wedge(x, y), fuel);
                if (v.is_refuted()) v.note = fmt::format("n={}, {}/\\{}: {}", n, x.to_string(), y.to_string(), v.note);
                all.add(v);
                if (all.refuted()) return all.acc;
            }
    }
    if (!exact && all.acc.is_verified()) return Verdict::upto(fmt::format("n<{},enum={}", n_end, opts.search.enum_bound));
    return all.acc;
}

PartialSeqFn notnot_w(const SetExpr& separator)
{
    SetExpr c = separator;
    return PartialSeqFn::native("notnot:" + c.to_string(), [c](const Seq& s, Meter& m) -> AppResult {
        if (!m.spend(1 + s.size())) return AppResult::exhausted();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (member(c, s[i])) continue;
            if (i + 1 == s.size()) return AppResult::defined(encode_pair(0, i));
            return AppResult::stuck();
        }
        return AppResult::defined(encode_pair(1, 0));
    });
}

ImplicitTree notnot_tree(const SetExpr& a, const SetExpr& b, std::uint64_t y)
{
    ImplicitTree t;
    t.depth_bound = y + 1;
    t.descriptor = fmt::format("S_{}[A={},B={}]", y, a.to_string(), b.to_string());
    t.status = [a, b, y](const Seq& s) {
        if (s.size() > y + 1) return NodeStatus::not_node();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!member(i < y ? a : b, s[i])) return NodeStatus::not_node();
        if (s.size() == y + 1) return NodeStatus::leaf();
        return NodeStatus::inner(s.size() < y ? a : b);
    };
    return t;
}

std::optional<NotNotReport> implies_notnot(const Collection& c, std::uint64_t y_max, const SupportBounds& bounds)
{
    auto pair = find_recursively_separable_pair(c);
    if (!pair) return std::nullopt;
    NotNotReport rep{*pair, notnot_w(pair->separator), Verdict::verified(), {}};
    ThetaSeq theta = ThetaSeq::constant(c);
    AllOf all;
    for (std::uint64_t y = 0; y <= y_max; ++y) {
        SupportReport r = check_supporting(notnot_tree(pair->a, pair->b, y), rep.w, theta, SetExpr::singleton(y), bounds);
        if (r.verdict.is_refuted()) r.verdict.note = fmt::format("y={}: {}", y, r.verdict.note);
        all.add(r.verdict);
        rep.trees.push_back(std::move(r));
    }
    rep.verdict = all.acc;
    return rep;
}

Verdict atom_check(const Collection& c, const Bounds& bounds)
{
    Extremes om = classify_extremes(o_omega());
    if (!om.is_id.is_refuted()) return Verdict::refuted("intersection of O^omega not recognized as empty");
    Verdict empty_meet = classify_extremes(c).is_id;
    if (!empty_meet.is_refuted())
        return Verdict::unknown("not applicable: intersection of " + c.label() + " is not known to be empty");
    // For a list of finite sets, every n above the largest element behaves alike.
    if (c.is_finite()) {
        Nat top = 0;
        bool all_fin = true;
        for (const auto& m : c.members()) {
            auto fe = m.finite_elements();
            if (!fe) {
                all_fin = false;
                break;
            }
            if (!fe->empty()) top = std::max(top, fe->back());
        }
        if (all_fin) {
            for (Nat n = 0; n <= top + 1; ++n) {
                bool found = false;
                for (const auto& m : c.members())
                    if (!member(m, n)) {
                        found = true;
                        break;
                    }
                if (!found) return Verdict::refuted(fmt::format("n={} lies in every member", n.str()));
            }
            Nat last = top + 1;
            return Verdict::verified(fmt::format("n<={} checked; larger n behave as n={}", last.str(), last.str()));
        }
    }
    return check_leq_mo(o_omega(), c, codes::id(), bounds).verdict;
}

PartialSeqFn diagonal_zeta(std::size_t m)
{
    return PartialSeqFn::native("diag_zeta:" + std::to_string(m), [m](const Seq& s, Meter& meter) -> AppResult {
        if (!meter.spend(1 + s.size())) return AppResult::exhausted();
        if (s.size() < m) return AppResult::defined(encode_pair(1, 0));
        if (s.size() == m) return AppResult::defined(encode_pair(0, encode_tuple(s)));
        return AppResult::stuck();
    });
}

ImplicitTree diagonal_tree(const std::vector<Nat>& a)
{
    std::size_t m = a.size();
    std::vector<Nat> avoid;
    for (std::size_t i = 0; i < m; ++i) avoid.push_back(project(a[i], m, i + 1));
    ImplicitTree t;
    t.depth_bound = m;
    std::string desc = "S_(";
    for (std::size_t i = 0; i < m; ++i) desc += (i ? "," : "") + a[i].str();
    t.descriptor = desc + ")";
    t.status = [avoid, m](const Seq& s) {
        if (s.size() > m) return NodeStatus::not_node();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] == avoid[i]) return NodeStatus::not_node();
        if (s.size() == m) return NodeStatus::leaf();
        return NodeStatus::inner(SetExpr::cofin({avoid[s.size()]}));
    };
    return t;
}

} // namespace lotop
