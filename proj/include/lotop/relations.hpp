#ifndef LOTOP_RELATIONS_HPP
#define LOTOP_RELATIONS_HPP

#include "lotop/operators.hpp"

#include <functional>
#include <optional>

namespace lotop {

struct RelationCertificate {
    enum class Kind { LeqMoWitness, LeqLoWitness, NotLeqLoByIP };
    Kind kind = Kind::LeqMoWitness;
    std::optional<Code> realizer;
    // LeqMo: pairs (A, B) with r: B => A.
    std::vector<std::pair<SetExpr, SetExpr>> mo_evidence;
    // LeqLo: one supporting certificate per (n, A).
    std::vector<std::pair<Nat, Certificate>> lo_evidence;
    // NotLeqLoByIP: n sets of the left collection meeting emptily, and the right collection.
    std::size_t n = 0;
    std::vector<SetExpr> witness;
    std::optional<Collection> left, right;
    Verdict ip_evidence;
    Bounds bounds;
};

struct RelationResult {
    Verdict verdict;
    RelationCertificate cert;
};

std::string kind_name(RelationCertificate::Kind k);

// A <=_mo B with realizer r: every A in the left collection receives r: B => A for some
// B on the right. Families are enumerated by ascending index up to bounds.enum_bound.
RelationResult check_leq_mo(const Collection& a, const Collection& b, const Code& r, const Bounds& bounds);

// theta <=_mo zeta with r(n) = <m, e>, e: A => C for some A in zeta(m), every C in theta(n), n < n_bound.
Verdict check_leq_mo_seq(const ThetaSeq& theta, const ThetaSeq& zeta, const Code& r, const Bounds& bounds,
                         std::uint64_t n_bound);

// Supplies a supporting certificate for (w, zeta, A) at index n, or nullopt to fall back to search.
using CertProvider = std::function<std::optional<Certificate>(const Nat& n, const SetExpr& a, const PartialSeqFn& w)>;

struct LeqLoOptions {
    std::uint64_t n_bound = 4;  // indices checked when theta is not constant
    SearchLimits search;
    CertProvider provider;
    // Host routine for r(n), used instead of the coded one when present.
    std::function<PartialSeqFn(const Nat& n)> host_w;
};

// theta <=_lo zeta: for each n and A in theta(n), w = r(n) has a (w, zeta, A)-supporting tree.
// For a constant theta the obligation is the same at every n and only r(0) is examined.
RelationResult check_leq_lo(const ThetaSeq& theta, const ThetaSeq& zeta, const Code& r, const LeqLoOptions& opts);

// A not <=_lo B via a least n at which A fails n-IP while B has it.
std::optional<RelationResult> refute_leq_lo_by_ip(const Collection& a, const Collection& b, const Bounds& bounds);

// Re-checks a certificate from its own data.
Verdict reverify(const RelationCertificate& cert);

Collection meet_ovee(const Collection& a, const Collection& b);
ThetaSeq meet_ovee(const ThetaSeq& a, const ThetaSeq& b);
Collection join_owedge(const Collection& a, const Collection& b);
ThetaSeq join_owedge(const ThetaSeq& a, const ThetaSeq& b);

struct LegRealizers {
    Code left, right;
};

// A \/ B <=_mo A by x -> <0,x>, and <=_mo B by x -> <1,x>.
LegRealizers meet_legs();
// (eta (+) theta)(<n,m>) <=_mo eta via <n,m> -> <n, inl>, and theta via <n,m> -> <m, inr>.
LegRealizers meet_legs_seq();
// From r1: C <=_mo A and r2: C <=_mo B, the realizer of C <=_mo A (+) B: case split on the tag.
Code meet_universal(const Code& r1, const Code& r2);
// A <=_mo A /\ B by projection onto the first component, B by the second.
LegRealizers join_legs();
// n -> <n, pi_1>, n -> <n, pi_2>.
LegRealizers join_legs_seq();
// n -> alpha(n) * beta(n).
Code join_upper_realizer(const Code& alpha, const Code& beta);

// Given alpha: theta <=_lo zeta and beta: eta <=_lo zeta, verifies that
// join_upper_realizer(alpha, beta) realizes theta (x) eta <=_lo zeta by concatenating trees.
Verdict check_join_upper(const ThetaSeq& theta, const ThetaSeq& eta, const ThetaSeq& zeta, const Code& alpha,
                         const Code& beta, const LeqLoOptions& opts);

struct NotNotReport {
    SeparablePair pair;
    PartialSeqFn w;
    Verdict verdict;
    std::vector<SupportReport> trees;  // S_0 .. S_ymax
};

// w and trees S_y for a collection with two recursively separable members.
PartialSeqFn notnot_w(const SetExpr& separator);
ImplicitTree notnot_tree(const SetExpr& a, const SetExpr& b, std::uint64_t y);
std::optional<NotNotReport> implies_notnot(const Collection& c, std::uint64_t y_max, const SupportBounds& bounds);

// O^omega <=_mo A by id, for A with empty total intersection. Unknown ("not applicable") otherwise.
Verdict atom_check(const Collection& c, const Bounds& bounds);

// The diagonal function for O_m^omega <=_lo O_1^omega:
//   zeta(c_1..c_p) = <1,0> for p < m, <0,<c_1..c_m>> for p = m.
PartialSeqFn diagonal_zeta(std::size_t m);
// S_{a_1..a_m} = {(c_1..c_p) | p <= m, c_i != pi^m_i(a_i)}.
ImplicitTree diagonal_tree(const std::vector<Nat>& a);

} // namespace lotop

#endif
