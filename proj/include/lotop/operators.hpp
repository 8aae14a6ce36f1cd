#ifndef LOTOP_OPERATORS_HPP
#define LOTOP_OPERATORS_HPP

#include "lotop/sights.hpp"

#include <optional>

namespace lotop {

// z = <z1,z2> with z1: A => p and z2: p => A for some A in the collection.
Verdict gr_member(const Nat& z, const Collection& c, const SetExpr& p, const Bounds& bounds);

// z = <n,e> with e: A => p for some A in theta(n).
Verdict mo_member(const Nat& z, const ThetaSeq& theta, const SetExpr& p, const Bounds& bounds);

// z in mo^k(p), by recursion on the stage:
//   mo^0(p) = {0} /\ p,  mo^{k+1}(p) = mo^k(p) u {1} /\ mo(mo^k(p)).
Verdict mo_iter_member(const Nat& z, const ThetaSeq& theta, const SetExpr& p, std::size_t k, const Bounds& bounds);

// Membership certificate for lo'(p) (dedicated sight for z) or lo''(p) (supporting tree for w).
struct Certificate {
    enum class Kind { Dedicated, Supporting };
    Kind kind;
    ThetaSeq theta;
    SetExpr p;
    std::optional<Sight> sight;
    std::optional<ImplicitTree> implicit;
    Nat z;
    std::optional<PartialSeqFn> w;
    std::uint64_t fuel = 100000;
    SupportBounds support;

    static Certificate dedicated(Sight s, Nat z, ThetaSeq theta, SetExpr p, std::uint64_t fuel);
    static Certificate supporting(Sight s, PartialSeqFn w, ThetaSeq theta, SetExpr p, std::uint64_t fuel);
    static Certificate supporting(ImplicitTree t, PartialSeqFn w, ThetaSeq theta, SetExpr p, SupportBounds b);
};

// Throws std::invalid_argument on a malformed certificate.
Verdict lo_verify(const Certificate& cert);

struct SearchLimits {
    std::size_t depth = 6;
    std::uint64_t enum_bound = 64;  // members of theta(n) tried
    std::uint64_t fuel = 100000;
};

struct SearchResult {
    Verdict verdict;  // Verified with a certificate, otherwise Unknown
    std::optional<Certificate> cert;
};

// Depth-first search for a dedicated sight following z. The empty branch is tried
// first, then members of theta(n) in listed order, children ascending.
SearchResult search_dedicated(const Nat& z, const ThetaSeq& theta, const SetExpr& p, const SearchLimits& limits);

// Depth-first search for a finite supporting tree of w; members of theta(n) in listed
// order, empty and infinite members skipped.
SearchResult search_supporting(const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                               const SearchLimits& limits);

// c(<0,y>) = a(y), c(<1,<n,e>>) = b(<n, m -> c(e(m))>).
Code pitts_c_realizer(const Code& a, const Code& b);

struct Extremes {
    Verdict is_id;
    bool is_top = false;
};

Extremes classify_extremes(const Collection& c);
Extremes classify_extremes(const ThetaSeq& theta);

} // namespace lotop

#endif
