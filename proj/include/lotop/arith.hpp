#ifndef LOTOP_ARITH_HPP
#define LOTOP_ARITH_HPP

#include "lotop/operators.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lotop {

struct ArithTerm;
using TermRef = std::shared_ptr<const ArithTerm>;

struct ArithTerm {
    enum class Kind { Num, Var, Suc, Add, Mul };
    Kind kind;
    Nat num;
    std::string var;
    TermRef l, r;
};

struct ArithFormula;
using FormulaRef = std::shared_ptr<const ArithFormula>;

// Lt and Le are decidable atoms beside equality. Bounded quantifiers carry a term bound.
struct ArithFormula {
    enum class Kind { Eq, Lt, Le, And, Or, Imp, Not, All, Ex, BAll, BEx };
    Kind kind;
    TermRef a, b;         // atoms; b is the bound of BAll/BEx
    FormulaRef l, r;      // connectives; l is the body of quantifiers
    std::string var;      // quantifiers
};

struct ArithParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grammar: forall/exists (∀/∃) x [< t] . φ, ->/⇒, |/∨, &/∧, ~/¬, t = t, t < t, t <= t,
// terms over numerals, variables, suc(t), +, *.
FormulaRef parse_formula(const std::string& text);
std::string to_string(const FormulaRef& f);
std::string to_string(const TermRef& t);

std::set<std::string> free_vars(const FormulaRef& f);
bool is_delta0(const FormulaRef& f);
FormulaRef substitute(const FormulaRef& f, const std::string& var, const Nat& value);

using Assignment = std::map<std::string, Nat>;
Nat eval_term(const TermRef& t, const Assignment& env);
// Unbounded quantifiers range over [0, bound).
bool holds_bounded(const FormulaRef& f, const Assignment& env, std::uint64_t bound);

struct RealizeBounds {
    std::uint64_t q = 30;  // instances of unbounded for-all and candidate antecedent realizers
    SearchLimits search{};
};

// n theta-realizes the closed sentence f, by the six clauses plus the Lt/Le and
// bounded-quantifier readings: atoms Lt/Le are realized by 0 when true,
// ∃x<t by <x,m> with x < t, ∀x<t as the for-all clause over x < t.
Verdict theta_realizes(const Nat& n, const FormulaRef& f, const ThetaSeq& theta, const RealizeBounds& bounds);

// A realizer under theta = {} for a true Delta_0 sentence; nullopt when false.
std::optional<Nat> kleene_realizer(const FormulaRef& f);

// n in D iff for-all x1 exists x2 ... phi(n, x1, ..., xk); phi is Delta_0 in n, x1..xk.
struct PiKSpec {
    std::size_t k = 2;
    FormulaRef phi;
    std::uint64_t truth_bound = 30;
    // Set when witnesses are known to lie below truth_bound, so bounded truth is exact.
    bool bound_exact = false;
    std::string predicate;  // registered D to cross-check against, may be empty

    std::shared_ptr<struct ArithCache> cache = nullptr;
};

PiKSpec make_spec(std::size_t k, const std::string& phi, std::uint64_t truth_bound, bool bound_exact,
                  const std::string& predicate = {});
// The acceptance predicate: x1 < 3 ∨ x2 + x2 = n, truth bound 30, D = evens.
PiKSpec evens_spec();

// Bounded truth of the alternating tail after the prefix d (q = |d|).
bool tail_true(const PiKSpec& spec, const Nat& n, const Seq& d);
// n in D under the bounded oracle.
bool bounded_member(const PiKSpec& spec, const Nat& n);

Nat bn_value(const PiKSpec& spec, const Nat& n, const Seq& d);

struct StageTree {
    WfTree tree;
    std::size_t stage = 0;
    Seq lleaf;
    // expanded[r] = lLeaf(T_(c1..cr)); children 0..c_(r+1) were added under it.
    std::vector<Seq> expanded;
};

// Least leaf under length-then-lex order.
Seq least_leaf(const WfTree& t);
StageTree stage_tree(const Seq& s);

NodeStatus sn_status(const PiKSpec& spec, const Nat& n, const Seq& s);
// S_n as an implicit tree; the depth bound holds for children < child_bound.
ImplicitTree sn_tree(const PiKSpec& spec, const Nat& n, std::uint64_t child_bound);

// c_(n,s)(t) for t in T_s with |t| < stage(s).
Nat c_value(const Seq& s, const Seq& t);

bool tau(const PiKSpec& spec, const Nat& n, const Seq& s, const Seq& t);

// Leaves of S_n reached by the all-minimal path and by seeded random descents with children < child_bound.
std::vector<Seq> sample_sn_leaves(const PiKSpec& spec, const Nat& n, std::uint64_t child_bound, std::size_t walks,
                                  std::uint64_t seed);

// eps_n(s): <1,0> below stage k, <0,0> at a leaf with tau, <0,1> at a leaf without.
PartialSeqFn epsilon(const PiKSpec& spec, const Nat& n);

// The chi used by rho_D and eps_n: 0 on members.
inline Nat rho_chi(bool member) { return member ? 0 : 1; }

struct EpsilonReport {
    Nat n;
    bool member = false;  // bounded truth of n in D
    SupportReport support;
    Verdict tau_root;     // tau_(n,s)() = member on sampled leaves
    Verdict ceiling;      // c_(n,s)(t) >= b_n(t) on sampled leaves
    std::size_t leaves_sampled = 0;
    Verdict overall;
};

EpsilonReport epsilon_report(const PiKSpec& spec, const Nat& n, const SupportBounds& bounds,
                             std::size_t leaf_walks = 40);

} // namespace lotop

#endif
