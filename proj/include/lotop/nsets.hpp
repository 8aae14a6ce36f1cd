#ifndef LOTOP_NSETS_HPP
#define LOTOP_NSETS_HPP

#include "lotop/nat.hpp"
#include "lotop/pca.hpp"
#include "lotop/verdict.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lotop {

struct Universe {
    std::optional<std::uint64_t> alpha;  // nullopt is Omega
    static Universe omega() { return {}; }
    static Universe finite(std::uint64_t a) { return {a}; }
    bool is_omega() const { return !alpha; }
};

// Symbolic subset of N with decidable membership.
//   Fin      finite set
//   CoFin    N minus a finite set (CoFin over a finite universe normalizes to Fin)
//   Wedge    {<a,b> | a in l, b in r}
//   Vee      {<0,a> | a in l} u {<1,b> | b in r}
//   Pred     decided by a registered builtin (value 1 means member), optionally negated
class SetExpr {
public:
    enum class Kind { Fin, CoFin, Wedge, Vee, Pred };

    static SetExpr fin(std::vector<Nat> elems);
    static SetExpr singleton(const Nat& n) { return fin({n}); }
    static SetExpr empty() { return fin({}); }
    static SetExpr cofin(std::vector<Nat> exceptions);
    static SetExpr cofin(const Universe& u, std::vector<Nat> exceptions);
    static SetExpr naturals() { return cofin({}); }
    static SetExpr wedge(const SetExpr& l, const SetExpr& r);
    static SetExpr vee(const SetExpr& l, const SetExpr& r);
    static SetExpr pred(const std::string& name, bool negated = false);
    // {x | x >= n}
    static SetExpr up_from(std::uint64_t n);

    Kind kind() const { return node_->kind; }
    // Fin elements or CoFin exceptions, strictly increasing.
    const std::vector<Nat>& elems() const { return node_->elems; }
    const SetExpr& left() const { return *node_->l; }
    const SetExpr& right() const { return *node_->r; }
    const std::string& pred_name() const { return node_->name; }
    bool negated() const { return node_->negated; }

    bool is_finite() const;
    bool is_empty_fin() const { return kind() == Kind::Fin && elems().empty(); }
    // Elements when the set is finite and materializable.
    std::optional<std::vector<Nat>> finite_elements() const;
    // Wedge/Vee of finite operands become Fin.
    SetExpr normalized() const;

    // Canonical text notation: {1,2}, N\{0,4}, (A/\B), (A\/B), @evens, !@evens.
    std::string to_string() const;

    bool operator==(const SetExpr& o) const;
    bool operator!=(const SetExpr& o) const { return !(*this == o); }
    bool operator<(const SetExpr& o) const { return to_string() < o.to_string(); }

private:
    struct Node {
        Kind kind;
        std::vector<Nat> elems;
        std::shared_ptr<const SetExpr> l, r;
        std::string name;
        bool negated = false;
        std::string text;  // canonical notation, cached
    };
    explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct SetParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the text notation, also accepting 'α=7\{2}' (or 'a=7\{2}') and plain 'N'.
SetExpr parse_set(const std::string& text);

bool member(const SetExpr& s, const Nat& n);

// Exact emptiness of an intersection. Exact whenever a member is finite or all
// members are cofinite; otherwise std::invalid_argument.
bool intersection_empty(const std::vector<SetExpr>& ss);

// N \ s for Fin, CoFin and Pred; nullopt for Wedge and Vee.
std::optional<SetExpr> complement(const SetExpr& s);
// b is a subset of a, when decidable symbolically.
std::optional<bool> subset(const SetExpr& b, const SetExpr& a);

// {n < bound | n in s}, ascending.
std::vector<Nat> enumerate(const SetExpr& s, std::uint64_t bound);

// Exact disjointness where decidable; nullopt when undecided.
std::optional<bool> disjoint(const SetExpr& a, const SetExpr& b);

struct Bounds {
    std::uint64_t enum_bound = 1000;
    std::uint64_t fuel = 100000;
    std::uint64_t depth = 6;
};

std::string describe(const Bounds& b);

// Decidable predicates usable as Pred sets and as characteristic builtins.
// Registers the builtin `name` returning 1 on members and 0 elsewhere.
Code register_predicate(const std::string& name, bool (*decide)(const Nat&));
// evens, odds, mult3, all; registered on first use.
void ensure_standard_predicates();
bool predicate_registered(const std::string& name);
// chi_D(n) via the registered builtin.
bool decide_predicate(const std::string& name, const Nat& n);

// e in A => B: every a in A has e(a) defined and in B.
Verdict arrow_check(const Code& e, const SetExpr& A, const SetExpr& B, const Bounds& bounds);

} // namespace lotop

#endif
