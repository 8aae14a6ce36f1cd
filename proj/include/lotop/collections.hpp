#ifndef LOTOP_COLLECTIONS_HPP
#define LOTOP_COLLECTIONS_HPP

#include "lotop/nsets.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lotop {

// Facts about an infinite built-in family, recorded once with their source.
struct FamilyFacts {
    bool all_n_ip = false;            // n-intersection property for every n
    bool intersection_empty = false;  // the whole family meets emptily
    bool contains_empty = false;      // empty set is a member
    std::string citation;
};

// A collection of subsets of N: an explicit list or an indexed family.
class Collection {
public:
    enum class Kind { FiniteList, IndexedFamily };

    static Collection list(std::vector<SetExpr> members, std::string name = {});
    static Collection family(std::string name, std::function<SetExpr(const Nat&)> generator,
                             std::function<bool(const SetExpr&)> contains, FamilyFacts facts,
                             std::function<std::optional<Nat>(const SetExpr&)> index_of = {});

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::FiniteList; }
    const std::string& name() const { return name_; }
    const std::vector<SetExpr>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const FamilyFacts& facts() const { return facts_; }

    // Member number i. Lists are indexed by position.
    SetExpr at(const Nat& i) const;
    bool contains(const SetExpr& s) const;
    // Index of s when it is a member and the family can locate it.
    std::optional<Nat> index_of(const SetExpr& s) const;
    bool contains_empty() const;

    // Lists print as "{1,2},{0,2},{0,1}"; families by name.
    std::string to_string() const;
    // Name when one was given, else the list text in braces.
    std::string label() const;

private:
    Kind kind_ = Kind::FiniteList;
    std::string name_;
    std::vector<SetExpr> members_;
    std::function<SetExpr(const Nat&)> gen_;
    std::function<bool(const SetExpr&)> contains_;
    std::function<std::optional<Nat>(const SetExpr&)> index_of_;
    FamilyFacts facts_;
};

// O(m,alpha) with 1 < 2m < alpha, both finite (alpha = nullopt is omega).
Collection co_m_tons_checked(std::uint64_t m, std::optional<std::uint64_t> alpha);
// Same family with the weaker constraint 1 <= m < alpha.
Collection co_m_tons(std::uint64_t m, std::optional<std::uint64_t> alpha);
Collection o_omega();
Collection finites();
Collection cofinites();
Collection up_n();
Collection line_graph(std::uint64_t m);
Collection circle_graph(std::uint64_t m);
Collection complete_graph(std::uint64_t m);

// Names: "O:m:alpha", "O:m:omega", "Oomega", "F", "Fstar", "UpN", "L:m", "C:m", "K:m",
// "dual:<name>", or an explicit list "{{0},{1}}" / "[{0};{1}]".
Collection make_builtin(const std::string& name);
Collection parse_collection(const std::string& text);

// Names of the finite built-ins used by batch checks.
std::vector<std::string> finite_builtin_names();

Collection dual(const Collection& c);

// {A \/ B}, {A /\ B} over all pairs, for finite lists.
Collection ovee(const Collection& a, const Collection& b);
Collection owedge(const Collection& a, const Collection& b);

struct EmptyIntersection {
    std::size_t d;
    std::vector<std::size_t> witness;  // indices into the list
};

// Least d such that some d members meet emptily; nullopt when the whole list meets.
std::optional<EmptyIntersection> min_empty_intersection(const Collection& c);

Verdict has_n_intersection_property(const Collection& c, std::size_t n, const Bounds& bounds);

struct SeparablePair {
    SetExpr a, b, separator;
};

// Two disjoint members; the separator is the first set.
std::optional<SeparablePair> find_recursively_separable_pair(const Collection& c);

} // namespace lotop

#endif
