#ifndef LOTOP_SIGHTS_HPP
#define LOTOP_SIGHTS_HPP

#include "lotop/theta.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lotop {

// Explicit sight: Nil, or a finite branch set with one subsight per element.
class Sight {
public:
    Sight() = default;  // Nil
    static Sight nil() { return Sight(); }
    // Children sorted by key; duplicate keys are rejected.
    static Sight node(std::vector<std::pair<Nat, Sight>> children);
    // Node whose children are all Nil.
    static Sight flat(const std::vector<Nat>& branch);

    bool is_nil() const { return !node_; }
    const std::vector<std::pair<Nat, Sight>>& children() const;
    std::vector<Nat> branch_elems() const;
    SetExpr branch() const { return SetExpr::fin(branch_elems()); }
    // Subsight at key a, nullptr when a is not in the branch.
    const Sight* child(const Nat& a) const;
    const Sight* subsight(const Seq& s) const;

    bool is_node(const Seq& s) const { return subsight(s) != nullptr; }
    bool is_leaf(const Seq& s) const;
    bool is_degenerate() const;
    std::size_t depth() const;

    bool operator==(const Sight& o) const;
    bool operator!=(const Sight& o) const { return !(*this == o); }

    // "Nil" or "(0:Nil,1:(2:Nil))".
    std::string to_string() const;

private:
    struct Node {
        std::vector<std::pair<Nat, Sight>> children;
    };
    std::shared_ptr<const Node> node_;
};

Sight parse_sight(const std::string& text);

// Node count 1 + sum over children; Nil has one node.
std::size_t node_count(const Sight& s);
std::vector<Seq> sight_nodes(const Sight& s);
std::vector<Seq> sight_leaves(const Sight& s);

// Finite well-founded tree as its node set.
using WfTree = std::set<Seq>;

// Nonempty and prefix-closed.
bool is_tree(const WfTree& t);
std::vector<Seq> tree_leaves(const WfTree& t);
std::vector<Nat> tree_out(const WfTree& t, const Seq& s);
std::size_t foundation_number(const WfTree& t);
WfTree subtree(const WfTree& t, const Seq& s);

// Nds and its inverse. tree_of throws on a degenerate sight, sight_of on a non-tree.
WfTree tree_of(const Sight& s);
Sight sight_of(const WfTree& t);

std::string tree_to_string(const WfTree& t);

// Partial map from finite sequences to N.
class PartialSeqFn {
public:
    using Host = std::function<AppResult(const Seq&, Meter&)>;

    // Realizer acting on encode_seq(s).
    static PartialSeqFn coded(Code c, std::string label = {});
    // Host routine registered as builtin `name` on sequence codes.
    static PartialSeqFn native(const std::string& name, Host host);
    // Coded function with a host routine computing the same values.
    static PartialSeqFn accelerated(Code c, Host host, std::string label);

    AppResult eval(const Seq& s, Meter& meter) const;
    AppResult eval(const Seq& s, std::uint64_t fuel) const;
    // Machine-only evaluation, bypassing the host routine.
    AppResult eval_coded(const Seq& s, Meter& meter) const;
    const std::optional<Code>& code() const { return code_; }
    bool is_native() const { return native_; }
    const std::string& label() const { return label_; }

private:
    std::optional<Code> code_;
    Host host_;
    bool native_ = false;
    std::string label_;
};

// w@a: s -> w(a:s).
PartialSeqFn shifted(const PartialSeqFn& w, const Nat& a);

// Dedication of an explicit sight.
Verdict check_dedicated(const Sight& s, const Nat& z, const ThetaSeq& theta, const SetExpr& p,
                        std::uint64_t fuel);

// Support of an explicit sight or tree: exact up to fuel.
Verdict check_supporting(const Sight& s, const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                         std::uint64_t fuel);
Verdict check_supporting(const WfTree& t, const PartialSeqFn& w, const ThetaSeq& theta, const SetExpr& p,
                         std::uint64_t fuel);

struct NodeStatus {
    enum class Kind { NotNode, Inner, Leaf };
    Kind kind = Kind::NotNode;
    std::optional<SetExpr> out;  // Inner only

    static NodeStatus not_node() { return {}; }
    static NodeStatus leaf() { return {Kind::Leaf, std::nullopt}; }
    static NodeStatus inner(SetExpr out) { return {Kind::Inner, std::move(out)}; }
};

// Tree given by a membership oracle; depth_bound certifies well-foundedness.
struct ImplicitTree {
    std::function<NodeStatus(const Seq&)> status;
    std::size_t depth_bound = 0;
    std::string descriptor;
};

struct SupportBounds {
    std::uint64_t child_bound = 200;  // children examined per node are < child_bound
    std::uint64_t max_nodes = 20000;  // visit budget; beyond it, seeded random walks
    std::uint64_t fuel = 100000;      // per evaluation of w
    std::uint64_t seed = 1;
};

std::string describe(const SupportBounds& b);

struct SupportReport {
    Verdict verdict;
    std::uint64_t nodes_checked = 0;
    std::uint64_t leaves_checked = 0;
    bool exhaustive = false;
};

// Enumerates nodes below the bounds. Verified only when every out-set was
// finite and fully visited; otherwise VerifiedUpTo at best.
SupportReport check_supporting(const ImplicitTree& t, const PartialSeqFn& w, const ThetaSeq& theta,
                               const SetExpr& p, const SupportBounds& bounds);

ImplicitTree implicit_of(const WfTree& t);

// bwd_z as a realizer on sequences.
PartialSeqFn bwd_transform(const Nat& z);
// fwd_w = fwd'_w(), the value a dedicated sight checks against.
AppResult fwd_transform(const PartialSeqFn& w, std::uint64_t fuel);
// F with F<w,s> = fwd'_w(s) for a coded w.
const Code& fwd_kernel();

// Prefix closure of {s*t | s leaf of S, t in T}.
WfTree concat_sights(const WfTree& s, const WfTree& t);
PartialSeqFn star_action(const PartialSeqFn& a, const PartialSeqFn& b);
// K with K<a,b> the code of a*b.
const Code& star_kernel();

// Keeps the n smallest elements of every branch.
Sight full_nary_sector(const Sight& s, std::size_t n);

// A node of every S_i that is a leaf of one of them, by least-common-element walk.
// When collections are given, each S_i must be on its collection.
Seq joint_intersection_node(const std::vector<Sight>& ss, const std::vector<Collection>& colls = {});

// z[s] for a sequence s.
AppResult r_value(const Nat& z, const Seq& s, std::uint64_t fuel);

struct RImage {
    Verdict verdict;
    std::set<Nat> values;
};
RImage r_image(const Nat& z, const Sight& s, std::uint64_t fuel);

std::string to_dot(const Sight& s);
std::string to_dot(const WfTree& t);

} // namespace lotop

#endif
