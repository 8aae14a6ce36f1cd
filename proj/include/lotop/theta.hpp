#ifndef LOTOP_THETA_HPP
#define LOTOP_THETA_HPP

#include "lotop/collections.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace lotop {

// A sequence of collections n -> theta(n).
//   Const         the same collection at every n
//   FinSupported  a default with finitely many overrides
//   RhoD          {{0}} when n is in D, {{1}} otherwise
//   Meet          (eta (+) theta)(<n,m>) = eta(n) (+) theta(m), pairwise Vee
//   Join          (eta (x) theta)(n) = eta(n) (x) theta(n), pairwise Wedge
class ThetaSeq {
public:
    enum class Kind { Const, FinSupported, RhoD, Meet, Join };

    static ThetaSeq constant(Collection c);
    static ThetaSeq fin_supported(Collection dflt, std::map<Nat, Collection> overrides);
    static ThetaSeq rho(const std::string& predicate);
    static ThetaSeq meet(const ThetaSeq& eta, const ThetaSeq& theta);
    static ThetaSeq join(const ThetaSeq& eta, const ThetaSeq& theta);

    Kind kind() const { return node_->kind; }
    Collection at(const Nat& n) const;
    bool contains(const Nat& n, const SetExpr& a) const;
    // Is the empty set in theta(n) for some n. nullopt when not decidable here.
    std::optional<bool> has_empty_somewhere() const;
    // Collection of a constant sequence.
    const Collection* constant_collection() const;
    const std::string& predicate() const { return node_->pred; }
    const std::map<Nat, Collection>& overrides() const { return node_->overrides; }
    const ThetaSeq& left() const { return *node_->l; }
    const ThetaSeq& right() const { return *node_->r; }

    std::string to_string() const;

private:
    struct Node {
        Kind kind;
        std::optional<Collection> coll;
        std::map<Nat, Collection> overrides;
        std::string pred;
        std::shared_ptr<const ThetaSeq> l, r;
    };
    explicit ThetaSeq(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// "rho:<predicate>", or any collection text for a constant sequence.
ThetaSeq parse_theta(const std::string& text);

} // namespace lotop

#endif
