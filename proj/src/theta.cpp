#include "lotop/theta.hpp"

#include <stdexcept>

namespace lotop {

ThetaSeq ThetaSeq::constant(Collection c)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->coll = std::move(c);
    return ThetaSeq(std::move(n));
}

ThetaSeq ThetaSeq::fin_supported(Collection dflt, std::map<Nat, Collection> overrides)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::FinSupported;
    n->coll = std::move(dflt);
    n->overrides = std::move(overrides);
    return ThetaSeq(std::move(n));
}

ThetaSeq ThetaSeq::rho(const std::string& predicate)
{
    if (!predicate_registered(predicate)) throw std::invalid_argument("unregistered predicate: " + predicate);
    auto n = std::make_shared<Node>();
    n->kind = Kind::RhoD;
    n->pred = predicate;
    return ThetaSeq(std::move(n));
}

ThetaSeq ThetaSeq::meet(const ThetaSeq& eta, const ThetaSeq& theta)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Meet;
    n->l = std::make_shared<const ThetaSeq>(eta);
    n->r = std::make_shared<const ThetaSeq>(theta);
    return ThetaSeq(std::move(n));
}

ThetaSeq ThetaSeq::join(const ThetaSeq& eta, const ThetaSeq& theta)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Join;
    n->l = std::make_shared<const ThetaSeq>(eta);
    n->r = std::make_shared<const ThetaSeq>(theta);
    return ThetaSeq(std::move(n));
}

Collection ThetaSeq::at(const Nat& n) const
{
    switch (kind()) {
    case Kind::Const: return *node_->coll;
    case Kind::FinSupported: {
        auto it = node_->overrides.find(n);
        return it == node_->overrides.end() ? *node_->coll : it->second;
    }
    case Kind::RhoD:
        return Collection::list({SetExpr::fin({Nat(decide_predicate(node_->pred, n) ? 0 : 1)})});
    case Kind::Meet: {
        auto [a, b] = decode_pair(n);
        return ovee(left().at(a), right().at(b));
    }
    case Kind::Join: return owedge(left().at(n), right().at(n));
    }
    throw std::logic_error("ThetaSeq::at");
}

bool ThetaSeq::contains(const Nat& n, const SetExpr& a) const
{
    if (kind() == Kind::Const) return node_->coll->contains(a);
    return at(n).contains(a);
}

std::optional<bool> ThetaSeq::has_empty_somewhere() const
{
    switch (kind()) {
    case Kind::Const: return node_->coll->contains_empty();
    case Kind::FinSupported: {
        if (node_->coll->contains_empty()) return true;
        for (const auto& [k, c] : node_->overrides)
            if (c.contains_empty()) return true;
        return false;
    }
    case Kind::RhoD: return false;
    case Kind::Meet: {
        // A \/ B is empty only when both are.
        auto a = left().has_empty_somewhere();
        auto b = right().has_empty_somewhere();
        if (a && b) return *a && *b;
        if ((a && !*a) || (b && !*b)) return false;
        return std::nullopt;
    }
    case Kind::Join: {
        // A /\ B is empty as soon as one side is; exact when both sides are constant.
        if (left().kind() == Kind::Const && right().kind() == Kind::Const) {
            auto a = left().has_empty_somewhere();
            auto b = right().has_empty_somewhere();
            bool nonempty_l = left().constant_collection()->kind() == Collection::Kind::IndexedFamily ||
                              left().constant_collection()->size() > 0;
            bool nonempty_r = right().constant_collection()->kind() == Collection::Kind::IndexedFamily ||
                              right().constant_collection()->size() > 0;
            return ((*a && nonempty_r) || (*b && nonempty_l));
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

const Collection* ThetaSeq::constant_collection() const
{
    if (kind() == Kind::Const) return &*node_->coll;
    return nullptr;
}

std::string ThetaSeq::to_string() const
{
    switch (kind()) {
    case Kind::Const: return "Const(" + node_->coll->label() + ")";
    case Kind::FinSupported: {
        std::string out = "FinSupported(" + node_->coll->label();
        for (const auto& [k, c] : node_->overrides) out += "; " + k.str() + "->" + c.label();
        return out + ")";
    }
    case Kind::RhoD: return "rho:" + node_->pred;
    case Kind::Meet: return "Meet(" + left().to_string() + "," + right().to_string() + ")";
    case Kind::Join: return "Join(" + left().to_string() + "," + right().to_string() + ")";
    }
    return "?";
}

ThetaSeq parse_theta(const std::string& text)
{
    if (text.rfind("rho:", 0) == 0) return ThetaSeq::rho(text.substr(4));
    return ThetaSeq::constant(parse_collection(text));
}

} // namespace lotop
