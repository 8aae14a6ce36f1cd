#include "lotop/nsets.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <mutex>
#include <set>

namespace lotop {

namespace {

constexpr std::size_t kMaterializeLimit = 1 << 16;

std::vector<Nat> sorted_unique(std::vector<Nat> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string list_text(const std::vector<Nat>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += xs[i].str();
    }
    return out + "}";
}

} // namespace

// ---------------------------------------------------------------------------
// Predicates

namespace {

std::mutex pred_mu;
std::set<std::string>& pred_names()
{
    static std::set<std::string> s;
    return s;
}

std::optional<Nat> chi_evens(const Nat& n) { return Nat(n % 2 == 0 ? 1 : 0); }
std::optional<Nat> chi_odds(const Nat& n) { return Nat(n % 2 == 1 ? 1 : 0); }
std::optional<Nat> chi_mult3(const Nat& n) { return Nat(n % 3 == 0 ? 1 : 0); }
std::optional<Nat> chi_all(const Nat&) { return Nat(1); }

} // namespace

Code register_predicate(const std::string& name, bool (*decide)(const Nat&))
{
    Code c = register_builtin(
        name, [decide](const Nat& n) -> std::optional<Nat> { return Nat(decide(n) ? 1 : 0); },
        "predicate:" + std::to_string(reinterpret_cast<std::uintptr_t>(decide)));
    std::lock_guard lock(pred_mu);
    pred_names().insert(name);
    return c;
}

void ensure_standard_predicates()
{
    static std::once_flag once;
    std::call_once(once, [] {
        register_builtin("evens", chi_evens);
        register_builtin("odds", chi_odds);
        register_builtin("mult3", chi_mult3);
        register_builtin("all", chi_all);
        std::lock_guard lock(pred_mu);
        for (const char* n : {"evens", "odds", "mult3", "all"}) pred_names().insert(n);
    });
}

bool predicate_registered(const std::string& name)
{
    ensure_standard_predicates();
    std::lock_guard lock(pred_mu);
    return pred_names().count(name) != 0;
}

bool decide_predicate(const std::string& name, const Nat& n)
{
    ensure_standard_predicates();
    Meter m(1u << 20);
    auto r = call_builtin(name, n, m);
    if (!r.is_defined()) throw std::invalid_argument("predicate undefined: " + name);
    return r.value == 1;
}

// ---------------------------------------------------------------------------
// Construction

SetExpr SetExpr::fin(std::vector<Nat> elems)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fin;
    n->elems = sorted_unique(std::move(elems));
    n->text = list_text(n->elems);
    return SetExpr(std::move(n));
}

SetExpr SetExpr::cofin(std::vector<Nat> exceptions)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::CoFin;
    n->elems = sorted_unique(std::move(exceptions));
    n->text = n->elems.empty() ? "N" : "N\\" + list_text(n->elems);
    return SetExpr(std::move(n));
}

SetExpr SetExpr::cofin(const Universe& u, std::vector<Nat> exceptions)
{
    if (u.is_omega()) return cofin(std::move(exceptions));
    std::vector<Nat> ex = sorted_unique(std::move(exceptions));
    for (const auto& x : ex)
        if (x >= *u.alpha) throw std::invalid_argument("exception outside universe: " + x.str());
    std::vector<Nat> out;
    for (std::uint64_t i = 0; i < *u.alpha; ++i)
        if (!std::binary_search(ex.begin(), ex.end(), Nat(i))) out.emplace_back(i);
    return fin(std::move(out));
}

SetExpr SetExpr::up_from(std::uint64_t k)
{
    std::vector<Nat> ex;
    for (std::uint64_t i = 0; i < k; ++i) ex.emplace_back(i);
    return cofin(std::move(ex));
}

SetExpr SetExpr::wedge(const SetExpr& l, const SetExpr& r)
{
    if (l.is_empty_fin() || r.is_empty_fin()) return empty();
    auto fl = l.finite_elements();
    auto fr = r.finite_elements();
    if (fl && fr && fl->size() * fr->size() <= kMaterializeLimit) {
        std::vector<Nat> out;
        for (const auto& a : *fl)
            for (const auto& b : *fr) out.push_back(encode_pair(a, b));
        return fin(std::move(out));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Wedge;
    n->l = std::make_shared<const SetExpr>(l);
    n->r = std::make_shared<const SetExpr>(r);
    n->text = "(" + l.to_string() + "/\\" + r.to_string() + ")";
    return SetExpr(std::move(n));
}

SetExpr SetExpr::vee(const SetExpr& l, const SetExpr& r)
{
    auto fl = l.finite_elements();
    auto fr = r.finite_elements();
    if (fl && fr && fl->size() + fr->size() <= kMaterializeLimit) {
        std::vector<Nat> out;
        for (const auto& a : *fl) out.push_back(encode_pair(0, a));
        for (const auto& b : *fr) out.push_back(encode_pair(1, b));
        return fin(std::move(out));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Vee;
    n->l = std::make_shared<const SetExpr>(l);
    n->r = std::make_shared<const SetExpr>(r);
    n->text = "(" + l.to_string() + "\\/" + r.to_string() + ")";
    return SetExpr(std::move(n));
}

SetExpr SetExpr::pred(const std::string& name, bool negated)
{
    if (!predicate_registered(name)) throw std::invalid_argument("unregistered predicate: " + name);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pred;
    n->name = name;
    n->negated = negated;
    n->text = (negated ? "!@" : "@") + name;
    return SetExpr(std::move(n));
}

bool SetExpr::is_finite() const { return finite_elements().has_value(); }

std::optional<std::vector<Nat>> SetExpr::finite_elements() const
{
    // Wedge/Vee nodes only survive construction when an operand is infinite
    // or the product is too large to list.
    if (kind() == Kind::Fin) return elems();
    return std::nullopt;
}

SetExpr SetExpr::normalized() const
{
    switch (kind()) {
    case Kind::Wedge: return wedge(left().normalized(), right().normalized());
    case Kind::Vee: return vee(left().normalized(), right().normalized());
    default: return *this;
    }
}

std::string SetExpr::to_string() const { return node_->text; }

bool SetExpr::operator==(const SetExpr& o) const
{
    return node_ == o.node_ || node_->text == o.node_->text;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class SetParser {
public:
    explicit SetParser(const std::string& s) : s_(s) {}

    SetExpr parse()
    {
        SetExpr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what)
    {
        throw SetParseError(fmt::format("set notation: {} at offset {} in '{}'", what, pos_, s_));
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(const std::string& tok)
    {
        skip_ws();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Nat number()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected number");
        return parse_nat(s_.substr(start, pos_ - start));
    }

    std::vector<Nat> braces()
    {
        if (!eat("{")) fail("expected '{'");
        std::vector<Nat> out;
        if (eat("}")) return out;
        do {
            out.push_back(number());
        } while (eat(","));
        if (!eat("}")) fail("expected '}'");
        return out;
    }

    std::vector<Nat> exceptions()
    {
        skip_ws();
        // "\{" starts an exception list; "\/" is the Vee operator.
        if (s_.compare(pos_, 2, "\\{") == 0) {
            ++pos_;
            return braces();
        }
        return {};
    }

    std::string ident()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected predicate name");
        return s_.substr(start, pos_ - start);
    }

    SetExpr atom()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat("(")) {
            SetExpr e = expr();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (s_[pos_] == '{') return SetExpr::fin(braces());
        if (eat("!@")) return make_pred(ident(), true);
        if (eat("@")) return make_pred(ident(), false);
        if (eat("\xCE\xB1=") || eat("a=")) {
            Nat a = number();
            auto av = to_u64(a);
            if (!av || *av == 0) fail("universe size must be positive");
            try {
                return SetExpr::cofin(Universe::finite(*av), exceptions());
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
        if (eat("N")) return SetExpr::cofin(exceptions());
        fail("expected set");
    }

    SetExpr make_pred(const std::string& name, bool neg)
    {
        try {
            return SetExpr::pred(name, neg);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    SetExpr expr()
    {
        SetExpr acc = atom();
        for (;;) {
            if (eat("/\\"))
                acc = SetExpr::wedge(acc, atom());
            else if (eat("\\/"))
                acc = SetExpr::vee(acc, atom());
            else
                return acc;
        }
    }
};

} // namespace

SetExpr parse_set(const std::string& text) { return SetParser(text).parse(); }

// ---------------------------------------------------------------------------
// Queries

bool member(const SetExpr& s, const Nat& n)
{
    switch (s.kind()) {
    case SetExpr::Kind::Fin: return std::binary_search(s.elems().begin(), s.elems().end(), n);
    case SetExpr::Kind::CoFin: return !std::binary_search(s.elems().begin(), s.elems().end(), n);
    case SetExpr::Kind::Wedge: {
        auto [a, b] = decode_pair(n);
        return member(s.left(), a) && member(s.right(), b);
    }
    case SetExpr::Kind::Vee: {
        auto [t, x] = decode_pair(n);
        if (t == 0) return member(s.left(), x);
        if (t == 1) return member(s.right(), x);
        return false;
    }
    case SetExpr::Kind::Pred: return decide_predicate(s.pred_name(), n) != s.negated();
    }
    return false;
}

bool intersection_empty(const std::vector<SetExpr>& ss)
{
    if (ss.empty()) throw std::invalid_argument("intersection_empty: empty list");
    const SetExpr* finite = nullptr;
    for (const auto& s : ss) {
        if (s.kind() == SetExpr::Kind::Fin && (!finite || s.elems().size() < finite->elems().size()))
            finite = &s;
    }
    if (finite) {
        for (const auto& x : finite->elems()) {
            bool all = true;
            for (const auto& s : ss) {
                if (&s != finite && !member(s, x)) {
                    all = false;
                    break;
                }
            }
            if (all) return false;
        }
        return true;
    }
    for (const auto& s : ss)
        if (s.kind() != SetExpr::Kind::CoFin)
            throw std::invalid_argument("intersection_empty: " + s.to_string() +
                                        " is outside the finite/cofinite fragment; use enumerate");
    return false;
}

std::vector<Nat> enumerate(const SetExpr& s, std::uint64_t bound)
{
    std::vector<Nat> out;
    if (s.kind() == SetExpr::Kind::Fin) {
        for (const auto& x : s.elems())
            if (x < bound) out.push_back(x);
        return out;
    }
    for (std::uint64_t n = 0; n < bound; ++n)
        if (member(s, Nat(n))) out.emplace_back(n);
    return out;
}

std::optional<bool> disjoint(const SetExpr& a, const SetExpr& b)
{
    using K = SetExpr::Kind;
    auto fragment = [](const SetExpr& s) { return s.kind() == K::Fin || s.kind() == K::CoFin; };
    if (a.kind() == K::Fin || b.kind() == K::Fin || (fragment(a) && fragment(b)))
        return intersection_empty({a, b});
    if (a.kind() == K::Pred && b.kind() == K::Pred) {
        if (a.pred_name() == b.pred_name()) return a.negated() != b.negated();
        return std::nullopt;
    }
    return std::nullopt;
}

std::string describe(const Bounds& b)
{
    return fmt::format("enum={},fuel={},depth={}", b.enum_bound, b.fuel, b.depth);
}

Verdict arrow_check(const Code& e, const SetExpr& A, const SetExpr& B, const Bounds& bounds)
{
    auto fe = A.finite_elements();
    std::vector<Nat> domain = fe ? *fe : enumerate(A, bounds.enum_bound);
    AllOf all;
    for (const auto& a : domain) {
        AppResult r = apply(e, a, bounds.fuel);
        if (r.is_stuck()) return Verdict::refuted(fmt::format("a={}: e(a) stuck", a.str()));
        if (r.is_exhausted()) {
            all.add(Verdict::unknown(fmt::format("a={}: fuel exhausted", a.str())));
            continue;
        }
        if (!member(B, r.value))
            return Verdict::refuted(fmt::format("a={}: e(a)={} not in {}", a.str(), r.value.str(), B.to_string()));
    }
    if (!all.acc.passed()) return all.acc;
    if (fe) return Verdict::verified();
    return Verdict::upto(fmt::format("a<{},fuel={}", bounds.enum_bound, bounds.fuel));
}

} // namespace lotop

namespace lotop {

std::optional<SetExpr> complement(const SetExpr& s)
{
    switch (s.kind()) {
    case SetExpr::Kind::Fin: return SetExpr::cofin(s.elems());
    case SetExpr::Kind::CoFin: return SetExpr::fin(s.elems());
    case SetExpr::Kind::Pred: return SetExpr::pred(s.pred_name(), !s.negated());
    default: return std::nullopt;
    }
}

std::optional<bool> subset(const SetExpr& b, const SetExpr& a)
{
    auto na = complement(a);
    if (!na) return std::nullopt;
    if (b.kind() == SetExpr::Kind::Wedge || b.kind() == SetExpr::Kind::Vee) return std::nullopt;
    if (b.kind() == SetExpr::Kind::Pred && a.kind() == SetExpr::Kind::Pred && b.pred_name() == a.pred_name() &&
        b.negated() == a.negated())
        return true;
    try {
        return intersection_empty({b, *na});
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

} // namespace lotop
