#include "lotop/arith.hpp"

#include "lotop/tables.hpp"

#include <fmt/format.h>

#include <cctype>
#include <limits>
#include <mutex>
#include <random>

namespace lotop {

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Tok {
    enum class K { Num, Ident, Sym, End };
    K k;
    std::string text;
};

std::vector<Tok> tokenize(const std::string& src)
{
    static const std::vector<std::pair<std::string, std::string>> syms = {
        {"<=", "<="}, {"≤", "<="}, {"->", "->"}, {"=>", "->"}, {"⇒", "->"}, {"→", "->"}, {"∧", "&"}, {"∨", "|"},
        {"¬", "~"},   {"∀", "forall"}, {"∃", "exists"}, {"·", "*"}, {"(", "("}, {")", ")"}, {".", "."},
        {"=", "="},   {"<", "<"},   {"+", "+"},   {"*", "*"},   {"&", "&"},   {"|", "|"},   {"~", "~"},
    };
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::K::Num, src.substr(i, j - i)});
            i = j;
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            std::string w = src.substr(i, j - i);
            if (w == "forall" || w == "exists")
                out.push_back({Tok::K::Sym, w});
            else
                out.push_back({Tok::K::Ident, w});
            i = j;
            continue;
        }
        bool hit = false;
        for (const auto& [s, canon] : syms)
            if (src.compare(i, s.size(), s) == 0) {
                out.push_back({Tok::K::Sym, canon});
                i += s.size();
                hit = true;
                break;
            }
        if (!hit) throw ArithParseError(fmt::format("unexpected character at {}", i));
    }
    out.push_back({Tok::K::End, ""});
    return out;
}

TermRef mk_term(ArithTerm::Kind k, Nat num, std::string var, TermRef l, TermRef r)
{
    return std::make_shared<const ArithTerm>(ArithTerm{k, std::move(num), std::move(var), std::move(l), std::move(r)});
}

FormulaRef mk_formula(ArithFormula::Kind k, TermRef a, TermRef b, FormulaRef l, FormulaRef r, std::string var = {})
{
    return std::make_shared<const ArithFormula>(
        ArithFormula{k, std::move(a), std::move(b), std::move(l), std::move(r), std::move(var)});
}

class Parser {
public:
    explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

    FormulaRef top()
    {
        FormulaRef f = imp();
        if (peek().k != Tok::K::End) throw ArithParseError("trailing input near '" + peek().text + "'");
        return f;
    }

private:
    std::vector<Tok> toks_;
    std::size_t pos_ = 0;

    const Tok& peek() const { return toks_[pos_]; }
    bool is_sym(const char* s) const { return peek().k == Tok::K::Sym && peek().text == s; }
    bool eat(const char* s)
    {
        if (!is_sym(s)) return false;
        ++pos_;
        return true;
    }
    void expect(const char* s)
    {
        if (!eat(s)) throw ArithParseError(fmt::format("expected '{}' near '{}'", s, peek().text));
    }

    FormulaRef imp()
    {
        FormulaRef l = disj();
        if (eat("->")) return mk_formula(ArithFormula::Kind::Imp, nullptr, nullptr, l, imp());
        return l;
    }
    FormulaRef disj()
    {
        FormulaRef l = conj();
        while (eat("|")) l = mk_formula(ArithFormula::Kind::Or, nullptr, nullptr, l, conj());
        return l;
    }
    FormulaRef conj()
    {
        FormulaRef l = unary();
        while (eat("&")) l = mk_formula(ArithFormula::Kind::And, nullptr, nullptr, l, unary());
        return l;
    }
    FormulaRef unary()
    {
        if (eat("~")) return mk_formula(ArithFormula::Kind::Not, nullptr, nullptr, unary(), nullptr);
        if (is_sym("forall") || is_sym("exists")) {
            bool all = peek().text == "forall";
            ++pos_;
            if (peek().k != Tok::K::Ident) throw ArithParseError("expected a variable after quantifier");
            std::string v = peek().text;
            ++pos_;
            TermRef bound;
            if (eat("<")) bound = term();
            expect(".");
            FormulaRef body = imp();
            using K = ArithFormula::Kind;
            K k = bound ? (all ? K::BAll : K::BEx) : (all ? K::All : K::Ex);
            return mk_formula(k, nullptr, bound, body, nullptr, v);
        }
        if (is_sym("(")) {
            std::size_t save = pos_;
            ++pos_;
            try {
                FormulaRef f = imp();
                if (eat(")")) return f;
            } catch (const ArithParseError&) {
            }
            pos_ = save;
        }
        return atom();
    }
    FormulaRef atom()
    {
        TermRef a = term();
        using K = ArithFormula::Kind;
        K k;
        if (eat("="))
            k = K::Eq;
        else if (eat("<="))
            k = K::Le;
        else if (eat("<"))
            k = K::Lt;
        else
            throw ArithParseError("expected '=', '<' or '<=' near '" + peek().text + "'");
        return mk_formula(k, a, term(), nullptr, nullptr);
    }
    TermRef term()
    {
        TermRef l = product();
        while (eat("+")) l = mk_term(ArithTerm::Kind::Add, 0, {}, l, product());
        return l;
    }
    TermRef product()
    {
        TermRef l = primary();
        while (eat("*")) l = mk_term(ArithTerm::Kind::Mul, 0, {}, l, primary());
        return l;
    }
    TermRef primary()
    {
        const Tok& t = peek();
        if (t.k == Tok::K::Num) {
            ++pos_;
            return mk_term(ArithTerm::Kind::Num, Nat(t.text), {}, nullptr, nullptr);
        }
        if (t.k == Tok::K::Ident) {
            std::string name = t.text;
            ++pos_;
            if (name == "suc") {
                expect("(");
                TermRef a = term();
                expect(")");
                return mk_term(ArithTerm::Kind::Suc, 0, {}, a, nullptr);
            }
            return mk_term(ArithTerm::Kind::Var, 0, name, nullptr, nullptr);
        }
        if (eat("(")) {
            TermRef a = term();
            expect(")");
            return a;
        }
        throw ArithParseError("expected a term near '" + t.text + "'");
    }
};

} // namespace

FormulaRef parse_formula(const std::string& text) { return Parser(tokenize(text)).top(); }

std::string to_string(const TermRef& t)
{
    switch (t->kind) {
    case ArithTerm::Kind::Num: return t->num.str();
    case ArithTerm::Kind::Var: return t->var;
    case ArithTerm::Kind::Suc: return "suc(" + to_string(t->l) + ")";
    case ArithTerm::Kind::Add: return "(" + to_string(t->l) + " + " + to_string(t->r) + ")";
    case ArithTerm::Kind::Mul: return "(" + to_string(t->l) + " * " + to_string(t->r) + ")";
    }
    return {};
}

std::string to_string(const FormulaRef& f)
{
    using K = ArithFormula::Kind;
    switch (f->kind) {
    case K::Eq: return to_string(f->a) + " = " + to_string(f->b);
    case K::Lt: return to_string(f->a) + " < " + to_string(f->b);
    case K::Le: return to_string(f->a) + " <= " + to_string(f->b);
    case K::And: return "(" + to_string(f->l) + " & " + to_string(f->r) + ")";
    case K::Or: return "(" + to_string(f->l) + " | " + to_string(f->r) + ")";
    case K::Imp: return "(" + to_string(f->l) + " -> " + to_string(f->r) + ")";
    case K::Not: return "~" + to_string(f->l);
    case K::All: return "(forall " + f->var + ". " + to_string(f->l) + ")";
    case K::Ex: return "(exists " + f->var + ". " + to_string(f->l) + ")";
    case K::BAll: return "(forall " + f->var + " < " + to_string(f->b) + ". " + to_string(f->l) + ")";
    case K::BEx: return "(exists " + f->var + " < " + to_string(f->b) + ". " + to_string(f->l) + ")";
    }
    return {};
}

namespace {

void term_vars(const TermRef& t, std::set<std::string>& out)
{
    if (!t) return;
    if (t->kind == ArithTerm::Kind::Var) out.insert(t->var);
    term_vars(t->l, out);
    term_vars(t->r, out);
}

TermRef subst_term(const TermRef& t, const std::string& var, const Nat& v)
{
    if (!t) return t;
    if (t->kind == ArithTerm::Kind::Var) return t->var == var ? mk_term(ArithTerm::Kind::Num, v, {}, nullptr, nullptr) : t;
    if (t->kind == ArithTerm::Kind::Num) return t;
    return mk_term(t->kind, t->num, t->var, subst_term(t->l, var, v), subst_term(t->r, var, v));
}

bool is_quant(ArithFormula::Kind k)
{
    using K = ArithFormula::Kind;
    return k == K::All || k == K::Ex || k == K::BAll || k == K::BEx;
}

} // namespace

std::set<std::string> free_vars(const FormulaRef& f)
{
    std::set<std::string> out;
    if (!f) return out;
    term_vars(f->a, out);
    term_vars(f->b, out);
    for (const auto& v : free_vars(f->l)) out.insert(v);
    for (const auto& v : free_vars(f->r)) out.insert(v);
    if (is_quant(f->kind)) {
        // The bound term is outside the binder's scope.
        std::set<std::string> inner = free_vars(f->l);
        inner.erase(f->var);
        std::set<std::string> res;
        term_vars(f->b, res);
        res.insert(inner.begin(), inner.end());
        return res;
    }
    return out;
}

bool is_delta0(const FormulaRef& f)
{
    if (!f) return true;
    if (f->kind == ArithFormula::Kind::All || f->kind == ArithFormula::Kind::Ex) return false;
    return is_delta0(f->l) && is_delta0(f->r);
}

FormulaRef substitute(const FormulaRef& f, const std::string& var, const Nat& value)
{
    if (!f) return f;
    TermRef a = subst_term(f->a, var, value), b = subst_term(f->b, var, value);
    if (is_quant(f->kind) && f->var == var) return mk_formula(f->kind, a, b, f->l, f->r, f->var);
    return mk_formula(f->kind, a, b, substitute(f->l, var, value), substitute(f->r, var, value), f->var);
}

Nat eval_term(const TermRef& t, const Assignment& env)
{
    switch (t->kind) {
    case ArithTerm::Kind::Num: return t->num;
    case ArithTerm::Kind::Var: {
        auto it = env.find(t->var);
        if (it == env.end()) throw std::invalid_argument("unbound variable " + t->var);
        return it->second;
    }
    case ArithTerm::Kind::Suc: return eval_term(t->l, env) + 1;
    case ArithTerm::Kind::Add: return eval_term(t->l, env) + eval_term(t->r, env);
    case ArithTerm::Kind::Mul: return eval_term(t->l, env) * eval_term(t->r, env);
    }
    return 0;
}

bool holds_bounded(const FormulaRef& f, const Assignment& env, std::uint64_t bound)
{
    using K = ArithFormula::Kind;
    switch (f->kind) {
    case K::Eq: return eval_term(f->a, env) == eval_term(f->b, env);
    case K::Lt: return eval_term(f->a, env) < eval_term(f->b, env);
    case K::Le: return eval_term(f->a, env) <= eval_term(f->b, env);
    case K::And: return holds_bounded(f->l, env, bound) && holds_bounded(f->r, env, bound);
    case K::Or: return holds_bounded(f->l, env, bound) || holds_bounded(f->r, env, bound);
    case K::Imp: return !holds_bounded(f->l, env, bound) || holds_bounded(f->r, env, bound);
    case K::Not: return !holds_bounded(f->l, env, bound);
    default: break;
    }
    Nat top = (f->kind == K::BAll || f->kind == K::BEx) ? eval_term(f->b, env) : Nat(bound);
    bool all = f->kind == K::All || f->kind == K::BAll;
    Assignment e = env;
    for (Nat x = 0; x < top; ++x) {
        e[f->var] = x;
        bool h = holds_bounded(f->l, e, bound);
        if (all && !h) return false;
        if (!all && h) return true;
    }
    return all;
}

// ---------------------------------------------------------------------------
// theta-realizability

namespace {

struct Dedicated {
    enum class Status { Found, NoSight, Undecided };
    Status status = Status::Undecided;
    std::set<Nat> values;
    bool unique = false;
    std::string note;
};

// Follows z while every theta(n) met has at most one member; the sight is then forced.
// Returns nullopt when some theta(n) on the way offers a choice.
std::optional<Dedicated> forced_values(const Nat& z, const ThetaSeq& theta, std::size_t depth, std::uint64_t fuel)
{
    Dedicated d;
    d.unique = true;
    auto [tag, rest] = decode_pair(z);
    if (tag == 0) {
        d.status = Dedicated::Status::Found;
        d.values.insert(rest);
        return d;
    }
    if (tag != 1) {
        d.status = Dedicated::Status::NoSight;
        d.note = "tag is neither 0 nor 1";
        return d;
    }
    auto [n, e] = decode_pair(rest);
    Collection c = theta.at(n);
    if (!c.is_finite() || c.size() > 1) return std::nullopt;
    if (c.size() == 0) {
        d.status = Dedicated::Status::NoSight;
        d.note = fmt::format("theta({}) is empty", n.str());
        return d;
    }
    auto elems = c.members()[0].finite_elements();
    if (!elems) return std::nullopt;
    if (depth == 0) {
        d.note = "depth bound reached";
        return d;
    }
    const std::vector<Nat> xs = *elems;
    for (const auto& a : xs) {
        AppResult r = apply(e, a, fuel);
        if (r.is_stuck()) {
            d.status = Dedicated::Status::NoSight;
            d.note = "e stuck on a branch element";
            return d;
        }
        if (!r.is_defined()) {
            d.status = Dedicated::Status::Undecided;
            d.note = "fuel exhausted";
            return d;
        }
        auto sub = forced_values(r.value, theta, depth - 1, fuel);
        if (!sub) return std::nullopt;
        if (sub->status != Dedicated::Status::Found) return sub;
        d.values.insert(sub->values.begin(), sub->values.end());
    }
    d.status = Dedicated::Status::Found;
    return d;
}

Dedicated dedicated_values(const Nat& z, const ThetaSeq& theta, const SearchLimits& limits)
{
    if (auto f = forced_values(z, theta, limits.depth, limits.fuel)) return *f;
    Dedicated d;
    SearchResult s = search_dedicated(z, theta, SetExpr::naturals(), limits);
    if (!s.verdict.is_verified()) {
        d.note = "no dedicated sight found within limits";
        return d;
    }
    RImage img = r_image(z, *s.cert->sight, limits.fuel);
    d.status = Dedicated::Status::Found;
    d.values = img.values;
    return d;
}

Verdict realize(const Nat& n, const FormulaRef& f, const ThetaSeq& theta, const RealizeBounds& b);

// Some dedicated sight for z has all values realizing g.
Verdict values_realize(const Nat& z, const FormulaRef& g, const ThetaSeq& theta, const RealizeBounds& b)
{
    Dedicated d = dedicated_values(z, theta, b.search);
    if (d.status == Dedicated::Status::NoSight) return Verdict::refuted("no dedicated sight: " + d.note);
    if (d.status == Dedicated::Status::Undecided) return Verdict::unknown(d.note);
    AllOf all;
    for (const auto& m : d.values) {
        Verdict v = realize(m, g, theta, b);
        // With a forced sight a failing value is final; otherwise another sight may do.
        if (v.is_refuted() && !d.unique) v = Verdict::unknown("value fails on the sight found: " + v.note);
        all.add(v);
        if (all.refuted()) break;
    }
    return all.acc;
}

Verdict forall_instance(const Nat& n, const FormulaRef& body, const std::string& var, const Nat& x,
                        const ThetaSeq& theta, const RealizeBounds& b)
{
    FormulaRef inst = substitute(body, var, x);
    Dedicated d = dedicated_values(n, theta, b.search);
    if (d.status == Dedicated::Status::NoSight) return Verdict::refuted("no dedicated sight: " + d.note);
    if (d.status == Dedicated::Status::Undecided) return Verdict::unknown(d.note);
    AllOf all;
    for (const auto& m : d.values) {
        AppResult r = apply(m, x, b.search.fuel);
        Verdict v;
        if (r.is_stuck())
            v = Verdict::refuted(fmt::format("m({}) stuck", x.str()));
        else if (!r.is_defined())
            v = Verdict::unknown(fmt::format("m({}) out of fuel", x.str()));
        else
            v = values_realize(r.value, inst, theta, b);
        if (v.is_refuted() && !d.unique) v = Verdict::unknown("value fails on the sight found: " + v.note);
        if (v.is_refuted()) v.note = fmt::format("x = {}: {}", x.str(), v.note);
        all.add(v);
        if (all.refuted()) break;
    }
    return all.acc;
}

Verdict realize(const Nat& n, const FormulaRef& f, const ThetaSeq& theta, const RealizeBounds& b)
{
    using K = ArithFormula::Kind;
    const Assignment none;
    switch (f->kind) {
    case K::Eq: {
        Nat l = eval_term(f->a, none), r = eval_term(f->b, none);
        if (l == n && r == n) return Verdict::verified();
        return Verdict::refuted(fmt::format("{} = {} not realized by {}", l.str(), r.str(), n.str()));
    }
    case K::Lt:
    case K::Le: {
        bool t = holds_bounded(f, none, 0);
        if (t && n == 0) return Verdict::verified();
        return Verdict::refuted(t ? "order atom realized by 0 only" : "false order atom");
    }
    case K::And: {
        auto [a, c] = decode_pair(n);
        return conj(realize(a, f->l, theta, b), realize(c, f->r, theta, b));
    }
    case K::Or: {
        auto [g, m] = decode_pair(n);
        if (g == 0) return realize(m, f->l, theta, b);
        if (g == 1) return realize(m, f->r, theta, b);
        return Verdict::refuted("disjunction tag is neither 0 nor 1");
    }
    case K::Ex: {
        auto [x, m] = decode_pair(n);
        return realize(m, substitute(f->l, f->var, x), theta, b);
    }
    case K::BEx: {
        auto [x, m] = decode_pair(n);
        if (!(x < eval_term(f->b, none))) return Verdict::refuted("witness outside the bound");
        return realize(m, substitute(f->l, f->var, x), theta, b);
    }
    case K::Not:
    case K::Imp: {
        FormulaRef concl = f->kind == K::Imp ? f->r : parse_formula("0 = 1");
        // Candidates: every m < q, plus the canonical realizer of a Delta_0 antecedent.
        std::vector<Nat> cands;
        for (std::uint64_t m = 0; m < b.q; ++m) cands.emplace_back(m);
        if (is_delta0(f->l))
            if (auto k = kleene_realizer(f->l); k && *k >= b.q) cands.push_back(*k);
        AllOf all;
        bool undecided = false;
        for (const auto& m : cands) {
            if (all.refuted()) break;
            Verdict pm = realize(m, f->l, theta, b);
            if (pm.is_unknown()) undecided = true;
            if (!pm.passed()) continue;
            AppResult r = apply(n, m, b.search.fuel);
            Verdict v;
            if (r.is_stuck())
                v = Verdict::refuted(fmt::format("n({}) stuck", m.str()));
            else if (!r.is_defined())
                v = Verdict::unknown(fmt::format("n({}) out of fuel", m.str()));
            else
                v = values_realize(r.value, concl, theta, b);
            if (v.is_refuted()) v.note = fmt::format("antecedent realizer {}: {}", m.str(), v.note);
            all.add(v);
        }
        if (all.refuted()) return all.acc;
        if (undecided) return conj(all.acc, Verdict::unknown("some antecedent candidates undecided"));
        return conj(all.acc, Verdict::upto(fmt::format("antecedent realizers < {}", b.q)));
    }
    case K::All:
    case K::BAll: {
        bool bounded = f->kind == K::BAll;
        Nat top = bounded ? eval_term(f->b, none) : Nat(b.q);
        AllOf all;
        for (Nat x = 0; x < top && !all.refuted(); ++x) all.add(forall_instance(n, f->l, f->var, x, theta, b));
        if (bounded || all.refuted()) return all.acc;
        return conj(all.acc, Verdict::upto(fmt::format("x < {}", b.q)));
    }
    }
    return Verdict::unknown("unhandled formula");
}

} // namespace

Verdict theta_realizes(const Nat& n, const FormulaRef& f, const ThetaSeq& theta, const RealizeBounds& bounds)
{
    if (!free_vars(f).empty()) throw std::invalid_argument("theta_realizes: formula is not closed");
    return realize(n, f, theta, bounds);
}

std::optional<Nat> kleene_realizer(const FormulaRef& f)
{
    if (!is_delta0(f)) throw std::invalid_argument("kleene_realizer: formula is not Delta_0");
    if (!free_vars(f).empty()) throw std::invalid_argument("kleene_realizer: formula is not closed");
    using K = ArithFormula::Kind;
    const Assignment none;
    switch (f->kind) {
    case K::Eq: {
        Nat l = eval_term(f->a, none);
        if (l != eval_term(f->b, none)) return std::nullopt;
        return l;
    }
    case K::Lt:
    case K::Le:
        if (!holds_bounded(f, none, 0)) return std::nullopt;
        return Nat(0);
    case K::And: {
        auto a = kleene_realizer(f->l), c = kleene_realizer(f->r);
        if (!a || !c) return std::nullopt;
        return encode_pair(*a, *c);
    }
    case K::Or:
        if (auto a = kleene_realizer(f->l)) return encode_pair(0, *a);
        if (auto c = kleene_realizer(f->r)) return encode_pair(1, *c);
        return std::nullopt;
    case K::Not:
        if (kleene_realizer(f->l)) return std::nullopt;
        return Nat(0);
    case K::Imp: {
        if (!kleene_realizer(f->l)) return Nat(0);
        auto c = kleene_realizer(f->r);
        if (!c) return std::nullopt;
        return codes::constant(encode_pair(0, *c));
    }
    case K::BEx: {
        Nat top = eval_term(f->b, none);
        for (Nat x = 0; x < top; ++x)
            if (auto m = kleene_realizer(substitute(f->l, f->var, x))) return encode_pair(x, *m);
        return std::nullopt;
    }
    case K::BAll: {
        Nat top = eval_term(f->b, none);
        std::map<Nat, Nat> tab;
        for (Nat x = 0; x < top; ++x) {
            auto m = kleene_realizer(substitute(f->l, f->var, x));
            if (!m) return std::nullopt;
            tab[x] = encode_pair(0, *m);
        }
        return encode_pair(0, table_code(tab));
    }
    default: break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The Pi_k pipeline

namespace {

// Length first, then lexicographic.
struct LenLex {
    bool operator()(const Seq& a, const Seq& b) const
    {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

struct LeafState {
    bool valid = true;
    std::set<Seq, LenLex> leaves;
};

} // namespace

struct ArithCache {
    std::mutex mu;
    std::map<std::pair<Nat, Seq>, bool> tail;
    std::map<std::pair<Nat, Seq>, Nat> bn;
    std::map<std::pair<Nat, Seq>, std::shared_ptr<const LeafState>> states;
};

PiKSpec make_spec(std::size_t k, const std::string& phi, std::uint64_t truth_bound, bool bound_exact,
                  const std::string& predicate)
{
    if (k < 1) throw std::invalid_argument("make_spec: k must be at least 1");
    PiKSpec s;
    s.k = k;
    s.phi = parse_formula(phi);
    if (!is_delta0(s.phi)) throw std::invalid_argument("make_spec: phi must be Delta_0");
    std::set<std::string> allowed{"n"};
    for (std::size_t i = 1; i <= k; ++i) allowed.insert(fmt::format("x{}", i));
    for (const auto& v : free_vars(s.phi))
        if (!allowed.count(v)) throw std::invalid_argument("make_spec: unexpected free variable " + v);
    s.truth_bound = truth_bound;
    s.bound_exact = bound_exact;
    if (!predicate.empty()) {
        ensure_standard_predicates();
        if (!predicate_registered(predicate)) throw std::invalid_argument("unregistered predicate: " + predicate);
    }
    s.predicate = predicate;
    s.cache = std::make_shared<ArithCache>();
    return s;
}

PiKSpec evens_spec()
{
    // For x1 >= 3 the witness x2 = n/2 stays below 30 when n < 60.
    return make_spec(2, "x1 < 3 | x2 + x2 = n", 30, true, "evens");
}

namespace {

ArithCache& cache_of(const PiKSpec& spec)
{
    if (!spec.cache) throw std::invalid_argument("PiKSpec without cache; build it with make_spec");
    return *spec.cache;
}

} // namespace

bool tail_true(const PiKSpec& spec, const Nat& n, const Seq& d)
{
    ArithCache& c = cache_of(spec);
    auto key = std::make_pair(n, d);
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.tail.find(key);
        if (it != c.tail.end()) return it->second;
    }
    bool result;
    std::size_t q = d.size();
    if (q >= spec.k) {
        Assignment env{{"n", n}};
        for (std::size_t i = 0; i < spec.k; ++i) env[fmt::format("x{}", i + 1)] = d[i];
        result = holds_bounded(spec.phi, env, spec.truth_bound);
    } else {
        bool all = q % 2 == 0;
        result = all;
        Seq e = d;
        e.push_back(0);
        for (std::uint64_t y = 0; y < spec.truth_bound; ++y) {
            e.back() = y;
            bool h = tail_true(spec, n, e);
            if (all && !h) {
                result = false;
                break;
            }
            if (!all && h) {
                result = true;
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(c.mu);
    c.tail[key] = result;
    return result;
}

bool bounded_member(const PiKSpec& spec, const Nat& n) { return tail_true(spec, n, {}); }

Nat bn_value(const PiKSpec& spec, const Nat& n, const Seq& d)
{
    std::size_t q = d.size();
    if (q >= spec.k) throw std::invalid_argument("bn_value: need |d| < k");
    ArithCache& c = cache_of(spec);
    auto key = std::make_pair(n, d);
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.bn.find(key);
        if (it != c.bn.end()) return it->second;
    }
    bool t = tail_true(spec, n, d);
    Nat result = 0;
    // Odd q: least witness when true. Even q: least counterexample when false.
    bool search = (q % 2 == 1) ? t : !t;
    if (search) {
        bool want = q % 2 == 1;
        Seq e = d;
        e.push_back(0);
        for (std::uint64_t y = 0; y < spec.truth_bound; ++y) {
            e.back() = y;
            if (tail_true(spec, n, e) == want) {
                result = y;
                break;
            }
        }
    }
    std::lock_guard<std::mutex> lock(c.mu);
    c.bn[key] = result;
    return result;
}

Seq least_leaf(const WfTree& t)
{
    std::optional<Seq> best;
    for (auto it = t.begin(); it != t.end(); ++it) {
        auto nx = std::next(it);
        bool leaf = nx == t.end() || nx->size() <= it->size() || !std::equal(it->begin(), it->end(), nx->begin());
        if (leaf && (!best || LenLex{}(*it, *best))) best = *it;
    }
    if (!best) throw std::invalid_argument("least_leaf: empty tree");
    return *best;
}

namespace {

constexpr std::uint64_t kMaxBranch = 1000000;

std::uint64_t small(const Nat& c)
{
    auto v = to_u64(c);
    if (!v || *v >= kMaxBranch) throw std::invalid_argument("branch value too large to materialize");
    return *v;
}

} // namespace

StageTree stage_tree(const Seq& s)
{
    StageTree st;
    st.tree.insert(Seq{});
    std::set<Seq, LenLex> leaves{Seq{}};
    for (const auto& c : s) {
        Seq l = *leaves.begin();
        leaves.erase(leaves.begin());
        st.expanded.push_back(l);
        std::uint64_t top = small(c);
        for (std::uint64_t x = 0; x <= top; ++x) {
            Seq ch = l;
            ch.emplace_back(x);
            st.tree.insert(ch);
            leaves.insert(ch);
        }
    }
    st.lleaf = *leaves.begin();
    st.stage = st.lleaf.size();
    return st;
}

namespace {

std::shared_ptr<const LeafState> leaf_state(const PiKSpec& spec, const Nat& n, const Seq& s)
{
    if (s.empty()) {
        auto st = std::make_shared<LeafState>();
        st->leaves.insert(Seq{});
        return st;
    }
    ArithCache& c = cache_of(spec);
    auto key = std::make_pair(n, s);
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.states.find(key);
        if (it != c.states.end()) return it->second;
    }
    Seq parent(s.begin(), s.end() - 1);
    auto p = leaf_state(spec, n, parent);
    auto st = std::make_shared<LeafState>();
    const Seq& l = *p->leaves.begin();
    if (!p->valid || l.size() >= spec.k || s.back() < bn_value(spec, n, l)) {
        st->valid = false;
    } else {
        st->leaves = p->leaves;
        st->leaves.erase(st->leaves.begin());
        std::uint64_t top = small(s.back());
        for (std::uint64_t x = 0; x <= top; ++x) {
            Seq ch = l;
            ch.emplace_back(x);
            st->leaves.insert(ch);
        }
    }
    std::lock_guard<std::mutex> lock(c.mu);
    if (c.states.size() > 512) c.states.clear();
    c.states[key] = st;
    return st;
}

} // namespace

NodeStatus sn_status(const PiKSpec& spec, const Nat& n, const Seq& s)
{
    Seq lleaf;
    if (s.empty()) {
        lleaf = {};
    } else {
        Seq parent(s.begin(), s.end() - 1);
        auto p = leaf_state(spec, n, parent);
        if (!p->valid) return NodeStatus::not_node();
        const Seq& l = *p->leaves.begin();
        if (l.size() >= spec.k || s.back() < bn_value(spec, n, l)) return NodeStatus::not_node();
        // The least leaf after expanding l: l:0, unless the runner-up beats it.
        Seq first = l;
        first.emplace_back(0);
        lleaf = first;
        if (p->leaves.size() > 1) {
            const Seq& second = *std::next(p->leaves.begin());
            if (LenLex{}(second, first)) lleaf = second;
        }
    }
    if (lleaf.size() >= spec.k) return NodeStatus::leaf();
    auto b = to_u64(bn_value(spec, n, lleaf));
    return NodeStatus::inner(SetExpr::up_from(*b));
}

ImplicitTree sn_tree(const PiKSpec& spec, const Nat& n, std::uint64_t child_bound)
{
    // Each expansion of a level-m leaf adds at most child_bound leaves at level m+1.
    std::size_t depth = 0;
    std::size_t level = 1;
    for (std::size_t m = 0; m < spec.k; ++m) {
        depth += level;
        if (level > (1u << 30) / std::max<std::uint64_t>(child_bound, 1)) {
            depth = std::numeric_limits<std::size_t>::max() / 2;
            break;
        }
        level *= child_bound;
    }
    ImplicitTree t;
    t.status = [spec, n](const Seq& s) { return sn_status(spec, n, s); };
    t.depth_bound = depth;
    t.descriptor = fmt::format("S_{} for {}", n.str(), to_string(spec.phi));
    return t;
}

Nat c_value(const Seq& s, const Seq& t)
{
    StageTree st = stage_tree(s);
    for (std::size_t r = 0; r < st.expanded.size(); ++r)
        if (st.expanded[r] == t) return s[r];
    throw std::invalid_argument("c_value: t was never expanded in T_s");
}

namespace {

bool tau_rec(const PiKSpec& spec, const Nat& n, const std::map<Seq, Nat>& cmap, const Seq& t)
{
    std::size_t q = t.size();
    if (q >= spec.k) return tail_true(spec, n, t);
    auto it = cmap.find(t);
    if (it == cmap.end()) throw std::invalid_argument("tau: node below stage k was not expanded");
    bool all = q % 2 == 0;
    Seq e = t;
    e.push_back(0);
    std::uint64_t top = small(it->second);
    for (std::uint64_t y = 0; y <= top; ++y) {
        e.back() = y;
        bool h = tau_rec(spec, n, cmap, e);
        if (all && !h) return false;
        if (!all && h) return true;
    }
    return all;
}

std::map<Seq, Nat> cmap_of(const Seq& s)
{
    StageTree st = stage_tree(s);
    std::map<Seq, Nat> cmap;
    for (std::size_t r = 0; r < st.expanded.size(); ++r) cmap.emplace(st.expanded[r], s[r]);
    return cmap;
}

} // namespace

bool tau(const PiKSpec& spec, const Nat& n, const Seq& s, const Seq& t)
{
    return tau_rec(spec, n, cmap_of(s), t);
}

std::vector<Seq> sample_sn_leaves(const PiKSpec& spec, const Nat& n, std::uint64_t child_bound, std::size_t walks,
                                  std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Seq> out;
    for (std::size_t w = 0; w <= walks; ++w) {
        Seq s;
        for (;;) {
            NodeStatus st = sn_status(spec, n, s);
            if (st.kind == NodeStatus::Kind::Leaf) break;
            if (st.kind == NodeStatus::Kind::NotNode) throw std::logic_error("sample_sn_leaves: left S_n");
            std::uint64_t b = st.out->elems().size();  // out-set is up_from(b)
            std::uint64_t x = b;
            // Walk 0 takes the least child throughout.
            if (w > 0 && child_bound > b) x = b + std::uniform_int_distribution<std::uint64_t>(0, child_bound - b - 1)(rng);
            s.emplace_back(x);
        }
        out.push_back(std::move(s));
    }
    return out;
}

PartialSeqFn epsilon(const PiKSpec& spec, const Nat& n)
{
    std::string name = fmt::format("eps:{}:{}:{}:{}", spec.k, spec.truth_bound, to_string(spec.phi), n.str());
    return PartialSeqFn::native(name, [spec, n](const Seq& s, Meter& meter) -> AppResult {
        if (!meter.spend()) return AppResult::exhausted();
        NodeStatus st = sn_status(spec, n, s);
        switch (st.kind) {
        case NodeStatus::Kind::NotNode: return AppResult::stuck();
        case NodeStatus::Kind::Inner: return AppResult::defined(encode_pair(1, 0));
        case NodeStatus::Kind::Leaf: return AppResult::defined(encode_pair(0, tau(spec, n, s, {}) ? 0 : 1));
        }
        return AppResult::stuck();
    });
}

EpsilonReport epsilon_report(const PiKSpec& spec, const Nat& n, const SupportBounds& bounds, std::size_t leaf_walks)
{
    EpsilonReport r;
    r.n = n;
    r.member = bounded_member(spec, n);
    ThetaSeq fstar = ThetaSeq::constant(cofinites());
    r.support = check_supporting(sn_tree(spec, n, bounds.child_bound), epsilon(spec, n), fstar,
                                 SetExpr::fin({rho_chi(r.member)}), bounds);

    auto leaves = sample_sn_leaves(spec, n, bounds.child_bound, leaf_walks, bounds.seed);
    r.leaves_sampled = leaves.size();
    AllOf root, ceil;
    for (const auto& s : leaves) {
        if (tau(spec, n, s, {}) != r.member)
            root.add(Verdict::refuted(fmt::format("tau root differs at leaf of length {}", s.size())));
        StageTree st = stage_tree(s);
        for (std::size_t i = 0; i < st.expanded.size(); ++i)
            if (s[i] < bn_value(spec, n, st.expanded[i]))
                ceil.add(Verdict::refuted(fmt::format("c below b_n at step {}", i)));
    }
    std::string sampled = fmt::format("{} sampled leaves", leaves.size());
    r.tau_root = root.refuted() ? root.acc : Verdict::upto(sampled);
    r.ceiling = ceil.refuted() ? ceil.acc : Verdict::upto(sampled);

    AllOf all;
    all.add(r.support.verdict);
    all.add(r.tau_root);
    all.add(r.ceiling);
    if (!spec.predicate.empty() && decide_predicate(spec.predicate, n) != r.member)
        all.add(Verdict::refuted("bounded truth disagrees with " + spec.predicate));
    r.overall = all.acc;
    if (!spec.bound_exact && r.overall.passed())
        r.overall = Verdict::upto(fmt::format("BoundedTruth below {}; {}", spec.truth_bound, r.overall.note));
    return r;
}

} // namespace lotop
