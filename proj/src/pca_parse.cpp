#include "lotop/pca.hpp"

#include <cctype>
#include <cstring>

namespace lotop {

// Grammar
//   expr  := ('λ' | '\') binder+ '.' expr
//          | 'let' ident '=' expr 'in' expr
//          | app
//   app   := post+ [lambda-or-let]
//   post  := atom ('_1' | '_2')*
//   atom  := numeral | ident | '$'ident | '(' expr ')'
//          | ('⟨' | '<') expr (',' expr)* ('⟩' | '>')
//          | 'ifz' | 'suc' | 'pred' | 'fix'
// Tuples nest to the right. Free identifiers resolve through the code environment.

namespace {

enum class Tok { Lambda, Dot, LParen, RParen, LAngle, RAngle, Comma, Proj1, Proj2, Eq, Ident, Num, Dollar, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

std::vector<Token> lex(const std::string& s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto starts = [&](const char* lit) { return s.compare(i, std::strlen(lit), lit) == 0; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t at = i;
        if (starts("\xCE\xBB")) {  // λ
            out.push_back({Tok::Lambda, "", at});
            i += 2;
        } else if (starts("\xE2\x9F\xA8")) {  // ⟨
            out.push_back({Tok::LAngle, "", at});
            i += 3;
        } else if (starts("\xE2\x9F\xA9")) {  // ⟩
            out.push_back({Tok::RAngle, "", at});
            i += 3;
        } else if (c == '\\') {
            out.push_back({Tok::Lambda, "", at});
            ++i;
        } else if (c == '.') {
            out.push_back({Tok::Dot, "", at});
            ++i;
        } else if (c == '(') {
            out.push_back({Tok::LParen, "", at});
            ++i;
        } else if (c == ')') {
            out.push_back({Tok::RParen, "", at});
            ++i;
        } else if (c == '<') {
            out.push_back({Tok::LAngle, "", at});
            ++i;
        } else if (c == '>') {
            out.push_back({Tok::RAngle, "", at});
            ++i;
        } else if (c == ',') {
            out.push_back({Tok::Comma, "", at});
            ++i;
        } else if (c == '=') {
            out.push_back({Tok::Eq, "", at});
            ++i;
        } else if (c == '_' && i + 1 < s.size() && (s[i + 1] == '1' || s[i + 1] == '2') &&
                   (i + 2 >= s.size() || !ident_char(s[i + 2]))) {
            out.push_back({s[i + 1] == '1' ? Tok::Proj1 : Tok::Proj2, "", at});
            i += 2;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Num, s.substr(i, j - i), at});
            i = j;
        } else if (c == '$') {
            std::size_t j = i + 1;
            while (j < s.size() && (ident_char(s[j]) || s[j] == '_' || s[j] == ':' || s[j] == '-')) ++j;
            if (j == i + 1) throw ParseError("expected builtin name after '$' at " + std::to_string(at));
            out.push_back({Tok::Dollar, s.substr(i + 1, j - i - 1), at});
            i = j;
        } else if (ident_start(c)) {
            std::size_t j = i;
            if (c == '_') ++j;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), at});
            i = j;
        } else {
            throw ParseError("unexpected character at " + std::to_string(at));
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const CodeEnv& env) : toks_(std::move(toks)), env_(env) {}

    TermPtr parse()
    {
        TermPtr t = expr();
        if (peek().kind != Tok::End) fail("trailing input");
        return t;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(msg + " at " + std::to_string(peek().pos));
    }
    void expect(Tok k, const char* what)
    {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++pos_;
    }
    bool is_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    TermPtr expr()
    {
        if (peek().kind == Tok::Lambda) {
            ++pos_;
            std::vector<std::string> names;
            while (peek().kind == Tok::Ident) names.push_back(next().text);
            if (names.empty()) fail("expected binder");
            expect(Tok::Dot, "'.'");
            for (auto& n : names) scope_.push_back(n);
            TermPtr body = expr();
            for (std::size_t i = 0; i < names.size(); ++i) {
                scope_.pop_back();
                body = Term::lam(body);
            }
            return body;
        }
        if (is_kw("let")) {
            ++pos_;
            if (peek().kind != Tok::Ident) fail("expected identifier after let");
            std::string name = next().text;
            expect(Tok::Eq, "'='");
            TermPtr bound = expr();
            if (!is_kw("in")) fail("expected 'in'");
            ++pos_;
            scope_.push_back(name);
            TermPtr body = expr();
            scope_.pop_back();
            return Term::app(Term::lam(body), bound);
        }
        TermPtr f = post();
        for (;;) {
            Tok k = peek().kind;
            if (k == Tok::Lambda || is_kw("let")) return Term::app(f, expr());
            if (k == Tok::Num || k == Tok::Dollar || k == Tok::LParen || k == Tok::LAngle ||
                (k == Tok::Ident && !is_kw("in"))) {
                f = Term::app(f, post());
                continue;
            }
            return f;
        }
    }

    TermPtr post()
    {
        TermPtr t = atom();
        for (;;) {
            if (peek().kind == Tok::Proj1) {
                ++pos_;
                t = Term::app(Term::prim(Op::Fst), t);
            } else if (peek().kind == Tok::Proj2) {
                ++pos_;
                t = Term::app(Term::prim(Op::Snd), t);
            } else {
                return t;
            }
        }
    }

    TermPtr atom()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Num: {
            ++pos_;
            return Term::numeral(Nat(t.text));
        }
        case Tok::Dollar: {
            std::string name = t.text;
            ++pos_;
            return Term::builtin(name);
        }
        case Tok::LParen: {
            ++pos_;
            TermPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::LAngle: {
            ++pos_;
            std::vector<TermPtr> parts{expr()};
            while (peek().kind == Tok::Comma) {
                ++pos_;
                parts.push_back(expr());
            }
            expect(Tok::RAngle, "'>'");
            if (parts.size() < 2) fail("tuple needs at least two components");
            TermPtr acc = parts.back();
            for (std::size_t i = parts.size() - 1; i-- > 0;)
                acc = Term::app(Term::app(Term::prim(Op::Pair), parts[i]), acc);
            return acc;
        }
        case Tok::Ident: {
            std::string name = t.text;
            if (name == "ifz") return ++pos_, Term::prim(Op::Ifz);
            if (name == "suc") return ++pos_, Term::prim(Op::Succ);
            if (name == "pred") return ++pos_, Term::prim(Op::Pred);
            if (name == "fix") return ++pos_, Term::prim(Op::Fix);
            if (name == "let" || name == "in") fail("unexpected keyword");
            ++pos_;
            for (std::size_t i = scope_.size(); i-- > 0;)
                if (scope_[i] == name) return Term::var(scope_.size() - 1 - i);
            auto it = env_.find(name);
            if (it != env_.end()) return Term::numeral(it->second);
            throw ParseError("unbound variable '" + name + "' at " + std::to_string(t.pos));
        }
        default: fail("unexpected token");
        }
    }

    std::vector<Token> toks_;
    const CodeEnv& env_;
    std::size_t pos_ = 0;
    std::vector<std::string> scope_;
};

} // namespace

TermPtr parse_term(const std::string& src, const CodeEnv& env)
{
    return Parser(lex(src), env).parse();
}

Code compile(const std::string& src, const CodeEnv& env) { return encode_term(parse_term(src, env)); }

namespace codes {

const Code& id()
{
    static const Code c = compile("\\x. x");
    return c;
}
const Code& suc()
{
    static const Code c = compile("\\x. suc x");
    return c;
}
const Code& pred()
{
    static const Code c = compile("\\x. pred x");
    return c;
}
const Code& inl()
{
    static const Code c = compile("\\x. <0, x>");
    return c;
}
const Code& inr()
{
    static const Code c = compile("\\x. <1, x>");
    return c;
}
const Code& proj1()
{
    static const Code c = compile("\\x. x_1");
    return c;
}
const Code& proj2()
{
    static const Code c = compile("\\x. x_2");
    return c;
}
Code constant(const Nat& k) { return compile("\\x. k", {{"k", k}}); }
Code cases(const Code& f, const Code& g)
{
    return compile("\\x. ifz x_1 (f x_2) (g x_2)", {{"f", f}, {"g", g}});
}
Code compose(const Code& f, const Code& g) { return compile("\\x. f (g x)", {{"f", f}, {"g", g}}); }
const Code& empty_seq()
{
    static const Code c = encode_seq({});
    return c;
}

} // namespace codes

} // namespace lotop
