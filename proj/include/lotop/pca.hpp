#ifndef LOTOP_PCA_HPP
#define LOTOP_PCA_HPP

#include "lotop/nat.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lotop {

// A realizer: the code of a closed machine term.
using Code = Nat;

enum class Op : std::uint8_t {
    Num,
    Var,
    Lam,
    App,
    Builtin,
    Pair,
    Fst,
    Snd,
    Succ,
    Pred,
    Ifz,
    Fix,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    Op op;
    Nat num;            // Num
    std::size_t index;  // Var (de Bruijn)
    std::string name;   // Builtin
    TermPtr a, b;       // Lam body in a; App fn in a, arg in b
    std::size_t free;   // 1 + largest free de Bruijn index, 0 if closed

    static TermPtr numeral(Nat n);
    static TermPtr var(std::size_t i);
    static TermPtr lam(TermPtr body);
    static TermPtr app(TermPtr f, TermPtr x);
    static TermPtr builtin(std::string name);
    static TermPtr prim(Op op);
};

bool term_equal(const TermPtr& x, const TermPtr& y);
std::string term_to_string(const TermPtr& t);

// Gödel numbering. Every closed term has a code; every natural decodes to a
// closed term or to nullopt (the Stuck marker).
Code encode_term(const TermPtr& t);
std::optional<TermPtr> decode_term(const Code& c);

struct AppResult {
    enum class Kind { Defined, FuelExhausted, Stuck };
    Kind kind = Kind::Stuck;
    Nat value;

    static AppResult defined(Nat v) { return {Kind::Defined, std::move(v)}; }
    static AppResult exhausted() { return {Kind::FuelExhausted, 0}; }
    static AppResult stuck() { return {Kind::Stuck, 0}; }
    bool is_defined() const { return kind == Kind::Defined; }
    bool is_exhausted() const { return kind == Kind::FuelExhausted; }
    bool is_stuck() const { return kind == Kind::Stuck; }
    bool operator==(const AppResult& o) const { return kind == o.kind && value == o.value; }
};

std::string to_string(const AppResult& r);

// Step budget shared by nested evaluations.
struct Meter {
    std::uint64_t remaining;
    explicit Meter(std::uint64_t fuel) : remaining(fuel) {}
    bool spend(std::uint64_t k = 1)
    {
        if (remaining < k) {
            remaining = 0;
            return false;
        }
        remaining -= k;
        return true;
    }
};

// e(n) with an explicit budget.
AppResult apply(const Code& e, const Nat& n, std::uint64_t fuel);
AppResult apply(const Code& e, const Nat& n, Meter& meter);
// e(x1)(x2)... evaluated as one curried application.
AppResult apply_n(const Code& e, const std::vector<Nat>& args, std::uint64_t fuel);
AppResult apply_n(const Code& e, const std::vector<Nat>& args, Meter& meter);
// Evaluates a closed term to a numeral.
AppResult run_term(const TermPtr& t, Meter& meter);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Free identifiers of the source are looked up in env and become numerals.
using CodeEnv = std::map<std::string, Nat>;
TermPtr parse_term(const std::string& src, const CodeEnv& env = {});
Code compile(const std::string& src, const CodeEnv& env = {});

// c with c x ~ g c x, via the self-quoting fixpoint primitive.
Code fixpoint_code(const Code& generator);

// Code of the application term "c a" (partial application).
Code smn(const Code& c, const Nat& a);
Code smn(const Code& c, const std::vector<Nat>& args);

using PlainRoutine = std::function<std::optional<Nat>(const Nat&)>;
using MeteredRoutine = std::function<AppResult(const Nat&, Meter&)>;

struct BuiltinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// identity distinguishes routines registered under the same name.
Code register_builtin(const std::string& name, std::optional<Nat> (*routine)(const Nat&));
Code register_builtin(const std::string& name, PlainRoutine routine, const std::string& identity);
Code register_metered_builtin(const std::string& name, MeteredRoutine routine,
                              const std::string& identity);
bool builtin_registered(const std::string& name);
std::optional<Code> builtin_code(const std::string& name);
// Direct host call of a registered routine, no machine involved.
AppResult call_builtin(const std::string& name, const Nat& arg, Meter& meter);

// Library of small realizers used across the project.
namespace codes {
const Code& id();
const Code& suc();
const Code& pred();
const Code& inl();    // x -> <0,x>
const Code& inr();    // x -> <1,x>
const Code& proj1();  // <a,b> -> a
const Code& proj2();  // <a,b> -> b
Code constant(const Nat& k);
// Case split on the tag: <0,x> -> f x, <1,x> -> g x.
Code cases(const Code& f, const Code& g);
Code compose(const Code& f, const Code& g);  // x -> f (g x)
const Code& empty_seq();
} // namespace codes

} // namespace lotop

#endif
