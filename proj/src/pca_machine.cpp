#include "lotop/pca.hpp"

#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace lotop {

std::string to_string(const AppResult& r)
{
    switch (r.kind) {
    case AppResult::Kind::Defined: return "Defined(" + r.value.str() + ")";
    case AppResult::Kind::FuelExhausted: return "FuelExhausted";
    case AppResult::Kind::Stuck: return "Stuck";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Builtin registry

namespace {

struct Entry {
    std::string identity;
    MeteredRoutine routine;
};

struct Registry {
    std::shared_mutex mu;
    std::unordered_map<std::string, Entry> entries;
};

Registry& registry()
{
    static Registry r;
    return r;
}

void install_stdlib();

void ensure_stdlib()
{
    static std::once_flag once;
    std::call_once(once, install_stdlib);
}

Code add_entry(const std::string& name, MeteredRoutine routine, const std::string& identity)
{
    if (name.empty()) throw BuiltinError("builtin name must be nonempty");
    if (name[0] == '\0') throw BuiltinError("builtin name must not start with NUL");
    auto& reg = registry();
    {
        std::unique_lock lock(reg.mu);
        auto it = reg.entries.find(name);
        if (it != reg.entries.end()) {
            if (it->second.identity != identity)
                throw BuiltinError("builtin name collision: " + name);
        } else {
            reg.entries.emplace(name, Entry{identity, std::move(routine)});
        }
    }
    return encode_term(Term::builtin(name));
}

MeteredRoutine lift(PlainRoutine f)
{
    return [f = std::move(f)](const Nat& n, Meter&) -> AppResult {
        auto r = f(n);
        if (r) return AppResult::defined(std::move(*r));
        return AppResult::stuck();
    };
}

} // namespace

Code register_builtin(const std::string& name, std::optional<Nat> (*routine)(const Nat&))
{
    ensure_stdlib();
    auto identity = "fnptr:" + std::to_string(reinterpret_cast<std::uintptr_t>(routine));
    return add_entry(name, lift(routine), identity);
}

Code register_builtin(const std::string& name, PlainRoutine routine, const std::string& identity)
{
    ensure_stdlib();
    return add_entry(name, lift(std::move(routine)), identity);
}

Code register_metered_builtin(const std::string& name, MeteredRoutine routine,
                              const std::string& identity)
{
    ensure_stdlib();
    return add_entry(name, std::move(routine), identity);
}

bool builtin_registered(const std::string& name)
{
    ensure_stdlib();
    auto& reg = registry();
    std::shared_lock lock(reg.mu);
    return reg.entries.count(name) != 0;
}

std::optional<Code> builtin_code(const std::string& name)
{
    if (!builtin_registered(name)) return std::nullopt;
    return encode_term(Term::builtin(name));
}

namespace {

const MeteredRoutine* find_routine(const std::string& name)
{
    auto& reg = registry();
    std::shared_lock lock(reg.mu);
    auto it = reg.entries.find(name);
    if (it == reg.entries.end()) return nullptr;
    // Entries are never erased, so the pointer stays valid.
    return &it->second.routine;
}

} // namespace

AppResult call_builtin(const std::string& name, const Nat& arg, Meter& meter)
{
    ensure_stdlib();
    auto* r = find_routine(name);
    if (!r) return AppResult::stuck();
    return (*r)(arg, meter);
}

// ---------------------------------------------------------------------------
// Machine

namespace {

struct Thunk;
using ThunkPtr = std::shared_ptr<Thunk>;
struct EnvNode;
using EnvPtr = std::shared_ptr<const EnvNode>;

struct Thunk {
    TermPtr term;
    EnvPtr env;
    bool evaluated = false;
    Nat value;
};

struct EnvNode {
    ThunkPtr head;
    EnvPtr tail;
};

const ThunkPtr& env_at(const EnvPtr& env, std::size_t i)
{
    const EnvNode* e = env.get();
    while (i-- > 0) e = e->tail.get();
    return e->head;
}

ThunkPtr value_thunk(Nat n)
{
    auto t = std::make_shared<Thunk>();
    t->evaluated = true;
    t->value = std::move(n);
    return t;
}

TermPtr readback(const ThunkPtr& th);

TermPtr readback_term(const TermPtr& t, const EnvPtr& env, std::size_t depth)
{
    if (t->free <= depth) return t;
    switch (t->op) {
    case Op::Var: return readback(env_at(env, t->index - depth));
    case Op::Lam: return Term::lam(readback_term(t->a, env, depth + 1));
    case Op::App: return Term::app(readback_term(t->a, env, depth), readback_term(t->b, env, depth));
    default: return t;
    }
}

// Closed term denoted by a thunk.
TermPtr readback(const ThunkPtr& th)
{
    if (th->evaluated) return Term::numeral(th->value);
    return readback_term(th->term, th->env, 0);
}

enum class FK : std::uint8_t { Arg, Update, PairL, PairR, Fst, Snd, Succ, Pred, Ifz, Builtin };

struct Frame {
    FK kind;
    ThunkPtr t1, t2;
    Nat val;
    const MeteredRoutine* routine = nullptr;
};

class Machine {
public:
    explicit Machine(Meter& m) : meter_(m) {}

    AppResult run(TermPtr term, EnvPtr env)
    {
        bool returning = false;
        Nat ret;
        for (;;) {
            if (!meter_.spend()) return AppResult::exhausted();
            if (returning) {
                if (stack_.empty()) return AppResult::defined(std::move(ret));
                Frame& f = stack_.back();
                switch (f.kind) {
                case FK::Update:
                    f.t1->evaluated = true;
                    f.t1->value = ret;
                    f.t1->term.reset();
                    f.t1->env.reset();
                    stack_.pop_back();
                    continue;
                case FK::Arg: {
                    // A numeral in function position is run as the term it codes.
                    auto t = decode_term(ret);
                    if (!t) return AppResult::stuck();
                    term = *t;
                    env.reset();
                    returning = false;
                    continue;
                }
                case FK::PairL: {
                    ThunkPtr second = std::move(f.t1);
                    f.kind = FK::PairR;
                    f.val = std::move(ret);
                    force(second, term, env, returning, ret);
                    continue;
                }
                case FK::PairR: {
                    ret = encode_pair(f.val, ret);
                    stack_.pop_back();
                    continue;
                }
                case FK::Fst:
                    ret = decode_pair(ret).first;
                    stack_.pop_back();
                    continue;
                case FK::Snd:
                    ret = decode_pair(ret).second;
                    stack_.pop_back();
                    continue;
                case FK::Succ:
                    ret += 1;
                    stack_.pop_back();
                    continue;
                case FK::Pred:
                    if (ret > 0) ret -= 1;
                    stack_.pop_back();
                    continue;
                case FK::Ifz: {
                    ThunkPtr pick = ret == 0 ? std::move(f.t1) : std::move(f.t2);
                    stack_.pop_back();
                    force(pick, term, env, returning, ret);
                    continue;
                }
                case FK::Builtin: {
                    const MeteredRoutine* r = f.routine;
                    stack_.pop_back();
                    AppResult out = (*r)(ret, meter_);
                    if (out.kind != AppResult::Kind::Defined) return out;
                    ret = std::move(out.value);
                    continue;
                }
                }
            }

            switch (term->op) {
            case Op::Num:
                ret = term->num;
                returning = true;
                break;
            case Op::Var: {
                const ThunkPtr& th = env_at(env, term->index);
                ThunkPtr keep = th;
                force(keep, term, env, returning, ret);
                break;
            }
            case Op::App: {
                auto th = std::make_shared<Thunk>();
                th->term = term->b;
                th->env = env;
                stack_.push_back(Frame{FK::Arg, std::move(th), nullptr, 0});
                term = term->a;
                break;
            }
            case Op::Lam: {
                drop_updates();
                if (stack_.empty() || stack_.back().kind != FK::Arg) return AppResult::stuck();
                ThunkPtr arg = std::move(stack_.back().t1);
                stack_.pop_back();
                env = std::make_shared<const EnvNode>(EnvNode{std::move(arg), std::move(env)});
                term = term->a;
                break;
            }
            case Op::Builtin: {
                auto* r = find_routine(term->name);
                if (!r) return AppResult::stuck();
                ThunkPtr a;
                if (!take_args(1, &a)) return AppResult::stuck();
                stack_.push_back(Frame{FK::Builtin, nullptr, nullptr, 0, r});
                force(a, term, env, returning, ret);
                break;
            }
            case Op::Pair: {
                ThunkPtr a[2];
                if (!take_args(2, a)) return AppResult::stuck();
                stack_.push_back(Frame{FK::PairL, std::move(a[1]), nullptr, 0});
                force(a[0], term, env, returning, ret);
                break;
            }
            case Op::Fst:
            case Op::Snd:
            case Op::Succ:
            case Op::Pred: {
                ThunkPtr a;
                if (!take_args(1, &a)) return AppResult::stuck();
                FK k = term->op == Op::Fst   ? FK::Fst
                       : term->op == Op::Snd ? FK::Snd
                       : term->op == Op::Succ ? FK::Succ
                                              : FK::Pred;
                stack_.push_back(Frame{k, nullptr, nullptr, 0});
                force(a, term, env, returning, ret);
                break;
            }
            case Op::Ifz: {
                ThunkPtr a[3];
                if (!take_args(3, a)) return AppResult::stuck();
                stack_.push_back(Frame{FK::Ifz, std::move(a[1]), std::move(a[2]), 0});
                force(a[0], term, env, returning, ret);
                break;
            }
            case Op::Fix: {
                ThunkPtr g;
                if (!take_args(1, &g)) return AppResult::stuck();
                // fix g reduces to g applied to the code of "fix g".
                TermPtr self = Term::app(Term::prim(Op::Fix), readback(g));
                Code c = encode_term(self);
                stack_.push_back(Frame{FK::Arg, value_thunk(std::move(c)), nullptr, 0});
                force(g, term, env, returning, ret);
                break;
            }
            }
        }
    }

private:
    void force(const ThunkPtr& th, TermPtr& term, EnvPtr& env, bool& returning, Nat& ret)
    {
        if (th->evaluated) {
            ret = th->value;
            returning = true;
            return;
        }
        stack_.push_back(Frame{FK::Update, th, nullptr, 0});
        term = th->term;
        env = th->env;
        returning = false;
    }

    void drop_updates()
    {
        while (!stack_.empty() && stack_.back().kind == FK::Update) stack_.pop_back();
    }

    bool take_args(std::size_t k, ThunkPtr* out)
    {
        drop_updates();
        if (stack_.size() < k) return false;
        for (std::size_t i = 0; i < k; ++i)
            if (stack_[stack_.size() - 1 - i].kind != FK::Arg) return false;
        for (std::size_t i = 0; i < k; ++i) {
            out[i] = std::move(stack_.back().t1);
            stack_.pop_back();
        }
        return true;
    }

    Meter& meter_;
    std::vector<Frame> stack_;
};

} // namespace

AppResult run_term(const TermPtr& t, Meter& meter)
{
    ensure_stdlib();
    if (t->free != 0) return AppResult::stuck();
    Machine m(meter);
    return m.run(t, nullptr);
}

AppResult apply_n(const Code& e, const std::vector<Nat>& args, Meter& meter)
{
    TermPtr t = Term::numeral(e);
    for (const auto& a : args) t = Term::app(t, Term::numeral(a));
    return run_term(t, meter);
}

AppResult apply_n(const Code& e, const std::vector<Nat>& args, std::uint64_t fuel)
{
    Meter m(fuel);
    return apply_n(e, args, m);
}

AppResult apply(const Code& e, const Nat& n, Meter& meter) { return apply_n(e, {n}, meter); }

AppResult apply(const Code& e, const Nat& n, std::uint64_t fuel)
{
    Meter m(fuel);
    return apply(e, n, m);
}

Code fixpoint_code(const Code& generator)
{
    return encode_term(Term::app(Term::prim(Op::Fix), Term::numeral(generator)));
}

Code smn(const Code& c, const Nat& a)
{
    return encode_term(Term::app(Term::numeral(c), Term::numeral(a)));
}

Code smn(const Code& c, const std::vector<Nat>& args)
{
    TermPtr t = Term::numeral(c);
    for (const auto& a : args) t = Term::app(t, Term::numeral(a));
    return encode_term(t);
}

// ---------------------------------------------------------------------------
// Standard builtins

namespace {

std::optional<Seq> seq_of(const Nat& n) { return decode_seq(n); }

void install_stdlib()
{
    auto plain = [](const std::string& name, PlainRoutine f) {
        add_entry(name, lift(std::move(f)), "stdlib:" + name);
    };
    plain("bot", [](const Nat&) -> std::optional<Nat> { return std::nullopt; });
    plain("eq", [](const Nat& n) -> std::optional<Nat> {
        auto [x, y] = decode_pair(n);
        return Nat(x == y ? 1 : 0);
    });
    plain("lt", [](const Nat& n) -> std::optional<Nat> {
        auto [x, y] = decode_pair(n);
        return Nat(x < y ? 1 : 0);
    });
    plain("add", [](const Nat& n) -> std::optional<Nat> {
        auto [x, y] = decode_pair(n);
        return x + y;
    });
    plain("sub", [](const Nat& n) -> std::optional<Nat> {
        auto [x, y] = decode_pair(n);
        return x > y ? Nat(x - y) : Nat(0);
    });
    plain("mul", [](const Nat& n) -> std::optional<Nat> {
        auto [x, y] = decode_pair(n);
        return x * y;
    });
    plain("len", [](const Nat& n) -> std::optional<Nat> {
        auto s = seq_of(n);
        if (!s) return std::nullopt;
        return Nat(s->size());
    });
    // nth <s,i>, zero based
    plain("nth", [](const Nat& n) -> std::optional<Nat> {
        auto [sc, i] = decode_pair(n);
        auto s = seq_of(sc);
        if (!s || i >= s->size()) return std::nullopt;
        return (*s)[static_cast<std::size_t>(i)];
    });
    plain("take", [](const Nat& n) -> std::optional<Nat> {
        auto [sc, k] = decode_pair(n);
        auto s = seq_of(sc);
        if (!s) return std::nullopt;
        if (k < s->size()) s->resize(static_cast<std::size_t>(k));
        return encode_seq(*s);
    });
    plain("drop", [](const Nat& n) -> std::optional<Nat> {
        auto [sc, k] = decode_pair(n);
        auto s = seq_of(sc);
        if (!s) return std::nullopt;
        std::size_t d = k < s->size() ? static_cast<std::size_t>(k) : s->size();
        return encode_seq(Seq(s->begin() + static_cast<std::ptrdiff_t>(d), s->end()));
    });
    plain("snoc", [](const Nat& n) -> std::optional<Nat> {
        auto [sc, x] = decode_pair(n);
        auto s = seq_of(sc);
        if (!s) return std::nullopt;
        s->push_back(x);
        return encode_seq(*s);
    });
    plain("cons", [](const Nat& n) -> std::optional<Nat> {
        auto [x, sc] = decode_pair(n);
        auto s = seq_of(sc);
        if (!s) return std::nullopt;
        s->insert(s->begin(), x);
        return encode_seq(*s);
    });
    plain("smn", [](const Nat& n) -> std::optional<Nat> {
        auto [c, a] = decode_pair(n);
        return smn(c, a);
    });
    // lookup <table, key>; table is a sequence of <key, value> pairs
    plain("lookup", [](const Nat& n) -> std::optional<Nat> {
        auto [tc, key] = decode_pair(n);
        auto t = seq_of(tc);
        if (!t) return std::nullopt;
        for (const auto& entry : *t) {
            auto [k, v] = decode_pair(entry);
            if (k == key) return v;
        }
        return std::nullopt;
    });
    // scan <h, <alpha, <need, k>>>: run h on 0..alpha-1 with k steps each,
    // charging the shared meter; <1,v> once need defined runs agree on v.
    add_entry(
        "scan",
        [](const Nat& n, Meter& meter) -> AppResult {
            auto parts = decode_tuple(n, 4);
            const Nat& h = parts[0];
            auto alpha = to_u64(parts[1]);
            auto need = to_u64(parts[2]);
            // Step bounds beyond 64 bits saturate.
            auto k = std::optional<std::uint64_t>(to_u64(parts[3]).value_or(UINT64_MAX));
            if (!alpha || !need || *need == 0) return AppResult::stuck();
            std::vector<std::pair<Nat, std::uint64_t>> counts;
            for (std::uint64_t a = 0; a < *alpha; ++a) {
                std::uint64_t budget = std::min(*k, meter.remaining);
                Meter inner(budget);
                AppResult r = apply(h, Nat(a), inner);
                meter.spend(budget - inner.remaining);
                if (r.is_exhausted() && budget < *k) return AppResult::exhausted();
                if (!r.is_defined()) continue;
                bool found = false;
                for (auto& [v, c] : counts) {
                    if (v == r.value) {
                        found = true;
                        if (++c >= *need) return AppResult::defined(encode_pair(1, v));
                    }
                }
                if (!found) {
                    if (*need == 1) return AppResult::defined(encode_pair(1, r.value));
                    counts.emplace_back(r.value, 1);
                }
            }
            return AppResult::defined(encode_pair(0, 0));
        },
        "stdlib:scan");
}

} // namespace

} // namespace lotop
