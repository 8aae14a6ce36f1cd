#include "lotop/pca.hpp"

#include <algorithm>
#include <iterator>
#include <mutex>
#include <unordered_map>

namespace lotop {

namespace {

TermPtr make(Op op)
{
    auto t = std::make_shared<Term>();
    t->op = op;
    t->index = 0;
    t->free = 0;
    return t;
}

} // namespace

TermPtr Term::numeral(Nat n)
{
    auto t = std::make_shared<Term>();
    t->op = Op::Num;
    t->num = std::move(n);
    t->index = 0;
    t->free = 0;
    return t;
}

TermPtr Term::var(std::size_t i)
{
    auto t = std::make_shared<Term>();
    t->op = Op::Var;
    t->index = i;
    t->free = i + 1;
    return t;
}

TermPtr Term::lam(TermPtr body)
{
    auto t = std::make_shared<Term>();
    t->op = Op::Lam;
    t->index = 0;
    t->free = body->free > 0 ? body->free - 1 : 0;
    t->a = std::move(body);
    return t;
}

TermPtr Term::app(TermPtr f, TermPtr x)
{
    auto t = std::make_shared<Term>();
    t->op = Op::App;
    t->index = 0;
    t->free = std::max(f->free, x->free);
    t->a = std::move(f);
    t->b = std::move(x);
    return t;
}

TermPtr Term::builtin(std::string name)
{
    auto t = std::make_shared<Term>();
    t->op = Op::Builtin;
    t->index = 0;
    t->free = 0;
    t->name = std::move(name);
    return t;
}

TermPtr Term::prim(Op op)
{
    if (op == Op::Num || op == Op::Var || op == Op::Lam || op == Op::App || op == Op::Builtin)
        throw std::invalid_argument("Term::prim: not a primitive");
    static const TermPtr table[] = {
        nullptr, nullptr, nullptr, nullptr, nullptr,
        make(Op::Pair), make(Op::Fst), make(Op::Snd), make(Op::Succ),
        make(Op::Pred), make(Op::Ifz), make(Op::Fix),
    };
    return table[static_cast<int>(op)];
}

bool term_equal(const TermPtr& x, const TermPtr& y)
{
    if (x == y) return true;
    if (!x || !y || x->op != y->op) return false;
    switch (x->op) {
    case Op::Num: return x->num == y->num;
    case Op::Var: return x->index == y->index;
    case Op::Builtin: return x->name == y->name;
    case Op::Lam: return term_equal(x->a, y->a);
    case Op::App: return term_equal(x->a, y->a) && term_equal(x->b, y->b);
    default: return true;
    }
}

std::string term_to_string(const TermPtr& t)
{
    switch (t->op) {
    case Op::Num: return t->num.str();
    case Op::Var: return "#" + std::to_string(t->index);
    case Op::Lam: return "(\\." + term_to_string(t->a) + ")";
    case Op::App: return "(" + term_to_string(t->a) + " " + term_to_string(t->b) + ")";
    case Op::Builtin: return "$" + t->name;
    case Op::Pair: return "pair";
    case Op::Fst: return "fst";
    case Op::Snd: return "snd";
    case Op::Succ: return "suc";
    case Op::Pred: return "pred";
    case Op::Ifz: return "ifz";
    case Op::Fix: return "fix";
    }
    return "?";
}

// Bit-level serialization. A code c stands for the bitstring obtained by
// writing c+1 in binary and dropping the leading 1. Each node is a 4-bit tag
// followed by its payload; numbers use the Elias gamma code of n+1.
namespace {

constexpr unsigned kTagBits = 4;

struct BitWriter {
    std::vector<std::uint8_t> bits;

    void put(bool b) { bits.push_back(b ? 1 : 0); }
    void put_tag(unsigned tag)
    {
        for (unsigned i = kTagBits; i-- > 0;) put((tag >> i) & 1u);
    }
    void put_gamma(const Nat& n)
    {
        Nat m = n + 1;
        std::size_t top = boost::multiprecision::msb(m);
        for (std::size_t i = 0; i < top; ++i) put(false);
        for (std::size_t i = top + 1; i-- > 0;) put(boost::multiprecision::bit_test(m, i));
    }
    Nat finish() const
    {
        std::vector<std::uint8_t> all;
        all.reserve(bits.size() + 1);
        all.push_back(1);
        all.insert(all.end(), bits.begin(), bits.end());
        std::size_t pad = (8 - all.size() % 8) % 8;
        std::vector<std::uint8_t> bytes((all.size() + pad) / 8, 0);
        for (std::size_t i = 0; i < all.size(); ++i) {
            std::size_t pos = i + pad;
            if (all[i]) bytes[pos / 8] |= static_cast<std::uint8_t>(0x80u >> (pos % 8));
        }
        Nat out;
        boost::multiprecision::import_bits(out, bytes.begin(), bytes.end(), 8);
        return out - 1;
    }
};

struct BitReader {
    std::vector<std::uint8_t> bits;
    std::size_t pos = 0;

    explicit BitReader(const Nat& code)
    {
        Nat n = code + 1;
        std::vector<std::uint8_t> bytes;
        boost::multiprecision::export_bits(n, std::back_inserter(bytes), 8);
        bool started = false;
        for (auto byte : bytes) {
            for (int i = 7; i >= 0; --i) {
                bool b = (byte >> i) & 1u;
                if (!started) {
                    if (b) started = true;
                    continue;
                }
                bits.push_back(b ? 1 : 0);
            }
        }
    }
    bool done() const { return pos == bits.size(); }
    std::optional<bool> get()
    {
        if (pos >= bits.size()) return std::nullopt;
        return bits[pos++] != 0;
    }
    std::optional<unsigned> get_tag()
    {
        if (pos + kTagBits > bits.size()) return std::nullopt;
        unsigned t = 0;
        for (unsigned i = 0; i < kTagBits; ++i) t = (t << 1) | bits[pos++];
        return t;
    }
    std::optional<Nat> get_gamma()
    {
        std::size_t zeros = 0;
        while (pos < bits.size() && bits[pos] == 0) {
            ++zeros;
            ++pos;
        }
        if (pos >= bits.size() || pos + zeros + 1 > bits.size()) return std::nullopt;
        if (zeros <= 62) {
            std::uint64_t m = 0;
            for (std::size_t i = 0; i <= zeros; ++i) m = (m << 1) | bits[pos++];
            return Nat(m) - 1;
        }
        Nat m = 0;
        for (std::size_t i = 0; i <= zeros; ++i) {
            m <<= 1;
            if (bits[pos++]) m |= 1;
        }
        return m - 1;
    }
};

Nat name_to_nat(const std::string& name)
{
    Nat n = 0;
    for (unsigned char ch : name) n = (n << 8) | Nat(ch);
    return n;
}

std::string nat_to_name(Nat n)
{
    std::string out;
    while (n > 0) {
        out.push_back(static_cast<char>(static_cast<unsigned>(n & 0xff)));
        n >>= 8;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void write_term(BitWriter& w, const TermPtr& t)
{
    w.put_tag(static_cast<unsigned>(t->op));
    switch (t->op) {
    case Op::Num: w.put_gamma(t->num); break;
    case Op::Var: w.put_gamma(Nat(t->index)); break;
    case Op::Lam: write_term(w, t->a); break;
    case Op::App:
        write_term(w, t->a);
        write_term(w, t->b);
        break;
    case Op::Builtin: w.put_gamma(name_to_nat(t->name)); break;
    default: break;
    }
}

std::optional<TermPtr> read_term(BitReader& r, std::size_t depth)
{
    auto tag = r.get_tag();
    if (!tag || *tag > static_cast<unsigned>(Op::Fix)) return std::nullopt;
    Op op = static_cast<Op>(*tag);
    switch (op) {
    case Op::Num: {
        auto n = r.get_gamma();
        if (!n) return std::nullopt;
        return Term::numeral(std::move(*n));
    }
    case Op::Var: {
        auto n = r.get_gamma();
        if (!n || *n >= depth) return std::nullopt;
        return Term::var(static_cast<std::size_t>(*n));
    }
    case Op::Lam: {
        auto body = read_term(r, depth + 1);
        if (!body) return std::nullopt;
        return Term::lam(std::move(*body));
    }
    case Op::App: {
        auto f = read_term(r, depth);
        if (!f) return std::nullopt;
        auto x = read_term(r, depth);
        if (!x) return std::nullopt;
        return Term::app(std::move(*f), std::move(*x));
    }
    case Op::Builtin: {
        auto n = r.get_gamma();
        if (!n) return std::nullopt;
        return Term::builtin(nat_to_name(std::move(*n)));
    }
    default: return Term::prim(op);
    }
}

// Bounded per-thread memo tables. Encoding and decoding are pure, so caching
// is invisible to callers.
constexpr std::size_t kCacheLimit = 1 << 14;

struct Caches {
    std::unordered_map<const Term*, std::pair<TermPtr, Nat>> enc;
    std::unordered_map<Nat, std::optional<TermPtr>, NatHash> dec;
};

Caches& caches()
{
    thread_local Caches c;
    return c;
}

} // namespace

Code encode_term(const TermPtr& t)
{
    if (t->free != 0) throw std::invalid_argument("encode_term: term is not closed");
    auto& c = caches();
    if (auto it = c.enc.find(t.get()); it != c.enc.end()) return it->second.second;
    BitWriter w;
    write_term(w, t);
    Nat code = w.finish();
    if (c.enc.size() > kCacheLimit) c.enc.clear();
    c.enc.emplace(t.get(), std::make_pair(t, code));
    return code;
}

std::optional<TermPtr> decode_term(const Code& code)
{
    if (code < 0) return std::nullopt;
    auto& c = caches();
    if (auto it = c.dec.find(code); it != c.dec.end()) return it->second;
    BitReader r(code);
    auto t = read_term(r, 0);
    if (t && !r.done()) t = std::nullopt;
    if (c.dec.size() > kCacheLimit) c.dec.clear();
    c.dec.emplace(code, t);
    if (t) {
        if (c.enc.size() > kCacheLimit) c.enc.clear();
        c.enc.emplace(t->get(), std::make_pair(*t, code));
    }
    return t;
}

} // namespace lotop
