#include "lotop/nat.hpp"

#include <boost/functional/hash.hpp>

#include <cmath>
#include <stdexcept>

namespace lotop {

std::size_t NatHash::operator()(const Nat& n) const
{
    return boost::multiprecision::hash_value(n);
}

std::string to_string(const Nat& n) { return n.str(); }

Nat parse_nat(const std::string& s)
{
    if (s.empty()) throw std::invalid_argument("empty numeral");
    for (char c : s)
        if (c < '0' || c > '9') throw std::invalid_argument("bad numeral: " + s);
    return Nat(s);
}

std::optional<std::uint64_t> to_u64(const Nat& n)
{
    if (n < 0 || n > Nat(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
    return static_cast<std::uint64_t>(n);
}

Nat encode_pair(const Nat& x, const Nat& y)
{
    Nat s = x + y;
    return s * (s + 1) / 2 + x;
}

std::pair<Nat, Nat> decode_pair(const Nat& z)
{
    if (z < (Nat(1) << 60)) {
        auto v = static_cast<std::uint64_t>(z);
        auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(v) + 1.0) - 1.0) / 2.0);
        while (w * (w + 1) / 2 > v) --w;
        while ((w + 1) * (w + 2) / 2 <= v) ++w;
        std::uint64_t x = v - w * (w + 1) / 2;
        return {Nat(x), Nat(w - x)};
    }
    // w = floor((sqrt(8z+1)-1)/2)
    Nat d = 8 * z + 1;
    Nat w = (boost::multiprecision::sqrt(d) - 1) / 2;
    Nat t = w * (w + 1) / 2;
    Nat x = z - t;
    return {x, w - x};
}

Nat encode_tuple(const std::vector<Nat>& xs)
{
    if (xs.empty()) throw std::invalid_argument("encode_tuple: empty tuple");
    Nat acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = encode_pair(xs[i], acc);
    return acc;
}

std::vector<Nat> decode_tuple(const Nat& z, std::size_t k)
{
    if (k == 0) throw std::invalid_argument("decode_tuple: k = 0");
    std::vector<Nat> out;
    out.reserve(k);
    Nat cur = z;
    for (std::size_t i = 1; i < k; ++i) {
        auto [a, b] = decode_pair(cur);
        out.push_back(std::move(a));
        cur = std::move(b);
    }
    out.push_back(std::move(cur));
    return out;
}

Nat project(const Nat& z, std::size_t k, std::size_t i)
{
    if (i == 0 || i > k) throw std::invalid_argument("project: index out of range");
    return decode_tuple(z, k)[i - 1];
}

Nat encode_seq(const std::vector<Nat>& xs)
{
    if (xs.empty()) return encode_pair(0, 0);
    return encode_pair(Nat(xs.size()), encode_tuple(xs));
}

std::optional<std::vector<Nat>> decode_seq(const Nat& z, std::size_t max_len)
{
    auto [n, body] = decode_pair(z);
    if (n == 0) {
        if (body == 0) return std::vector<Nat>{};
        return std::nullopt;
    }
    if (n > max_len) return std::nullopt;
    return decode_tuple(body, static_cast<std::size_t>(n));
}

std::string seq_to_string(const Seq& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += s[i].str();
    }
    return out + ")";
}

} // namespace lotop
