#ifndef LOTOP_NAT_HPP
#define LOTOP_NAT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lotop {

// Arbitrary precision natural number. Codes of terms routinely exceed 64 bits.
using Nat = boost::multiprecision::cpp_int;

struct NatHash {
    std::size_t operator()(const Nat& n) const;
};

std::string to_string(const Nat& n);
Nat parse_nat(const std::string& s);
std::optional<std::uint64_t> to_u64(const Nat& n);

// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + x.
Nat encode_pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> decode_pair(const Nat& z);
inline Nat fst(const Nat& z) { return decode_pair(z).first; }
inline Nat snd(const Nat& z) { return decode_pair(z).second; }

// Right-nested tuples: <x> = x, <x1,...,xk> = <x1,<x2,...,xk>>.
Nat encode_tuple(const std::vector<Nat>& xs);
std::vector<Nat> decode_tuple(const Nat& z, std::size_t k);
// pi^k_i with 1 <= i <= k.
Nat project(const Nat& z, std::size_t k, std::size_t i);

// E(x1..xn) = <n, <x1..xn>>, E(()) = <0,0>.
Nat encode_seq(const std::vector<Nat>& xs);
// nullopt when z is not the code of a sequence or the length exceeds max_len.
std::optional<std::vector<Nat>> decode_seq(const Nat& z, std::size_t max_len = 4096);

using Seq = std::vector<Nat>;
std::string seq_to_string(const Seq& s);

} // namespace lotop

#endif
