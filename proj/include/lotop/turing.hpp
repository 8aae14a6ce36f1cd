#ifndef LOTOP_TURING_HPP
#define LOTOP_TURING_HPP

#include "lotop/operators.hpp"

#include <string>
#include <vector>

namespace lotop {

// rho_D(n) = {{0}} if n in D, {{1}} otherwise. Throws for an unregistered D.
ThetaSeq rho(const std::string& predicate);

// The unique sight a dedicated certificate for z over rho_D can have, read off z.
// nullopt when z leaves the dedicated shape within depth and fuel.
std::optional<Sight> rho_forced_sight(const Nat& z, const std::string& predicate, std::size_t depth,
                                      std::uint64_t fuel);

// r with r(n) = w_n, w_n(s) = <0, chi_D(n)> on every s.
struct EffectivenessRealizer {
    std::string predicate;
    Code r;

    // w_n as a coded sequence function.
    PartialSeqFn w(const Nat& n) const;
    // Nil supporting certificate for w_n in lo''_theta({chi_D(n)}).
    Certificate certificate(const Nat& n, const ThetaSeq& theta) const;
};

EffectivenessRealizer effectiveness_realizer(const std::string& predicate);

// gamma(n) = fwd_{r(n)}: turns an lo''-realizer into an lo'-realizer.
Code dedicated_gamma(const Code& r);

// f(<0,x>) = x; f(<1,<_,e>>) = the common f-value of m+1 distinct a < alpha,
// found by running f . e on 0..alpha-1 with step bounds 1, 3, 7, ...
Code extraction_f(std::uint64_t m, std::uint64_t alpha);

struct Extraction {
    std::vector<std::optional<Nat>> values;  // f(gamma(n)) for n < range
    Verdict verdict;
};

// Runs f . gamma on n < range. Verified iff every value is defined and, when a
// registered predicate is given, equals chi_D(n).
Extraction extract_characteristic(const Code& gamma, std::uint64_t m, std::uint64_t alpha, std::uint64_t range,
                                  std::uint64_t fuel, const std::string& predicate = {});

} // namespace lotop

#endif
