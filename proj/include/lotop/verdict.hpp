#ifndef LOTOP_VERDICT_HPP
#define LOTOP_VERDICT_HPP

#include <string>
#include <vector>

namespace lotop {

// Outcome of a semi-decidable check. Verified is only emitted for exact checks;
// bounded checks that pass yield VerifiedUpTo with the bounds recorded.
struct Verdict {
    enum class Kind { Verified, VerifiedUpTo, Refuted, Unknown };
    Kind kind = Kind::Verified;
    std::string note;  // bounds, witness or reason depending on kind

    static Verdict verified(std::string note = {}) { return {Kind::Verified, std::move(note)}; }
    static Verdict upto(std::string bounds) { return {Kind::VerifiedUpTo, std::move(bounds)}; }
    static Verdict refuted(std::string witness) { return {Kind::Refuted, std::move(witness)}; }
    static Verdict unknown(std::string reason) { return {Kind::Unknown, std::move(reason)}; }

    bool is_verified() const { return kind == Kind::Verified; }
    bool is_upto() const { return kind == Kind::VerifiedUpTo; }
    bool is_refuted() const { return kind == Kind::Refuted; }
    bool is_unknown() const { return kind == Kind::Unknown; }
    // Verified or VerifiedUpTo.
    bool passed() const { return is_verified() || is_upto(); }
};

std::string kind_name(Verdict::Kind k);
std::string to_string(const Verdict& v);

// Conjunction: Refuted dominates, then Unknown, then VerifiedUpTo.
Verdict conj(const Verdict& a, const Verdict& b);
// Existential: Verified dominates, then VerifiedUpTo, then Unknown.
Verdict disj(const Verdict& a, const Verdict& b);

// Accumulators for loops.
struct AllOf {
    Verdict acc = Verdict::verified();
    void add(const Verdict& v) { acc = conj(acc, v); }
    bool refuted() const { return acc.is_refuted(); }
};

struct AnyOf {
    Verdict acc = Verdict::refuted("no candidate");
    bool first = true;
    void add(const Verdict& v)
    {
        acc = first ? v : disj(acc, v);
        first = false;
    }
    bool verified() const { return acc.is_verified(); }
};

} // namespace lotop

#endif
