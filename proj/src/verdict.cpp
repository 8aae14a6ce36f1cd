#include "lotop/verdict.hpp"

namespace lotop {

std::string kind_name(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Verified: return "Verified";
    case Verdict::Kind::VerifiedUpTo: return "VerifiedUpTo";
    case Verdict::Kind::Refuted: return "Refuted";
    case Verdict::Kind::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(const Verdict& v)
{
    if (v.note.empty()) return kind_name(v.kind);
    return kind_name(v.kind) + "(" + v.note + ")";
}

namespace {

int conj_rank(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Refuted: return 3;
    case Verdict::Kind::Unknown: return 2;
    case Verdict::Kind::VerifiedUpTo: return 1;
    case Verdict::Kind::Verified: return 0;
    }
    return 0;
}

int disj_rank(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Verified: return 3;
    case Verdict::Kind::VerifiedUpTo: return 2;
    case Verdict::Kind::Unknown: return 1;
    case Verdict::Kind::Refuted: return 0;
    }
    return 0;
}

Verdict merge_notes(Verdict v, const Verdict& other)
{
    if (v.kind == Verdict::Kind::VerifiedUpTo && other.kind == v.kind && other.note != v.note &&
        !other.note.empty()) {
        if (v.note.empty())
            v.note = other.note;
        else if (v.note.find(other.note) == std::string::npos && v.note.size() < 400)
            v.note += "; " + other.note;
    }
    return v;
}

} // namespace

Verdict conj(const Verdict& a, const Verdict& b)
{
    if (conj_rank(a.kind) >= conj_rank(b.kind)) return merge_notes(a, b);
    return merge_notes(b, a);
}

Verdict disj(const Verdict& a, const Verdict& b)
{
    if (disj_rank(a.kind) >= disj_rank(b.kind)) return merge_notes(a, b);
    return merge_notes(b, a);
}

} // namespace lotop
