#include "lotop/turing.hpp"

#include <fmt/format.h>

namespace lotop {

ThetaSeq rho(const std::string& predicate)
{
    ensure_standard_predicates();
    return ThetaSeq::rho(predicate);
}

std::optional<Sight> rho_forced_sight(const Nat& z, const std::string& predicate, std::size_t depth,
                                      std::uint64_t fuel)
{
    auto [tag, rest] = decode_pair(z);
    if (tag == 0) return Sight::nil();
    if (tag != 1 || depth == 0) return std::nullopt;
    auto [n, e] = decode_pair(rest);
    Nat c = decide_predicate(predicate, n) ? 0 : 1;
    AppResult r = apply(e, c, fuel);
    if (!r.is_defined()) return std::nullopt;
    auto sub = rho_forced_sight(r.value, predicate, depth - 1, fuel);
    if (!sub) return std::nullopt;
    return Sight::node({{c, *sub}});
}

PartialSeqFn EffectivenessRealizer::w(const Nat& n) const
{
    AppResult res = apply(r, n, 1000);
    if (!res.is_defined()) throw std::logic_error("effectiveness realizer stuck");
    return PartialSeqFn::coded(res.value, fmt::format("eff:{}:{}", predicate, n.str()));
}

Certificate EffectivenessRealizer::certificate(const Nat& n, const ThetaSeq& theta) const
{
    Nat chi = decide_predicate(predicate, n) ? 1 : 0;
    return Certificate::supporting(Sight::nil(), w(n), theta, SetExpr::fin({chi}), 1000);
}

EffectivenessRealizer effectiveness_realizer(const std::string& predicate)
{
    ensure_standard_predicates();
    if (!predicate_registered(predicate)) throw std::invalid_argument("unregistered predicate: " + predicate);
    Code wk = compile(fmt::format("λn s. ⟨0, ${} n⟩", predicate));
    return {predicate, compile("λn. $smn ⟨WK, n⟩", {{"WK", wk}})};
}

Code dedicated_gamma(const Code& r)
{
    return compile("λn. F ⟨R n, E⟩", {{"F", fwd_kernel()}, {"R", r}, {"E", encode_seq({})}});
}

Code extraction_f(std::uint64_t m, std::uint64_t alpha)
{
    if (m < 1 || 2 * m >= alpha) throw std::invalid_argument("extraction_f: need 1 < 2m < alpha");
    Code hk = compile("λq a. q_1 (q_2 a)");
    // q = <self, <e, k>>; k' = 2k+1 after an inconclusive round.
    Code loop = compile(R"(fix (λloop q.
        let r = $scan ⟨$smn ⟨HK, ⟨q_1, q_2_1⟩⟩, ⟨ALPHA, ⟨NEED, q_2_2⟩⟩⟩ in
        ifz r_1 (loop ⟨q_1, ⟨q_2_1, suc ($add ⟨q_2_2, q_2_2⟩)⟩⟩) r_2))",
                        {{"HK", hk}, {"ALPHA", Nat(alpha)}, {"NEED", Nat(m + 1)}});
    Code g = compile("λself z. ifz z_1 z_2 (ifz ($eq ⟨z_1, 1⟩) ($bot 0) (LOOP ⟨self, ⟨z_2_2, 1⟩⟩))",
                     {{"LOOP", loop}});
    return fixpoint_code(g);
}

Extraction extract_characteristic(const Code& gamma, std::uint64_t m, std::uint64_t alpha, std::uint64_t range,
                                  std::uint64_t fuel, const std::string& predicate)
{
    ensure_standard_predicates();
    Code f = extraction_f(m, alpha);
    Extraction out;
    std::optional<std::uint64_t> undefined_at, wrong_at;
    for (std::uint64_t n = 0; n < range; ++n) {
        Meter meter(fuel);
        AppResult z = apply(gamma, Nat(n), meter);
        AppResult v = z.is_defined() ? apply(f, z.value, meter) : z;
        if (!v.is_defined()) {
            out.values.emplace_back(std::nullopt);
            if (!undefined_at) undefined_at = n;
            continue;
        }
        out.values.emplace_back(v.value);
        if (!predicate.empty() && !wrong_at) {
            Nat chi = decide_predicate(predicate, Nat(n)) ? 1 : 0;
            if (v.value != chi) wrong_at = n;
        }
    }
    if (wrong_at)
        out.verdict = Verdict::refuted(fmt::format("f(gamma({})) differs from chi_{}", *wrong_at, predicate));
    else if (undefined_at)
        out.verdict = Verdict::unknown(fmt::format("f(gamma({})) undefined within fuel {}", *undefined_at, fuel));
    else
        out.verdict = Verdict::verified();
    return out;
}

} // namespace lotop
