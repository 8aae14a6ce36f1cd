#include "lotop/instances.hpp"

#include "lotop/tables.hpp"

#include <algorithm>

namespace lotop {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

} // namespace

SetExpr random_fin(std::mt19937_64& rng, std::uint64_t universe, std::size_t min_size, std::size_t max_size)
{
    std::vector<std::uint64_t> pool(universe);
    for (std::uint64_t i = 0; i < universe; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    max_size = std::min<std::size_t>(max_size, universe);
    std::size_t k = min_size + below(rng, max_size - min_size + 1);
    std::vector<Nat> xs(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    return SetExpr::fin(std::move(xs));
}

ThetaSeq random_theta(std::mt19937_64& rng, const InstanceParams& params)
{
    std::size_t lo = params.allow_empty_branch ? 0 : 1;
    auto coll = [&] {
        std::vector<SetExpr> ms;
        std::size_t k = 1 + below(rng, 4);
        for (std::size_t i = 0; i < k; ++i) ms.push_back(random_fin(rng, params.universe, lo, params.max_branch));
        return Collection::list(std::move(ms));
    };
    Collection dflt = coll();
    std::map<Nat, Collection> over;
    for (std::uint64_t n = 0; n < params.theta_indices; ++n)
        if (below(rng, 2)) over.emplace(Nat(n), coll());
    return ThetaSeq::fin_supported(std::move(dflt), std::move(over));
}

namespace {

struct Builder {
    std::mt19937_64& rng;
    const InstanceParams& params;
    const ThetaSeq& theta;
    std::vector<Nat> pvals;
    std::map<Seq, Nat> wtab;

    // Returns the subsight at path and its dedicating z.
    std::pair<Sight, Nat> build(Seq& path)
    {
        bool leaf = path.size() >= params.max_depth || below(rng, 3) == 0;
        if (leaf) {
            Nat y = pvals[below(rng, pvals.size())];
            // w picks its own leaf label, independent of z.
            Nat y2 = pvals[below(rng, pvals.size())];
            wtab[path] = encode_pair(0, y2);
            return {Sight::nil(), encode_pair(0, y)};
        }
        Nat n = below(rng, params.theta_indices + 1);
        Collection c = theta.at(n);
        const SetExpr& br = c.members()[below(rng, c.size())];
        // w may certify the same branch under a different index.
        Nat wn = n;
        for (std::uint64_t k = 0; k <= params.theta_indices; ++k)
            if (below(rng, 2) && theta.contains(Nat(k), br)) {
                wn = k;
                break;
            }
        wtab[path] = encode_pair(1, wn);
        std::vector<std::pair<Nat, Sight>> ch;
        std::map<Nat, Nat> etab;
        const std::vector<Nat> elems = br.finite_elements().value();
        for (const auto& a : elems) {
            path.push_back(a);
            auto [s, za] = build(path);
            path.pop_back();
            ch.emplace_back(a, std::move(s));
            etab[a] = za;
        }
        return {Sight::node(std::move(ch)), encode_pair(1, encode_pair(n, table_code(etab)))};
    }
};

} // namespace

Instance random_instance(std::mt19937_64& rng, const InstanceParams& params, const ThetaSeq& theta,
                         const SetExpr& p)
{
    auto pv = p.finite_elements();
    if (!pv || pv->empty()) throw std::invalid_argument("random_instance: p must be finite and nonempty");
    Builder b{rng, params, theta, *pv, {}};
    Seq root;
    auto [s, z] = b.build(root);
    return Instance{s, theta, p, z, PartialSeqFn::coded(table_seq_code(b.wtab), "table")};
}

Instance random_instance(std::mt19937_64& rng, const InstanceParams& params)
{
    ThetaSeq theta = random_theta(rng, params);
    SetExpr p = random_fin(rng, params.universe, 1, 3);
    return random_instance(rng, params, theta, p);
}

WfTree random_tree(std::mt19937_64& rng, std::size_t max_depth, std::size_t max_branch, std::uint64_t universe)
{
    WfTree t{Seq{}};
    std::vector<Seq> frontier{Seq{}};
    while (!frontier.empty()) {
        Seq s = frontier.back();
        frontier.pop_back();
        if (s.size() >= max_depth || below(rng, 3) == 0) continue;
        SetExpr br = random_fin(rng, universe, 1, max_branch);
        const std::vector<Nat> elems = br.finite_elements().value();
        for (const auto& a : elems) {
            Seq c = s;
            c.push_back(a);
            t.insert(c);
            frontier.push_back(c);
        }
    }
    return t;
}

} // namespace lotop
