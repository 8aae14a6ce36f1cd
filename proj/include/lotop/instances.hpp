#ifndef LOTOP_INSTANCES_HPP
#define LOTOP_INSTANCES_HPP

#include "lotop/sights.hpp"

#include <random>

namespace lotop {

// Seeded random explicit sights together with a theta, a target set p, and
// realizers built from host tables: z dedicates the sight and w supports it.
struct InstanceParams {
    std::size_t max_depth = 4;
    std::size_t max_branch = 4;
    std::uint64_t universe = 6;  // branch elements drawn from {0..universe-1}
    std::uint64_t theta_indices = 4;
    bool allow_empty_branch = false;
};

struct Instance {
    Sight sight;
    ThetaSeq theta;
    SetExpr p;
    Nat z;
    PartialSeqFn w;
};

ThetaSeq random_theta(std::mt19937_64& rng, const InstanceParams& params);
SetExpr random_fin(std::mt19937_64& rng, std::uint64_t universe, std::size_t min_size, std::size_t max_size);
Instance random_instance(std::mt19937_64& rng, const InstanceParams& params);
// Instance over a given theta and p.
Instance random_instance(std::mt19937_64& rng, const InstanceParams& params, const ThetaSeq& theta,
                         const SetExpr& p);

// Finite tree with at most max_depth levels and branch elements below universe.
WfTree random_tree(std::mt19937_64& rng, std::size_t max_depth, std::size_t max_branch, std::uint64_t universe);

} // namespace lotop

#endif
