#ifndef DEPFDR_ORACLE_HPP
#define DEPFDR_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "depfdr/graph.hpp"
#include "depfdr/procedures.hpp"

namespace depfdr {

// Exhaustive certificate search over all independent subsets; intended as
// ground truth for small m (default guard 20 nodes).
NodeSet brute_force_indbh(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g, int guard = 20);

// Literal recursion on top of brute_force_indbh.
NodeSet brute_force_indbh_k(const std::vector<double>& p, double alpha,
                            const DependencyGraph& g, int k, int guard = 20);

struct Instance {
    std::vector<double> p;
    DependencyGraph g;
    double alpha = 0.1;
};

struct Violation {
    std::size_t instance_index;
    int witness;        // hypothesis id (or -1 when not applicable)
    std::string detail;
};

struct PropertyReport {
    enum class Property { SelfConsistency, Monotonicity, NeighborBlindness };
    Property property;
    std::size_t checked = 0;
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
};

PropertyReport check_self_consistency(const Procedure& proc,
                                      const std::vector<Instance>& instances);

// For each instance, tests the supplied shrunken companions p' <= p
// (coordinate-wise): R(p) must be contained in R(p').
PropertyReport check_monotonicity(const Procedure& proc,
                                  const std::vector<Instance>& instances,
                                  std::uint64_t seed, int pairs_per_instance = 3);

PropertyReport check_neighbor_blindness(const Procedure& proc,
                                        const std::vector<Instance>& instances);

struct McFdrResult {
    double fdr_hat = 0.0;
    double se = 0.0;
    long long reps = 0;
    double mean_rejections = 0.0;
};

// Generator yields (p, true-nonnull set) per replication.
using DrawFn = std::function<std::pair<std::vector<double>, NodeSet>(std::uint64_t rep_seed)>;

// Monte Carlo FDR of proc on draws from gen; FDP of an empty rejection set
// is 0. Parallel over replications, deterministic in seed.
McFdrResult mc_fdr(const Procedure& proc, const DependencyGraph& g, double alpha,
                   const DrawFn& gen, long long reps, std::uint64_t seed);

// Stable per-replication substream seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t rep);

}  // namespace depfdr

#endif
