#ifndef DEPFDR_BOUNDS_HPP
#define DEPFDR_BOUNDS_HPP

#include <vector>

#include "depfdr/graph.hpp"

namespace depfdr {

struct CliqueCover {
    std::vector<NodeSet> blocks;  // partition of {1..m}, each a clique
};

// Validates that blocks partition {1..m} and are cliques in g.
void validate_clique_cover(const DependencyGraph& g, const CliqueCover& cover);

// Worst-case BH FDR upper bound: (alpha/m) * sum_i L_i with
// L_i = |N_i| - (|N_i|-1) m^{-1/(|N_i|-1)}, and L_i = 1 when |N_i| = 1.
double fdr_upper_bound(const DependencyGraph& g, double alpha);

// Worst-case BH FDR lower bound over a clique cover:
// 1 - prod_k (1 - (alpha*b_k/m) H_{b_k}). Requires every factor positive.
double fdr_lower_bound(const CliqueCover& cover, int m, double alpha);

// Adjusted level for equal blocks of size b: the largest a with
// 1 - (1 - (a*b/m) H_b)^{m/b} <= alpha; closed form
// a = m (1 - (1-alpha)^{b/m}) / (b H_b).
double bygraph_level(int m, int b, double alpha);

// Numeric sup-search used to validate the closed form.
double bygraph_level_bisect(int m, int b, double alpha, double tol = 1e-14);

}  // namespace depfdr

#endif
