#ifndef DEPFDR_PROCEDURES_HPP
#define DEPFDR_PROCEDURES_HPP

#include <functional>
#include <vector>

#include "depfdr/graph.hpp"

namespace depfdr {

// Reference-semantics multiple testing procedures. Inputs are length-m
// p-value vectors stored 0-based: p[i-1] is the value for hypothesis i.
// Outputs are sorted 1-based rejection sets.

std::vector<double> mask(const std::vector<double>& p, const NodeSet& a);

// Step-up: r* = max{r : p_(r) <= alpha*r/m}, reject {i : p_i <= alpha*r*/m}.
NodeSet bh(const std::vector<double>& p, double alpha);

// Step-down: r* = max{r : p_(s) <= alpha*s/m for all s <= r}.
NodeSet step_down_bh(const std::vector<double>& p, double alpha);

NodeSet bonferroni(const std::vector<double>& p, double alpha);

double harmonic_number(int m);

// BH at level alpha / H_m.
NodeSet by(const std::vector<double>& p, double alpha);

// BH on p'_i = min(1, 2*sqrt(p_i)) at level sqrt(2*alpha). Requires
// alpha <= 1/2 so the modified level stays in [0,1].
NodeSet ebh_comparator(const std::vector<double>& p, double alpha);

// Negative control only: adjusts by the BH count of the neighbor-masked
// vector with p_i forced to 0. Does not control FDR.
NodeSet naive_adjusted_bh(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g);

// Certificate semantics: i is rejected iff some independent set C containing
// i has p_j <= alpha*|C|/m for every j in C.
NodeSet indbh_reference(const std::vector<double>& p, double alpha,
                        const DependencyGraph& g, int guard = kDefaultGuard);

// Literal gap-chasing recursion; k=1 is indbh_reference.
NodeSet indbh_k_reference(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g, int k,
                          int guard = kDefaultGuard);

// Iterate the gap-chasing map starting from BH until two consecutive
// iterates agree.
NodeSet su_fixed_point(const std::vector<double>& p, double alpha,
                       const DependencyGraph& g);

using Procedure =
    std::function<NodeSet(const std::vector<double>&, double, const DependencyGraph&)>;

// Prune a gap-chased set back to validity using external uniforms u.
NodeSet randomized_prune(const std::vector<double>& p, double alpha,
                         const DependencyGraph& g, const Procedure& initial,
                         const std::vector<double>& u);

// The adjusted (pre-pruning) set, exposed for tests.
NodeSet gap_chase_once(const std::vector<double>& p, double alpha,
                       const DependencyGraph& g, const Procedure& initial);

}  // namespace depfdr

#endif
