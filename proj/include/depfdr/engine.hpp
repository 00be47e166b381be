#ifndef DEPFDR_ENGINE_HPP
#define DEPFDR_ENGINE_HPP

#include <memory>
#include <vector>

#include "depfdr/graph.hpp"

namespace depfdr {

// Optimized pipeline: filter to the BH rejection set, decompose into
// components, cache per-component independence numbers as step functions of
// the rejection level r, and decide most hypotheses with cheap bound checks.
// Output is identical to the reference procedures.

struct ReducedProblem {
    NodeSet kept;                // original ids, = BH rejection set
    std::vector<double> sub_p;   // p restricted to kept (local order)
    DependencyGraph sub_graph;   // induced subgraph on kept
    double alpha_adj = 0.0;      // alpha * |kept| / m
    double alpha_orig = 0.0;
    int m_orig = 0;
    std::vector<int> to_original;  // local id -> original id
    std::vector<int> to_local;     // original id -> local id (0 absent)
    std::vector<int> r_index;      // per local node: min r with p_i <= thr(r);
                                   // m_local+1 when no such r
    int m_local() const { return sub_graph.m; }
    // alpha_adj * r / m_local == alpha_orig * r / m_orig; the latter form is
    // used so engine and reference compare against bit-identical thresholds
    double threshold(int r) const {
        return alpha_orig * static_cast<double>(r) / m_orig;
    }
};

ReducedProblem reduce_to_bh(const std::vector<double>& p, double alpha,
                            const DependencyGraph& g);

struct ComponentInfo {
    std::vector<int> nodes;  // local ids, ascending; bit order follows this
    bool is_clique = false;
    std::vector<std::uint64_t> adj;  // within-component adjacency (non-clique)
    std::vector<std::uint64_t> mis;  // maximal independent sets (non-clique)
};

// V[k][.] as a nondecreasing step function: value at r is vals[j] for the
// largest j with breaks[j] <= r, or 0 before breaks[0].
struct StepColumn {
    std::vector<int> breaks;
    std::vector<int> vals;
    int at(int r) const;
};

struct IndNumTable {
    int r_max = 0;  // |kept|
    int r_bar = 0;  // max{r <= r_max : sum_k V[k][r] >= r}, from the unmasked table
    std::vector<std::shared_ptr<const ComponentInfo>> comps;
    std::vector<std::shared_ptr<const StepColumn>> cols;
    std::vector<int> comp_of;  // local node -> component index (0-based)
    // merged views over all columns, rebuilt per table
    std::vector<int> sum_breaks;
    std::vector<long long> sum_vals;   // running sum of all columns
    std::vector<int> max_vals;         // running max of all column values
    int value(int k, int r) const;     // V[k][r]
    long long sum_at(int r) const;     // sum_k V[k][r]
    int max_at(int r) const;           // max_k V[k][r]
    int dense_value(int k, int r) const { return value(k, r); }
};

IndNumTable precompute_table(const ReducedProblem& rp, int guard = kDefaultGuard);

// Recompute only the columns of components overlapping `masked_local`
// (local ids); untouched columns are shared with t, not copied.
IndNumTable update_table(const IndNumTable& t, const ReducedProblem& rp,
                         const NodeSet& masked_local);

enum class Verdict { Reject, NoReject, Undecided };

struct CheckBounds {
    int beta_plus = 0;
    int beta_minus = 0;
    std::vector<int> beta_minus_comp;  // per component
};

struct CheckResult {
    CheckBounds bounds;
    std::vector<Verdict> verdicts;  // size m_local+1, index 0 unused
};

CheckResult cheap_checks(const IndNumTable& t, const ReducedProblem& rp,
                         const NodeSet& masked_local);

// Exact per-hypothesis rejection lower bound on the masked vector:
// max{r <= r_bar : 1 + IndNum(comp[i] restricted to non-neighbors under
// threshold r) + sum of other columns >= r}.
int beta_exact(const ReducedProblem& rp, const IndNumTable& t,
               const NodeSet& masked_local, int i_local);

NodeSet indbh_fast(const std::vector<double>& p, double alpha,
                   const DependencyGraph& g, int guard = kDefaultGuard);

// Closed form when every component is a clique: mask everything except the
// per-block argmins, run BH, and threshold all i by its rejection count.
NodeSet clique_shortcut(const std::vector<double>& p, double alpha,
                        const std::vector<NodeSet>& blocks);

NodeSet indbh_k_fast(const std::vector<double>& p, double alpha,
                     const DependencyGraph& g, int k, int guard = kDefaultGuard);

}  // namespace depfdr

#endif
