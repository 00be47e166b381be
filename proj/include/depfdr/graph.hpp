#ifndef DEPFDR_GRAPH_HPP
#define DEPFDR_GRAPH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace depfdr {

// Node ids are 1-based everywhere in the public API.
// A node set is a sorted vector of unique ids.
using NodeSet = std::vector<int>;

// Thrown when an exact independent-set computation would have to run on a
// component larger than the configured guard.
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kDefaultGuard = 64;

// Undirected graph on {1..m}. Self-edges are implicit and never stored, so
// adjacency[i] is the punctured neighborhood of i.
struct DependencyGraph {
    int m = 0;
    std::vector<std::vector<int>> adjacency;  // size m+1, index 0 unused; sorted

    bool has_edge(int i, int j) const;
    int edge_count() const;
};

struct ComponentIndex {
    std::vector<int> component_of;          // size m+1; 0-based component ids
    std::vector<std::vector<int>> components;  // ordered by smallest member
};

struct InducedSubgraph {
    DependencyGraph graph;           // nodes relabeled 1..|B|
    std::vector<int> to_original;    // size |B|+1; local id -> original id
    std::vector<int> to_local;       // size m+1; 0 where absent
};

DependencyGraph build_graph(int m, const std::vector<std::pair<int, int>>& edges);

DependencyGraph empty_graph(int m);
DependencyGraph complete_graph(int m);
// Consecutive cliques of size b (last one possibly smaller when b does not divide m).
DependencyGraph block_graph(int m, int b);
// Edge between i,j iff |i-j| <= floor((bprime-1)/2).
DependencyGraph banded_graph(int m, int bprime);

ComponentIndex connected_components(const DependencyGraph& g);

InducedSubgraph induced_subgraph(const DependencyGraph& g, const NodeSet& members);

// All maximal independent sets; deterministic (each set sorted, list in
// lexicographic order). The 0-node graph yields a single empty set.
std::vector<NodeSet> maximal_independent_sets(const DependencyGraph& g,
                                              int guard = kDefaultGuard);

int independence_number(const DependencyGraph& g, int guard = kDefaultGuard);

// The lexicographically smallest maximum independent set.
NodeSet largest_independent_set(const DependencyGraph& g, int guard = kDefaultGuard);

// {i} union a largest independent set of D[Q_{-i}(r)] with
// Q_{-i}(r) = {j outside N_i : p_j <= alpha*r/m}. Only the size is
// contract-stable; ties are broken deterministically.
NodeSet largest_ind_containing(const DependencyGraph& g, const std::vector<double>& p,
                               double alpha, int i, int r, int guard = kDefaultGuard);

// --- bitmask kernels shared with the engine (components up to 64 nodes) ---

// Maximal independent sets of a <=64-node graph given per-node adjacency
// masks; returns node masks.
std::vector<std::uint64_t> maximal_independent_sets_mask(
    const std::vector<std::uint64_t>& adj, std::uint64_t universe);

// Size of the largest independent subset of `candidates`.
int independence_number_mask(const std::vector<std::uint64_t>& adj,
                             std::uint64_t candidates);

// set helpers
NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);
bool set_contains(const NodeSet& a, int x);
bool is_subset(const NodeSet& a, const NodeSet& b);

}  // namespace depfdr

#endif
