#include "depfdr/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace depfdr {

bool DependencyGraph::has_edge(int i, int j) const {
    if (i < 1 || i > m || j < 1 || j > m || i == j) return false;
    const auto& a = adjacency[i];
    return std::binary_search(a.begin(), a.end(), j);
}

int DependencyGraph::edge_count() const {
    long long deg = 0;
    for (int i = 1; i <= m; ++i) deg += static_cast<long long>(adjacency[i].size());
    return static_cast<int>(deg / 2);
}

DependencyGraph build_graph(int m, const std::vector<std::pair<int, int>>& edges) {
    if (m < 0) throw std::invalid_argument("build_graph: m must be nonnegative");
    DependencyGraph g;
    g.m = m;
    g.adjacency.assign(m + 1, {});
    for (auto [i, j] : edges) {
        if (i < 1 || i > m || j < 1 || j > m)
            throw std::invalid_argument("build_graph: node id out of range: (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        if (i == j) continue;  // self-edges are implicit
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
    }
    for (int i = 1; i <= m; ++i) {
        auto& a = g.adjacency[i];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
}

DependencyGraph empty_graph(int m) { return build_graph(m, {}); }

DependencyGraph complete_graph(int m) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) edges.emplace_back(i, j);
    return build_graph(m, edges);
}

DependencyGraph block_graph(int m, int b) {
    if (b < 1) throw std::invalid_argument("block_graph: block size must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int start = 1; start <= m; start += b) {
        int stop = std::min(m, start + b - 1);
        for (int i = start; i <= stop; ++i)
            for (int j = i + 1; j <= stop; ++j) edges.emplace_back(i, j);
    }
    return build_graph(m, edges);
}

DependencyGraph banded_graph(int m, int bprime) {
    if (bprime < 1) throw std::invalid_argument("banded_graph: bandwidth must be >= 1");
    int w = (bprime - 1) / 2;
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= std::min(m, i + w); ++j) edges.emplace_back(i, j);
    return build_graph(m, edges);
}

ComponentIndex connected_components(const DependencyGraph& g) {
    ComponentIndex idx;
    idx.component_of.assign(g.m + 1, -1);
    std::vector<int> stack;
    for (int s = 1; s <= g.m; ++s) {
        if (idx.component_of[s] != -1) continue;
        int cid = static_cast<int>(idx.components.size());
        idx.components.push_back({});
        stack.push_back(s);
        idx.component_of[s] = cid;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            idx.components[cid].push_back(v);
            for (int u : g.adjacency[v]) {
                if (idx.component_of[u] == -1) {
                    idx.component_of[u] = cid;
                    stack.push_back(u);
                }
            }
        }
        std::sort(idx.components[cid].begin(), idx.components[cid].end());
    }
    return idx;
}

InducedSubgraph induced_subgraph(const DependencyGraph& g, const NodeSet& members) {
    InducedSubgraph sub;
    sub.to_local.assign(g.m + 1, 0);
    sub.to_original.assign(members.size() + 1, 0);
    int next = 1;
    for (int v : members) {
        if (v < 1 || v > g.m)
            throw std::invalid_argument("induced_subgraph: node id out of range");
        if (sub.to_local[v] != 0)
            throw std::invalid_argument("induced_subgraph: duplicate node id");
        sub.to_local[v] = next;
        sub.to_original[next] = v;
        ++next;
    }
    sub.graph.m = static_cast<int>(members.size());
    sub.graph.adjacency.assign(members.size() + 1, {});
    for (int v : members) {
        int lv = sub.to_local[v];
        for (int u : g.adjacency[v])
            if (sub.to_local[u] != 0) sub.graph.adjacency[lv].push_back(sub.to_local[u]);
        std::sort(sub.graph.adjacency[lv].begin(), sub.graph.adjacency[lv].end());
    }
    return sub;
}

namespace {

// Bron-Kerbosch with pivoting on the complement graph: maximal cliques of the
// complement are exactly the maximal independent sets.
void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& nbr,
                   std::vector<std::uint64_t>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    std::uint64_t px = p | x;
    int pivot = -1, best = -1;
    for (std::uint64_t t = px; t != 0; t &= t - 1) {
        int u = std::countr_zero(t);
        int deg = std::popcount(p & nbr[u]);
        if (deg > best) {
            best = deg;
            pivot = u;
        }
    }
    std::uint64_t cand = p & ~nbr[pivot];
    while (cand != 0) {
        int v = std::countr_zero(cand);
        std::uint64_t vb = std::uint64_t{1} << v;
        cand &= cand - 1;
        bron_kerbosch(r | vb, p & nbr[v], x & nbr[v], nbr, out);
        p &= ~vb;
        x |= vb;
    }
}

std::vector<std::uint64_t> complement_masks(const std::vector<std::uint64_t>& adj,
                                            std::uint64_t universe) {
    std::vector<std::uint64_t> comp(adj.size());
    for (std::uint64_t t = universe; t != 0; t &= t - 1) {
        int v = std::countr_zero(t);
        comp[v] = universe & ~adj[v] & ~(std::uint64_t{1} << v);
    }
    return comp;
}

std::vector<std::uint64_t> component_adj_masks(const DependencyGraph& g,
                                               const std::vector<int>& nodes) {
    std::vector<int> pos(g.m + 1, -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) pos[nodes[k]] = static_cast<int>(k);
    std::vector<std::uint64_t> adj(nodes.size(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (int u : g.adjacency[nodes[k]])
            if (pos[u] >= 0) adj[k] |= std::uint64_t{1} << pos[u];
    return adj;
}

// cliques of any size have trivial independent sets, so they bypass the
// 64-bit mask kernel and its guard
bool is_clique_component(const DependencyGraph& g, const std::vector<int>& nodes) {
    for (int v : nodes)
        if (g.adjacency[v].size() != nodes.size() - 1) return false;
    return true;
}

void check_guard(std::size_t n, int guard, const char* where) {
    int cap = std::min(guard, 64);
    if (static_cast<int>(n) > cap)
        throw GuardError(std::string(where) + ": connected component of size " +
                         std::to_string(n) + " exceeds guard " + std::to_string(cap));
}

}  // namespace

std::vector<std::uint64_t> maximal_independent_sets_mask(
    const std::vector<std::uint64_t>& adj, std::uint64_t universe) {
    if (universe == 0) return {0};
    auto comp = complement_masks(adj, universe);
    std::vector<std::uint64_t> out;
    bron_kerbosch(0, universe, 0, comp, out);
    return out;
}

int independence_number_mask(const std::vector<std::uint64_t>& adj,
                             std::uint64_t candidates) {
    if (candidates == 0) return 0;
    // greedy simplifications for degree 0 and 1, otherwise branch on a
    // maximum-degree vertex
    int v = -1, maxdeg = -1;
    for (std::uint64_t t = candidates; t != 0; t &= t - 1) {
        int u = std::countr_zero(t);
        int deg = std::popcount(adj[u] & candidates);
        if (deg == 0)
            return 1 + independence_number_mask(adj, candidates & ~(std::uint64_t{1} << u));
        if (deg > maxdeg) {
            maxdeg = deg;
            v = u;
        }
    }
    std::uint64_t vb = std::uint64_t{1} << v;
    if (maxdeg == 1) {
        // taking a degree-1 vertex is always optimal
        return 1 + independence_number_mask(adj, candidates & ~(vb | adj[v]));
    }
    int with_v = 1 + independence_number_mask(adj, candidates & ~(vb | adj[v]));
    int without_v = independence_number_mask(adj, candidates & ~vb);
    return std::max(with_v, without_v);
}

std::vector<NodeSet> maximal_independent_sets(const DependencyGraph& g, int guard) {
    auto comps = connected_components(g);
    std::vector<NodeSet> result = {{}};
    for (const auto& nodes : comps.components) {
        std::vector<NodeSet> local;
        if (is_clique_component(g, nodes)) {
            for (int v : nodes) local.push_back({v});
        } else {
            check_guard(nodes.size(), guard, "maximal_independent_sets");
            auto adj = component_adj_masks(g, nodes);
            auto masks = maximal_independent_sets_mask(
                adj, nodes.size() == 64 ? ~std::uint64_t{0}
                                        : (std::uint64_t{1} << nodes.size()) - 1);
            local.reserve(masks.size());
            for (std::uint64_t mset : masks) {
                NodeSet s;
                for (std::uint64_t t = mset; t != 0; t &= t - 1)
                    s.push_back(nodes[std::countr_zero(t)]);
                local.push_back(std::move(s));
            }
        }
        std::sort(local.begin(), local.end());
        std::vector<NodeSet> next;
        next.reserve(result.size() * local.size());
        for (const auto& a : result)
            for (const auto& b : local) next.push_back(set_union(a, b));
        result = std::move(next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

int independence_number(const DependencyGraph& g, int guard) {
    auto comps = connected_components(g);
    int total = 0;
    for (const auto& nodes : comps.components) {
        if (is_clique_component(g, nodes)) {
            total += 1;
            continue;
        }
        check_guard(nodes.size(), guard, "independence_number");
        auto adj = component_adj_masks(g, nodes);
        std::uint64_t universe = nodes.size() == 64 ? ~std::uint64_t{0}
                                                    : (std::uint64_t{1} << nodes.size()) - 1;
        total += independence_number_mask(adj, universe);
    }
    return total;
}

namespace {

// Lexicographically smallest independent set of the target size within one
// component; nodes are sorted so ascending bit order is ascending id order.
std::uint64_t lex_smallest_mis(const std::vector<std::uint64_t>& adj,
                               std::uint64_t universe) {
    std::uint64_t chosen = 0, cand = universe;
    int remaining = independence_number_mask(adj, universe);
    while (remaining > 0) {
        int v = std::countr_zero(cand);
        std::uint64_t vb = std::uint64_t{1} << v;
        std::uint64_t after = cand & ~(vb | adj[v]);
        if (1 + independence_number_mask(adj, after) == remaining) {
            chosen |= vb;
            cand = after;
            --remaining;
        } else {
            cand &= ~vb;
        }
    }
    return chosen;
}

}  // namespace

NodeSet largest_independent_set(const DependencyGraph& g, int guard) {
    auto comps = connected_components(g);
    NodeSet out;
    for (const auto& nodes : comps.components) {
        if (is_clique_component(g, nodes)) {
            out.push_back(nodes.front());
            continue;
        }
        check_guard(nodes.size(), guard, "largest_independent_set");
        auto adj = component_adj_masks(g, nodes);
        std::uint64_t universe = nodes.size() == 64 ? ~std::uint64_t{0}
                                                    : (std::uint64_t{1} << nodes.size()) - 1;
        std::uint64_t mset = lex_smallest_mis(adj, universe);
        for (std::uint64_t t = mset; t != 0; t &= t - 1)
            out.push_back(nodes[std::countr_zero(t)]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

NodeSet largest_ind_containing(const DependencyGraph& g, const std::vector<double>& p,
                               double alpha, int i, int r, int guard) {
    if (static_cast<int>(p.size()) != g.m)
        throw std::invalid_argument("largest_ind_containing: p-value count mismatch");
    if (i < 1 || i > g.m)
        throw std::invalid_argument("largest_ind_containing: node id out of range");
    double thr = alpha * r / g.m;
    NodeSet q;
    for (int j = 1; j <= g.m; ++j) {
        if (j == i || g.has_edge(i, j)) continue;
        if (p[j - 1] <= thr) q.push_back(j);
    }
    auto sub = induced_subgraph(g, q);
    NodeSet best_local = largest_independent_set(sub.graph, guard);
    NodeSet out = {i};
    for (int lv : best_local) out.push_back(sub.to_original[lv]);
    std::sort(out.begin(), out.end());
    return out;
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_contains(const NodeSet& a, int x) {
    return std::binary_search(a.begin(), a.end(), x);
}

bool is_subset(const NodeSet& a, const NodeSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace depfdr
