#include "depfdr/oracle.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace depfdr {

NodeSet brute_force_indbh(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g, int guard) {
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("brute_force_indbh: graph size mismatch");
    if (g.m > guard || g.m > 62)
        throw GuardError("brute_force_indbh: m=" + std::to_string(g.m) +
                         " exceeds guard " + std::to_string(guard));
    int m = g.m;
    std::vector<std::uint64_t> adj(m, 0);
    for (int i = 1; i <= m; ++i)
        for (int j : g.adjacency[i]) adj[i - 1] |= std::uint64_t{1} << (j - 1);
    std::vector<bool> rejected(m + 1, false);
    for (std::uint64_t c = 1; c < (std::uint64_t{1} << m); ++c) {
        bool independent = true;
        int size = 0;
        double pmax = 0.0;
        for (std::uint64_t t = c; t != 0 && independent; t &= t - 1) {
            int v = std::countr_zero(t);
            if ((adj[v] & c) != 0) independent = false;
            ++size;
            pmax = std::max(pmax, p[v]);
        }
        if (!independent) continue;
        if (pmax <= alpha * size / m)
            for (std::uint64_t t = c; t != 0; t &= t - 1)
                rejected[std::countr_zero(t) + 1] = true;
    }
    NodeSet out;
    for (int i = 1; i <= m; ++i)
        if (rejected[i]) out.push_back(i);
    return out;
}

NodeSet brute_force_indbh_k(const std::vector<double>& p, double alpha,
                            const DependencyGraph& g, int k, int guard) {
    if (k < 1) throw std::invalid_argument("brute_force_indbh_k: k must be >= 1");
    if (k == 1) return brute_force_indbh(p, alpha, g, guard);
    int m = g.m;
    NodeSet out;
    for (int i = 1; i <= m; ++i) {
        NodeSet inner =
            brute_force_indbh_k(mask(p, g.adjacency[i]), alpha, g, k - 1, guard);
        std::size_t count = inner.size() + (set_contains(inner, i) ? 0 : 1);
        if (p[i - 1] <= alpha * static_cast<double>(count) / m) out.push_back(i);
    }
    return out;
}

PropertyReport check_self_consistency(const Procedure& proc,
                                      const std::vector<Instance>& instances) {
    PropertyReport rep;
    rep.property = PropertyReport::Property::SelfConsistency;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& inst = instances[n];
        NodeSet r = proc(inst.p, inst.alpha, inst.g);
        ++rep.checked;
        double thr = inst.alpha * static_cast<double>(r.size()) / inst.g.m;
        for (int i : r)
            if (inst.p[i - 1] > thr)
                rep.violations.push_back(
                    {n, i, "rejected p exceeds alpha*|R|/m threshold"});
    }
    return rep;
}

PropertyReport check_monotonicity(const Procedure& proc,
                                  const std::vector<Instance>& instances,
                                  std::uint64_t seed, int pairs_per_instance) {
    PropertyReport rep;
    rep.property = PropertyReport::Property::Monotonicity;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& inst = instances[n];
        NodeSet r = proc(inst.p, inst.alpha, inst.g);
        std::vector<std::vector<double>> shrunk;
        std::vector<double> halved(inst.p.size());
        for (std::size_t j = 0; j < inst.p.size(); ++j) halved[j] = inst.p[j] / 2.0;
        shrunk.push_back(halved);
        for (int t = 0; t < pairs_per_instance; ++t) {
            std::vector<double> q(inst.p.size());
            for (std::size_t j = 0; j < inst.p.size(); ++j) q[j] = inst.p[j] * unif(rng);
            shrunk.push_back(std::move(q));
        }
        for (const auto& q : shrunk) {
            ++rep.checked;
            NodeSet rq = proc(q, inst.alpha, inst.g);
            if (!is_subset(r, rq))
                rep.violations.push_back(
                    {n, -1, "rejections lost after shrinking p-values"});
        }
    }
    return rep;
}

PropertyReport check_neighbor_blindness(const Procedure& proc,
                                        const std::vector<Instance>& instances) {
    PropertyReport rep;
    rep.property = PropertyReport::Property::NeighborBlindness;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& inst = instances[n];
        NodeSet r = proc(inst.p, inst.alpha, inst.g);
        for (int i = 1; i <= inst.g.m; ++i) {
            ++rep.checked;
            NodeSet rm = proc(mask(inst.p, inst.g.adjacency[i]), inst.alpha, inst.g);
            if (set_contains(r, i) != set_contains(rm, i))
                rep.violations.push_back(
                    {n, i, "rejection changed after masking neighbors"});
        }
    }
    return rep;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t rep) {
    // splitmix64 over the combined state
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (rep + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

McFdrResult mc_fdr(const Procedure& proc, const DependencyGraph& g, double alpha,
                   const DrawFn& gen, long long reps, std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("mc_fdr: reps must be >= 1");
    std::vector<double> fdp(reps, 0.0);
    std::vector<double> nrej(reps, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long rep = 0; rep < reps; ++rep) {
        auto [p, h1] = gen(substream_seed(seed, static_cast<std::uint64_t>(rep)));
        NodeSet r = proc(p, alpha, g);
        nrej[rep] = static_cast<double>(r.size());
        if (!r.empty()) {
            std::size_t false_count = set_difference(r, h1).size();
            fdp[rep] = static_cast<double>(false_count) / static_cast<double>(r.size());
        }
    }
    double sum = 0.0, sumsq = 0.0, rejsum = 0.0;
    for (long long rep = 0; rep < reps; ++rep) {
        sum += fdp[rep];
        sumsq += fdp[rep] * fdp[rep];
        rejsum += nrej[rep];
    }
    McFdrResult out;
    out.reps = reps;
    out.fdr_hat = sum / reps;
    out.mean_rejections = rejsum / reps;
    if (reps > 1) {
        double var = (sumsq - sum * sum / reps) / (reps - 1);
        out.se = std::sqrt(std::max(0.0, var) / reps);
    }
    return out;
}

}  // namespace depfdr
