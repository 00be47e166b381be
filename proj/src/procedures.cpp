#include "depfdr/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace depfdr {

namespace {

void check_input(const std::vector<double>& p, double alpha) {
    if (p.empty()) throw std::invalid_argument("p-value vector must be nonempty");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("alpha must be in [0,1]");
}

NodeSet threshold_set(const std::vector<double>& p, double thr) {
    NodeSet out;
    for (int i = 1; i <= static_cast<int>(p.size()); ++i)
        if (p[i - 1] <= thr) out.push_back(i);
    return out;
}

}  // namespace

std::vector<double> mask(const std::vector<double>& p, const NodeSet& a) {
    std::vector<double> q = p;
    for (int i : a) {
        if (i < 1 || i > static_cast<int>(p.size()))
            throw std::invalid_argument("mask: index out of range");
        q[i - 1] = 1.0;
    }
    return q;
}

NodeSet bh(const std::vector<double>& p, double alpha) {
    check_input(p, alpha);
    int m = static_cast<int>(p.size());
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    int rstar = 0;
    for (int r = m; r >= 1; --r) {
        if (sorted[r - 1] <= alpha * r / m) {
            rstar = r;
            break;
        }
    }
    if (rstar == 0) return {};
    return threshold_set(p, alpha * rstar / m);
}

NodeSet step_down_bh(const std::vector<double>& p, double alpha) {
    check_input(p, alpha);
    int m = static_cast<int>(p.size());
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    int rstar = 0;
    while (rstar < m && sorted[rstar] <= alpha * (rstar + 1) / m) ++rstar;
    if (rstar == 0) return {};
    return threshold_set(p, alpha * rstar / m);
}

NodeSet bonferroni(const std::vector<double>& p, double alpha) {
    check_input(p, alpha);
    return threshold_set(p, alpha / static_cast<double>(p.size()));
}

double harmonic_number(int m) {
    // compensated summation, small terms first
    double sum = 0.0, c = 0.0;
    for (int j = m; j >= 1; --j) {
        double y = 1.0 / j - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

NodeSet by(const std::vector<double>& p, double alpha) {
    check_input(p, alpha);
    return bh(p, alpha / harmonic_number(static_cast<int>(p.size())));
}

NodeSet ebh_comparator(const std::vector<double>& p, double alpha) {
    check_input(p, alpha);
    if (alpha > 0.5)
        throw std::invalid_argument("ebh_comparator: alpha must be <= 0.5");
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        q[i] = std::min(1.0, 2.0 * std::sqrt(p[i]));
    return bh(q, std::sqrt(2.0 * alpha));
}

NodeSet naive_adjusted_bh(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g) {
    check_input(p, alpha);
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("naive_adjusted_bh: graph size mismatch");
    int m = g.m;
    NodeSet out;
    for (int i = 1; i <= m; ++i) {
        std::vector<double> q = mask(p, g.adjacency[i]);
        q[i - 1] = 0.0;
        if (p[i - 1] <= alpha * static_cast<double>(bh(q, alpha).size()) / m)
            out.push_back(i);
    }
    return out;
}

NodeSet indbh_reference(const std::vector<double>& p, double alpha,
                        const DependencyGraph& g, int guard) {
    check_input(p, alpha);
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("indbh_reference: graph size mismatch");
    int m = g.m;
    // every member j of a certificate C has p_j <= alpha|C|/m, so all of C is
    // BH-rejected and |C| <= |BH rejection set|
    NodeSet candidates = bh(p, alpha);
    int rmax = static_cast<int>(candidates.size());
    NodeSet out;
    for (int i : candidates) {
        bool rejected = false;
        for (int r = 1; r <= rmax && !rejected; ++r) {
            if (p[i - 1] > alpha * r / m) continue;
            NodeSet cert = largest_ind_containing(g, p, alpha, i, r, guard);
            if (static_cast<int>(cert.size()) >= r) rejected = true;
        }
        if (rejected) out.push_back(i);
    }
    return out;
}

namespace {

struct GapChaseMemo {
    const std::vector<double>& p;
    double alpha;
    const DependencyGraph& g;
    int guard;
    std::map<std::pair<int, NodeSet>, NodeSet> cache;

    // level 0 is the base procedure applied to the masked vector
    NodeSet base_indbh(const NodeSet& masked) {
        return indbh_reference(mask(p, masked), alpha, g, guard);
    }
    NodeSet base_bh(const NodeSet& masked) { return bh(mask(p, masked), alpha); }

    NodeSet eval(int level, const NodeSet& masked, bool su_base) {
        auto key = std::make_pair(level, masked);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        NodeSet result;
        if (level == 1) {
            result = su_base ? base_bh(masked) : base_indbh(masked);
        } else {
            std::vector<double> q = mask(p, masked);
            int m = g.m;
            for (int i = 1; i <= m; ++i) {
                NodeSet sub_mask = set_union(masked, g.adjacency[i]);
                NodeSet inner = eval(level - 1, sub_mask, su_base);
                std::size_t count = inner.size() + (set_contains(inner, i) ? 0 : 1);
                if (q[i - 1] <= alpha * static_cast<double>(count) / m)
                    result.push_back(i);
            }
        }
        cache.emplace(key, result);
        return result;
    }
};

}  // namespace

NodeSet indbh_k_reference(const std::vector<double>& p, double alpha,
                          const DependencyGraph& g, int k, int guard) {
    if (k < 1) throw std::invalid_argument("indbh_k_reference: k must be >= 1");
    check_input(p, alpha);
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("indbh_k_reference: graph size mismatch");
    GapChaseMemo memo{p, alpha, g, guard, {}};
    return memo.eval(k, {}, /*su_base=*/false);
}

NodeSet su_fixed_point(const std::vector<double>& p, double alpha,
                       const DependencyGraph& g) {
    check_input(p, alpha);
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("su_fixed_point: graph size mismatch");
    GapChaseMemo memo{p, alpha, g, kDefaultGuard, {}};
    // the fixed point is sought among the iterates at level >= 2: the BH
    // starting point is not neighbor-blind, so a coincidental match between
    // levels 1 and 2 can still shrink at level 3
    NodeSet prev = memo.eval(2, {}, /*su_base=*/true);
    for (int level = 3; level <= g.m + 3; ++level) {
        NodeSet next = memo.eval(level, {}, /*su_base=*/true);
        if (next == prev) return next;
        prev = std::move(next);
    }
    return prev;  // unreachable: iterates shrink until fixed
}

NodeSet gap_chase_once(const std::vector<double>& p, double alpha,
                       const DependencyGraph& g, const Procedure& initial) {
    check_input(p, alpha);
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("gap_chase_once: graph size mismatch");
    int m = g.m;
    NodeSet out;
    for (int i = 1; i <= m; ++i) {
        NodeSet inner = initial(mask(p, g.adjacency[i]), alpha, g);
        std::size_t count = inner.size() + (set_contains(inner, i) ? 0 : 1);
        if (p[i - 1] <= alpha * static_cast<double>(count) / m) out.push_back(i);
    }
    return out;
}

NodeSet randomized_prune(const std::vector<double>& p, double alpha,
                         const DependencyGraph& g, const Procedure& initial,
                         const std::vector<double>& u) {
    check_input(p, alpha);
    if (u.size() != p.size())
        throw std::invalid_argument("randomized_prune: uniform vector length mismatch");
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("randomized_prune: graph size mismatch");
    int m = g.m;
    constexpr double kSentinel = 2.0;  // any value above every BH(1) threshold
    std::vector<double> utilde(p.size(), kSentinel);
    for (int i = 1; i <= m; ++i) {
        NodeSet inner = initial(mask(p, g.adjacency[i]), alpha, g);
        std::size_t count = inner.size() + (set_contains(inner, i) ? 0 : 1);
        double adj_thr = alpha * static_cast<double>(count) / m;
        if (p[i - 1] <= adj_thr)
            utilde[i - 1] = u[i - 1] * static_cast<double>(count) / m;
    }
    return bh(utilde, 1.0);
}

}  // namespace depfdr
