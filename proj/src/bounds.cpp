#include "depfdr/bounds.hpp"

#include <cmath>
#include <string>

#include "depfdr/procedures.hpp"

namespace depfdr {

void validate_clique_cover(const DependencyGraph& g, const CliqueCover& cover) {
    std::vector<char> seen(g.m + 1, 0);
    for (const auto& b : cover.blocks) {
        for (int v : b) {
            if (v < 1 || v > g.m)
                throw std::invalid_argument("clique cover: node out of range");
            if (seen[v]) throw std::invalid_argument("clique cover: blocks overlap");
            seen[v] = 1;
        }
        for (std::size_t x = 0; x < b.size(); ++x)
            for (std::size_t y = x + 1; y < b.size(); ++y)
                if (!g.has_edge(b[x], b[y]))
                    throw std::invalid_argument("clique cover: block is not a clique");
    }
    for (int v = 1; v <= g.m; ++v)
        if (!seen[v])
            throw std::invalid_argument("clique cover: node " + std::to_string(v) +
                                        " uncovered");
}

double fdr_upper_bound(const DependencyGraph& g, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("fdr_upper_bound: alpha must be in [0,1]");
    double m = static_cast<double>(g.m);
    double total = 0.0;
    for (int i = 1; i <= g.m; ++i) {
        double ni = static_cast<double>(g.adjacency[i].size()) + 1.0;  // |N_i|
        double li = ni <= 1.0 ? 1.0 : ni - (ni - 1.0) * std::pow(m, -1.0 / (ni - 1.0));
        total += li;
    }
    return alpha * total / m;
}

double fdr_lower_bound(const CliqueCover& cover, int m, double alpha) {
    if (m < 1) throw std::invalid_argument("fdr_lower_bound: m must be >= 1");
    double prod = 1.0;
    for (std::size_t k = 0; k < cover.blocks.size(); ++k) {
        int b = static_cast<int>(cover.blocks[k].size());
        double factor = 1.0 - (alpha * b / m) * harmonic_number(b);
        if (factor <= 0.0)
            throw std::invalid_argument(
                "fdr_lower_bound: alpha too large for block " + std::to_string(k) +
                " (size " + std::to_string(b) + ")");
        prod *= factor;
    }
    return 1.0 - prod;
}

double bygraph_level(int m, int b, double alpha) {
    if (b < 1 || b > m) throw std::invalid_argument("bygraph_level: need 1 <= b <= m");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("bygraph_level: alpha must be in [0,1]");
    double frac = static_cast<double>(b) / m;
    return m * (1.0 - std::pow(1.0 - alpha, frac)) / (b * harmonic_number(b));
}

double bygraph_level_bisect(int m, int b, double alpha, double tol) {
    if (b < 1 || b > m) throw std::invalid_argument("bygraph_level_bisect: need 1 <= b <= m");
    double hb = harmonic_number(b);
    auto attained = [&](double a) {
        return 1.0 - std::pow(1.0 - (a * b / m) * hb, static_cast<double>(m) / b);
    };
    double lo = 0.0, hi = static_cast<double>(m) / (b * hb);  // factor stays >= 0
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (attained(mid) <= alpha)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace depfdr
