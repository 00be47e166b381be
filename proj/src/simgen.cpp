#include "depfdr/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "depfdr/oracle.hpp"
#include "depfdr/procedures.hpp"

namespace depfdr {

namespace {

double normal_p_two_sided(double x) { return std::erfc(std::abs(x) / std::sqrt(2.0)); }
double normal_p_upper(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

void check_block_rho(int b, double rho) {
    if (b < 1) throw std::invalid_argument("block size must be >= 1");
    if (b > 1 && (rho <= -1.0 / (b - 1) || rho > 1.0))
        throw std::invalid_argument("rho outside the positive-definite range (-1/(b-1), 1]");
}

NodeSet place_uniform(int m, double pi0, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    NodeSet h1;
    for (int i = 1; i <= m; ++i)
        if (unif(rng) > pi0) h1.push_back(i);
    return h1;
}

NodeSet draw_placement(const SimScenario& sc, std::mt19937_64& rng) {
    if (sc.placement == PlacementKind::Uniform)
        return place_uniform(sc.m, sc.pi0, rng);
    std::uniform_int_distribution<std::uint64_t> anyseed;
    return place_clustered_nonnulls(sc.m, sc.pi0, sc.lambda0, sc.tau, anyseed(rng));
}

std::vector<double> draw_means(const SimScenario& sc, const NodeSet& h1,
                               std::mt19937_64& rng) {
    std::vector<double> mu(sc.m, 0.0);
    std::exponential_distribution<double> ex(1.0);
    for (int i : h1)
        mu[i - 1] = sc.signal == SignalKind::Fixed ? sc.mu_star : sc.mu_star * ex(rng);
    return mu;
}

// X = sqrt(1-rho) (eps - mean) + sqrt(1+(b-1)rho) mean, per block; valid for
// the whole positive-definite range including negative rho
void sample_equicorrelated(std::vector<double>& x, int m, int b, double rho,
                           std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double lo = std::sqrt(1.0 - rho);
    for (int start = 0; start < m; start += b) {
        int n = std::min(b, m - start);
        double hi = std::sqrt(1.0 + (n - 1) * rho);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            x[start + j] = gauss(rng);
            sum += x[start + j];
        }
        double mean = sum / n;
        for (int j = 0; j < n; ++j)
            x[start + j] = lo * (x[start + j] - mean) + hi * mean;
    }
}

// Banded lower Cholesky of the Toeplitz covariance rho^|i-j| truncated at
// width w; L stored by diagonal: L[d][j] = L_{j+d,j}
std::vector<std::vector<double>> banded_cholesky(int m, int w, double rho) {
    std::vector<std::vector<double>> L(w + 1, std::vector<double>(m, 0.0));
    auto sigma = [&](int i, int j) {
        int d = std::abs(i - j);
        if (d > w) return 0.0;
        return d == 0 ? 1.0 : std::pow(rho, d);
    };
    for (int j = 0; j < m; ++j) {
        for (int i = j; i <= std::min(m - 1, j + w); ++i) {
            double s = 0.0;
            for (int k = std::max(0, i - w); k < j; ++k)
                s += L[i - k][k] * L[j - k][k];
            if (i == j) {
                double d = sigma(j, j) - s;
                if (d <= 0.0)
                    throw std::invalid_argument(
                        "banded covariance is not positive definite at column " +
                        std::to_string(j + 1));
                L[0][j] = std::sqrt(d);
            } else {
                L[i - j][j] = (sigma(i, j) - s) / L[0][j];
            }
        }
    }
    return L;
}

}  // namespace

DependencyGraph scenario_graph(const SimScenario& sc) {
    return sc.dependence == DependenceKind::Block ? block_graph(sc.m, sc.b)
                                                  : banded_graph(sc.m, sc.b);
}

SimDraw gen_block_gaussian(const SimScenario& sc, std::uint64_t seed) {
    check_block_rho(sc.b, sc.rho);
    std::mt19937_64 rng(seed);
    SimDraw out;
    out.h1 = draw_placement(sc, rng);
    std::vector<double> mu = draw_means(sc, out.h1, rng);
    std::vector<double> x(sc.m);
    sample_equicorrelated(x, sc.m, sc.b, sc.rho, rng);
    out.p.resize(sc.m);
    for (int i = 0; i < sc.m; ++i) {
        double v = x[i] + mu[i];
        out.p[i] = sc.side == SideKind::TwoSided ? normal_p_two_sided(v)
                                                 : normal_p_upper(v);
    }
    return out;
}

SimDraw gen_banded_gaussian(const SimScenario& sc, std::uint64_t seed) {
    if (sc.b < 1) throw std::invalid_argument("bandwidth must be >= 1");
    int w = (sc.b - 1) / 2;
    auto L = banded_cholesky(sc.m, w, sc.rho);
    std::mt19937_64 rng(seed);
    SimDraw out;
    out.h1 = draw_placement(sc, rng);
    std::vector<double> mu = draw_means(sc, out.h1, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(sc.m);
    for (int i = 0; i < sc.m; ++i) z[i] = gauss(rng);
    out.p.resize(sc.m);
    for (int i = 0; i < sc.m; ++i) {
        double v = mu[i];
        for (int d = 0; d <= std::min(w, i); ++d) v += L[d][i - d] * z[i - d];
        out.p[i] = sc.side == SideKind::TwoSided ? normal_p_two_sided(v)
                                                 : normal_p_upper(v);
    }
    return out;
}

SimDraw gen_gaussian(const SimScenario& sc, std::uint64_t seed) {
    return sc.dependence == DependenceKind::Block ? gen_block_gaussian(sc, seed)
                                                  : gen_banded_gaussian(sc, seed);
}

NodeSet place_clustered_nonnulls(int m, double pi0, double lambda0, double tau,
                                 std::uint64_t seed) {
    if (lambda0 <= 0.0 || tau <= 0.0)
        throw std::invalid_argument("clustered placement needs lambda0 > 0 and tau > 0");
    std::mt19937_64 rng(seed);
    double eta0 = (1.0 - pi0) * m / lambda0;
    std::poisson_distribution<int> center_count(eta0);
    std::uniform_int_distribution<int> site(1, m);
    std::poisson_distribution<int> daughters(lambda0);
    // discrete Gaussian offsets, truncated where the mass is negligible
    int half = static_cast<int>(std::ceil(12.0 * tau));
    std::vector<double> weights(2 * half + 1);
    for (int d = -half; d <= half; ++d)
        weights[d + half] = std::exp(-0.5 * d * d / (tau * tau));
    std::discrete_distribution<int> offset(weights.begin(), weights.end());
    std::set<int> chosen;
    int n_centers = center_count(rng);
    for (int c = 0; c < n_centers; ++c) {
        int center = site(rng);
        int n = daughters(rng);
        for (int d = 0; d < n; ++d) {
            int pos = center + offset(rng) - half;
            if (pos >= 1 && pos <= m) chosen.insert(pos);
        }
    }
    return NodeSet(chosen.begin(), chosen.end());
}

double tune_mu_star(const SimScenario& skeleton, double tarpow, double alpha,
                    std::uint64_t seed) {
    if (tarpow <= 0.0 || tarpow >= 1.0)
        throw std::invalid_argument("tune_mu_star: tarpow must be in (0,1)");
    const int reps = 200;
    const double tol = 0.01;
    auto power = [&](double mu) {
        SimScenario sc = skeleton;
        sc.mu_star = mu;
        // per-rep results summed serially so the value is identical for any
        // thread count
        std::vector<double> val(reps, -1.0);
#pragma omp parallel for schedule(dynamic)
        for (int rep = 0; rep < reps; ++rep) {
            SimDraw d = gen_gaussian(sc, substream_seed(seed, rep));
            if (d.h1.empty()) continue;
            NodeSet r = bh(d.p, alpha);
            val[rep] = static_cast<double>(set_intersection(r, d.h1).size()) /
                       static_cast<double>(d.h1.size());
        }
        double total = 0.0;
        long long used = 0;
        for (int rep = 0; rep < reps; ++rep)
            if (val[rep] >= 0.0) {
                total += val[rep];
                ++used;
            }
        return used > 0 ? total / used : 0.0;
    };
    double lo = 0.0, hi = 20.0;
    if (power(hi) < tarpow - tol)
        throw std::invalid_argument("tune_mu_star: target power unreachable on [0,20]");
    double mid = hi;
    for (int it = 0; it < 60; ++it) {
        mid = 0.5 * (lo + hi);
        double pw = power(mid);
        if (std::abs(pw - tarpow) <= tol) return mid;
        if (pw < tarpow)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-4) break;
    }
    return mid;
}

std::vector<double> gen_block_adversarial(int m, const CliqueCover& cover,
                                          double alpha, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> p(m, 0.0);
    std::vector<char> seen(m + 1, 0);
    for (const auto& block : cover.blocks)
        for (int v : block) {
            if (v < 1 || v > m)
                throw std::invalid_argument("gen_block_adversarial: node out of range");
            if (seen[v])
                throw std::invalid_argument("gen_block_adversarial: blocks overlap");
            seen[v] = 1;
        }
    for (int v = 1; v <= m; ++v)
        if (!seen[v]) throw std::invalid_argument("gen_block_adversarial: node uncovered");
    for (const auto& block : cover.blocks) {
        int b = static_cast<int>(block.size());
        double base = alpha * b / m;
        double p0 = 1.0 - base * harmonic_number(b);
        if (p0 < 0.0)
            throw std::invalid_argument(
                "gen_block_adversarial: alpha too large for block size " +
                std::to_string(b));
        // s = 0 with the leftover mass, else s = j with mass base/j
        double u = unif(rng);
        int s = 0;
        double acc = p0;
        while (s < b && u > acc) {
            ++s;
            acc += base / s;
        }
        NodeSet members = block;
        std::shuffle(members.begin(), members.end(), rng);
        for (int j = 0; j < b; ++j) {
            int v = members[j];
            if (j < s)
                p[v - 1] = alpha * (s - 1 + unif(rng)) / m;
            else
                p[v - 1] = base + (1.0 - base) * unif(rng);
        }
    }
    return p;
}

std::pair<std::vector<double>, DependencyGraph> gen_negative_gaussian(
    int m, int b, double rho_neg, std::uint64_t seed) {
    if (rho_neg >= 0.0) throw std::invalid_argument("gen_negative_gaussian: rho must be < 0");
    check_block_rho(b, rho_neg);
    std::mt19937_64 rng(seed);
    std::vector<double> x(m);
    sample_equicorrelated(x, m, b, rho_neg, rng);
    std::vector<double> p(m);
    for (int i = 0; i < m; ++i) p[i] = normal_p_upper(x[i]);
    return {std::move(p), block_graph(m, b)};
}

std::vector<MetricSet> compute_metrics(const std::vector<RepRecord>& runs,
                                       std::size_t n_methods) {
    std::vector<MetricSet> out(n_methods);
    for (std::size_t meth = 0; meth < n_methods; ++meth) {
        double fsum = 0.0, fsq = 0.0;
        double tsum = 0.0, tsq = 0.0;
        double rsum = 0.0, rsq = 0.0;
        long long treps = 0, rreps = 0;
        for (const auto& run : runs) {
            if (run.rejections.size() != n_methods)
                throw std::invalid_argument("compute_metrics: ragged replication record");
            const NodeSet& r = run.rejections[meth];
            double fdp = 0.0;
            if (!r.empty())
                fdp = static_cast<double>(set_difference(r, run.h1).size()) /
                      static_cast<double>(r.size());
            fsum += fdp;
            fsq += fdp * fdp;
            NodeSet bh_tp = set_intersection(run.bh, run.h1);
            if (!bh_tp.empty()) {
                double v = static_cast<double>(set_intersection(r, run.h1).size()) /
                           static_cast<double>(bh_tp.size());
                tsum += v;
                tsq += v * v;
                ++treps;
            }
            if (!run.bh.empty()) {
                double v = static_cast<double>(r.size()) /
                           static_cast<double>(run.bh.size());
                rsum += v;
                rsq += v * v;
                ++rreps;
            }
        }
        MetricSet& ms = out[meth];
        ms.reps = static_cast<long long>(runs.size());
        auto finish = [](double sum, double sq, long long n, double& mean, double& se) {
            mean = sum / n;
            se = n > 1 ? std::sqrt(std::max(0.0, (sq - sum * sum / n) / (n - 1)) / n)
                       : 0.0;
        };
        if (ms.reps > 0) finish(fsum, fsq, ms.reps, ms.fdr, ms.fdr_se);
        ms.tp_reps = treps;
        ms.rej_reps = rreps;
        if (treps > 0) {
            ms.tp_defined = true;
            finish(tsum, tsq, treps, ms.tp_ratio, ms.tp_se);
        }
        if (rreps > 0) {
            ms.rej_defined = true;
            finish(rsum, rsq, rreps, ms.rej_ratio, ms.rej_se);
        }
    }
    return out;
}

}  // namespace depfdr
