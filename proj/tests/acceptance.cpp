// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Pass criterion numbers as
// arguments to run a subset, e.g. `acceptance 7 8`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "depfdr/bounds.hpp"
#include "depfdr/engine.hpp"
#include "depfdr/graph.hpp"
#include "depfdr/oracle.hpp"
#include "depfdr/procedures.hpp"
#include "depfdr/simgen.hpp"

using namespace depfdr;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

DependencyGraph demo_graph() {
    return build_graph(5, {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}});
}

const std::vector<double> kDemoP = {0.02, 0.02, 0.01, 0.02, 0.04};
constexpr double kDemoAlpha = 0.05;

struct RandomInstanceGen {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> unif{0.0, 1.0};

    explicit RandomInstanceGen(std::uint64_t seed) : rng(seed) {}

    DependencyGraph graph(int max_m, int style) {
        // style cycles: three edge densities, block graphs, banded graphs
        int m = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_m - 1));
        switch (style % 5) {
            case 0:
            case 1:
            case 2: {
                double dens = (style % 5 == 0) ? 0.1 : (style % 5 == 1) ? 0.3 : 0.6;
                std::vector<std::pair<int, int>> edges;
                for (int i = 1; i <= m; ++i)
                    for (int j = i + 1; j <= m; ++j)
                        if (unif(rng) < dens) edges.emplace_back(i, j);
                return build_graph(m, edges);
            }
            case 3: {
                int b = 2 + static_cast<int>(rng() % 3);
                return block_graph(m, std::min(b, m));
            }
            default: {
                int bw = 3 + 2 * static_cast<int>(rng() % 2);
                return banded_graph(m, std::min(bw, m));
            }
        }
    }

    std::vector<double> pvalues(int m) {
        // mixture of Uniform[0,1] and Beta(0.1, 1) (heavy mass near zero)
        std::vector<double> p(m);
        for (auto& v : p)
            v = unif(rng) < 0.5 ? unif(rng) : std::pow(unif(rng), 10.0);
        return p;
    }

    double alpha() { return 0.05 + 0.4 * unif(rng); }
};

// upper tail of the Kolmogorov distribution: P(sup-diff * sqrt(n) > lambda)
double kolmogorov_pvalue(double lambda) {
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::max(0.0, std::min(1.0, 2.0 * sum));
}

double ks_statistic(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double d = 0.0;
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(v[i] - lo), std::abs(v[i] - hi)));
    }
    return d;
}

struct NullMc {
    double fdr = 0.0;
    double se = 0.0;
};

// FDR under a global null is the rejection probability
NullMc global_null_fdr(const std::vector<char>& any_rejection) {
    NullMc r;
    double n = static_cast<double>(any_rejection.size());
    for (char c : any_rejection) r.fdr += c ? 1.0 : 0.0;
    r.fdr /= n;
    r.se = std::sqrt(r.fdr * (1.0 - r.fdr) / n);
    return r;
}

bool criterion1() {
    auto g = demo_graph();
    NodeSet bh_set, ind, ind2;
    // best of several repetitions: the first call pays one-time page-fault
    // and allocator costs that are not part of the computation being bounded
    double ms = 1e9;
    for (int rep = 0; rep < 10; ++rep) {
        auto t0 = clock_type::now();
        bh_set = bh(kDemoP, kDemoAlpha);
        ind = indbh_fast(kDemoP, kDemoAlpha, g);
        ind2 = indbh_k_fast(kDemoP, kDemoAlpha, g, 2);
        ms = std::min(ms, ms_since(t0));
    }
    bool ok = bh_set == NodeSet{1, 2, 3, 4, 5} && ind == NodeSet{1, 2, 3, 4} &&
              ind2 == NodeSet{1, 2, 3, 4, 5} && ms < 1.0;
    std::printf("%s criterion 1: five-node worked example (BH all, base {1,2,3,4}, "
                "second pass all; %.3f ms)\n",
                ok ? "PASS" : "FAIL", ms);
    return ok;
}

bool criterion2() {
    auto t0 = clock_type::now();
    RandomInstanceGen gen(2024);
    long long mismatches = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        auto g = gen.graph(12, t);
        auto p = gen.pvalues(g.m);
        double alpha = gen.alpha();
        NodeSet truth = brute_force_indbh(p, alpha, g);
        if (truth != indbh_reference(p, alpha, g)) ++mismatches;
        if (truth != indbh_fast(p, alpha, g)) ++mismatches;
        for (int k = 2; k <= 3; ++k) {
            NodeSet truth_k = brute_force_indbh_k(p, alpha, g, k);
            if (truth_k != indbh_k_reference(p, alpha, g, k)) ++mismatches;
            if (truth_k != indbh_k_fast(p, alpha, g, k)) ++mismatches;
        }
    }
    double sec = ms_since(t0) / 1000.0;
    bool ok = mismatches == 0 && sec < 120.0;
    std::printf("%s criterion 2: oracle equivalence over %d random instances "
                "(%lld mismatches, %.1f s)\n",
                ok ? "PASS" : "FAIL", trials, mismatches, sec);
    return ok;
}

bool criterion3() {
    RandomInstanceGen gen(3030);
    std::vector<Instance> instances;
    for (int t = 0; t < 500; ++t) {
        auto g = gen.graph(8, t);
        auto p = gen.pvalues(g.m);
        instances.push_back({p, g, gen.alpha()});
    }
    std::vector<std::pair<std::string, Procedure>> procs = {
        {"base", [](const std::vector<double>& p, double a, const DependencyGraph& g) {
             return indbh_fast(p, a, g);
         }},
        {"second", [](const std::vector<double>& p, double a, const DependencyGraph& g) {
             return indbh_k_fast(p, a, g, 2);
         }},
        {"third", [](const std::vector<double>& p, double a, const DependencyGraph& g) {
             return indbh_k_fast(p, a, g, 3);
         }},
        {"fixed-point", [](const std::vector<double>& p, double a, const DependencyGraph& g) {
             return su_fixed_point(p, a, g);
         }},
    };
    bool ok = true;
    for (const auto& [name, proc] : procs) {
        bool good = check_self_consistency(proc, instances).passed() &&
                    check_monotonicity(proc, instances, 99).passed() &&
                    check_neighbor_blindness(proc, instances).passed();
        if (!good) {
            ok = false;
            std::printf("  property violation for %s\n", name.c_str());
        }
    }
    Procedure naive = [](const std::vector<double>& p, double a, const DependencyGraph& g) {
        return naive_adjusted_bh(p, a, g);
    };
    Procedure plain_bh = [](const std::vector<double>& p, double a, const DependencyGraph&) {
        return bh(p, a);
    };
    auto naive_rep = check_self_consistency(naive, instances);
    auto bh_rep = check_neighbor_blindness(plain_bh, instances);
    bool negatives = !naive_rep.passed() && !bh_rep.passed();
    ok = ok && negatives;
    std::printf("%s criterion 3: graph-adapted procedures satisfy all three "
                "properties; negative controls violate them (%zu/%zu violations "
                "recorded)\n",
                ok ? "PASS" : "FAIL", naive_rep.violations.size(),
                bh_rep.violations.size());
    return ok;
}

bool criterion4() {
    RandomInstanceGen gen(4040);
    bool ok = true;
    for (int t = 0; t < 300 && ok; ++t) {
        auto g = gen.graph(10, t);
        auto p = gen.pvalues(g.m);
        double alpha = gen.alpha();
        auto r1 = indbh_fast(p, alpha, g);
        auto r2 = indbh_k_fast(p, alpha, g, 2);
        auto r3 = indbh_k_fast(p, alpha, g, 3);
        auto su = su_fixed_point(p, alpha, g);
        auto bh_set = bh(p, alpha);
        ok = is_subset(r1, r2) && is_subset(r2, r3) && is_subset(r3, su) &&
             is_subset(su, bh_set);
        if (ok) {
            ok = indbh_fast(p, alpha, empty_graph(g.m)) == bh_set &&
                 indbh_fast(p, alpha, complete_graph(g.m)) == bonferroni(p, alpha);
        }
    }
    std::printf("%s criterion 4: inclusion chain base - second - third - "
                "fixed point - BH, plus empty/complete graph degenerations\n",
                ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion5() {
    std::mt19937_64 rng(5050);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long long mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        int b = 2 + static_cast<int>(rng() % 3);
        int m = b * (1 + static_cast<int>(rng() % (12 / b)));
        auto g = block_graph(m, b);
        std::vector<NodeSet> blocks;
        for (int s = 1; s <= m; s += b) {
            NodeSet blk;
            for (int v = s; v < s + b; ++v) blk.push_back(v);
            blocks.push_back(blk);
        }
        std::vector<double> p(m);
        for (auto& v : p) v = unif(rng) < 0.5 ? unif(rng) : std::pow(unif(rng), 10.0);
        double alpha = 0.05 + 0.4 * unif(rng);
        if (clique_shortcut(p, alpha, blocks) != brute_force_indbh(p, alpha, g))
            ++mismatches;
    }
    bool ok = mismatches == 0;
    std::printf("%s criterion 5: closed-form block rule equals the exhaustive "
                "search on 200 block instances (%lld mismatches)\n",
                ok ? "PASS" : "FAIL", mismatches);
    return ok;
}

bool criterion6() {
    RandomInstanceGen gen(6060);
    long long mismatches = 0;
    int empty_bh_cases = 0;
    for (int t = 0; t < 200; ++t) {
        auto g = gen.graph(12, t);
        auto p = gen.pvalues(g.m);
        double alpha = gen.alpha();
        if (t % 5 == 0) {
            // force an empty BH set
            for (auto& v : p) v = 0.7 + 0.3 * (v * 0.99);
            alpha = 0.05;
        }
        auto rp = reduce_to_bh(p, alpha, g);
        if (rp.kept.empty()) ++empty_bh_cases;
        if (indbh_fast(p, alpha, g) != brute_force_indbh(p, alpha, g)) ++mismatches;
        for (int k = 2; k <= 3; ++k)
            if (indbh_k_fast(p, alpha, g, k) != brute_force_indbh_k(p, alpha, g, k))
                ++mismatches;
    }
    bool ok = mismatches == 0 && empty_bh_cases > 0;
    std::printf("%s criterion 6: reduced pipeline equals the unreduced search on "
                "200 instances (%d with an empty first-pass set)\n",
                ok ? "PASS" : "FAIL", empty_bh_cases);
    return ok;
}

bool criterion7() {
    auto t0 = clock_type::now();
    const int m = 3;
    const double alpha = 0.5;
    CliqueCover cover{{{1}, {2, 3}}};
    auto g = build_graph(m, {{2, 3}});
    const long long reps = 100000;
    std::vector<char> naive_any(reps, 0), ind_any(reps, 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long rep = 0; rep < reps; ++rep) {
        auto p = gen_block_adversarial(m, cover, alpha,
                                       substream_seed(707, static_cast<std::uint64_t>(rep)));
        naive_any[rep] = naive_adjusted_bh(p, alpha, g).empty() ? 0 : 1;
        ind_any[rep] = indbh_fast(p, alpha, g).empty() ? 0 : 1;
    }
    NullMc naive_mc = global_null_fdr(naive_any);
    NullMc ind_mc = global_null_fdr(ind_any);
    double target = alpha * (1.0 + 2.0 * alpha * alpha * (1.0 - alpha) /
                                       (3.0 * (3.0 - 2.0 * alpha) * (3.0 - 2.0 * alpha)));
    double sec = ms_since(t0) / 1000.0;
    bool ok = std::abs(naive_mc.fdr - target) <= 0.006 &&
              ind_mc.fdr <= alpha + 3.0 * ind_mc.se && sec < 60.0;
    std::printf("%s criterion 7: negative control inflates the null FDR to %.5f "
                "(target %.5f +- 0.006) while the graph-aware rule stays at %.5f "
                "<= %.3f (%.1f s)\n",
                ok ? "PASS" : "FAIL", naive_mc.fdr, target, ind_mc.fdr,
                alpha + 3.0 * ind_mc.se, sec);
    return ok;
}

bool criterion8() {
    const int m = 9, b = 3;
    const double alpha = 0.5;
    CliqueCover cover{{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
    auto g = block_graph(m, b);
    const long long reps = 10000;
    std::vector<char> bh_any(reps, 0), ind_any(reps, 0), ind3_any(reps, 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long rep = 0; rep < reps; ++rep) {
        auto p = gen_block_adversarial(m, cover, alpha,
                                       substream_seed(808, static_cast<std::uint64_t>(rep)));
        bh_any[rep] = bh(p, alpha).empty() ? 0 : 1;
        ind_any[rep] = indbh_fast(p, alpha, g).empty() ? 0 : 1;
        ind3_any[rep] = indbh_k_fast(p, alpha, g, 3).empty() ? 0 : 1;
    }
    NullMc bh_mc = global_null_fdr(bh_any);
    NullMc ind_mc = global_null_fdr(ind_any);
    NullMc ind3_mc = global_null_fdr(ind3_any);
    double bound = 1.0 - std::pow(25.0 / 36.0, 3.0);
    bool ok = bh_mc.fdr >= bound - 3.0 * bh_mc.se &&
              ind_mc.fdr <= alpha + 3.0 * ind_mc.se &&
              ind3_mc.fdr <= alpha + 3.0 * ind3_mc.se;
    std::printf("%s criterion 8: worst-case blocks push BH's null FDR to %.4f "
                ">= %.4f while the graph-aware rules stay near %.2f "
                "(%.4f and %.4f)\n",
                ok ? "PASS" : "FAIL", bh_mc.fdr, bound - 3.0 * bh_mc.se, alpha,
                ind_mc.fdr, ind3_mc.fdr);
    return ok;
}

bool criterion9() {
    const int m = 9, b = 3;
    const double alpha = 0.5;
    CliqueCover cover{{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
    const long long reps = 100000;
    std::vector<std::vector<double>> coords(m, std::vector<double>(reps));
    for (long long rep = 0; rep < reps; ++rep) {
        auto p = gen_block_adversarial(m, cover, alpha,
                                       substream_seed(909, static_cast<std::uint64_t>(rep)));
        for (int i = 0; i < m; ++i) coords[i][rep] = p[i];
    }
    bool ok = true;
    double min_p = 1.0;
    for (int i = 0; i < m; ++i) {
        double d = ks_statistic(coords[i]);
        double pv = kolmogorov_pvalue(d * std::sqrt(static_cast<double>(reps)));
        min_p = std::min(min_p, pv);
        if (pv <= 1e-3) ok = false;
    }
    (void)b;
    std::printf("%s criterion 9: adversarial sampler coordinates look uniform "
                "(smallest KS p-value %.4f > 0.001)\n",
                ok ? "PASS" : "FAIL", min_p);
    return ok;
}

bool criterion10() {
    auto t0 = clock_type::now();
    const double alpha = 0.1, tarpow = 0.6;
    const int reps = 200;
    double tp_small = -1.0, tp_big = -1.0, rej3_big = -1.0, rejby_big = -1.0;
    for (int m : {500, 10000}) {
        SimScenario sc;
        sc.m = m;
        sc.b = 100;
        sc.rho = 0.5;
        sc.pi0 = 0.9;
        sc.signal = SignalKind::RandomExp;
        sc.mu_star = tune_mu_star(sc, tarpow, alpha, 1001);
        auto g = scenario_graph(sc);
        std::vector<RepRecord> runs(reps);
#pragma omp parallel for schedule(dynamic)
        for (int rep = 0; rep < reps; ++rep) {
            auto d = gen_gaussian(sc, substream_seed(1010, static_cast<std::uint64_t>(rep)));
            RepRecord rec;
            rec.h1 = d.h1;
            rec.bh = bh(d.p, alpha);
            rec.rejections.push_back(indbh_k_fast(d.p, alpha, g, 3));
            rec.rejections.push_back(by(d.p, alpha));
            runs[rep] = std::move(rec);
        }
        auto ms = compute_metrics(runs, 2);
        if (m == 500) {
            tp_small = ms[0].tp_defined ? ms[0].tp_ratio : -1.0;
        } else {
            tp_big = ms[0].tp_defined ? ms[0].tp_ratio : -1.0;
            rej3_big = ms[0].rej_defined ? ms[0].rej_ratio : -1.0;
            rejby_big = ms[1].rej_defined ? ms[1].rej_ratio : -1.0;
        }
    }
    double sec = ms_since(t0) / 1000.0;
    bool ok = tp_small >= 0.0 && tp_big > tp_small && tp_big > 0.9 &&
              rejby_big >= 0.0 && rejby_big < rej3_big && sec < 1800.0;
    std::printf("%s criterion 10: recovery ratio of the third pass improves with "
                "scale (%.3f at m=500 -> %.3f at m=10000, > 0.9) and beats the "
                "harmonic correction (%.3f vs %.3f; %.0f s)\n",
                ok ? "PASS" : "FAIL", tp_small, tp_big, rejby_big, rej3_big, sec);
    return ok;
}

bool criterion11() {
    SimScenario sc;
    sc.m = 1000000;
    sc.b = 100;
    sc.rho = 0.5;
    sc.pi0 = 0.99;
    sc.mu_star = 4.5;
    auto g = scenario_graph(sc);
    auto d = gen_gaussian(sc, 1111);

#ifdef _OPENMP
    int initial_threads = omp_get_max_threads();
#endif
    auto run_both = [&](int threads) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        auto ta = clock_type::now();
        NodeSet base = indbh_fast(d.p, 0.1, g);
        double base_s = ms_since(ta) / 1000.0;
        auto tb = clock_type::now();
        NodeSet third = indbh_k_fast(d.p, 0.1, g, 3);
        double third_s = ms_since(tb) / 1000.0;
        return std::make_tuple(base, third, base_s, third_s);
    };
    auto [base1, third1, base_s, third_s] = run_both(1);
    auto [base8, third8, base_s8, third_s8] = run_both(8);
#ifdef _OPENMP
    omp_set_num_threads(initial_threads);
#endif
    bool ok = base_s <= 10.0 && third_s <= 60.0 && base1 == base8 && third1 == third8;
    std::printf("%s criterion 11: one-million-hypothesis run finishes in %.2f s "
                "(base) and %.2f s (third pass), identical across 1 and 8 "
                "threads (%.2f s / %.2f s)\n",
                ok ? "PASS" : "FAIL", base_s, third_s, base_s8, third_s8);
    return ok;
}

bool criterion12() {
    bool ok = true;
    int points = 0;
    for (int m : {10, 30, 60, 120, 300}) {
        for (int b : {1, 2, 5, 10, 30, 60}) {
            if (b > m || m % b != 0) continue;
            for (double alpha : {0.05, 0.2}) {
                if (points >= 30) break;
                double closed = bygraph_level(m, b, alpha);
                double numeric = bygraph_level_bisect(m, b, alpha);
                if (std::abs(closed - numeric) > 1e-10) ok = false;
                ++points;
            }
        }
    }
    double alpha = 0.137;
    if (fdr_upper_bound(complete_graph(2), alpha) != 1.5 * alpha) ok = false;
    bool grid_ok = points >= 30;
    ok = ok && grid_ok;
    std::printf("%s criterion 12: adjusted-level closed form matches bisection to "
                "1e-10 on %d grid points; two-node upper bound is exactly 1.5x "
                "the level\n",
                ok ? "PASS" : "FAIL", points);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
    auto wanted = [&](int n) {
        return selected.empty() ||
               std::find(selected.begin(), selected.end(), n) != selected.end();
    };
    bool (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8,
                          criterion9, criterion10, criterion11, criterion12};
    bool all_ok = true;
    for (int n = 1; n <= 12; ++n) {
        if (!wanted(n)) continue;
        if (!checks[n - 1]()) all_ok = false;
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
