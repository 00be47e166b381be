// Compares the serial reference procedures against the parallel engine on
// block-graph Gaussian instances, checking agreement where the reference is
// affordable.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "depfdr/engine.hpp"
#include "depfdr/procedures.hpp"
#include "depfdr/simgen.hpp"

using namespace depfdr;
using clock_type = std::chrono::steady_clock;

static double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

int main(int argc, char** argv) {
    CLI::App app{"engine vs reference benchmark"};
    std::vector<int> sizes = {500, 2000, 10000};
    int b = 100;
    double alpha = 0.1, pi0 = 0.99, mu = 4.0;
    int k = 3, reps = 3, threads = 0;
    std::uint64_t seed = 7;
    bool with_reference = true;
    app.add_option("--m", sizes, "problem sizes");
    app.add_option("--b", b, "block size");
    app.add_option("--alpha", alpha, "level");
    app.add_option("--pi0", pi0, "null proportion");
    app.add_option("--mu", mu, "signal strength");
    app.add_option("--k", k, "iteration depth for the iterated procedure");
    app.add_option("--reps", reps, "instances per size");
    app.add_option("--seed", seed, "seed");
    app.add_option("--threads", threads, "worker threads (0 = default)");
    app.add_flag("!--no-reference", with_reference, "skip the serial reference");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    std::printf("%10s %6s %10s %12s %12s %12s %10s\n", "m", "rep", "|BH|",
                "ref_ms", "fast_ms", "fast_k_ms", "agree");
    for (int m : sizes) {
        SimScenario sc;
        sc.m = m;
        sc.b = b;
        sc.rho = 0.5;
        sc.pi0 = pi0;
        sc.mu_star = mu;
        DependencyGraph g = scenario_graph(sc);
        for (int rep = 0; rep < reps; ++rep) {
            SimDraw d = gen_gaussian(sc, seed + static_cast<std::uint64_t>(rep) +
                                             static_cast<std::uint64_t>(m) * 1000003u);
            NodeSet bh_set = bh(d.p, alpha);

            double ref_ms = -1.0;
            NodeSet ref;
            if (with_reference) {
                auto t0 = clock_type::now();
                ref = indbh_reference(d.p, alpha, g);
                ref_ms = ms_since(t0);
            }
            auto t1 = clock_type::now();
            NodeSet fast = indbh_fast(d.p, alpha, g);
            double fast_ms = ms_since(t1);
            auto t2 = clock_type::now();
            NodeSet fast_k = indbh_k_fast(d.p, alpha, g, k);
            double fast_k_ms = ms_since(t2);

            bool agree = !with_reference || ref == fast;
            std::printf("%10d %6d %10zu %12.2f %12.2f %12.2f %10s\n", m, rep,
                        bh_set.size(), ref_ms, fast_ms, fast_k_ms,
                        agree ? "yes" : "NO");
            if (!agree) return 1;
        }
    }
    return 0;
}
