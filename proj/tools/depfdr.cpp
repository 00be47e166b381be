#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "depfdr/bounds.hpp"
#include "depfdr/engine.hpp"
#include "depfdr/graph.hpp"
#include "depfdr/io.hpp"
#include "depfdr/oracle.hpp"
#include "depfdr/procedures.hpp"
#include "depfdr/simgen.hpp"

namespace {

using namespace depfdr;

constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

struct GraphChoice {
    std::string graph_path;
    int block = 0;
    int banded = 0;
    bool empty = false;
    bool complete = false;

    int count() const {
        return (graph_path.empty() ? 0 : 1) + (block > 0 ? 1 : 0) +
               (banded > 0 ? 1 : 0) + (empty ? 1 : 0) + (complete ? 1 : 0);
    }
    DependencyGraph build(int m) const {
        if (!graph_path.empty()) return read_graph_file(graph_path, m);
        if (block > 0) return block_graph(m, block);
        if (banded > 0) return banded_graph(m, banded);
        if (complete) return complete_graph(m);
        return empty_graph(m);
    }
};

void add_graph_flags(CLI::App* cmd, GraphChoice& gc) {
    cmd->add_option("--graph", gc.graph_path, "graph file (edge list or block/banded spec)");
    cmd->add_option("--block", gc.block, "consecutive clique blocks of this size");
    cmd->add_option("--banded", gc.banded, "banded graph with this bandwidth");
    cmd->add_flag("--empty", gc.empty, "empty graph (independent p-values)");
    cmd->add_flag("--complete", gc.complete, "complete graph");
}

NodeSet run_method(const MethodSpec& method, const std::vector<double>& p,
                   double alpha, const DependencyGraph& g, std::uint64_t seed,
                   int guard) {
    switch (method.kind) {
        case MethodKind::BH: return bh(p, alpha);
        case MethodKind::StepDownBH: return step_down_bh(p, alpha);
        case MethodKind::Bonferroni: return bonferroni(p, alpha);
        case MethodKind::BY: return by(p, alpha);
        case MethodKind::EBH: return ebh_comparator(p, alpha);
        case MethodKind::Naive: return naive_adjusted_bh(p, alpha, g);
        case MethodKind::IndBH: return indbh_fast(p, alpha, g, guard);
        case MethodKind::IndBHk: return indbh_k_fast(p, alpha, g, method.k, guard);
        case MethodKind::SU: return su_fixed_point(p, alpha, g);
        case MethodKind::RandPrune: {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::vector<double> u(p.size());
            for (auto& v : u) v = unif(rng);
            Procedure inner = [guard](const std::vector<double>& q, double a,
                                      const DependencyGraph& gg) {
                return indbh_fast(q, a, gg, guard);
            };
            return randomized_prune(p, alpha, g, inner, u);
        }
    }
    return {};
}

int cmd_reject(const std::string& pvalue_path, const GraphChoice& gc,
               const std::string& method_text, double alpha, std::uint64_t seed,
               int guard, const std::string& format, bool unsafe) {
    MethodSpec method = parse_method(method_text);
    if (method.kind == MethodKind::Naive && !unsafe) {
        std::cerr << "error: method 'naive' does not control FDR; pass --unsafe to "
                     "run it as a demonstration\n";
        return kExitInput;
    }
    if (method.kind == MethodKind::Naive)
        std::cerr << "warning: 'naive' is a negative control with no FDR guarantee\n";
    if (method.kind == MethodKind::SU)
        std::cerr << "warning: 'su' runs a reference fixed-point iteration and can be "
                     "slow on large inputs\n";
    std::vector<double> p = read_pvalues(pvalue_path);
    int m = static_cast<int>(p.size());
    DependencyGraph g = gc.build(m);
    auto t0 = std::chrono::steady_clock::now();
    NodeSet bh_set = bh(p, alpha);
    NodeSet r = run_method(method, p, alpha, g, seed, guard);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    double thr = alpha * static_cast<double>(r.size()) / m;
    if (format == "json") {
        nlohmann::json out;
        out["m"] = m;
        out["alpha"] = alpha;
        out["method"] = method.name;
        out["bh_rejections"] = bh_set.size();
        out["rejections"] = nlohmann::json::array();
        for (int i : r)
            out["rejections"].push_back(
                {{"id", i}, {"p", p[i - 1]}, {"threshold", thr}});
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "id\tp\tthreshold\n";
        char buf[128];
        for (int i : r) {
            std::snprintf(buf, sizeof(buf), "%d\t%.10g\t%.10g\n", i, p[i - 1], thr);
            std::cout << buf;
        }
        std::cout << "# m=" << m << " bh=" << bh_set.size() << " rejected=" << r.size()
                  << "\n";
    }
    std::cerr << "time_ms=" << ms << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& methods_csv,
                 long long reps, double alpha, std::uint64_t seed,
                 const std::string& out_path) {
    ScenarioConfig cfg = parse_scenario_file(config_path);
    if (reps < 1) {
        std::cerr << "error: --reps must be >= 1\n";
        return kExitInput;
    }
    std::vector<MethodSpec> methods;
    std::stringstream ss(methods_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) methods.push_back(parse_method(tok));
    if (methods.empty()) {
        std::cerr << "error: no methods given\n";
        return kExitInput;
    }
    SimScenario sc = cfg.scenario;
    DependencyGraph g = scenario_graph(sc);
    if (cfg.tarpow)
        sc.mu_star = tune_mu_star(sc, *cfg.tarpow, alpha, substream_seed(seed, 1u << 20));
    CliqueCover cover;
    if (cfg.family == "adversarial") {
        for (int start = 1; start <= sc.m; start += sc.b) {
            NodeSet blockset;
            for (int i = start; i <= std::min(sc.m, start + sc.b - 1); ++i)
                blockset.push_back(i);
            cover.blocks.push_back(blockset);
        }
    }
    std::vector<RepRecord> runs(reps);
#pragma omp parallel for schedule(dynamic)
    for (long long rep = 0; rep < reps; ++rep) {
        std::uint64_t s = substream_seed(seed, static_cast<std::uint64_t>(rep));
        SimDraw draw;
        if (cfg.family == "adversarial") {
            draw.p = gen_block_adversarial(sc.m, cover, alpha, s);
        } else if (cfg.family == "negative") {
            draw.p = gen_negative_gaussian(sc.m, sc.b, sc.rho, s).first;
        } else {
            draw = gen_gaussian(sc, s);
        }
        RepRecord rec;
        rec.h1 = draw.h1;
        rec.bh = bh(draw.p, alpha);
        for (const auto& method : methods)
            rec.rejections.push_back(
                run_method(method, draw.p, alpha, g, substream_seed(s, 7), kDefaultGuard));
        runs[rep] = std::move(rec);
    }
    std::vector<MetricSet> metrics = compute_metrics(runs, methods.size());
    std::ostringstream out;
    out << "method,m,metric,estimate,se,reps\n";
    char buf[256];
    for (std::size_t j = 0; j < methods.size(); ++j) {
        const MetricSet& ms = metrics[j];
        auto row = [&](const char* name, double est, double se, long long n,
                       bool defined) {
            if (!defined) {
                out << methods[j].name << "," << sc.m << "," << name << ",NA,NA," << n
                    << "\n";
                return;
            }
            if (n > 1)
                std::snprintf(buf, sizeof(buf), "%s,%d,%s,%.6f,%.6f,%lld\n",
                              methods[j].name.c_str(), sc.m, name, est, se, n);
            else
                std::snprintf(buf, sizeof(buf), "%s,%d,%s,%.6f,NA,%lld\n",
                              methods[j].name.c_str(), sc.m, name, est, n);
            out << buf;
        };
        row("fdr", ms.fdr, ms.fdr_se, ms.reps, true);
        row("tp_ratio", ms.tp_ratio, ms.tp_se, ms.tp_reps, ms.tp_defined);
        row("rej_ratio", ms.rej_ratio, ms.rej_se, ms.rej_reps, ms.rej_defined);
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitInput;
        }
        f << out.str();
    }
    return 0;
}

int cmd_bounds(const GraphChoice& gc, int m, double alpha) {
    if (m < 1) {
        std::cerr << "error: --m must be >= 1\n";
        return kExitInput;
    }
    DependencyGraph g = gc.build(m);
    // cover: blocks for block specs, one block for complete, else singletons
    CliqueCover cover;
    if (gc.block > 0) {
        for (int start = 1; start <= m; start += gc.block) {
            NodeSet blockset;
            for (int i = start; i <= std::min(m, start + gc.block - 1); ++i)
                blockset.push_back(i);
            cover.blocks.push_back(blockset);
        }
    } else if (gc.complete) {
        NodeSet all;
        for (int i = 1; i <= m; ++i) all.push_back(i);
        cover.blocks.push_back(all);
    } else {
        for (int i = 1; i <= m; ++i) cover.blocks.push_back({i});
    }
    validate_clique_cover(g, cover);
    double lower = fdr_lower_bound(cover, m, alpha);
    double upper = fdr_upper_bound(g, alpha);
    double by_level = alpha / harmonic_number(m);
    std::cout << "m\tedges\talpha\tlower\tupper\tby_level\tbygraph_level\n";
    char buf[256];
    std::string bygraph = "NA";
    if (gc.block > 0 && m % gc.block == 0) {
        std::snprintf(buf, sizeof(buf), "%.10g", bygraph_level(m, gc.block, alpha));
        bygraph = buf;
    }
    std::snprintf(buf, sizeof(buf), "%d\t%d\t%.10g\t%.10g\t%.10g\t%.10g\t%s\n", m,
                  g.edge_count(), alpha, lower, upper, by_level, bygraph.c_str());
    std::cout << buf;
    return 0;
}

int cmd_oracle_check(int max_m, long long trials, std::uint64_t seed,
                     const std::string& densities_csv) {
    if (trials <= 0) {
        std::cerr << "error: --trials must be >= 1\n";
        return kExitInput;
    }
    std::vector<double> densities;
    std::stringstream ss(densities_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) densities.push_back(std::stod(tok));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long long bad_equiv = 0, bad_k = 0;
    for (long long t = 0; t < trials; ++t) {
        int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_m - 1));
        double dens = densities[t % densities.size()];
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j)
                if (unif(rng) < dens) edges.emplace_back(i, j);
        DependencyGraph g = build_graph(m, edges);
        std::vector<double> p(m);
        for (auto& v : p) v = unif(rng) < 0.5 ? unif(rng) : std::pow(unif(rng), 4.0);
        double alpha = 0.05 + 0.4 * unif(rng);
        NodeSet oracle = brute_force_indbh(p, alpha, g);
        if (oracle != indbh_reference(p, alpha, g) || oracle != indbh_fast(p, alpha, g))
            ++bad_equiv;
        for (int k = 2; k <= 3; ++k)
            if (brute_force_indbh_k(p, alpha, g, k) != indbh_k_fast(p, alpha, g, k))
                ++bad_k;
    }
    std::cout << (bad_equiv == 0 ? "PASS" : "FAIL")
              << " base equivalence (brute force == reference == fast), " << trials
              << " trials, " << bad_equiv << " mismatches\n";
    std::cout << (bad_k == 0 ? "PASS" : "FAIL")
              << " iterated equivalence k in {2,3}, " << trials << " trials, " << bad_k
              << " mismatches\n";
    return (bad_equiv + bad_k) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FDR-controlling multiple testing under a known p-value dependency graph"};
    app.require_subcommand(1);

    double alpha = 0.1;
    std::uint64_t seed = 1;
    int threads = 0;
    int guard = kDefaultGuard;

    // reject
    auto* rej = app.add_subcommand("reject", "run a procedure on a p-value file");
    std::string pvalue_path, method_text = "bh", format = "tsv";
    bool unsafe = false;
    GraphChoice rej_graph;
    rej->add_option("--pvalues", pvalue_path, "p-value file")->required();
    add_graph_flags(rej, rej_graph);
    rej->add_option("--method", method_text, "procedure to run");
    rej->add_option("--alpha", alpha, "target FDR level");
    rej->add_option("--seed", seed, "seed (randomized pruning)");
    rej->add_option("--threads", threads, "worker threads (0 = default)");
    rej->add_option("--guard", guard, "component size guard for exact search");
    rej->add_option("--format", format, "tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}));
    rej->add_flag("--unsafe", unsafe, "allow procedures without FDR guarantees");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo metrics for a scenario");
    std::string config_path, methods_csv = "bh,indbh", out_path;
    long long reps = 100;
    sim->add_option("--config", config_path, "scenario config file")->required();
    sim->add_option("--methods", methods_csv, "comma separated method list");
    sim->add_option("--reps", reps, "replications");
    sim->add_option("--alpha", alpha, "target FDR level");
    sim->add_option("--seed", seed, "seed");
    sim->add_option("--threads", threads, "worker threads (0 = default)");
    sim->add_option("--out", out_path, "output CSV path (default stdout)");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "worst-case BH FDR bounds for a graph");
    GraphChoice bnd_graph;
    int bounds_m = 0;
    add_graph_flags(bnd, bnd_graph);
    bnd->add_option("--m", bounds_m, "number of hypotheses")->required();
    bnd->add_option("--alpha", alpha, "level");

    // oracle-check
    auto* orc = app.add_subcommand("oracle-check", "randomized oracle equivalence suite");
    int max_m = 10;
    long long trials = 500;
    std::string densities_csv = "0.1,0.3,0.6";
    orc->add_option("--max-m", max_m, "maximum instance size");
    orc->add_option("--trials", trials, "number of random instances");
    orc->add_option("--seed", seed, "seed");
    orc->add_option("--densities", densities_csv, "edge densities to cycle through");
    orc->add_option("--threads", threads, "worker threads (0 = default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (rej->parsed()) {
            if (rej_graph.count() != 1) {
                std::cerr << "error: give exactly one graph source "
                             "(--graph/--block/--banded/--empty/--complete)\n";
                return kExitInput;
            }
            return cmd_reject(pvalue_path, rej_graph, method_text, alpha, seed, guard,
                              format, unsafe);
        }
        if (sim->parsed())
            return cmd_simulate(config_path, methods_csv, reps, alpha, seed, out_path);
        if (bnd->parsed()) {
            if (bnd_graph.count() != 1) {
                std::cerr << "error: give exactly one graph source\n";
                return kExitInput;
            }
            return cmd_bounds(bnd_graph, bounds_m, alpha);
        }
        if (orc->parsed()) return cmd_oracle_check(max_m, trials, seed, densities_csv);
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
