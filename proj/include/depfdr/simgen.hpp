#ifndef DEPFDR_SIMGEN_HPP
#define DEPFDR_SIMGEN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "depfdr/bounds.hpp"
#include "depfdr/graph.hpp"

namespace depfdr {

enum class DependenceKind { Block, Banded };
enum class PlacementKind { Uniform, Clustered };
enum class SignalKind { Fixed, RandomExp };
enum class SideKind { TwoSided, OneSided };

struct SimScenario {
    int m = 1000;
    DependenceKind dependence = DependenceKind::Block;
    int b = 100;       // block size, or full bandwidth for banded
    double rho = 0.5;
    PlacementKind placement = PlacementKind::Uniform;
    double pi0 = 0.9;
    double lambda0 = 10.0;  // clustered placement: mean daughters per center
    double tau = 10.0;      // clustered placement: cluster width
    SignalKind signal = SignalKind::Fixed;
    double mu_star = 2.0;
    SideKind side = SideKind::TwoSided;
};

struct SimDraw {
    std::vector<double> p;
    NodeSet h1;  // true non-nulls
};

DependencyGraph scenario_graph(const SimScenario& sc);

// Gaussian scores with the scenario's covariance and mean, mapped to
// p-values (two-sided by default). Deterministic in seed.
SimDraw gen_gaussian(const SimScenario& sc, std::uint64_t seed);
SimDraw gen_block_gaussian(const SimScenario& sc, std::uint64_t seed);
SimDraw gen_banded_gaussian(const SimScenario& sc, std::uint64_t seed);

// Poisson cluster process: Poisson(eta0) centers uniform on {1..m} with
// eta0 = (1-pi0)m/lambda0, Poisson(lambda0) daughters per center at
// discrete-Gaussian offsets of width tau; deduplicated, out-of-range dropped.
NodeSet place_clustered_nonnulls(int m, double pi0, double lambda0, double tau,
                                 std::uint64_t seed);

// Signal strength giving BH average power tarpow, found by bisection on
// [0, 20] with 200 tuning replications and power tolerance 0.01.
double tune_mu_star(const SimScenario& skeleton, double tarpow, double alpha,
                    std::uint64_t seed);

// Global-null sampler that maximally inflates BH's FDR over a clique cover;
// each coordinate is marginally Uniform[0,1].
std::vector<double> gen_block_adversarial(int m, const CliqueCover& cover,
                                          double alpha, std::uint64_t seed);

// Negatively equicorrelated blocks with one-sided (upper tail) p-values;
// all hypotheses null.
std::pair<std::vector<double>, DependencyGraph> gen_negative_gaussian(
    int m, int b, double rho_neg, std::uint64_t seed);

struct RepRecord {
    NodeSet h1;
    NodeSet bh;
    std::vector<NodeSet> rejections;  // one per method, fixed order
};

struct MetricSet {
    long long reps = 0;
    double fdr = 0.0, fdr_se = 0.0;
    bool tp_defined = false;
    double tp_ratio = 0.0, tp_se = 0.0;
    long long tp_reps = 0;
    bool rej_defined = false;
    double rej_ratio = 0.0, rej_se = 0.0;
    long long rej_reps = 0;
};

// Per-method FDR plus BH-relative ratios, conditioned on the relevant event
// being nonempty; replications failing the condition are excluded from that
// ratio's average.
std::vector<MetricSet> compute_metrics(const std::vector<RepRecord>& runs,
                                       std::size_t n_methods);

}  // namespace depfdr

#endif
