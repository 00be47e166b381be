#ifndef DEPFDR_IO_HPP
#define DEPFDR_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "depfdr/graph.hpp"
#include "depfdr/simgen.hpp"

namespace depfdr {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// One value per line, or `id<TAB>value` with 1-based ids (ids default to
// line order and must then be the full range). `#` starts a comment.
std::vector<double> read_pvalues(const std::string& path);

// Graph file: either an edge list (`i<TAB>j` per line, 1-based), a block
// spec (`block <size>` lines, consecutive blocks), or a single
// `banded <bandwidth>` line. `#` starts a comment.
DependencyGraph read_graph_file(const std::string& path, int m);

struct ScenarioConfig {
    SimScenario scenario;
    std::string family = "gaussian";  // gaussian | adversarial | negative
    std::optional<double> tarpow;     // when set, mu_star is tuned
};

// Flat `key value` (or `key = value`) text config.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text);

enum class MethodKind {
    BH,
    StepDownBH,
    Bonferroni,
    BY,
    EBH,
    Naive,
    IndBH,
    IndBHk,
    SU,
    RandPrune
};

struct MethodSpec {
    MethodKind kind;
    int k = 1;  // for IndBHk
    std::string name;
};

// Accepts: bh, sdbh, bonf, by, ebh, naive, indbh, indbh2, indbh3,
// indbhk=K, su, randprune.
MethodSpec parse_method(const std::string& text);

bool method_needs_graph(MethodKind kind);

}  // namespace depfdr

#endif
