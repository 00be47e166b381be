#include "depfdr/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace depfdr {

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string drop_comment(const std::string& s) {
    auto h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
}

double parse_double(const std::string& tok, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(where + ": not a number: '" + tok + "'");
    return v;
}

long parse_int(const std::string& tok, const std::string& where) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(where + ": not an integer: '" + tok + "'");
    }
    if (used != tok.size())
        throw ParseError(where + ": not an integer: '" + tok + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace

std::vector<double> read_pvalues(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open p-value file: " + path);
    std::vector<std::pair<int, double>> entries;
    bool with_ids = false, without_ids = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = path + ":" + std::to_string(lineno);
        auto toks = split_ws(strip(drop_comment(line)));
        if (toks.empty()) continue;
        if (toks.size() == 1) {
            without_ids = true;
            double v = parse_double(toks[0], where);
            if (v < 0.0 || v > 1.0) throw ParseError(where + ": p-value outside [0,1]");
            entries.emplace_back(static_cast<int>(entries.size()) + 1, v);
        } else if (toks.size() == 2) {
            with_ids = true;
            int id = static_cast<int>(parse_int(toks[0], where));
            double v = parse_double(toks[1], where);
            if (v < 0.0 || v > 1.0) throw ParseError(where + ": p-value outside [0,1]");
            entries.emplace_back(id, v);
        } else {
            throw ParseError(where + ": expected one or two fields");
        }
        if (with_ids && without_ids)
            throw ParseError(where + ": mixed id/no-id p-value lines");
    }
    if (entries.empty()) throw ParseError(path + ": no p-values found");
    int m = static_cast<int>(entries.size());
    std::vector<double> p(m, -1.0);
    for (const auto& [id, v] : entries) {
        if (id < 1 || id > m)
            throw ParseError(path + ": hypothesis id " + std::to_string(id) +
                             " outside 1.." + std::to_string(m));
        if (p[id - 1] >= 0.0)
            throw ParseError(path + ": duplicate hypothesis id " + std::to_string(id));
        p[id - 1] = v;
    }
    return p;
}

DependencyGraph read_graph_file(const std::string& path, int m) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> block_sizes;
    int banded_width = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = path + ":" + std::to_string(lineno);
        auto toks = split_ws(strip(drop_comment(line)));
        if (toks.empty()) continue;
        if (toks[0] == "block") {
            if (toks.size() != 2) throw ParseError(where + ": expected 'block <size>'");
            block_sizes.push_back(static_cast<int>(parse_int(toks[1], where)));
        } else if (toks[0] == "banded") {
            if (toks.size() != 2)
                throw ParseError(where + ": expected 'banded <bandwidth>'");
            banded_width = static_cast<int>(parse_int(toks[1], where));
        } else {
            if (toks.size() != 2) throw ParseError(where + ": expected 'i<TAB>j'");
            int a = static_cast<int>(parse_int(toks[0], where));
            int b = static_cast<int>(parse_int(toks[1], where));
            if (a < 1 || a > m || b < 1 || b > m)
                throw ParseError(where + ": node id outside 1.." + std::to_string(m));
            edges.emplace_back(a, b);
        }
    }
    int kinds = (!edges.empty() ? 1 : 0) + (!block_sizes.empty() ? 1 : 0) +
                (banded_width > 0 ? 1 : 0);
    if (kinds > 1) throw ParseError(path + ": mixed graph specification styles");
    if (banded_width > 0) return banded_graph(m, banded_width);
    if (!block_sizes.empty()) {
        int at = 1;
        std::vector<std::pair<int, int>> bedges;
        for (int size : block_sizes) {
            if (size < 1 || at + size - 1 > m)
                throw ParseError(path + ": block sizes exceed node count");
            for (int i = at; i < at + size; ++i)
                for (int j = i + 1; j < at + size; ++j) bedges.emplace_back(i, j);
            at += size;
        }
        if (at != m + 1)
            throw ParseError(path + ": block sizes do not cover all nodes");
        return build_graph(m, bedges);
    }
    return build_graph(m, edges);
}

namespace {

ScenarioConfig parse_scenario_lines(std::istream& in, const std::string& label) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = label + ":" + std::to_string(lineno);
        std::string body = strip(drop_comment(line));
        std::replace(body.begin(), body.end(), '=', ' ');
        auto toks = split_ws(body);
        if (toks.empty()) continue;
        if (toks.size() != 2) throw ParseError(where + ": expected 'key value'");
        const std::string& key = toks[0];
        const std::string& val = toks[1];
        SimScenario& sc = cfg.scenario;
        if (key == "m")
            sc.m = static_cast<int>(parse_int(val, where));
        else if (key == "dependence") {
            if (val == "block")
                sc.dependence = DependenceKind::Block;
            else if (val == "banded")
                sc.dependence = DependenceKind::Banded;
            else
                throw ParseError(where + ": dependence must be block or banded");
        } else if (key == "b")
            sc.b = static_cast<int>(parse_int(val, where));
        else if (key == "rho")
            sc.rho = parse_double(val, where);
        else if (key == "placement") {
            if (val == "uniform")
                sc.placement = PlacementKind::Uniform;
            else if (val == "clustered")
                sc.placement = PlacementKind::Clustered;
            else
                throw ParseError(where + ": placement must be uniform or clustered");
        } else if (key == "pi0")
            sc.pi0 = parse_double(val, where);
        else if (key == "lambda0")
            sc.lambda0 = parse_double(val, where);
        else if (key == "tau")
            sc.tau = parse_double(val, where);
        else if (key == "signal") {
            if (val == "fixed")
                sc.signal = SignalKind::Fixed;
            else if (val == "exp")
                sc.signal = SignalKind::RandomExp;
            else
                throw ParseError(where + ": signal must be fixed or exp");
        } else if (key == "mu_star")
            sc.mu_star = parse_double(val, where);
        else if (key == "side") {
            if (val == "two")
                sc.side = SideKind::TwoSided;
            else if (val == "one")
                sc.side = SideKind::OneSided;
            else
                throw ParseError(where + ": side must be two or one");
        } else if (key == "family") {
            if (val != "gaussian" && val != "adversarial" && val != "negative")
                throw ParseError(where +
                                 ": family must be gaussian, adversarial or negative");
            cfg.family = val;
        } else if (key == "tarpow")
            cfg.tarpow = parse_double(val, where);
        else
            throw ParseError(where + ": unknown key '" + key + "'");
    }
    if (cfg.scenario.m < 1) throw ParseError(label + ": m must be >= 1");
    return cfg;
}

}  // namespace

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    return parse_scenario_lines(in, path);
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario_lines(in, "<config>");
}

MethodSpec parse_method(const std::string& text) {
    MethodSpec spec;
    spec.name = text;
    if (text == "bh") spec.kind = MethodKind::BH;
    else if (text == "sdbh") spec.kind = MethodKind::StepDownBH;
    else if (text == "bonf") spec.kind = MethodKind::Bonferroni;
    else if (text == "by") spec.kind = MethodKind::BY;
    else if (text == "ebh") spec.kind = MethodKind::EBH;
    else if (text == "naive") spec.kind = MethodKind::Naive;
    else if (text == "indbh") spec.kind = MethodKind::IndBH;
    else if (text == "su") spec.kind = MethodKind::SU;
    else if (text == "randprune") spec.kind = MethodKind::RandPrune;
    else if (text == "indbh2") { spec.kind = MethodKind::IndBHk; spec.k = 2; }
    else if (text == "indbh3") { spec.kind = MethodKind::IndBHk; spec.k = 3; }
    else if (text.rfind("indbhk=", 0) == 0) {
        spec.kind = MethodKind::IndBHk;
        spec.k = static_cast<int>(parse_int(text.substr(7), "method"));
        if (spec.k < 1) throw ParseError("method: indbhk=K needs K >= 1");
    } else {
        throw ParseError("unknown method '" + text + "'");
    }
    return spec;
}

bool method_needs_graph(MethodKind kind) {
    switch (kind) {
        case MethodKind::Naive:
        case MethodKind::IndBH:
        case MethodKind::IndBHk:
        case MethodKind::SU:
        case MethodKind::RandPrune:
            return true;
        default:
            return false;
    }
}

}  // namespace depfdr
