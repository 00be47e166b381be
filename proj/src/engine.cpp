#include "depfdr/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "depfdr/procedures.hpp"

namespace depfdr {

namespace {

int r_index_of(double pv, double alpha_orig, int m_orig, int m_local) {
    if (alpha_orig <= 0.0) return pv <= 0.0 ? 1 : m_local + 1;
    int r = static_cast<int>(std::ceil(pv * m_orig / alpha_orig));
    if (r < 1) r = 1;
    if (r > m_local + 1) r = m_local + 1;
    // exact comparison semantics: r_index <= r iff pv <= alpha*r/m
    while (r <= m_local && pv > alpha_orig * static_cast<double>(r) / m_orig) ++r;
    while (r > 1 && pv <= alpha_orig * static_cast<double>(r - 1) / m_orig) --r;
    if (r <= m_local && pv > alpha_orig * static_cast<double>(r) / m_orig)
        r = m_local + 1;
    return r;
}

}  // namespace

ReducedProblem reduce_to_bh(const std::vector<double>& p, double alpha,
                            const DependencyGraph& g) {
    if (g.m != static_cast<int>(p.size()))
        throw std::invalid_argument("reduce_to_bh: graph size mismatch");
    ReducedProblem rp;
    rp.kept = bh(p, alpha);
    rp.alpha_orig = alpha;
    rp.m_orig = g.m;
    rp.alpha_adj = alpha * static_cast<double>(rp.kept.size()) / g.m;
    auto sub = induced_subgraph(g, rp.kept);
    rp.sub_graph = std::move(sub.graph);
    rp.to_original = std::move(sub.to_original);
    rp.to_local = std::move(sub.to_local);
    rp.sub_p.resize(rp.kept.size());
    for (int i = 1; i <= rp.m_local(); ++i)
        rp.sub_p[i - 1] = p[rp.to_original[i] - 1];
    rp.r_index.assign(rp.m_local() + 1, 0);
    for (int i = 1; i <= rp.m_local(); ++i)
        rp.r_index[i] = r_index_of(rp.sub_p[i - 1], alpha, g.m, rp.m_local());
    return rp;
}

int StepColumn::at(int r) const {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
    if (it == breaks.begin()) return 0;
    return vals[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

int IndNumTable::value(int k, int r) const { return cols[k]->at(r); }

long long IndNumTable::sum_at(int r) const {
    auto it = std::upper_bound(sum_breaks.begin(), sum_breaks.end(), r);
    if (it == sum_breaks.begin()) return 0;
    return sum_vals[static_cast<std::size_t>(it - sum_breaks.begin()) - 1];
}

int IndNumTable::max_at(int r) const {
    auto it = std::upper_bound(sum_breaks.begin(), sum_breaks.end(), r);
    if (it == sum_breaks.begin()) return 0;
    return max_vals[static_cast<std::size_t>(it - sum_breaks.begin()) - 1];
}

namespace {

std::shared_ptr<const StepColumn> build_column(const ReducedProblem& rp,
                                               const ComponentInfo& comp,
                                               const std::vector<char>& masked) {
    auto col = std::make_shared<StepColumn>();
    int r_max = rp.m_local();
    if (comp.is_clique) {
        int rmin = r_max + 1;
        for (int v : comp.nodes)
            if (!masked[v]) rmin = std::min(rmin, rp.r_index[v]);
        if (rmin <= r_max) {
            col->breaks = {rmin};
            col->vals = {1};
        }
        return col;
    }
    // sweep nodes in r_index order, growing the candidate mask; the column
    // value at r is the best overlap of any maximal independent set with it
    std::vector<std::pair<int, int>> order;  // (r_index, bit)
    for (std::size_t b = 0; b < comp.nodes.size(); ++b) {
        int v = comp.nodes[b];
        if (!masked[v] && rp.r_index[v] <= r_max)
            order.emplace_back(rp.r_index[v], static_cast<int>(b));
    }
    std::sort(order.begin(), order.end());
    std::uint64_t q = 0;
    int last = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
        q |= std::uint64_t{1} << order[j].second;
        if (j + 1 < order.size() && order[j + 1].first == order[j].first) continue;
        int best = 0;
        for (std::uint64_t s : comp.mis) best = std::max(best, std::popcount(s & q));
        if (best > last) {
            col->breaks.push_back(order[j].first);
            col->vals.push_back(best);
            last = best;
        }
    }
    return col;
}

void build_merged(IndNumTable& t) {
    // events: (r, sum delta, value) over all column breakpoints
    struct Event {
        int r;
        int delta;
        int val;
    };
    std::vector<Event> events;
    for (const auto& col : t.cols) {
        int prev = 0;
        for (std::size_t j = 0; j < col->breaks.size(); ++j) {
            events.push_back({col->breaks[j], col->vals[j] - prev, col->vals[j]});
            prev = col->vals[j];
        }
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.r < b.r; });
    t.sum_breaks.clear();
    t.sum_vals.clear();
    t.max_vals.clear();
    long long sum = 0;
    int mx = 0;
    for (std::size_t j = 0; j < events.size(); ++j) {
        sum += events[j].delta;
        mx = std::max(mx, events[j].val);
        if (j + 1 < events.size() && events[j + 1].r == events[j].r) continue;
        t.sum_breaks.push_back(events[j].r);
        t.sum_vals.push_back(sum);
        t.max_vals.push_back(mx);
    }
}

// max{r in [1, cap] : sum_at(r) - penalty(r) >= r}, where penalty selects the
// bound flavor; segments of the merged step function are scanned directly
int bound_from_segments(const IndNumTable& t, int cap, bool subtract_max) {
    int best = 0;
    for (std::size_t j = 0; j < t.sum_breaks.size(); ++j) {
        int seg_start = t.sum_breaks[j];
        int seg_end = (j + 1 < t.sum_breaks.size()) ? t.sum_breaks[j + 1] - 1 : cap;
        seg_end = std::min(seg_end, cap);
        if (seg_start > seg_end) continue;
        long long level = t.sum_vals[j];
        if (subtract_max) level = level - t.max_vals[j] + 1;
        int cand = static_cast<int>(std::min<long long>(level, seg_end));
        if (cand >= seg_start) best = std::max(best, cand);
    }
    return best;
}

std::vector<char> masked_flags(const ReducedProblem& rp, const NodeSet& masked_local) {
    std::vector<char> flags(rp.m_local() + 1, 0);
    for (int v : masked_local) {
        if (v < 1 || v > rp.m_local())
            throw std::invalid_argument("mask index outside reduced problem");
        flags[v] = 1;
    }
    return flags;
}

}  // namespace

IndNumTable precompute_table(const ReducedProblem& rp, int guard) {
    IndNumTable t;
    t.r_max = rp.m_local();
    auto cidx = connected_components(rp.sub_graph);
    t.comp_of.assign(rp.m_local() + 1, -1);
    for (int i = 1; i <= rp.m_local(); ++i) t.comp_of[i] = cidx.component_of[i];
    std::vector<char> no_mask(rp.m_local() + 1, 0);
    for (std::size_t k = 0; k < cidx.components.size(); ++k) {
        auto info = std::make_shared<ComponentInfo>();
        info->nodes = cidx.components[k];
        std::size_t n = info->nodes.size();
        info->is_clique = true;
        for (int v : info->nodes)
            if (rp.sub_graph.adjacency[v].size() != n - 1) {
                info->is_clique = false;
                break;
            }
        if (!info->is_clique) {
            int cap = std::min(guard, 64);
            if (static_cast<int>(n) > cap)
                throw GuardError("precompute_table: component " + std::to_string(k) +
                                 " has " + std::to_string(n) + " nodes, guard " +
                                 std::to_string(cap));
            info->adj.assign(n, 0);
            std::vector<int> pos(rp.m_local() + 1, -1);
            for (std::size_t b = 0; b < n; ++b) pos[info->nodes[b]] = static_cast<int>(b);
            for (std::size_t b = 0; b < n; ++b)
                for (int u : rp.sub_graph.adjacency[info->nodes[b]])
                    info->adj[b] |= std::uint64_t{1} << pos[u];
            std::uint64_t universe =
                n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
            info->mis = maximal_independent_sets_mask(info->adj, universe);
        }
        t.comps.push_back(info);
        t.cols.push_back(build_column(rp, *info, no_mask));
    }
    build_merged(t);
    t.r_bar = bound_from_segments(t, t.r_max, /*subtract_max=*/false);
    return t;
}

IndNumTable update_table(const IndNumTable& t, const ReducedProblem& rp,
                         const NodeSet& masked_local) {
    if (masked_local.empty()) return t;
    IndNumTable nt;
    nt.r_max = t.r_max;
    nt.r_bar = t.r_bar;
    nt.comps = t.comps;
    nt.comp_of = t.comp_of;
    nt.cols = t.cols;
    std::vector<char> flags = masked_flags(rp, masked_local);
    std::vector<char> touched(t.comps.size(), 0);
    for (int v : masked_local) touched[t.comp_of[v]] = 1;
    for (std::size_t k = 0; k < t.comps.size(); ++k)
        if (touched[k]) nt.cols[k] = build_column(rp, *t.comps[k], flags);
    build_merged(nt);
    return nt;
}

namespace {

// max{r in [lo, hi] : sum_at(r) - V_comp(r) + 1 >= r}, or lo - 1 if none.
// Every column's breakpoints appear in sum_breaks, so both terms are constant
// between consecutive merged breaks and segments can be scanned directly.
int bounded_comp_scan(const IndNumTable& t, int k, int lo, int hi) {
    if (lo < 1) lo = 1;
    if (hi > t.r_max) hi = t.r_max;
    if (lo > hi) return lo - 1;
    const auto& br = t.sum_breaks;
    // segment covering hi, then walk down
    auto it = std::upper_bound(br.begin(), br.end(), hi);
    std::size_t j = static_cast<std::size_t>(it - br.begin());  // br[j-1] <= hi
    while (true) {
        int seg_start = (j == 0) ? 1 : br[j - 1];
        int seg_end = (j < br.size()) ? br[j] - 1 : t.r_max;
        seg_end = std::min(seg_end, hi);
        int lo_clamped = std::max(seg_start, lo);
        if (seg_end >= lo_clamped) {
            long long level =
                (j == 0) ? 1
                         : t.sum_vals[j - 1] - t.cols[k]->at(seg_start) + 1;
            int cand = static_cast<int>(std::min<long long>(level, seg_end));
            if (cand >= lo_clamped) return cand;
        }
        if (seg_start <= lo || j == 0) return lo - 1;
        --j;
    }
}

int beta_minus_for_component(const IndNumTable& t, int k, int cap) {
    int r = bounded_comp_scan(t, k, 1, cap);
    return r < 1 ? 0 : r;
}

}  // namespace

CheckResult cheap_checks(const IndNumTable& t, const ReducedProblem& rp,
                         const NodeSet& masked_local) {
    CheckResult res;
    int cap = std::min(t.r_bar, t.r_max);
    res.bounds.beta_plus = bound_from_segments(t, cap, false);
    res.bounds.beta_minus = bound_from_segments(t, cap, true);
    res.bounds.beta_minus_comp.resize(t.comps.size());
    for (std::size_t k = 0; k < t.comps.size(); ++k)
        res.bounds.beta_minus_comp[k] =
            beta_minus_for_component(t, static_cast<int>(k), cap);
    std::vector<char> flags = masked_flags(rp, masked_local);
    res.verdicts.assign(rp.m_local() + 1, Verdict::NoReject);
    for (int i = 1; i <= rp.m_local(); ++i) {
        if (flags[i]) continue;  // masked entries are never rejected
        int r = rp.r_index[i];
        if (r <= res.bounds.beta_minus ||
            r <= res.bounds.beta_minus_comp[t.comp_of[i]])
            res.verdicts[i] = Verdict::Reject;
        else if (r > res.bounds.beta_plus)
            res.verdicts[i] = Verdict::NoReject;
        else
            res.verdicts[i] = Verdict::Undecided;
    }
    return res;
}

int beta_exact(const ReducedProblem& rp, const IndNumTable& t,
               const NodeSet& masked_local, int i_local) {
    if (i_local < 1 || i_local > rp.m_local())
        throw std::invalid_argument("beta_exact: node outside reduced problem");
    int cap = std::min(t.r_bar, t.r_max);
    if (cap < 1) return 0;
    int k = t.comp_of[i_local];
    const ComponentInfo& comp = *t.comps[k];
    if (comp.is_clique) {
        // no non-neighbor of i survives inside a clique component
        return std::max(1, bounded_comp_scan(t, k, 1, cap));
    }
    std::vector<char> flags = masked_flags(rp, masked_local);
    int bit_i = -1;
    for (std::size_t b = 0; b < comp.nodes.size(); ++b)
        if (comp.nodes[b] == i_local) bit_i = static_cast<int>(b);
    // candidates: unmasked non-neighbors of i in the component, entering as r
    // passes their r_index; scanned downward so bits only get cleared
    std::vector<std::pair<int, int>> order;  // (r_index, bit), descending scan
    std::uint64_t cand = 0;
    for (std::size_t b = 0; b < comp.nodes.size(); ++b) {
        int v = comp.nodes[b];
        if (static_cast<int>(b) == bit_i || flags[v]) continue;
        if ((comp.adj[bit_i] >> b) & 1) continue;
        if (rp.r_index[v] <= cap) {
            order.emplace_back(rp.r_index[v], static_cast<int>(b));
            cand |= std::uint64_t{1} << b;
        }
    }
    std::sort(order.begin(), order.end());
    std::size_t hi = order.size();
    for (int r = cap; r >= 1; --r) {
        while (hi > 0 && order[hi - 1].first > r) {
            cand &= ~(std::uint64_t{1} << order[hi - 1].second);
            --hi;
        }
        long long rest = t.sum_at(r) - t.value(k, r);
        if (1 + static_cast<long long>(std::popcount(cand)) + rest < r) continue;
        int v = independence_number_mask(comp.adj, cand);
        if (1 + v + rest >= r) return r;
    }
    return 1;
}

namespace {

// IndBH on the reduced problem with some local entries masked to 1
NodeSet base_case(const ReducedProblem& rp, const IndNumTable& base,
                  const NodeSet& masked_local) {
    const IndNumTable t = update_table(base, rp, masked_local);
    int cap = std::min(t.r_bar, t.r_max);
    int beta_plus = bound_from_segments(t, cap, false);
    int beta_minus = bound_from_segments(t, cap, true);
    std::vector<char> flags = masked_flags(rp, masked_local);
    NodeSet rejected;
    std::vector<std::vector<int>> pending(t.comps.size());
    for (int i = 1; i <= rp.m_local(); ++i) {
        if (flags[i]) continue;
        int r = rp.r_index[i];
        if (r <= beta_minus)
            rejected.push_back(i);
        else if (r <= beta_plus)
            pending[t.comp_of[i]].push_back(i);
    }
    std::vector<int> fallback;
    for (std::size_t k = 0; k < t.comps.size(); ++k) {
        if (pending[k].empty()) continue;
        // bounded variant of the per-component check: only values in
        // (beta_minus, beta_plus] can matter for pending hypotheses
        int bk = std::max(
            beta_minus,
            bounded_comp_scan(t, static_cast<int>(k), beta_minus + 1, beta_plus));
        for (int i : pending[k]) {
            if (rp.r_index[i] <= bk)
                rejected.push_back(i);
            else
                fallback.push_back(i);
        }
    }
    std::vector<char> accept(fallback.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (long long j = 0; j < static_cast<long long>(fallback.size()); ++j) {
        int i = fallback[j];
        if (rp.r_index[i] <= beta_exact(rp, t, masked_local, i)) accept[j] = 1;
    }
    for (std::size_t j = 0; j < fallback.size(); ++j)
        if (accept[j]) rejected.push_back(fallback[j]);
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

struct KContext {
    const ReducedProblem& rp;
    const IndNumTable& base;
    std::map<std::pair<int, NodeSet>, NodeSet> memo_level;
    std::map<std::pair<int, NodeSet>, NodeSet> memo_star;

    // level 2 under the relaxation, without recursion: masking one component
    // removes a single entry from the per-component argmin list, and the BH
    // fixed point of the list minus one entry is answered in O(1) per
    // component from prefix/suffix scans of the sorted list
    NodeSet eval_star_two(const std::vector<char>& flags, const NodeSet& prev) {
        int n_comps = static_cast<int>(base.comps.size());
        std::vector<std::pair<int, int>> mins;  // (argmin r_index, comp)
        std::vector<int> pos(n_comps, -1);      // 1-based rank in sorted mins
        for (int k = 0; k < n_comps; ++k) {
            int rmin = rp.m_local() + 1;
            for (int v : base.comps[k]->nodes)
                if (!flags[v]) rmin = std::min(rmin, rp.r_index[v]);
            if (rmin <= rp.m_local()) mins.emplace_back(rmin, k);
        }
        std::sort(mins.begin(), mins.end());
        int c = static_cast<int>(mins.size());
        for (int q = 1; q <= c; ++q) pos[mins[q - 1].second] = q;
        // pref[r] = max{r' <= r : mins[r'] <= r'}; suf[q] answers the same
        // question for ranks >= q after the entry at rank q is removed
        std::vector<int> pref(c + 1, 0), suf(c + 2, 0);
        for (int r = 1; r <= c; ++r)
            pref[r] = (mins[r - 1].first <= r) ? r : pref[r - 1];
        for (int q = c; q >= 1; --q) {
            suf[q] = suf[q + 1];
            if (suf[q] == 0 && q < c && mins[q].first <= q) suf[q] = q;
        }
        // sorted unmasked r_index values, for counting below a threshold
        std::vector<int> unmasked;
        unmasked.reserve(rp.m_local());
        for (int i = 1; i <= rp.m_local(); ++i)
            if (!flags[i]) unmasked.push_back(rp.r_index[i]);
        std::sort(unmasked.begin(), unmasked.end());
        auto count_leq = [&](int r) {
            return static_cast<int>(std::upper_bound(unmasked.begin(),
                                                     unmasked.end(), r) -
                                    unmasked.begin());
        };
        NodeSet result = prev;
        for (int k = 0; k < n_comps; ++k) {
            int rstar = (pos[k] < 0) ? pref[c]
                                     : std::max(pref[pos[k] - 1], suf[pos[k]]);
            int own = 0;
            for (int v : base.comps[k]->nodes)
                if (!flags[v] && rp.r_index[v] <= rstar) ++own;
            int cnt = 1 + count_leq(rstar) - own;
            for (int v : base.comps[k]->nodes)
                if (!flags[v] && !set_contains(prev, v) && rp.r_index[v] <= cnt)
                    result.push_back(v);
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    // IndBH^(level) under the clique relaxation of the reduced graph: a fast
    // subset of the exact set, exact when every component is a clique
    NodeSet eval_star(int level, const NodeSet& mask) {
        auto key = std::make_pair(level, mask);
        auto it = memo_star.find(key);
        if (it != memo_star.end()) return it->second;
        NodeSet result;
        std::vector<char> flags = masked_flags(rp, mask);
        if (level == 2) {
            result = eval_star_two(flags, eval_star(1, mask));
            memo_star.emplace(key, result);
            return result;
        }
        if (level == 1) {
            // per-component argmins, BH over them, one shared threshold
            std::vector<int> mins;
            for (const auto& comp : base.comps) {
                int rmin = rp.m_local() + 1;
                for (int v : comp->nodes)
                    if (!flags[v]) rmin = std::min(rmin, rp.r_index[v]);
                if (rmin <= rp.m_local()) mins.push_back(rmin);
            }
            std::sort(mins.begin(), mins.end());
            int rstar = 0;
            for (int r = static_cast<int>(mins.size()); r >= 1; --r)
                if (mins[r - 1] <= r) {
                    rstar = r;
                    break;
                }
            for (int i = 1; i <= rp.m_local(); ++i)
                if (!flags[i] && rp.r_index[i] <= rstar) result.push_back(i);
        } else {
            NodeSet prev = eval_star(level - 1, mask);
            result = prev;
            // masking a whole component can only shrink the inner set and
            // drops its members, so the inner count is at most
            // 1 + |prev| - |prev ∩ component| (strict thresholds need alpha < 1)
            bool tight = rp.alpha_orig < 1.0;
            for (std::size_t k = 0; k < base.comps.size(); ++k) {
                int overlap = 0;
                for (int v : base.comps[k]->nodes)
                    if (set_contains(prev, v)) ++overlap;
                int cand_count =
                    1 + static_cast<int>(prev.size()) - (tight ? overlap : 0);
                NodeSet cand;
                for (int v : base.comps[k]->nodes)
                    if (!flags[v] && !set_contains(prev, v) &&
                        rp.r_index[v] <= cand_count)
                        cand.push_back(v);
                if (cand.empty()) continue;
                // one recursive call covers the whole component: under the
                // relaxation, N_i is the component for every member
                NodeSet sub_mask = set_union(mask, base.comps[k]->nodes);
                NodeSet s = eval_star(level - 1, sub_mask);
                int cnt = 1 + static_cast<int>(s.size());
                for (int v : cand)
                    if (rp.r_index[v] <= cnt) result.push_back(v);
            }
            std::sort(result.begin(), result.end());
        }
        memo_star.emplace(key, result);
        return result;
    }

    NodeSet eval_level(int level, const NodeSet& mask) {
        auto key = std::make_pair(level, mask);
        auto it = memo_level.find(key);
        if (it != memo_level.end()) return it->second;
        NodeSet result;
        if (level == 1) {
            result = base_case(rp, base, mask);
        } else {
            NodeSet prev = eval_level(level - 1, mask);
            NodeSet star = eval_star(level, mask);
            result = set_union(prev, star);
            std::vector<char> flags = masked_flags(rp, mask);
            int cand_count = 1 + static_cast<int>(prev.size());
            bool tight = rp.alpha_orig < 1.0;
            NodeSet added;
            for (int i = 1; i <= rp.m_local(); ++i) {
                if (flags[i] || set_contains(result, i)) continue;
                if (rp.r_index[i] > cand_count) continue;
                NodeSet closed = rp.sub_graph.adjacency[i];
                closed.insert(std::lower_bound(closed.begin(), closed.end(), i), i);
                if (tight) {
                    // masking the closed neighborhood can only shrink the inner
                    // set and removes its rejected members, so the inner count
                    // is at most 1 + |prev| - |prev ∩ closed|
                    int overlap = 0;
                    for (int v : closed)
                        if (set_contains(prev, v)) ++overlap;
                    if (rp.r_index[i] > cand_count - overlap) continue;
                }
                NodeSet s = eval_level(level - 1, set_union(mask, closed));
                if (rp.r_index[i] <= 1 + static_cast<int>(s.size()))
                    added.push_back(i);
            }
            result = set_union(result, added);
        }
        memo_level.emplace(key, result);
        return result;
    }
};

NodeSet map_back(const ReducedProblem& rp, const NodeSet& local) {
    NodeSet out;
    out.reserve(local.size());
    for (int v : local) out.push_back(rp.to_original[v]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

NodeSet indbh_fast(const std::vector<double>& p, double alpha,
                   const DependencyGraph& g, int guard) {
    ReducedProblem rp = reduce_to_bh(p, alpha, g);
    if (rp.kept.empty()) return {};
    IndNumTable t = precompute_table(rp, guard);
    return map_back(rp, base_case(rp, t, {}));
}

NodeSet clique_shortcut(const std::vector<double>& p, double alpha,
                        const std::vector<NodeSet>& blocks) {
    int m = static_cast<int>(p.size());
    std::vector<char> seen(m + 1, 0);
    for (const auto& b : blocks)
        for (int v : b) {
            if (v < 1 || v > m)
                throw std::invalid_argument("clique_shortcut: node out of range");
            if (seen[v])
                throw std::invalid_argument("clique_shortcut: blocks overlap");
            seen[v] = 1;
        }
    for (int v = 1; v <= m; ++v)
        if (!seen[v])
            throw std::invalid_argument("clique_shortcut: blocks do not cover all nodes");
    std::vector<double> q(p.size(), 1.0);
    for (const auto& b : blocks) {
        int argmin = b.front();
        for (int v : b)
            if (p[v - 1] < p[argmin - 1]) argmin = v;
        q[argmin - 1] = p[argmin - 1];
    }
    double thr = alpha * static_cast<double>(bh(q, alpha).size()) / m;
    NodeSet out;
    for (int i = 1; i <= m; ++i)
        if (p[i - 1] <= thr) out.push_back(i);
    return out;
}

NodeSet indbh_k_fast(const std::vector<double>& p, double alpha,
                     const DependencyGraph& g, int k, int guard) {
    if (k < 1) throw std::invalid_argument("indbh_k_fast: k must be >= 1");
    ReducedProblem rp = reduce_to_bh(p, alpha, g);
    if (rp.kept.empty()) return {};
    IndNumTable t = precompute_table(rp, guard);
    if (k == 1) return map_back(rp, base_case(rp, t, {}));
    KContext ctx{rp, t, {}, {}};
    return map_back(rp, ctx.eval_level(k, {}));
}

}  // namespace depfdr
