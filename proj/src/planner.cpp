#include "ordersens/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordersens/error.hpp"

namespace ordersens {

PlanResult dp_plan(const EdgeField& g, PlanOptions options) {
    const LatticeSlice& l = g.slice();
    PlanResult out;
    out.value_table.assign(l.node_count(), 0.0);
    auto& u = out.value_table;

    // Children always have larger node ids, so a reverse sweep is a valid
    // backward recursion over depth layers.
    for (NodeId k = static_cast<NodeId>(l.node_count()); k-- > 0;) {
        const auto edges = l.out_edges(k);
        if (edges.empty()) {
            u[k] = 0.0;
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        const EdgeId first = l.first_out_edge(k);
        for (std::size_t t = 0; t < edges.size(); ++t)
            best = std::max(best, g[first + static_cast<EdgeId>(t)] + u[edges[t].to]);
        u[k] = options.allow_stop ? std::max(0.0, best) : best;
    }

    out.best_path.start = l.base();
    NodeId k = 0;
    while (true) {
        const auto edges = l.out_edges(k);
        if (edges.empty()) break;
        const EdgeId first = l.first_out_edge(k);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < edges.size(); ++t)
            best = std::max(best, g[first + static_cast<EdgeId>(t)] + u[edges[t].to]);
        if (options.allow_stop && best <= 0.0) break;
        for (std::size_t t = 0; t < edges.size(); ++t) {
            if (g[first + static_cast<EdgeId>(t)] + u[edges[t].to] == best) {
                out.best_path.additions.push_back(edges[t].add);
                k = edges[t].to;
                break;
            }
        }
    }
    out.best_value = path_value(g, out.best_path);
    return out;
}

namespace {

struct Search {
    const EdgeField& g;
    const LatticeSlice& l;
    PlanOptions options;
    std::vector<Element> prefix;
    std::size_t visited = 0;
    bool found = false;
    double best_value = 0.0;
    std::vector<Element> best;

    void consider(double value) {
        if (!found || value > best_value) {
            found = true;
            best_value = value;
            best = prefix;
        }
    }

    // Pre-order DFS in ascending action order visits paths lexicographically
    // (a prefix before its extensions), so keeping strict improvements only
    // selects the lexicographically first maximizer.
    void visit(NodeId k, double value) {
        if (++visited > options.path_cap)
            throw CapExceeded("exhaustive search exceeded the path cap " +
                              std::to_string(options.path_cap));
        const auto edges = l.out_edges(k);
        if (options.allow_stop || edges.empty()) consider(value);
        const EdgeId first = l.first_out_edge(k);
        for (std::size_t t = 0; t < edges.size(); ++t) {
            prefix.push_back(edges[t].add);
            visit(edges[t].to, value + g[first + static_cast<EdgeId>(t)]);
            prefix.pop_back();
        }
    }
};

}  // namespace

PlanResult exhaustive_plan(const EdgeField& g, PlanOptions options) {
    Search s{g, g.slice(), options, {}, 0, false, 0.0, {}};
    s.visit(0, 0.0);
    PlanResult out;
    out.best_path = Path{g.slice().base(), s.best};
    out.best_value = s.best_value;
    return out;
}

OrderBoundReport order_bound_check(const EdgeField& g, const Ideal& i, const Ideal& j,
                                   PathEnumOptions options, double tol) {
    const LatticeSlice& l = g.slice();
    OrderBoundReport r;
    for (const Diamond& d : enumerate_diamonds(l)) r.epsilon = std::max(r.epsilon, std::abs(curvature(g, d)));

    const auto paths = enumerate_paths(l, i, j, options);
    const std::size_t width = (j - i).size();
    const double max_swaps = static_cast<double>(width * (width >= 1 ? width - 1 : 0) / 2);
    r.worst_case_bound = max_swaps * r.epsilon;

    std::vector<double> values;
    values.reserve(paths.size());
    for (const auto& p : paths) values.push_back(path_value(g, p));

    std::vector<std::size_t> pos(l.poset().size());
    for (std::size_t a = 0; a < paths.size(); ++a) {
        for (std::size_t k = 0; k < width; ++k) pos[paths[a].additions[k]] = k;
        for (std::size_t b = a + 1; b < paths.size(); ++b) {
            std::size_t swaps = 0;
            const auto& other = paths[b].additions;
            for (std::size_t x = 0; x < width; ++x)
                for (std::size_t y = x + 1; y < width; ++y)
                    if (pos[other[x]] > pos[other[y]]) ++swaps;
            const double gap = std::abs(values[a] - values[b]);
            const double bound = static_cast<double>(swaps) * r.epsilon;
            ++r.pairs;
            r.max_gap = std::max(r.max_gap, gap);
            const double slack = tol * std::max(1.0, bound);
            if (gap > bound + slack || static_cast<double>(swaps) > max_swaps) ++r.violations;
            if (bound > 0.0) r.tightest_ratio = std::max(r.tightest_ratio, gap / bound);
        }
    }
    r.holds = r.violations == 0;
    return r;
}

}  // namespace ordersens
