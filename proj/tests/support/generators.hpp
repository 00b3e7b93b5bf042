// Random instances and brute-force oracles shared by the unit tests and the
// acceptance binary. Oracles deliberately avoid the library's algorithms.
#ifndef ORDERSENS_TEST_GENERATORS_HPP
#define ORDERSENS_TEST_GENERATORS_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "ordersens/causal/random.hpp"
#include "ordersens/lattice.hpp"
#include "ordersens/poset.hpp"
#include "ordersens/valuation.hpp"

namespace ordersens::testing {

using Rng = causal::Rng;

/// Integer in [lo, hi].
inline long uniform_int(Rng& rng, long lo, long hi) {
    return lo + static_cast<long>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
}

/// Random poset on n elements. Ids are shuffled so that τ is not simply the
/// generation order; each pair is related with probability `density`.
inline Poset random_poset(Rng& rng, std::size_t n, double density = 0.3) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back("e" + std::to_string(k));
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k) std::swap(rank[k - 1], rank[rng.index(k)]);
    std::vector<std::pair<std::string, std::string>> covers;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (rank[a] < rank[b] && rng.bernoulli(density)) covers.emplace_back(ids[a], ids[b]);
    return Poset::from_relations(ids, covers);
}

/// Downward closure of a random subset.
inline Ideal random_ideal(Rng& rng, const Poset& p, double keep = 0.3) {
    Ideal s;
    for (Element a = 0; a < p.size(); ++a)
        if (rng.bernoulli(keep)) {
            s.insert(a);
            s = s | p.predecessors(a);
        }
    return s;
}

inline EdgeField random_int_field(Rng& rng, const SlicePtr& slice, long lo = -9, long hi = 9) {
    EdgeField g(slice);
    for (EdgeId e = 0; e < slice->edge_count(); ++e) g[e] = static_cast<double>(uniform_int(rng, lo, hi));
    return g;
}

inline Potential random_int_potential(Rng& rng, const SlicePtr& slice, long lo = -9, long hi = 9) {
    Potential phi(slice);
    for (NodeId k = 0; k < slice->node_count(); ++k) phi[k] = static_cast<double>(uniform_int(rng, lo, hi));
    return phi;
}

/// Boolean lattice on n pairwise incomparable elements.
inline Poset antichain(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back(std::string(1, static_cast<char>('a' + k)));
    return Poset::from_relations(ids, {});
}

inline Poset chain(std::size_t n) {
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> covers;
    for (std::size_t k = 0; k < n; ++k) {
        ids.push_back(std::string(1, static_cast<char>('a' + k)));
        if (k > 0) covers.emplace_back(ids[k - 1], ids[k]);
    }
    return Poset::from_relations(ids, covers);
}

// ---- oracles -------------------------------------------------------------

/// Strict order by transitive closure of the covers, recomputed from scratch.
inline std::vector<std::vector<bool>> closure_oracle(const Poset& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (auto [a, b] : p.covers()) lt[a][b] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (lt[i][k] && lt[k][j]) lt[i][j] = true;
    return lt;
}

inline bool ideal_oracle(const Poset& p, const std::set<Element>& s) {
    const auto lt = closure_oracle(p);
    for (Element b : s)
        for (Element a = 0; a < p.size(); ++a)
            if (lt[a][b] && !s.count(a)) return false;
    return true;
}

/// Every ordering of j \ i that respects ≺, by filtering all permutations.
inline std::vector<std::vector<Element>> extensions_oracle(const Poset& p, const Ideal& i, const Ideal& j) {
    const auto lt = closure_oracle(p);
    std::vector<Element> diff = (j - i).elements();
    std::sort(diff.begin(), diff.end());
    std::vector<std::vector<Element>> out;
    do {
        bool ok = true;
        for (std::size_t x = 0; x < diff.size() && ok; ++x)
            for (std::size_t y = x + 1; y < diff.size() && ok; ++y)
                if (lt[diff[y]][diff[x]]) ok = false;
        if (ok) out.push_back(diff);
    } while (std::next_permutation(diff.begin(), diff.end()));
    return out;
}

/// BFS distance between two extensions in the adjacent-swap graph.
inline std::size_t swap_distance_oracle(const Poset& p, const std::vector<Element>& src,
                                        const std::vector<Element>& dst) {
    const auto lt = closure_oracle(p);
    std::map<std::vector<Element>, std::size_t> dist{{src, 0}};
    std::queue<std::vector<Element>> q;
    q.push(src);
    while (!q.empty()) {
        auto cur = q.front();
        q.pop();
        if (cur == dst) return dist[cur];
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            if (lt[cur[k]][cur[k + 1]]) continue;
            auto next = cur;
            std::swap(next[k], next[k + 1]);
            if (dist.emplace(next, dist[cur] + 1).second) q.push(next);
        }
    }
    return static_cast<std::size_t>(-1);
}

/// All ideals of p reachable from `base` within `depth` additions, by subset scan.
inline std::set<std::vector<Element>> slice_nodes_oracle(const Poset& p, const Ideal& base, int depth) {
    std::set<std::vector<Element>> out;
    const std::size_t n = p.size();
    const std::size_t b = base.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::set<Element> s;
        for (Element a = 0; a < n; ++a)
            if (mask >> a & 1) s.insert(a);
        bool contains_base = true;
        base.for_each([&](Element a) { contains_base = contains_base && s.count(a); });
        if (!contains_base || s.size() > b + static_cast<std::size_t>(depth)) continue;
        if (ideal_oracle(p, s)) out.insert(std::vector<Element>(s.begin(), s.end()));
    }
    return out;
}

/// μ(K, I) by the defining recursion over slice nodes, with subsets tested directly.
inline double mobius_oracle(const LatticeSlice& l, NodeId lower, NodeId upper) {
    const Ideal& k = l.node(lower);
    const Ideal& i = l.node(upper);
    if (!k.subset_of(i)) return 0.0;
    if (k == i) return 1.0;
    double s = 0.0;
    for (NodeId m = 0; m < l.node_count(); ++m) {
        const Ideal& x = l.node(m);
        if (k.subset_of(x) && x.subset_of(i) && !(x == i)) s += mobius_oracle(l, lower, m);
    }
    return -s;
}

/// Path value by walking the additions and looking up each edge afresh.
inline double path_value_oracle(const EdgeField& g, const std::vector<Element>& adds, Ideal at) {
    double s = 0.0;
    for (Element a : adds) {
        s += g.at(at, a);
        at.insert(a);
    }
    return s;
}

/// Every path of length ≤ H from the slice base, in lexicographic order with
/// the empty path first.
inline std::vector<Path> all_paths_from_base(const LatticeSlice& l) {
    std::vector<Path> out;
    std::vector<Path> stack{Path{l.base(), {}}};
    while (!stack.empty()) {
        Path cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        const auto node = l.find(cur.end());
        if (!node) continue;
        const auto edges = l.out_edges(*node);
        for (std::size_t t = edges.size(); t-- > 0;) {
            Path next = cur;
            next.additions.push_back(edges[t].add);
            stack.push_back(std::move(next));
        }
    }
    return out;
}

}  // namespace ordersens::testing

#endif
