#include "ordersens/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ordersens {

std::vector<ThreeCube> enumerate_cubes(const LatticeSlice& l) {
    std::vector<ThreeCube> out;
    const Poset& p = l.poset();
    for (NodeId k = 0; k < l.node_count(); ++k) {
        if (l.node_depth(k) > l.horizon() - 3) continue;
        auto e = l.out_edges(k);
        for (std::size_t x = 0; x < e.size(); ++x)
            for (std::size_t y = x + 1; y < e.size(); ++y) {
                if (p.comparable(e[x].add, e[y].add)) continue;
                for (std::size_t z = y + 1; z < e.size(); ++z) {
                    if (p.comparable(e[x].add, e[z].add) || p.comparable(e[y].add, e[z].add))
                        continue;
                    out.push_back(ThreeCube{l.node(k), e[x].add, e[y].add, e[z].add});
                }
            }
    }
    return out;
}

double cube_defect(const DiamondField& kappa, const ThreeCube& c) {
    const Ideal& i = c.base;
    // The (u,w) faces enter with the opposite sign: with that orientation
    // every edge term of a curvature field cancels.
    return kappa.at(i, c.u, c.v) - kappa.at(i.with(c.w), c.u, c.v) - kappa.at(i, c.u, c.w) +
           kappa.at(i.with(c.v), c.u, c.w) + kappa.at(i, c.v, c.w) - kappa.at(i.with(c.u), c.v, c.w);
}

CubeConsistency is_cube_consistent(const DiamondField& kappa, double tol) {
    for (const ThreeCube& c : enumerate_cubes(kappa.slice())) {
        const double defect = cube_defect(kappa, c);
        if (std::abs(defect) > tol) return CubeConsistency{false, c, defect};
    }
    return CubeConsistency{};
}

EdgeId ReferenceTree::tree_edge(NodeId k) const {
    auto e = slice->find_edge(parent.at(k), top_element.at(k));
    if (!e) throw PreconditionError("reference tree edge missing from the slice");
    return *e;
}

ReferenceTree reference_tree(const SlicePtr& slice) {
    const LatticeSlice& l = *slice;
    ReferenceTree tree;
    tree.slice = slice;
    tree.parent.assign(l.node_count(), 0);
    tree.top_element.assign(l.node_count(), 0);
    for (NodeId k = 1; k < l.node_count(); ++k) {
        const Ideal added = l.node(k) - l.base();
        const Element m = *added.max();
        auto parent = l.find(l.node(k).without(m));
        if (!parent)
            throw PreconditionError("ragged slice: parent of " + l.poset().format(l.node(k)) +
                                    " is not a node");
        tree.parent[k] = *parent;
        tree.top_element[k] = m;
    }
    return tree;
}

EdgeField zero_gauge_reconstruct(const DiamondField& kappa, double tol) {
    if (auto verdict = is_cube_consistent(kappa, tol); !verdict.consistent) {
        const auto& c = *verdict.witness;
        const Poset& p = kappa.slice().poset();
        throw CubeInconsistency("diamond field is not cube-consistent: defect " +
                                    std::to_string(verdict.defect) + " on cube (" +
                                    p.format(c.base) + "; " + p.id(c.u) + ", " + p.id(c.v) +
                                    ", " + p.id(c.w) + ")",
                                c, verdict.defect);
    }
    const LatticeSlice& l = kappa.slice();
    // Tree check up front, so ragged slices fail before any work.
    reference_tree(kappa.slice_ptr());

    std::vector<std::size_t> delta(l.edge_count());
    for (EdgeId e = 0; e < l.edge_count(); ++e) {
        const auto& edge = l.edge(e);
        delta[e] = (l.node(edge.from) - l.base()).count_above(edge.add);
    }
    std::vector<EdgeId> order(l.edge_count());
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](EdgeId a, EdgeId b) { return delta[a] < delta[b]; });

    EdgeField g(kappa.slice_ptr());
    for (EdgeId e : order) {
        if (delta[e] == 0) continue;
        const auto& edge = l.edge(e);
        const Ideal& i = l.node(edge.from);
        const Element b = *(i - l.base()).max();
        const Ideal k = i.without(b);
        auto lower = l.find_edge(k, edge.add);
        if (!lower) throw PreconditionError("reconstruction needs an edge missing from the slice");
        g[e] = g[*lower] + kappa.at(k, edge.add, b);
    }
    return g;
}

Potential tree_integrate(const GaugeSystem& alpha, const ReferenceTree& tree) {
    Potential psi(alpha.slice_ptr());
    // Parents have smaller node ids (layered storage).
    for (NodeId k = 1; k < alpha.slice().node_count(); ++k) psi[k] = psi[tree.parent[k]] + alpha[k];
    return psi;
}

EdgeField gradient_shift(const EdgeField& g, const Potential& psi) {
    const LatticeSlice& l = g.slice();
    EdgeField out = g;
    for (EdgeId e = 0; e < l.edge_count(); ++e)
        out[e] = g[e] + psi[l.edge(e).to] - psi[l.edge(e).from];
    return out;
}

GaugeSystem gauge_of(const EdgeField& g, const ReferenceTree& tree) {
    GaugeSystem alpha(g.slice_ptr());
    for (NodeId k = 1; k < g.slice().node_count(); ++k) alpha[k] = g[tree.tree_edge(k)];
    return alpha;
}

EdgeField reconstruct_with_gauge(const DiamondField& kappa, const GaugeSystem& alpha, double tol) {
    if (kappa.slice_ptr() != alpha.slice_ptr())
        throw InputError("diamond field and gauge system live on different slices");
    EdgeField g0 = zero_gauge_reconstruct(kappa, tol);
    const ReferenceTree tree = reference_tree(kappa.slice_ptr());
    return gradient_shift(g0, tree_integrate(alpha, tree));
}

}  // namespace ordersens
