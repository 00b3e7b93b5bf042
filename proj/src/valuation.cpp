#include "ordersens/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "ordersens/error.hpp"

namespace ordersens {

EdgeField::EdgeField(SlicePtr slice, double fill, std::string context)
    : slice_(std::move(slice)), values_(slice_->edge_count(), fill), context_(std::move(context)) {}

EdgeField::EdgeField(SlicePtr slice, std::vector<double> values, std::string context)
    : slice_(std::move(slice)), values_(std::move(values)), context_(std::move(context)) {
    if (values_.size() != slice_->edge_count())
        throw InputError("edge field has " + std::to_string(values_.size()) +
                         " values for " + std::to_string(slice_->edge_count()) + " edges");
}

double EdgeField::at(const Ideal& i, Element a) const {
    if (auto e = slice_->find_edge(i, a)) return values_[*e];
    const Poset& p = slice_->poset();
    throw PreconditionError("edge (" + p.format(i) + ", " +
                            (a < p.size() ? p.id(a) : std::to_string(a)) +
                            ") is not in the slice");
}

void EdgeField::set(const Ideal& i, Element a, double value) {
    if (auto e = slice_->find_edge(i, a)) {
        values_[*e] = value;
        return;
    }
    throw PreconditionError("edge (" + slice_->poset().format(i) + ", " +
                            std::to_string(a) + ") is not in the slice");
}

DiamondField::DiamondField(SlicePtr slice, double fill)
    : slice_(std::move(slice)), diamonds_(enumerate_diamonds(*slice_)), values_(diamonds_.size(), fill) {
    for (std::size_t k = 0; k < diamonds_.size(); ++k) {
        const auto& d = diamonds_[k];
        index_.emplace(key(slice_->index_of(d.base), d.u, d.v), k);
    }
}

std::uint64_t DiamondField::key(NodeId node, Element u, Element v) const {
    const std::uint64_t n = slice_->poset().size();
    return (static_cast<std::uint64_t>(node) * n + u) * n + v;
}

std::optional<std::size_t> DiamondField::find(const Ideal& base, Element u, Element v) const {
    auto node = slice_->find(base);
    if (!node || u >= slice_->poset().size() || v >= slice_->poset().size()) return std::nullopt;
    auto it = index_.find(key(*node, u, v));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double DiamondField::at(const Ideal& base, Element u, Element v) const {
    if (auto k = find(base, u, v)) return values_[*k];
    const Poset& p = slice_->poset();
    throw PreconditionError("diamond (" + p.format(base) + "; " + p.id(u) + ", " + p.id(v) +
                            ") is not in the field's domain");
}

void DiamondField::set(const Diamond& d, double value) {
    if (auto k = find(d.base, d.u, d.v)) {
        values_[*k] = value;
        return;
    }
    throw PreconditionError("diamond is not in the field's domain");
}

double path_value(const EdgeField& g, const Path& path) {
    const LatticeSlice& l = g.slice();
    auto node = l.find(path.start);
    if (!node) throw PreconditionError("path start is not a slice node");
    double total = 0.0;
    for (Element a : path.additions) {
        auto e = l.find_edge(*node, a);
        if (!e) throw PreconditionError("path leaves the edge field's domain");
        total += g[*e];
        node = l.edge(*e).to;
    }
    return total;
}

double curvature(const EdgeField& g, const Diamond& d) {
    const Ideal& i = d.base;
    return g.at(i, d.v) + g.at(i.with(d.v), d.u) - g.at(i, d.u) - g.at(i.with(d.u), d.v);
}

DiamondField curvature_field(const EdgeField& g) {
    DiamondField kappa(g.slice_ptr());
    for (std::size_t k = 0; k < kappa.size(); ++k) kappa[k] = curvature(g, kappa.diamonds()[k]);
    return kappa;
}

PathIndependence check_path_independence(const EdgeField& g, double tol) {
    for (const Diamond& d : enumerate_diamonds(g.slice())) {
        const double k = curvature(g, d);
        if (std::abs(k) > tol) return PathIndependence{false, d, k};
    }
    return PathIndependence{};
}

Potential endpoint_potential(const EdgeField& g, double tol) {
    if (auto verdict = check_path_independence(g, tol); !verdict.independent) {
        const Poset& p = g.slice().poset();
        throw PreconditionError("field has non-zero curvature " + std::to_string(verdict.curvature) +
                                " on diamond (" + p.format(verdict.witness->base) + "; " +
                                p.id(verdict.witness->u) + ", " + p.id(verdict.witness->v) + ")");
    }
    const LatticeSlice& l = g.slice();
    Potential phi(g.slice_ptr());
    std::vector<bool> set(l.node_count(), false);
    set[0] = true;
    // Nodes are layered, so every parent is settled before its children.
    for (NodeId k = 0; k < l.node_count(); ++k) {
        const EdgeId first = l.first_out_edge(k);
        const auto out = l.out_edges(k);
        for (std::size_t t = 0; t < out.size(); ++t) {
            if (!set[out[t].to]) {
                phi[out[t].to] = phi[k] + g[first + static_cast<EdgeId>(t)];
                set[out[t].to] = true;
            }
        }
    }
    for (EdgeId e = 0; e < l.edge_count(); ++e) {
        const auto& edge = l.edge(e);
        const double err = std::abs(phi[edge.to] - phi[edge.from] - g[e]);
        if (err > tol * std::max(1.0, std::abs(g[e])))
            throw PreconditionError("potential does not reproduce the field within tolerance");
    }
    return phi;
}

EdgeField gradient(const Potential& phi) {
    const LatticeSlice& l = phi.slice();
    EdgeField g(phi.slice_ptr());
    for (EdgeId e = 0; e < l.edge_count(); ++e) g[e] = phi[l.edge(e).to] - phi[l.edge(e).from];
    return g;
}

MobiusTable::MobiusTable(SlicePtr slice) : slice_(std::move(slice)), rows_(slice_->node_count()) {
    const LatticeSlice& l = *slice_;
    for (NodeId k = 0; k < l.node_count(); ++k) {
        const Ideal& lower = l.node(k);
        std::vector<std::pair<NodeId, double>> row;
        row.emplace_back(k, 1.0);
        for (NodeId i = k + 1; i < l.node_count(); ++i) {
            const Ideal& upper = l.node(i);
            if (!lower.subset_of(upper)) continue;
            double sum = 0.0;
            for (const auto& [mid, mu] : row)
                if (l.node(mid).subset_of(upper)) sum += mu;
            row.emplace_back(i, -sum);
        }
        auto& out = rows_[k];
        for (const auto& [node, mu] : row)
            if (mu != 0.0) out.emplace(node, mu);
    }
}

double MobiusTable::operator()(NodeId lower, NodeId upper) const {
    const auto& row = rows_[lower];
    auto it = row.find(upper);
    return it == row.end() ? 0.0 : it->second;
}

MobiusTable mobius_function(const SlicePtr& slice) { return MobiusTable(slice); }

ThetaSystem mobius_invert(const Potential& phi) {
    const LatticeSlice& l = phi.slice();
    if (!l.is_full_interval())
        throw PreconditionError("Möbius inversion needs a full interval slice [base, top]");
    MobiusTable mu(phi.slice_ptr());
    ThetaSystem theta(phi.slice_ptr());
    for (NodeId i = 0; i < l.node_count(); ++i) {
        double sum = 0.0;
        for (NodeId k = 0; k <= i; ++k)
            if (l.node(k).subset_of(l.node(i))) sum += mu(k, i) * phi[k];
        theta[i] = sum;
    }
    return theta;
}

Potential mobius_forward(const ThetaSystem& theta) {
    const LatticeSlice& l = theta.slice();
    Potential phi(theta.slice_ptr());
    for (NodeId i = 0; i < l.node_count(); ++i) {
        double sum = 0.0;
        for (NodeId k = 0; k <= i; ++k)
            if (l.node(k).subset_of(l.node(i))) sum += theta[k];
        phi[i] = sum;
    }
    return phi;
}

double reference_score(const EdgeField& g, const Ideal& i, const Ideal& j) {
    return path_value(g, reference_path(g.slice().poset(), i, j));
}

Decomposition decompose(const EdgeField& g, const Path& path) {
    const LatticeSlice& l = g.slice();
    const Path ref = reference_path(l.poset(), path.start, path.end());
    Decomposition out;
    out.reference_score = path_value(g, ref);
    out.rewrite = rewrite_sequence(l, ref, path);
    out.total = out.reference_score;
    for (const auto& step : out.rewrite.steps) {
        const double k = curvature(g, step.diamond);
        out.corrections.push_back(Correction{step.diamond, step.sign, k});
        out.total += step.sign * k;
    }
    return out;
}

}  // namespace ordersens
