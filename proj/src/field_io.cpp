#include "ordersens/field_io.hpp"

#include <unordered_set>

#include "ordersens/csv.hpp"
#include "ordersens/error.hpp"

namespace ordersens {

namespace {

std::vector<csv::Row> body(std::string_view text, const csv::Row& header, const char* what) {
    auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != header)
        throw InputError(std::string(what) + " CSV must start with header '" + csv::join(header) +
                         "'");
    rows.erase(rows.begin());
    for (const auto& r : rows)
        if (r.size() != header.size())
            throw InputError(std::string(what) + " CSV row has " + std::to_string(r.size()) +
                             " fields, expected " + std::to_string(header.size()));
    return rows;
}

template <class Tag>
std::string write_nodes(const NodeFunction<Tag>& f, const char* column, bool skip_base) {
    const LatticeSlice& l = f.slice();
    std::string out = std::string("ideal,") + column + "\n";
    for (NodeId k = skip_base ? 1 : 0; k < l.node_count(); ++k)
        out += csv::join({l.poset().format(l.node(k)), csv::format_number(f[k])}) + "\n";
    return out;
}

template <class Tag>
NodeFunction<Tag> read_nodes(const SlicePtr& slice, std::string_view text, const char* column,
                             bool skip_base, const char* what) {
    auto rows = body(text, {"ideal", column}, what);
    NodeFunction<Tag> f(slice);
    std::vector<bool> seen(slice->node_count(), false);
    for (const auto& r : rows) {
        auto k = slice->find(slice->poset().parse_set(r[0]));
        if (!k) throw InputError(std::string(what) + ": ideal '" + r[0] + "' is not a slice node");
        if (skip_base && *k == 0) throw InputError(std::string(what) + ": base node has no value");
        if (seen[*k]) throw InputError(std::string(what) + ": duplicate row for '" + r[0] + "'");
        seen[*k] = true;
        f[*k] = csv::parse_number(r[1]);
    }
    for (NodeId k = skip_base ? 1 : 0; k < slice->node_count(); ++k)
        if (!seen[k])
            throw InputError(std::string(what) + ": missing value for " +
                             slice->poset().format(slice->node(k)));
    return f;
}

}  // namespace

std::string write_edge_field(const EdgeField& g) {
    const LatticeSlice& l = g.slice();
    const Poset& p = l.poset();
    std::string out = "ideal,add,value\n";
    for (EdgeId e = 0; e < l.edge_count(); ++e) {
        const auto& edge = l.edge(e);
        out += csv::join({p.format(l.node(edge.from)), p.id(edge.add), csv::format_number(g[e])}) +
               "\n";
    }
    return out;
}

EdgeField read_edge_field(const SlicePtr& slice, std::string_view text) {
    auto rows = body(text, {"ideal", "add", "value"}, "edge field");
    const Poset& p = slice->poset();
    EdgeField g(slice);
    std::vector<bool> seen(slice->edge_count(), false);
    for (const auto& r : rows) {
        auto e = slice->find_edge(p.parse_set(r[0]), p.element(r[1]));
        if (!e) throw InputError("edge field: (" + r[0] + ", " + r[1] + ") is not a slice edge");
        if (seen[*e]) throw InputError("edge field: duplicate row (" + r[0] + ", " + r[1] + ")");
        seen[*e] = true;
        g[*e] = csv::parse_number(r[2]);
    }
    for (EdgeId e = 0; e < slice->edge_count(); ++e)
        if (!seen[e])
            throw InputError("edge field: missing value for (" +
                             p.format(slice->node(slice->edge(e).from)) + ", " +
                             p.id(slice->edge(e).add) + ")");
    return g;
}

std::string write_diamond_field(const DiamondField& kappa) {
    const Poset& p = kappa.slice().poset();
    std::string out = "ideal,u,v,value\n";
    for (std::size_t k = 0; k < kappa.size(); ++k) {
        const auto& d = kappa.diamonds()[k];
        out += csv::join({p.format(d.base), p.id(d.u), p.id(d.v), csv::format_number(kappa[k])}) +
               "\n";
    }
    return out;
}

DiamondField read_diamond_field(const SlicePtr& slice, std::string_view text) {
    auto rows = body(text, {"ideal", "u", "v", "value"}, "diamond field");
    const Poset& p = slice->poset();
    DiamondField kappa(slice);
    std::vector<bool> seen(kappa.size(), false);
    for (const auto& r : rows) {
        Element u = p.element(r[1]);
        Element v = p.element(r[2]);
        if (u > v) std::swap(u, v);
        auto k = kappa.find(p.parse_set(r[0]), u, v);
        if (!k) throw InputError("diamond field: (" + r[0] + "; " + r[1] + ", " + r[2] +
                                 ") is not a diamond of the slice");
        if (seen[*k]) throw InputError("diamond field: duplicate row for (" + r[0] + "; " + r[1] +
                                       ", " + r[2] + ")");
        seen[*k] = true;
        kappa[*k] = csv::parse_number(r[3]);
    }
    for (std::size_t k = 0; k < kappa.size(); ++k)
        if (!seen[k]) {
            const auto& d = kappa.diamonds()[k];
            throw InputError("diamond field: missing value for (" + p.format(d.base) + "; " +
                             p.id(d.u) + ", " + p.id(d.v) + ")");
        }
    return kappa;
}

std::string write_potential(const Potential& phi) { return write_nodes(phi, "value", false); }
std::string write_theta(const ThetaSystem& theta) { return write_nodes(theta, "value", false); }

Potential read_potential(const SlicePtr& slice, std::string_view text) {
    return read_nodes<PotentialTag>(slice, text, "value", false, "potential");
}

std::string write_gauge(const GaugeSystem& alpha) { return write_nodes(alpha, "alpha", true); }

GaugeSystem read_gauge(const SlicePtr& slice, std::string_view text) {
    return read_nodes<GaugeTag>(slice, text, "alpha", true, "gauge system");
}

}  // namespace ordersens
