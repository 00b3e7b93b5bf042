#ifndef ORDERSENS_VALUATION_HPP
#define ORDERSENS_VALUATION_HPP

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ordersens/lattice.hpp"

namespace ordersens {

inline constexpr double kDefaultTolerance = 1e-9;

/// Real value on every admissible edge of a slice (indexed by EdgeId).
class EdgeField {
public:
    EdgeField() = default;
    explicit EdgeField(SlicePtr slice, double fill = 0.0, std::string context = {});
    EdgeField(SlicePtr slice, std::vector<double> values, std::string context = {});

    const LatticeSlice& slice() const { return *slice_; }
    const SlicePtr& slice_ptr() const { return slice_; }
    const std::string& context() const { return context_; }

    double operator[](EdgeId e) const { return values_[e]; }
    double& operator[](EdgeId e) { return values_[e]; }
    /// Value of edge (i, a). Throws PreconditionError if the edge is not in the slice.
    double at(const Ideal& i, Element a) const;
    void set(const Ideal& i, Element a, double value);
    std::span<const double> values() const { return values_; }

private:
    SlicePtr slice_;
    std::vector<double> values_;
    std::string context_;
};

/// Real value per diamond, in enumerate_diamonds order.
class DiamondField {
public:
    DiamondField() = default;
    explicit DiamondField(SlicePtr slice, double fill = 0.0);

    const LatticeSlice& slice() const { return *slice_; }
    const SlicePtr& slice_ptr() const { return slice_; }
    const std::vector<Diamond>& diamonds() const { return diamonds_; }
    std::size_t size() const { return diamonds_.size(); }

    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    std::optional<std::size_t> find(const Ideal& base, Element u, Element v) const;
    /// Throws PreconditionError when the diamond is not in the field's domain.
    double at(const Ideal& base, Element u, Element v) const;
    double at(const Diamond& d) const { return at(d.base, d.u, d.v); }
    void set(const Diamond& d, double value);
    std::span<const double> values() const { return values_; }

private:
    std::uint64_t key(NodeId node, Element u, Element v) const;

    SlicePtr slice_;
    std::vector<Diamond> diamonds_;
    std::vector<double> values_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Real value on every slice node. The tag keeps potentials, Möbius
/// coefficients and gauge systems from being mixed up.
template <class Tag>
class NodeFunction {
public:
    NodeFunction() = default;
    explicit NodeFunction(SlicePtr slice, double fill = 0.0)
        : slice_(std::move(slice)), values_(slice_->node_count(), fill) {}

    const LatticeSlice& slice() const { return *slice_; }
    const SlicePtr& slice_ptr() const { return slice_; }
    double operator[](NodeId k) const { return values_[k]; }
    double& operator[](NodeId k) { return values_[k]; }
    double at(const Ideal& i) const { return values_[slice_->index_of(i)]; }
    void set(const Ideal& i, double value) { values_[slice_->index_of(i)] = value; }
    std::span<const double> values() const { return values_; }

private:
    SlicePtr slice_;
    std::vector<double> values_;
};

struct PotentialTag {};
struct ThetaTag {};
struct GaugeTag {};

/// Endpoint potential Φ (also the tree-integrated ψ).
using Potential = NodeFunction<PotentialTag>;
/// Möbius coefficients θ.
using ThetaSystem = NodeFunction<ThetaTag>;
/// Reference-tree scores α; the base entry is unused.
using GaugeSystem = NodeFunction<GaugeTag>;

double path_value(const EdgeField& g, const Path& path);

/// κ(d) = g(I,v) + g(I∪{v},u) − g(I,u) − g(I∪{u},v).
double curvature(const EdgeField& g, const Diamond& d);
DiamondField curvature_field(const EdgeField& g);

struct PathIndependence {
    bool independent = true;
    std::optional<Diamond> witness;
    double curvature = 0.0;
};
PathIndependence check_path_independence(const EdgeField& g, double tol = kDefaultTolerance);

/// Φ with Φ(base) = 0 and g(I,a) = Φ(I∪{a}) − Φ(I). Throws
/// PreconditionError on non-zero curvature.
Potential endpoint_potential(const EdgeField& g, double tol = kDefaultTolerance);

/// Edge differencing dΦ.
EdgeField gradient(const Potential& phi);

/// Möbius function of the slice, stored per lower node.
class MobiusTable {
public:
    explicit MobiusTable(SlicePtr slice);
    /// μ(K, I); zero unless K ⊆ I.
    double operator()(NodeId lower, NodeId upper) const;
    const LatticeSlice& slice() const { return *slice_; }

private:
    SlicePtr slice_;
    std::vector<std::unordered_map<NodeId, double>> rows_;
};

MobiusTable mobius_function(const SlicePtr& slice);

/// θ(I) = Σ_{K⊆I} μ(K,I) Φ(K). Requires a full interval slice.
ThetaSystem mobius_invert(const Potential& phi);
/// Φ(I) = Σ_{K⊆I} θ(K).
Potential mobius_forward(const ThetaSystem& theta);

double reference_score(const EdgeField& g, const Ideal& i, const Ideal& j);

struct Correction {
    Diamond diamond;
    int sign = 1;
    double curvature = 0.0;
};

struct Decomposition {
    double reference_score = 0.0;
    RewriteSequence rewrite;
    std::vector<Correction> corrections;
    double total = 0.0;
};

/// V(γ) = Φ^ρ(I,J) + Σ ε_m κ(d_m) along the rewrite from the reference path to γ.
Decomposition decompose(const EdgeField& g, const Path& path);

}  // namespace ordersens

#endif
