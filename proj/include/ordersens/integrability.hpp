#ifndef ORDERSENS_INTEGRABILITY_HPP
#define ORDERSENS_INTEGRABILITY_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "ordersens/error.hpp"
#include "ordersens/valuation.hpp"

namespace ordersens {

/// Three-cube (base; u, v, w) with u <τ v <τ w pairwise incomparable and admissible at base.
struct ThreeCube {
    Ideal base;
    Element u = 0;
    Element v = 0;
    Element w = 0;
    friend bool operator==(const ThreeCube&, const ThreeCube&) = default;
};

std::vector<ThreeCube> enumerate_cubes(const LatticeSlice& l);

/// Alternating six-face sum of κ on the cube.
double cube_defect(const DiamondField& kappa, const ThreeCube& c);

struct CubeConsistency {
    bool consistent = true;
    std::optional<ThreeCube> witness;
    double defect = 0.0;
};
CubeConsistency is_cube_consistent(const DiamondField& kappa, double tol = kDefaultTolerance);

/// Raised when reconstruction meets a cube-inconsistent diamond field.
class CubeInconsistency : public PreconditionError {
public:
    CubeInconsistency(const std::string& what, ThreeCube cube, double defect)
        : PreconditionError(what), cube_(cube), defect_(defect) {}
    const ThreeCube& cube() const { return cube_; }
    double defect() const { return defect_; }

private:
    ThreeCube cube_;
    double defect_;
};

/// Spanning tree K⁻ → K, where K⁻ drops the τ-largest element of K \ base.
struct ReferenceTree {
    SlicePtr slice;
    /// parent[k] for every non-root node; parent[0] is unused.
    std::vector<NodeId> parent;
    /// m(K) for every non-root node.
    std::vector<Element> top_element;
    NodeId root = 0;

    /// EdgeId of the tree edge entering node k (k ≠ root).
    EdgeId tree_edge(NodeId k) const;
};

ReferenceTree reference_tree(const SlicePtr& slice);

/// The unique g⁰ vanishing on tree edges with curvature κ.
EdgeField zero_gauge_reconstruct(const DiamondField& kappa, double tol = kDefaultTolerance);

/// ψ(root) = 0 and ψ(K) − ψ(K⁻) = α(K).
Potential tree_integrate(const GaugeSystem& alpha, const ReferenceTree& tree);

/// (g + dψ)(I, a) = g(I, a) + ψ(I∪{a}) − ψ(I).
EdgeField gradient_shift(const EdgeField& g, const Potential& psi);

/// α(K) = g(K⁻, m(K)): the tree-edge values of a field.
GaugeSystem gauge_of(const EdgeField& g, const ReferenceTree& tree);

/// The unique field with curvature κ and tree-edge values α.
EdgeField reconstruct_with_gauge(const DiamondField& kappa, const GaugeSystem& alpha,
                                 double tol = kDefaultTolerance);

}  // namespace ordersens

#endif
