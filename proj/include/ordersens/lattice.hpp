#ifndef ORDERSENS_LATTICE_HPP
#define ORDERSENS_LATTICE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ordersens/element_set.hpp"
#include "ordersens/poset.hpp"

namespace ordersens {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Admissible path: a start ideal and the ordered elements added to it.
struct Path {
    Ideal start;
    std::vector<Element> additions;

    Ideal end() const {
        Ideal s = start;
        for (Element a : additions) s.insert(a);
        return s;
    }
    std::size_t length() const { return additions.size(); }
    friend bool operator==(const Path&, const Path&) = default;
};

/// Diamond (base; u, v) with u <τ v, both admissible at base and incomparable.
struct Diamond {
    Ideal base;
    Element u = 0;
    Element v = 0;
    friend bool operator==(const Diamond&, const Diamond&) = default;
};

/// One diamond swap. sign = +1 replaces the u-first side by the v-first side.
struct RewriteStep {
    Diamond diamond;
    int sign = 1;
};

struct RewriteSequence {
    std::vector<RewriteStep> steps;
};

struct LatticeOptions {
    std::size_t node_cap = 1'000'000;
};

/**
 * Depth-truncated ideal lattice reachable from a base ideal.
 *
 * Nodes are stored layer by layer (by cardinality); edges are stored per
 * source node in ascending element order. Nodes at depth H have no edges.
 */
class LatticeSlice {
public:
    struct Edge {
        NodeId from;
        Element add;
        NodeId to;
    };

    const Poset& poset() const { return poset_; }
    const Ideal& base() const { return nodes_.front(); }
    int horizon() const { return horizon_; }

    std::size_t node_count() const { return nodes_.size(); }
    const Ideal& node(NodeId k) const { return nodes_[k]; }
    /// Number of additions separating the node from the base.
    int node_depth(NodeId k) const { return depth_[k]; }
    std::optional<NodeId> find(const Ideal& i) const;
    /// Like find, but throws PreconditionError for ideals outside the slice.
    NodeId index_of(const Ideal& i) const;

    std::size_t edge_count() const { return edges_.size(); }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const Edge> edges() const { return edges_; }
    /// Edge ids leaving node k, in ascending element order.
    std::span<const Edge> out_edges(NodeId k) const {
        return std::span<const Edge>(edges_).subspan(out_begin_[k], out_begin_[k + 1] - out_begin_[k]);
    }
    EdgeId first_out_edge(NodeId k) const { return out_begin_[k]; }
    std::optional<EdgeId> find_edge(NodeId from, Element a) const;
    std::optional<EdgeId> find_edge(const Ideal& from, Element a) const;

    /// Union of all nodes; the slice is a full interval iff this is a node.
    Ideal top() const;
    bool is_full_interval() const { return find(top()).has_value(); }

private:
    friend std::shared_ptr<const LatticeSlice> build_lattice(const Poset&, const Ideal&, int,
                                                             LatticeOptions);
    Poset poset_;
    int horizon_ = 0;
    std::vector<Ideal> nodes_;
    std::vector<int> depth_;
    std::unordered_map<Ideal, NodeId, ElementSetHash> index_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_begin_;
};

using SlicePtr = std::shared_ptr<const LatticeSlice>;

/// Breadth-first construction of the depth-H slice above `base`. Fails
/// atomically with CapExceeded when the node cap is hit.
SlicePtr build_lattice(const Poset& p, const Ideal& base, int depth, LatticeOptions options = {});

/// ρ(i, j): the elements of j \ i in τ order.
Path reference_path(const Poset& p, const Ideal& i, const Ideal& j);

/// True when every prefix state is an ideal and every addition is admissible
/// at its prefix state.
bool is_admissible(const Poset& p, const Path& path);

struct PathEnumOptions {
    std::size_t width_cap = 10;
};

/// All paths in Γ(i, j), in lexicographic (τ) order of their additions.
std::vector<Path> enumerate_paths(const LatticeSlice& l, const Ideal& i, const Ideal& j,
                                  PathEnumOptions options = {});

/// All diamonds with base at depth ≤ H − 2, ordered by base node, then u, then v.
std::vector<Diamond> enumerate_diamonds(const LatticeSlice& l);

/// Bubble-sort diamond-swap sequence taking src to dst.
RewriteSequence rewrite_sequence(const LatticeSlice& l, const Path& src, const Path& dst);

/// Applies one swap to a path. Throws PreconditionError if the diamond's
/// current side does not occur in the path at the diamond's base.
Path apply_step(const Path& path, const RewriteStep& step);

/// Inversion count between the two linear extensions: the minimum number of
/// diamond swaps separating src and dst.
std::size_t min_swap_distance(const LatticeSlice& l, const Path& src, const Path& dst);

}  // namespace ordersens

#endif
