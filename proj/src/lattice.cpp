#include "ordersens/lattice.hpp"

#include <algorithm>

#include "ordersens/error.hpp"

namespace ordersens {

std::optional<NodeId> LatticeSlice::find(const Ideal& i) const {
    auto it = index_.find(i);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId LatticeSlice::index_of(const Ideal& i) const {
    if (auto k = find(i)) return *k;
    throw PreconditionError("ideal " + poset_.format(i) + " is not a node of the slice");
}

std::optional<EdgeId> LatticeSlice::find_edge(NodeId from, Element a) const {
    auto out = out_edges(from);
    auto it = std::lower_bound(out.begin(), out.end(), a,
                               [](const Edge& e, Element x) { return e.add < x; });
    if (it == out.end() || it->add != a) return std::nullopt;
    return static_cast<EdgeId>(out_begin_[from] + (it - out.begin()));
}

std::optional<EdgeId> LatticeSlice::find_edge(const Ideal& from, Element a) const {
    auto k = find(from);
    if (!k) return std::nullopt;
    return find_edge(*k, a);
}

Ideal LatticeSlice::top() const {
    Ideal t;
    for (const auto& n : nodes_) t = t | n;
    return t;
}

SlicePtr build_lattice(const Poset& p, const Ideal& base, int depth, LatticeOptions options) {
    if (depth < 0) throw InputError("depth must be nonnegative");
    if (!p.is_ideal(base)) throw PreconditionError("base " + p.format(base) + " is not an ideal");

    auto slice = std::make_shared<LatticeSlice>();
    slice->poset_ = p;
    slice->horizon_ = depth;
    slice->nodes_.push_back(base);
    slice->depth_.push_back(0);
    slice->index_.emplace(base, 0);

    std::size_t layer_begin = 0;
    for (int d = 0; d < depth; ++d) {
        const std::size_t layer_end = slice->nodes_.size();
        for (std::size_t k = layer_begin; k < layer_end; ++k) {
            slice->out_begin_.push_back(static_cast<std::uint32_t>(slice->edges_.size()));
            const Ideal cur = slice->nodes_[k];
            for (Element a = 0; a < p.size(); ++a) {
                if (cur.contains(a) || !p.predecessors(a).subset_of(cur)) continue;
                Ideal next = cur.with(a);
                auto [it, inserted] =
                    slice->index_.emplace(next, static_cast<NodeId>(slice->nodes_.size()));
                if (inserted) {
                    if (slice->nodes_.size() >= options.node_cap)
                        throw CapExceeded("node cap " + std::to_string(options.node_cap) +
                                          " exceeded while building depth " +
                                          std::to_string(d + 1) + " (completed depth " +
                                          std::to_string(d) + ")");
                    slice->nodes_.push_back(next);
                    slice->depth_.push_back(d + 1);
                }
                slice->edges_.push_back({static_cast<NodeId>(k), a, it->second});
            }
        }
        layer_begin = layer_end;
        if (layer_begin == slice->nodes_.size()) break;
    }
    while (slice->out_begin_.size() < slice->nodes_.size() + 1)
        slice->out_begin_.push_back(static_cast<std::uint32_t>(slice->edges_.size()));
    return slice;
}

Path reference_path(const Poset& p, const Ideal& i, const Ideal& j) {
    if (!p.is_ideal(i)) throw PreconditionError("set " + p.format(i) + " is not an ideal");
    if (!p.is_ideal(j)) throw PreconditionError("set " + p.format(j) + " is not an ideal");
    if (!i.subset_of(j))
        throw PreconditionError("reference path needs " + p.format(i) + " ⊆ " + p.format(j));
    return Path{i, (j - i).elements()};
}

bool is_admissible(const Poset& p, const Path& path) {
    if (!p.is_ideal(path.start)) return false;
    Ideal cur = path.start;
    for (Element a : path.additions) {
        if (a >= p.size() || cur.contains(a) || !p.predecessors(a).subset_of(cur)) return false;
        cur.insert(a);
    }
    return true;
}

namespace {

void extend_paths(const Poset& p, Ideal cur, const ElementSet& remaining,
                  std::vector<Element>& prefix, const Ideal& start, std::vector<Path>& out) {
    if (remaining.empty()) {
        out.push_back(Path{start, prefix});
        return;
    }
    remaining.for_each([&](Element a) {
        if (!p.predecessors(a).subset_of(cur)) return;
        prefix.push_back(a);
        extend_paths(p, cur.with(a), remaining.without(a), prefix, start, out);
        prefix.pop_back();
    });
}

void require_same_endpoints(const LatticeSlice& l, const Path& src, const Path& dst) {
    const Poset& p = l.poset();
    if (!(src.start == dst.start) || !(src.end() == dst.end()))
        throw PreconditionError("paths do not share endpoints");
    if (!is_admissible(p, src)) throw PreconditionError("source path is not admissible");
    if (!is_admissible(p, dst)) throw PreconditionError("target path is not admissible");
    l.index_of(src.start);
    l.index_of(src.end());
}

}  // namespace

std::vector<Path> enumerate_paths(const LatticeSlice& l, const Ideal& i, const Ideal& j,
                                  PathEnumOptions options) {
    l.index_of(i);
    l.index_of(j);
    if (!i.subset_of(j))
        throw PreconditionError("path enumeration needs " + l.poset().format(i) + " ⊆ " +
                                l.poset().format(j));
    const ElementSet diff = j - i;
    if (diff.size() > options.width_cap)
        throw CapExceeded("interval width " + std::to_string(diff.size()) +
                          " exceeds the enumeration cap " + std::to_string(options.width_cap));
    std::vector<Path> out;
    std::vector<Element> prefix;
    extend_paths(l.poset(), i, diff, prefix, i, out);
    return out;
}

std::vector<Diamond> enumerate_diamonds(const LatticeSlice& l) {
    std::vector<Diamond> out;
    const Poset& p = l.poset();
    for (NodeId k = 0; k < l.node_count(); ++k) {
        if (l.node_depth(k) > l.horizon() - 2) continue;
        auto out_e = l.out_edges(k);
        for (std::size_t x = 0; x < out_e.size(); ++x) {
            for (std::size_t y = x + 1; y < out_e.size(); ++y) {
                Element u = out_e[x].add;
                Element v = out_e[y].add;
                if (p.comparable(u, v)) continue;
                out.push_back(Diamond{l.node(k), u, v});
            }
        }
    }
    return out;
}

RewriteSequence rewrite_sequence(const LatticeSlice& l, const Path& src, const Path& dst) {
    require_same_endpoints(l, src, dst);
    std::vector<Element> cur = src.additions;
    const std::vector<Element>& target = dst.additions;
    RewriteSequence seq;

    // Fix positions from the right: move target[pos] rightward into place.
    for (std::size_t pos = cur.size(); pos-- > 1;) {
        std::size_t k = static_cast<std::size_t>(
            std::find(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos) + 1, target[pos]) -
            cur.begin());
        if (k < pos) {
            Ideal prefix = src.start;
            for (std::size_t t = 0; t < k; ++t) prefix.insert(cur[t]);
            for (; k < pos; ++k) {
                const Element x = cur[k];
                const Element y = cur[k + 1];
                Diamond d{prefix, std::min(x, y), std::max(x, y)};
                seq.steps.push_back(RewriteStep{d, x < y ? +1 : -1});
                std::swap(cur[k], cur[k + 1]);
                prefix.insert(y);
            }
        }
    }
    return seq;
}

Path apply_step(const Path& path, const RewriteStep& step) {
    const Element first = step.sign > 0 ? step.diamond.u : step.diamond.v;
    const Element second = step.sign > 0 ? step.diamond.v : step.diamond.u;
    Ideal prefix = path.start;
    for (std::size_t k = 0; k + 1 < path.additions.size(); ++k) {
        if (prefix == step.diamond.base && path.additions[k] == first &&
            path.additions[k + 1] == second) {
            Path out = path;
            std::swap(out.additions[k], out.additions[k + 1]);
            return out;
        }
        prefix.insert(path.additions[k]);
    }
    throw PreconditionError("rewrite step does not match the path");
}

std::size_t min_swap_distance(const LatticeSlice& l, const Path& src, const Path& dst) {
    require_same_endpoints(l, src, dst);
    const std::size_t n = src.additions.size();
    std::unordered_map<Element, std::size_t> pos;
    for (std::size_t k = 0; k < n; ++k) pos.emplace(dst.additions[k], k);
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (pos[src.additions[a]] > pos[src.additions[b]]) ++inversions;
    return inversions;
}

}  // namespace ordersens
