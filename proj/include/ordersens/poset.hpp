#ifndef ORDERSENS_POSET_HPP
#define ORDERSENS_POSET_HPP

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ordersens/element_set.hpp"

namespace ordersens {

/**
 * Finite poset with a fixed linear extension τ.
 *
 * Elements are stored in τ order: element index k is the k-th entry of τ.
 * The strict order ≺ is the transitive closure of the declared cover pairs.
 */
class Poset {
public:
    Poset() = default;

    /// Builds a poset from ids and relation pairs (lower, upper). When `tau`
    /// is absent, τ is the topological order that always picks the
    /// lexicographically smallest available id.
    static Poset from_relations(const std::vector<std::string>& ids,
                                const std::vector<std::pair<std::string, std::string>>& covers,
                                const std::optional<std::vector<std::string>>& tau = std::nullopt);

    std::size_t size() const { return ids_.size(); }
    /// Element ids in τ order.
    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& id(Element e) const { return ids_.at(e); }
    std::optional<Element> find(std::string_view id) const;
    /// Like find, but throws InputError for unknown ids.
    Element element(std::string_view id) const;

    /// Declared cover pairs (lower, upper) as element indices.
    const std::vector<std::pair<Element, Element>>& covers() const { return covers_; }

    /// Pred(a): all u with u ≺ a.
    const ElementSet& predecessors(Element a) const { return pred_[a]; }
    bool precedes(Element u, Element v) const { return pred_[v].contains(u); }
    bool comparable(Element u, Element v) const {
        return u == v || precedes(u, v) || precedes(v, u);
    }

    ElementSet all() const;
    bool is_ideal(const ElementSet& s) const;

    /// Renders a set as sorted (τ order) ids joined by '+', or "-" when empty.
    std::string format(const ElementSet& s) const;
    /// Inverse of format. Throws InputError on unknown ids.
    ElementSet parse_set(std::string_view text) const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, Element> index_;
    std::vector<std::pair<Element, Element>> covers_;
    std::vector<ElementSet> pred_;
};

/// Parses the line-oriented poset format (`elem`, `cover`, `tau`, `#` comments).
Poset parse_poset(std::string_view text);
Poset load_poset(const std::string& path);

/// {a ∉ i : Pred(a) ⊆ i}. Throws PreconditionError when `i` is not an ideal.
ElementSet admissible_additions(const Poset& p, const Ideal& i);

}  // namespace ordersens

#endif
