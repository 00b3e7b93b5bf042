#ifndef ORDERSENS_ELEMENT_SET_HPP
#define ORDERSENS_ELEMENT_SET_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#ifndef ORDERSENS_MAX_ELEMENTS
#define ORDERSENS_MAX_ELEMENTS 128
#endif

namespace ordersens {

/// Index of a poset element. Elements are numbered by their position in the
/// fixed linear extension, so `a < b` as integers is the same as `a <τ b`.
using Element = std::uint32_t;

inline constexpr std::size_t kMaxElements = ORDERSENS_MAX_ELEMENTS;

/// Fixed-width bitset over element indices.
class ElementSet {
public:
    static constexpr std::size_t kWords = (kMaxElements + 63) / 64;

    constexpr ElementSet() = default;

    static ElementSet single(Element e) {
        ElementSet s;
        s.insert(e);
        return s;
    }

    bool contains(Element e) const {
        return (words_[e >> 6] >> (e & 63)) & 1u;
    }
    void insert(Element e) { words_[e >> 6] |= std::uint64_t{1} << (e & 63); }
    void erase(Element e) { words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }

    ElementSet with(Element e) const {
        ElementSet s = *this;
        s.insert(e);
        return s;
    }
    ElementSet without(Element e) const {
        ElementSet s = *this;
        s.erase(e);
        return s;
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool subset_of(const ElementSet& o) const {
        for (std::size_t i = 0; i < kWords; ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const ElementSet& o) const {
        for (std::size_t i = 0; i < kWords; ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    ElementSet operator|(const ElementSet& o) const {
        ElementSet r;
        for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = words_[i] | o.words_[i];
        return r;
    }
    ElementSet operator&(const ElementSet& o) const {
        ElementSet r;
        for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    /// Set difference.
    ElementSet operator-(const ElementSet& o) const {
        ElementSet r;
        for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = words_[i] & ~o.words_[i];
        return r;
    }

    /// Largest member in τ order, if any.
    std::optional<Element> max() const {
        for (std::size_t i = kWords; i-- > 0;) {
            if (words_[i])
                return static_cast<Element>(i * 64 + 63 - std::countl_zero(words_[i]));
        }
        return std::nullopt;
    }
    std::optional<Element> min() const {
        for (std::size_t i = 0; i < kWords; ++i) {
            if (words_[i])
                return static_cast<Element>(i * 64 + std::countr_zero(words_[i]));
        }
        return std::nullopt;
    }

    /// Number of members strictly greater than `e` in τ order.
    std::size_t count_above(Element e) const {
        std::size_t n = 0;
        std::size_t w = e >> 6;
        std::uint64_t mask = (e & 63) == 63 ? 0 : ~((std::uint64_t{2} << (e & 63)) - 1);
        n += static_cast<std::size_t>(std::popcount(words_[w] & mask));
        for (std::size_t i = w + 1; i < kWords; ++i)
            n += static_cast<std::size_t>(std::popcount(words_[i]));
        return n;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < kWords; ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                f(static_cast<Element>(i * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    /// Members in ascending τ order.
    std::vector<Element> elements() const {
        std::vector<Element> out;
        out.reserve(size());
        for_each([&](Element e) { out.push_back(e); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

    friend bool operator==(const ElementSet&, const ElementSet&) = default;

private:
    std::array<std::uint64_t, kWords> words_{};
};

/// An order ideal of a poset. The bitset carries no proof of downward
/// closure; `Poset::is_ideal` checks it.
using Ideal = ElementSet;

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

}  // namespace ordersens

#endif
