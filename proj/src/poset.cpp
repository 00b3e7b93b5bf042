#include "ordersens/poset.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "ordersens/error.hpp"

namespace ordersens {

namespace {

bool valid_id(std::string_view id) {
    if (id.empty() || id == "-") return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.' || c == '-';
    });
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Poset Poset::from_relations(const std::vector<std::string>& ids,
                            const std::vector<std::pair<std::string, std::string>>& covers,
                            const std::optional<std::vector<std::string>>& tau) {
    if (ids.size() > kMaxElements)
        throw InputError("poset has " + std::to_string(ids.size()) + " elements; the cap is " +
                         std::to_string(kMaxElements));

    std::unordered_map<std::string, std::size_t> decl;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (!valid_id(ids[k])) throw InputError("invalid element id '" + ids[k] + "'");
        if (!decl.emplace(ids[k], k).second)
            throw InputError("duplicate element '" + ids[k] + "'");
    }

    const std::size_t n = ids.size();
    std::vector<std::vector<std::size_t>> up(n);
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (const auto& [lo, hi] : covers) {
        auto a = decl.find(lo);
        auto b = decl.find(hi);
        if (a == decl.end()) throw InputError("unknown element '" + lo + "' in cover");
        if (b == decl.end()) throw InputError("unknown element '" + hi + "' in cover");
        if (a->second == b->second) throw InputError("cycle: '" + lo + "' covers itself");
        rel.emplace_back(a->second, b->second);
        up[a->second].push_back(b->second);
        ++indeg[b->second];
    }

    // Kahn's algorithm, smallest id first; doubles as the cycle check.
    std::vector<std::size_t> order;
    {
        auto cmp = [&](std::size_t x, std::size_t y) { return ids[x] > ids[y]; };
        std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
        std::vector<std::size_t> deg = indeg;
        for (std::size_t k = 0; k < n; ++k)
            if (deg[k] == 0) ready.push(k);
        while (!ready.empty()) {
            std::size_t k = ready.top();
            ready.pop();
            order.push_back(k);
            for (std::size_t m : up[k])
                if (--deg[m] == 0) ready.push(m);
        }
        if (order.size() != n) throw InputError("cycle in cover relation");
    }

    if (tau) {
        if (tau->size() != n) throw InputError("tau must list every element exactly once");
        std::vector<std::size_t> custom;
        std::vector<bool> seen(n, false);
        for (const auto& id : *tau) {
            auto it = decl.find(id);
            if (it == decl.end()) throw InputError("unknown element '" + id + "' in tau");
            if (seen[it->second]) throw InputError("element '" + id + "' repeated in tau");
            seen[it->second] = true;
            custom.push_back(it->second);
        }
        std::vector<std::size_t> pos(n);
        for (std::size_t k = 0; k < n; ++k) pos[custom[k]] = k;
        for (const auto& [a, b] : rel) {
            if (pos[a] >= pos[b])
                throw InputError("tau is not a linear extension: '" + ids[a] + "' must precede '" +
                                 ids[b] + "'");
        }
        order = std::move(custom);
    }

    Poset p;
    std::vector<Element> pos(n);
    for (std::size_t k = 0; k < n; ++k) {
        pos[order[k]] = static_cast<Element>(k);
        p.ids_.push_back(ids[order[k]]);
        p.index_.emplace(ids[order[k]], static_cast<Element>(k));
    }
    for (const auto& [a, b] : rel) p.covers_.emplace_back(pos[a], pos[b]);

    // τ is a linear extension, so predecessors are final before they are read.
    std::vector<std::vector<Element>> lower(n);
    for (const auto& [a, b] : p.covers_) lower[b].push_back(a);
    p.pred_.assign(n, ElementSet{});
    for (Element v = 0; v < n; ++v) {
        for (Element u : lower[v]) p.pred_[v] = p.pred_[v] | p.pred_[u].with(u);
    }
    return p;
}

std::optional<Element> Poset::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Element Poset::element(std::string_view id) const {
    if (auto e = find(id)) return *e;
    throw InputError("unknown element '" + std::string(id) + "'");
}

ElementSet Poset::all() const {
    ElementSet s;
    for (Element e = 0; e < size(); ++e) s.insert(e);
    return s;
}

bool Poset::is_ideal(const ElementSet& s) const {
    bool ok = true;
    s.for_each([&](Element e) {
        if (e >= size() || !pred_[e].subset_of(s)) ok = false;
    });
    return ok;
}

std::string Poset::format(const ElementSet& s) const {
    if (s.empty()) return "-";
    std::string out;
    s.for_each([&](Element e) {
        if (!out.empty()) out += '+';
        out += e < ids_.size() ? ids_[e] : "#" + std::to_string(e);
    });
    return out;
}

ElementSet Poset::parse_set(std::string_view text) const {
    ElementSet s;
    if (text == "-" || text.empty()) return s;
    std::size_t i = 0;
    while (i <= text.size()) {
        std::size_t j = text.find('+', i);
        if (j == std::string_view::npos) j = text.size();
        std::string_view tok = text.substr(i, j - i);
        if (tok.empty()) throw InputError("malformed element set '" + std::string(text) + "'");
        s.insert(element(tok));
        i = j + 1;
    }
    return s;
}

Poset parse_poset(std::string_view text) {
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> covers;
    std::optional<std::vector<std::string>> tau;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = split_ws(line);
        if (tok.empty()) continue;

        auto fail = [&](const std::string& msg) {
            throw InputError("poset line " + std::to_string(line_no) + ": " + msg);
        };
        for (auto t : tok.size() > 1 ? std::vector(tok.begin() + 1, tok.end())
                                     : std::vector<std::string_view>{}) {
            if (!valid_id(t)) fail("invalid element id '" + std::string(t) + "'");
        }
        if (tok[0] == "elem") {
            if (tok.size() != 2) fail("expected 'elem <id>'");
            ids.emplace_back(tok[1]);
        } else if (tok[0] == "cover") {
            if (tok.size() != 3) fail("expected 'cover <lo> <hi>'");
            covers.emplace_back(std::string(tok[1]), std::string(tok[2]));
        } else if (tok[0] == "tau") {
            if (tau) fail("tau given twice");
            tau.emplace();
            for (std::size_t k = 1; k < tok.size(); ++k) tau->emplace_back(tok[k]);
        } else {
            fail("unknown directive '" + std::string(tok[0]) + "'");
        }
        if (end == text.size()) break;
    }
    return Poset::from_relations(ids, covers, tau);
}

Poset load_poset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open poset file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_poset(ss.str());
}

ElementSet admissible_additions(const Poset& p, const Ideal& i) {
    if (!p.is_ideal(i)) throw PreconditionError("set " + p.format(i) + " is not an ideal");
    ElementSet out;
    for (Element a = 0; a < p.size(); ++a) {
        if (!i.contains(a) && p.predecessors(a).subset_of(i)) out.insert(a);
    }
    return out;
}

}  // namespace ordersens
