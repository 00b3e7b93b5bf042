#include "ordersens/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordersens/causal/random.hpp"
#include "ordersens/error.hpp"

namespace ordersens {

using causal::Cell;
using causal::EndpointClass;
using causal::Episode;
using causal::Estimate;
using causal::PairOrder;

std::string family_path_label(FamilyPath p, const causal::FamilySpec& f) {
    switch (p) {
        case FamilyPath::stop: return "stop";
        case FamilyPath::u: return f.u;
        case FamilyPath::u_then_w: return f.u + "->" + f.w;
        case FamilyPath::w: return f.w;
        case FamilyPath::w_then_u: return f.w + "->" + f.u;
    }
    return "?";
}

const PolicyRow& PolicyTable::row(std::string_view name) const {
    for (const auto& r : rows)
        if (r.name == name) return r;
    throw InputError("no policy named " + std::string(name));
}

namespace {

FamilyPath path_of(const Episode& e) {
    switch (e.endpoint) {
        case EndpointClass::none: return FamilyPath::stop;
        case EndpointClass::u: return FamilyPath::u;
        case EndpointClass::w: return FamilyPath::w;
        case EndpointClass::both: break;
    }
    return e.order == PairOrder::u_first ? FamilyPath::u_then_w : FamilyPath::w_then_u;
}

Cell cell_of(double sum, std::size_t n) {
    Cell c;
    c.count = n;
    if (n > 0) c.mean = Estimate::of(sum / static_cast<double>(n));
    return c;
}

Estimate diff(const Estimate& a, const Estimate& b) {
    if (a.ok() && b.ok()) return Estimate::of(a.value - b.value);
    if (a.status == Estimate::Status::insufficient_n || b.status == Estimate::Status::insufficient_n)
        return Estimate::insufficient();
    return Estimate::unidentified();
}

std::vector<FamilyPath> candidates(bool allow_stop) {
    if (allow_stop)
        return {FamilyPath::stop, FamilyPath::u, FamilyPath::u_then_w, FamilyPath::w, FamilyPath::w_then_u};
    return {FamilyPath::u_then_w, FamilyPath::w_then_u};
}

/// First maximizer in candidate order among identified scores.
std::optional<FamilyPath> argmax(const std::vector<FamilyPath>& cands, auto score) {
    std::optional<FamilyPath> best;
    double best_v = 0.0;
    for (FamilyPath p : cands) {
        const Estimate s = score(p);
        if (!s.ok()) continue;
        if (!best || s.value > best_v) {
            best = p;
            best_v = s.value;
        }
    }
    return best;
}

std::optional<FamilyPath> greedy(const FamilyValues& v, bool allow_stop) {
    auto val = [&](FamilyPath p) { return v.path[static_cast<std::size_t>(p)].mean; };
    // First step: stop, u or w by the value of the state reached.
    std::vector<FamilyPath> first = {FamilyPath::u, FamilyPath::w};
    if (allow_stop) first.insert(first.begin(), FamilyPath::stop);
    auto step = argmax(first, val);
    if (!step || *step == FamilyPath::stop) return step;
    const FamilyPath full = *step == FamilyPath::u ? FamilyPath::u_then_w : FamilyPath::w_then_u;
    if (!allow_stop) return full;
    return argmax({*step, full}, val);
}

}  // namespace

FamilyValues fit_family_values(std::span<const Episode> episodes) {
    std::array<double, kFamilyPaths> sum{};
    std::array<std::size_t, kFamilyPaths> n{};
    double pair_sum = 0.0;
    std::size_t pair_n = 0;
    for (const auto& e : episodes) {
        const auto k = static_cast<std::size_t>(path_of(e));
        sum[k] += e.reward;
        ++n[k];
        if (e.endpoint == EndpointClass::both) {
            pair_sum += e.reward;
            ++pair_n;
        }
    }
    FamilyValues v;
    for (std::size_t k = 0; k < kFamilyPaths; ++k) v.path[k] = cell_of(sum[k], n[k]);
    v.pair_pooled = cell_of(pair_sum, pair_n);
    v.kappa = diff(v.path[static_cast<std::size_t>(FamilyPath::w_then_u)].mean,
                   v.path[static_cast<std::size_t>(FamilyPath::u_then_w)].mean);
    return v;
}

PolicyTable policy_compare(std::span<const Episode> train, std::span<const Episode> heldout,
                           const causal::FamilySpec& family, PolicyOptions options) {
    const FamilyValues fit = fit_family_values(train);
    const FamilyValues test = fit_family_values(heldout);
    const auto cands = candidates(options.allow_stop);
    auto val = [&](FamilyPath p) { return fit.path[static_cast<std::size_t>(p)].mean; };
    auto idx = [](FamilyPath p) { return static_cast<std::size_t>(p); };

    PolicyTable t;
    t.family = family;
    t.train_size = train.size();
    t.heldout_size = heldout.size();
    t.options = options;

    // Full value model: reference score plus the order correction on w→u.
    const double kappa = fit.kappa.ok() && std::abs(fit.kappa.value) > options.kappa_tol ? fit.kappa.value : 0.0;
    auto full_model = [&](FamilyPath p) {
        if (p != FamilyPath::w_then_u) return val(p);
        const Estimate ref = val(FamilyPath::u_then_w);
        return ref.ok() ? Estimate::of(ref.value + kappa) : ref;
    };
    // Reference-path scores: order-blind, so w→u is never chosen over u→w.
    auto reference = [&](FamilyPath p) {
        return p == FamilyPath::w_then_u ? Estimate::unidentified() : val(p);
    };
    auto pooled = [&](FamilyPath p) {
        if (p == FamilyPath::w_then_u) return Estimate::unidentified();
        return p == FamilyPath::u_then_w ? fit.pair_pooled.mean : val(p);
    };
    auto frequency = [&](FamilyPath p) {
        const std::size_t n = fit.path[idx(p)].count;
        return n > 0 ? Estimate::of(static_cast<double>(n)) : Estimate::unidentified();
    };

    auto add = [&](const char* name, std::optional<FamilyPath> sel, bool pooled_endpoint = false) {
        PolicyRow r;
        r.name = name;
        r.selected = sel;
        r.pooled_endpoint = pooled_endpoint;
        if (!sel) r.heldout = Estimate::unidentified();
        else if (pooled_endpoint && *sel == FamilyPath::u_then_w) r.heldout = test.pair_pooled.mean;
        else r.heldout = test.path[idx(*sel)].mean;
        if (r.heldout.status == Estimate::Status::unidentified && sel) r.heldout = Estimate::insufficient();
        r.win_rate = Estimate::unidentified();
        t.rows.push_back(std::move(r));
    };
    add(kPolicyNames[0], argmax(cands, full_model));
    add(kPolicyNames[1], argmax(cands, reference));
    add(kPolicyNames[2], greedy(fit, options.allow_stop));
    add(kPolicyNames[3], FamilyPath::u_then_w);
    add(kPolicyNames[4], FamilyPath::w_then_u);
    add(kPolicyNames[5], argmax(cands, pooled), true);
    add(kPolicyNames[6], argmax(cands, frequency));

    const Estimate ref = t.rows[1].heldout;
    const Estimate gr = t.rows[2].heldout;
    for (auto& r : t.rows) {
        r.delta_ref = diff(r.heldout, ref);
        r.delta_greedy = diff(r.heldout, gr);
    }
    return t;
}

std::pair<std::vector<Episode>, std::vector<Episode>> split_episodes(std::span<const Episode> episodes,
                                                                     double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InputError("train fraction must be in (0, 1)");
    std::vector<std::size_t> order(episodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    causal::Rng rng(seed);
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.index(k)]);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(order.size())));
    std::vector<Episode> train, heldout;
    for (std::size_t k = 0; k < order.size(); ++k)
        (k < n_train ? train : heldout).push_back(episodes[order[k]]);
    return {std::move(train), std::move(heldout)};
}

PolicyTable policy_compare_resplit(std::span<const Episode> episodes, const causal::FamilySpec& family,
                                   PolicyOptions options) {
    auto [train, heldout] = split_episodes(episodes, options.train_fraction, causal::derive_seed(options.seed, 0));
    PolicyTable table = policy_compare(train, heldout, family, options);

    std::vector<std::size_t> wins(table.rows.size(), 0), valid(table.rows.size(), 0);
    for (std::size_t r = 0; r < options.resplits; ++r) {
        auto [tr, ho] = split_episodes(episodes, options.train_fraction, causal::derive_seed(options.seed, r + 1));
        const PolicyTable t = policy_compare(tr, ho, family, options);
        const Estimate& ref = t.rows[1].heldout;
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            if (!ref.ok() || !t.rows[k].heldout.ok()) continue;
            ++valid[k];
            // strict: a tie with the reference policy is not a win
            if (t.rows[k].heldout.value > ref.value) ++wins[k];
        }
    }
    for (std::size_t k = 0; k < table.rows.size(); ++k)
        table.rows[k].win_rate = valid[k] > 0 ? Estimate::of(static_cast<double>(wins[k]) / valid[k])
                                              : Estimate::insufficient();
    return table;
}

std::optional<EdgeField> family_edge_field(const FamilyValues& values, const causal::FamilySpec& family) {
    for (const auto& c : values.path)
        if (!c.mean.ok()) return std::nullopt;
    auto v = [&](FamilyPath p) { return values.path[static_cast<std::size_t>(p)].mean.value; };
    const Poset p = Poset::from_relations({family.u, family.w}, {}, std::vector<std::string>{family.u, family.w});
    auto slice = build_lattice(p, Ideal{}, 2);
    EdgeField g(slice, 0.0, family.u + "," + family.w + "->" + family.v);
    const Element u = 0, w = 1;
    g.set(Ideal{}, u, v(FamilyPath::u) - v(FamilyPath::stop));
    g.set(Ideal{}, w, v(FamilyPath::w) - v(FamilyPath::stop));
    g.set(Ideal::single(u), w, v(FamilyPath::u_then_w) - v(FamilyPath::u));
    g.set(Ideal::single(w), u, v(FamilyPath::w_then_u) - v(FamilyPath::w));
    return g;
}

FamilyPlanRow plan_family(const FamilyValues& values, const causal::FamilySpec& family, PlanOptions options) {
    FamilyPlanRow row;
    row.family = family;
    const auto g = family_edge_field(values, family);
    if (!g) return row;
    row.plannable = true;
    const double v0 = values.path[0].mean.value;
    const PlanResult dp = dp_plan(*g, options);
    const PlanResult ex = exhaustive_plan(*g, options);
    row.dp_path = dp.best_path;
    row.exhaustive_path = ex.best_path;
    row.dp_value = v0 + dp.best_value;
    row.exhaustive_value = v0 + ex.best_value;
    row.equal = dp.best_path == ex.best_path && dp.best_value == ex.best_value;
    return row;
}

}  // namespace ordersens
