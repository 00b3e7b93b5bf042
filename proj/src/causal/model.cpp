#include "ordersens/causal/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordersens/causal/random.hpp"

namespace ordersens::causal {

namespace {

constexpr double kCaseStart = 1704067200.0;  // 2024-01-01T00:00:00Z
constexpr double kStepSeconds = 3600.0;

std::vector<EdgeId> edges_of(const CausalModel& m, const Path& path) {
    const auto& l = *m.slice;
    if (!(path.start == l.base()))
        throw PreconditionError("path must start at the model base ideal");
    std::vector<EdgeId> out;
    NodeId at = 0;
    for (Element a : path.additions) {
        auto e = l.find_edge(at, a);
        if (!e) throw PreconditionError("path leaves the model slice at element " + l.poset().id(a));
        out.push_back(*e);
        at = l.edge(*e).to;
    }
    return out;
}

void check_context(const CausalModel& m, std::size_t x) {
    if (x >= m.contexts) throw InputError("context " + std::to_string(x) + " out of range");
}

std::vector<double> step(const CausalModel& m, const std::vector<double>& p, EdgeId e) {
    std::vector<double> next(m.contexts, 0.0);
    for (std::size_t x = 0; x < m.contexts; ++x) {
        if (p[x] == 0.0) continue;
        const auto& row = m.transition[e][x];
        for (std::size_t y = 0; y < m.contexts; ++y) next[y] += p[x] * row[y];
    }
    return next;
}

std::size_t draw(Rng& rng, const std::vector<double>& law) {
    const double r = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k) {
        acc += law[k];
        if (r < acc) return k;
    }
    // rounding slack: last positive entry
    for (std::size_t k = law.size(); k-- > 0;)
        if (law[k] > 0.0) return k;
    return 0;
}

/// Index of the sampled out edge at (node, x), or nullopt for stop.
std::optional<std::size_t> draw_action(Rng& rng, const CausalModel& m, NodeId node, std::size_t x) {
    const auto& prop = m.propensity[node][x];
    const double r = rng.uniform();
    double acc = 0.0;
    for (std::size_t t = 0; t < prop.size(); ++t) {
        acc += prop[t];
        if (r < acc) return t;
    }
    return std::nullopt;
}

double two_step_probability(const CausalModel& m, std::size_t x, Element first, Element second) {
    const auto& l = *m.slice;
    const auto e1 = l.find_edge(NodeId{0}, first);
    if (!e1) return 0.0;
    const double p1 = m.propensity_of(0, x, first);
    if (p1 == 0.0) return 0.0;
    const NodeId mid = l.edge(*e1).to;
    double total = 0.0;
    for (std::size_t y = 0; y < m.contexts; ++y) {
        const double t = m.transition[*e1][x][y];
        if (t > 0.0) total += t * m.propensity_of(mid, y, second);
    }
    return p1 * total;
}

}  // namespace

CausalModel CausalModel::blank(SlicePtr slice, std::size_t contexts) {
    if (!slice) throw InputError("model needs a lattice slice");
    if (contexts == 0) throw InputError("model needs at least one context");
    CausalModel m;
    m.contexts = contexts;
    m.initial_law.assign(contexts, 1.0 / static_cast<double>(contexts));
    m.propensity.resize(slice->node_count());
    for (NodeId k = 0; k < slice->node_count(); ++k)
        m.propensity[k].assign(contexts, std::vector<double>(slice->out_edges(k).size(), 0.0));
    m.transition.resize(slice->edge_count());
    for (auto& per_edge : m.transition) {
        per_edge.assign(contexts, std::vector<double>(contexts, 0.0));
        for (std::size_t x = 0; x < contexts; ++x) per_edge[x][x] = 1.0;
    }
    m.slice = std::move(slice);
    return m;
}

double CausalModel::propensity_of(NodeId node, std::size_t x, Element a) const {
    const auto out = slice->out_edges(node);
    for (std::size_t t = 0; t < out.size(); ++t)
        if (out[t].add == a) return propensity[node][x][t];
    return 0.0;
}

const OutcomeSpec& CausalModel::outcome(std::size_t x0, const std::vector<Element>& path,
                                        std::size_t x_end) const {
    auto it = outcomes.find({x0, path});
    if (it == outcomes.end() || x_end >= it->second.size()) {
        std::string p;
        for (Element a : path) p += (p.empty() ? "" : ",") + slice->poset().id(a);
        throw PreconditionError("model has no outcome for context " + std::to_string(x0) + " and path [" +
                                p + "]");
    }
    return it->second[x_end];
}

double CausalModel::reward_mean(std::size_t x0, const std::vector<Element>& path, std::size_t x_end) const {
    const auto& o = outcome(x0, path, x_end);
    return o.accept_prob - lambda * o.mean_days;
}

void CausalModel::validate(double tol) const {
    if (!slice) throw InputError("model has no slice");
    if (contexts == 0 || initial_law.size() != contexts) throw InputError("initial law has wrong size");
    auto law_ok = [&](const std::vector<double>& v, bool sub) {
        double s = 0.0;
        for (double p : v) {
            if (!(p >= 0.0 && p <= 1.0)) return false;
            s += p;
        }
        return sub ? s <= 1.0 + tol : std::abs(s - 1.0) <= tol;
    };
    if (!law_ok(initial_law, false)) throw InputError("initial law is not a probability vector");
    if (propensity.size() != slice->node_count()) throw InputError("propensity table has wrong size");
    for (NodeId k = 0; k < slice->node_count(); ++k) {
        if (propensity[k].size() != contexts) throw InputError("propensity table has wrong size");
        for (const auto& row : propensity[k])
            if (row.size() != slice->out_edges(k).size() || !law_ok(row, true))
                throw InputError("propensities at " + slice->poset().format(slice->node(k)) +
                                 " must be nonnegative and sum to at most 1");
    }
    if (transition.size() != slice->edge_count()) throw InputError("transition table has wrong size");
    for (const auto& per_edge : transition) {
        if (per_edge.size() != contexts) throw InputError("transition table has wrong size");
        for (const auto& row : per_edge)
            if (row.size() != contexts || !law_ok(row, false))
                throw InputError("transition rows must be probability vectors");
    }
    for (const auto& [key, specs] : outcomes) {
        if (key.first >= contexts || specs.size() != contexts)
            throw InputError("outcome table has wrong size");
        for (const auto& o : specs)
            if (!(o.accept_prob >= 0.0 && o.accept_prob <= 1.0) || !(o.mean_days >= 0.0))
                throw InputError("outcome laws need accept_prob in [0,1] and mean_days >= 0");
    }
    if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
}

std::optional<SupportFailure> check_support(const CausalModel& m, std::size_t x0, const Path& path) {
    check_context(m, x0);
    const auto edges = edges_of(m, path);
    std::vector<double> p(m.contexts, 0.0);
    p[x0] = 1.0;
    for (std::size_t b = 0; b < edges.size(); ++b) {
        const NodeId from = m.slice->edge(edges[b]).from;
        for (std::size_t x = 0; x < m.contexts; ++x)
            if (p[x] > 0.0 && m.propensity_of(from, x, path.additions[b]) == 0.0)
                return SupportFailure{b, x};
        p = step(m, p, edges[b]);
    }
    return std::nullopt;
}

std::vector<double> terminal_context_law(const CausalModel& m, std::size_t x0, const Path& path) {
    check_context(m, x0);
    std::vector<double> p(m.contexts, 0.0);
    p[x0] = 1.0;
    for (EdgeId e : edges_of(m, path)) p = step(m, p, e);
    return p;
}

double g_formula_value(const CausalModel& m, std::size_t x0, const Path& path) {
    if (auto f = check_support(m, x0, path)) {
        const NodeId at = m.slice->edge(edges_of(m, path)[f->stage]).from;
        throw UnsupportedPath("path is not supported at stage " + std::to_string(f->stage) + ", state (" +
                                  m.slice->poset().format(m.slice->node(at)) + ", x=" +
                                  std::to_string(f->context) + ")",
                              *f);
    }
    const auto p = terminal_context_law(m, x0, path);
    double q = 0.0;
    for (std::size_t x = 0; x < m.contexts; ++x)
        if (p[x] > 0.0) q += p[x] * m.reward_mean(x0, path.additions, x);
    return q;
}

double true_path_value(const CausalModel& m, std::size_t x0, const Path& path) {
    check_context(m, x0);
    const auto edges = edges_of(m, path);
    // V_L(x) is the terminal mean; V_b(x) = Σ_y T_b(x, y) V_{b+1}(y).
    std::vector<double> v(m.contexts);
    for (std::size_t x = 0; x < m.contexts; ++x) v[x] = m.reward_mean(x0, path.additions, x);
    for (std::size_t b = edges.size(); b-- > 0;) {
        std::vector<double> prev(m.contexts, 0.0);
        for (std::size_t x = 0; x < m.contexts; ++x) {
            const auto& row = m.transition[edges[b]][x];
            for (std::size_t y = 0; y < m.contexts; ++y)
                if (row[y] != 0.0) prev[x] += row[y] * v[y];
        }
        v = std::move(prev);
    }
    return v[x0];
}

double local_order_effect(const CausalModel& m, std::size_t x0, const Diamond& d) {
    Path uv = reference_path(m.slice->poset(), m.slice->base(), d.base);
    Path vu = uv;
    uv.additions.insert(uv.additions.end(), {d.u, d.v});
    vu.additions.insert(vu.additions.end(), {d.v, d.u});
    return true_path_value(m, x0, vu) - true_path_value(m, x0, uv);
}

double pooled_path_value(const CausalModel& m, const Path& path) {
    double s = 0.0;
    for (std::size_t x = 0; x < m.contexts; ++x)
        if (m.initial_law[x] > 0.0) s += m.initial_law[x] * true_path_value(m, x, path);
    return s;
}

double pooled_order_effect(const CausalModel& m, const Diamond& d) {
    double s = 0.0;
    for (std::size_t x = 0; x < m.contexts; ++x)
        if (m.initial_law[x] > 0.0) s += m.initial_law[x] * local_order_effect(m, x, d);
    return s;
}

ModelSupportReport support_separation_report(const CausalModel& m, std::size_t candidate_cap) {
    const auto& l = *m.slice;
    const auto& p = l.poset();
    ModelSupportReport r;
    for (std::size_t x = 0; x < m.contexts; ++x)
        if (m.initial_law[x] > 0.0) r.contexts.push_back(x);

    auto supported = [&](std::size_t x, const Path& path) { return !check_support(m, x, path).has_value(); };
    auto all_true = [](const std::vector<bool>& v) {
        return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
    };

    for (NodeId k = 0; k < l.node_count(); ++k) {
        ModelSupportReport::ReferenceEntry e;
        e.endpoint = l.node(k);
        const Path rho = reference_path(p, l.base(), e.endpoint);
        for (std::size_t x : r.contexts) e.supported.push_back(supported(x, rho));
        e.identified = all_true(e.supported);
        r.references.push_back(std::move(e));
    }

    auto two_sided = [&](std::size_t x, const Diamond& d) {
        Path uv = reference_path(p, l.base(), d.base);
        Path vu = uv;
        uv.additions.insert(uv.additions.end(), {d.u, d.v});
        vu.additions.insert(vu.additions.end(), {d.v, d.u});
        return supported(x, uv) && supported(x, vu);
    };
    for (const auto& d : enumerate_diamonds(l)) {
        ModelSupportReport::DiamondEntry e;
        e.diamond = d;
        for (std::size_t x : r.contexts) e.two_sided.push_back(two_sided(x, d));
        e.identified = all_true(e.two_sided);
        r.diamonds.push_back(std::move(e));
    }

    std::size_t seen = 0;
    for (NodeId k = 0; k < l.node_count(); ++k) {
        const Ideal& j = l.node(k);
        const Path rho = reference_path(p, l.base(), j);
        for (auto& gamma : enumerate_paths(l, l.base(), j)) {
            if (++seen > candidate_cap) throw CapExceeded("candidate path cap exceeded");
            const auto seq = rewrite_sequence(l, rho, gamma);
            ModelSupportReport::CandidateEntry e;
            for (std::size_t x : r.contexts) {
                bool ok = supported(x, rho);
                for (const auto& s : seq.steps) {
                    if (!ok) break;
                    ok = two_sided(x, s.diamond);
                }
                e.decomposable.push_back(ok);
            }
            e.identified = all_true(e.decomposable);
            e.path = std::move(gamma);
            r.candidates.push_back(std::move(e));
        }
    }
    return r;
}

std::vector<Trajectory> observational_law(const CausalModel& m) {
    const auto& l = *m.slice;
    std::vector<Trajectory> out;
    struct Frame {
        NodeId node;
        std::size_t x;
        double prob;
        std::vector<Element> adds;
        std::vector<std::size_t> ctx;
    };
    for (std::size_t x0 = 0; x0 < m.contexts; ++x0) {
        if (m.initial_law[x0] == 0.0) continue;
        std::vector<Frame> stack{{0, x0, m.initial_law[x0], {}, {}}};
        while (!stack.empty()) {
            Frame f = std::move(stack.back());
            stack.pop_back();
            const auto& prop = m.propensity[f.node][f.x];
            const double go = std::accumulate(prop.begin(), prop.end(), 0.0);
            const double stop = 1.0 - go;
            if (stop > 0.0)
                out.push_back(Trajectory{x0, f.adds, f.ctx, f.prob * stop, m.outcome(x0, f.adds, f.x)});
            const auto edges = l.out_edges(f.node);
            const EdgeId first = l.first_out_edge(f.node);
            for (std::size_t t = edges.size(); t-- > 0;) {
                if (prop[t] == 0.0) continue;
                const auto& row = m.transition[first + t][f.x];
                for (std::size_t y = m.contexts; y-- > 0;) {
                    if (row[y] == 0.0) continue;
                    Frame g{edges[t].to, y, f.prob * prop[t] * row[y], f.adds, f.ctx};
                    g.adds.push_back(edges[t].add);
                    g.ctx.push_back(y);
                    stack.push_back(std::move(g));
                }
            }
        }
    }
    return out;
}

bool observationally_equivalent(const CausalModel& a, const CausalModel& b) {
    if (a.contexts != b.contexts || a.lambda != b.lambda || a.initial_law != b.initial_law) return false;
    if (a.slice->node_count() != b.slice->node_count() || !(a.slice->base() == b.slice->base()))
        return false;
    return observational_law(a) == observational_law(b);
}

std::pair<CausalModel, CausalModel> nonid_witness(const CausalModel& m, const Diamond& d,
                                                  const std::vector<std::size_t>& contexts, double delta) {
    if (!(d.base == m.slice->base()))
        throw PreconditionError("witness diamond must sit at the model base ideal");
    if (!(d.u < d.v)) throw PreconditionError("diamond requires u <tau v");
    for (std::size_t x : contexts) {
        check_context(m, x);
        if (two_step_probability(m, x, d.v, d.u) > 0.0)
            throw PreconditionError("the v-first side has positive probability at context " + std::to_string(x));
    }
    CausalModel shifted = m;
    const std::vector<Element> side{d.v, d.u};
    for (std::size_t x : contexts) {
        auto it = shifted.outcomes.find({x, side});
        if (it == shifted.outcomes.end()) m.outcome(x, side, 0);
        for (auto& o : it->second) {
            // Move acceptance first, then absorb the rest through duration.
            const double a = std::clamp(o.accept_prob + delta, 0.0, 1.0);
            const double rest = delta - (a - o.accept_prob);
            double days = o.mean_days;
            if (rest != 0.0) {
                if (m.lambda == 0.0) throw PreconditionError("shift not realizable with lambda = 0");
                days -= rest / m.lambda;
                if (days < 0.0) throw PreconditionError("shift not realizable: negative duration");
            }
            o.accept_prob = a;
            o.mean_days = days;
        }
    }
    return {m, std::move(shifted)};
}

EventLog simulate_log(const CausalModel& m, std::size_t n, std::uint64_t seed) {
    const auto& l = *m.slice;
    const auto& p = l.poset();
    const auto base_elems = l.base().elements();
    const std::size_t width = std::to_string(n).size();
    Rng rng(seed);
    EventLog log;
    log.cases.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Case c;
        std::string id = std::to_string(k + 1);
        c.id = "c" + std::string(width - id.size(), '0') + id;
        const double t0 = kCaseStart + 600.0 * static_cast<double>(k);
        for (std::size_t i = 0; i < base_elems.size(); ++i)
            c.events.push_back(Event{p.id(base_elems[i]), t0 + static_cast<double>(i)});

        const std::size_t x0 = draw(rng, m.initial_law);
        std::size_t x = x0;
        NodeId node = 0;
        std::vector<Element> adds;
        while (auto t = draw_action(rng, m, node, x)) {
            const auto& e = l.out_edges(node)[*t];
            x = draw(rng, m.transition[l.first_out_edge(node) + *t][x]);
            adds.push_back(e.add);
            c.events.push_back(Event{p.id(e.add), t0 + kStepSeconds * static_cast<double>(adds.size())});
            node = e.to;
        }
        const auto& o = m.outcome(x0, adds, x);
        const double anchor = t0 + kStepSeconds * static_cast<double>(adds.size() + 1);
        const double days = rng.exponential(o.mean_days);
        const double end = std::round((anchor + days * kSecondsPerDay) * 1000.0) / 1000.0;
        c.events.push_back(Event{m.target_activity, anchor});
        c.events.push_back(Event{m.end_activity, end});
        c.outcome = rng.bernoulli(o.accept_prob) ? 1.0 : 0.0;
        log.cases.push_back(std::move(c));
    }
    return log;
}

MonteCarloResult simulate_forced(const CausalModel& m, std::size_t x0, const Path& path, std::size_t n,
                                 std::uint64_t seed) {
    check_context(m, x0);
    const auto edges = edges_of(m, path);
    Rng rng(seed);
    double sum = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t x = x0;
        for (EdgeId e : edges) x = draw(rng, m.transition[e][x]);
        const auto& o = m.outcome(x0, path.additions, x);
        const double days = rng.exponential(o.mean_days);
        const double r = (rng.bernoulli(o.accept_prob) ? 1.0 : 0.0) - m.lambda * days;
        sum += r;
        sq += r * r;
    }
    MonteCarloResult res;
    res.episodes = n;
    if (n == 0) return res;
    const double dn = static_cast<double>(n);
    res.mean = sum / dn;
    const double var = n > 1 ? std::max(0.0, (sq - dn * res.mean * res.mean) / (dn - 1.0)) : 0.0;
    res.standard_error = std::sqrt(var / dn);
    return res;
}

namespace {

/// k nonnegative integers summing to `total`, as a law with denominator `total`.
std::vector<double> random_law(Rng& rng, std::size_t k, int total, bool dyadic) {
    std::vector<double> w(k);
    if (dyadic) {
        std::vector<int> counts(k, 0);
        for (int i = 0; i < total; ++i) ++counts[rng.index(k)];
        for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<double>(counts[i]) / total;
        return w;
    }
    double s = 0.0;
    for (auto& v : w) s += v = rng.exponential(1.0);
    for (auto& v : w) v /= s;
    return w;
}

}  // namespace

CausalModel make_random_model(const SlicePtr& slice, std::uint64_t seed, RandomModelOptions options) {
    CausalModel m = CausalModel::blank(slice, options.contexts);
    Rng rng(seed);
    const std::size_t c = options.contexts;
    m.lambda = options.dyadic ? 1.0 / 64.0 : 0.02;
    m.initial_law = random_law(rng, c, 16, options.dyadic);

    for (NodeId k = 0; k < slice->node_count(); ++k) {
        const std::size_t deg = slice->out_edges(k).size();
        for (std::size_t x = 0; x < c; ++x) {
            auto law = random_law(rng, deg + 1, 16, options.dyadic);  // last entry is stop
            for (std::size_t t = 0; t < deg; ++t) {
                if (rng.bernoulli(options.zero_propensity_rate)) {
                    law[deg] += law[t];
                    law[t] = 0.0;
                }
                m.propensity[k][x][t] = law[t];
            }
        }
    }
    for (auto& per_edge : m.transition)
        for (auto& row : per_edge) row = random_law(rng, c, 16, options.dyadic);

    for (NodeId k = 0; k < slice->node_count(); ++k) {
        for (const auto& path : enumerate_paths(*slice, slice->base(), slice->node(k))) {
            for (std::size_t x0 = 0; x0 < c; ++x0) {
                std::vector<OutcomeSpec> specs(c);
                for (auto& o : specs) {
                    if (options.dyadic) {
                        o.accept_prob = static_cast<double>(rng.index(17)) / 16.0;
                        o.mean_days = static_cast<double>(rng.index(33));
                    } else {
                        o.accept_prob = rng.uniform();
                        o.mean_days = 30.0 * rng.uniform();
                    }
                }
                m.outcomes[{x0, path.additions}] = std::move(specs);
            }
        }
    }
    return m;
}

CausalModel make_family_model(const FamilyModelSpec& s) {
    if (!(s.u < s.w)) throw InputError("family model needs u < w by name");
    if (s.target == s.u || s.target == s.w) throw InputError("target must differ from u and w");
    if (s.p_first_u + s.p_first_w > 1.0 || s.p_first_u < 0 || s.p_first_w < 0 || s.p_second < 0 ||
        s.p_second > 1.0)
        throw InputError("family model propensities out of range");
    if (!(s.lambda >= 0.0) || !(s.base_days >= 0.0)) throw InputError("lambda and base_days must be >= 0");

    const Poset p = Poset::from_relations({s.u, s.w}, {});
    auto slice = build_lattice(p, Ideal{}, 2);
    CausalModel m = CausalModel::blank(slice, 2);
    m.lambda = s.lambda;
    m.target_activity = s.target;
    m.initial_law = {0.5, 0.5};

    const Element u = 0, w = 1;
    const NodeId root = 0;
    const NodeId nu = slice->index_of(Ideal::single(u));
    const NodeId nw = slice->index_of(Ideal::single(w));
    for (std::size_t x = 0; x < 2; ++x) {
        m.propensity[root][x] = {s.p_first_u, s.p_first_w};
        m.propensity[nu][x] = {s.p_second};
        m.propensity[nw][x] = {s.p_second};
    }

    // κ is carried by acceptance up to ±0.4, the rest by duration.
    const double via_accept = std::clamp(s.kappa, -0.4, 0.4);
    const double via_days = s.kappa - via_accept;
    if (via_days != 0.0 && s.lambda == 0.0) throw InputError("kappa beyond +-0.4 needs lambda > 0");
    const double days_uw = s.base_days + std::max(0.0, via_days / (s.lambda == 0.0 ? 1.0 : s.lambda));
    const double days_wu = days_uw - (s.lambda == 0.0 ? 0.0 : via_days / s.lambda);
    const double accept_uw = 0.5 - std::max(0.0, via_accept) / 2.0 + std::max(0.0, -via_accept) / 2.0;

    // Context shifts acceptance uniformly, so κ is the same in both contexts.
    for (std::size_t x0 = 0; x0 < 2; ++x0) {
        const double shift = x0 == 0 ? -0.05 : 0.05;
        auto set = [&](std::vector<Element> adds, double accept, double days) {
            m.outcomes[{x0, adds}] = std::vector<OutcomeSpec>(2, OutcomeSpec{accept + shift, days});
        };
        set({}, 0.35, s.base_days);
        set({u}, 0.45, s.base_days);
        set({w}, 0.40, s.base_days);
        set({u, w}, accept_uw, days_uw);
        set({w, u}, accept_uw + via_accept, days_wu);
    }
    m.validate();
    return m;
}

}  // namespace ordersens::causal
