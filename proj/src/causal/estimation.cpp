#include "ordersens/causal/estimation.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "ordersens/causal/random.hpp"
#include "ordersens/error.hpp"

namespace ordersens::causal {

FamilySpec FamilySpec::make(std::string a, std::string b, std::string target, double lambda) {
    if (a == b || a == target || b == target)
        throw InputError("family activities must be pairwise distinct");
    if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
    if (b < a) std::swap(a, b);
    return FamilySpec{std::move(a), std::move(b), std::move(target), lambda};
}

const char* to_string(EndpointClass c) {
    switch (c) {
        case EndpointClass::none: return "empty";
        case EndpointClass::u: return "u";
        case EndpointClass::w: return "w";
        case EndpointClass::both: return "uw";
    }
    return "?";
}

const char* to_string(PairOrder o) {
    switch (o) {
        case PairOrder::u_first: return "u->w";
        case PairOrder::w_first: return "w->u";
        case PairOrder::not_applicable: return "n/a";
    }
    return "?";
}

const char* to_string(Estimate::Status s) {
    switch (s) {
        case Estimate::Status::value: return "value";
        case Estimate::Status::unidentified: return "unidentified";
        case Estimate::Status::insufficient_n: return "insufficient-n";
    }
    return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined state
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

/// First-occurrence position of every activity in a case.
std::unordered_map<std::string, std::size_t> first_positions(const Case& c) {
    std::unordered_map<std::string, std::size_t> first;
    for (std::size_t k = 0; k < c.events.size(); ++k) first.emplace(c.events[k].activity, k);
    return first;
}

Cell summarize(const std::vector<double>& xs) {
    Cell c;
    c.count = xs.size();
    if (xs.empty()) return c;
    double s = 0.0;
    for (double x : xs) s += x;
    c.mean = Estimate::of(s / static_cast<double>(xs.size()));
    return c;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Linear-interpolation sample quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<FamilySpec> detect_families(const EventLog& log, std::size_t min_two_sided, double lambda) {
    if (min_two_sided < 1) throw InputError("min_two_sided must be at least 1");
    // (u, w, v) -> (#u first, #w first)
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& c : log.cases) {
        std::vector<std::pair<std::size_t, std::string>> acts;
        for (const auto& [name, pos] : first_positions(c)) acts.emplace_back(pos, name);
        std::sort(acts.begin(), acts.end());
        for (std::size_t t = 2; t < acts.size(); ++t) {
            const std::string& v = acts[t].second;
            for (std::size_t x = 0; x < t; ++x)
                for (std::size_t y = x + 1; y < t; ++y) {
                    // acts[x] occurred before acts[y]
                    const std::string& first = acts[x].second;
                    const std::string& second = acts[y].second;
                    if (first < second) ++counts[{first, second, v}].first;
                    else ++counts[{second, first, v}].second;
                }
        }
    }
    std::vector<FamilySpec> out;
    for (const auto& [key, n] : counts) {
        if (n.first >= min_two_sided && n.second >= min_two_sided)
            out.push_back(FamilySpec{std::get<0>(key), std::get<1>(key), std::get<2>(key), lambda});
    }
    return out;
}

std::vector<Episode> extract_episodes(const EventLog& log, const FamilySpec& family) {
    std::vector<Episode> out;
    for (const auto& c : log.cases) {
        std::size_t anchor = c.events.size();
        std::size_t pu = c.events.size();
        std::size_t pw = c.events.size();
        for (std::size_t k = 0; k < c.events.size(); ++k) {
            const auto& a = c.events[k].activity;
            if (a == family.v) {
                anchor = k;
                break;
            }
            if (a == family.u && pu == c.events.size()) pu = k;
            if (a == family.w && pw == c.events.size()) pw = k;
        }
        if (anchor == c.events.size()) continue;

        Episode ep;
        ep.case_id = c.id;
        const bool has_u = pu < anchor;
        const bool has_w = pw < anchor;
        ep.endpoint = has_u && has_w ? EndpointClass::both
                      : has_u        ? EndpointClass::u
                      : has_w        ? EndpointClass::w
                                     : EndpointClass::none;
        if (has_u && has_w) ep.order = pu < pw ? PairOrder::u_first : PairOrder::w_first;
        ep.outcome = c.outcome;
        ep.remaining_days = (c.events.back().timestamp - c.events[anchor].timestamp) / kSecondsPerDay;
        ep.reward = ep.outcome - family.lambda * ep.remaining_days;
        out.push_back(std::move(ep));
    }
    return out;
}

EstimationReport estimate_family(std::span<const Episode> episodes, const FamilySpec& family,
                                 BootstrapOptions options) {
    EstimationReport r;
    r.family = family;
    r.bootstrap = options;

    std::array<std::vector<double>, 4> by_class;
    std::vector<double> uf, wf;
    for (const auto& e : episodes) {
        by_class[static_cast<std::size_t>(e.endpoint)].push_back(e.reward);
        if (e.order == PairOrder::u_first) uf.push_back(e.reward);
        if (e.order == PairOrder::w_first) wf.push_back(e.reward);
    }
    for (std::size_t k = 0; k < 4; ++k) r.endpoints[k] = summarize(by_class[k]);
    r.u_first = summarize(uf);
    r.w_first = summarize(wf);
    r.reference_supported = !uf.empty();
    r.two_sided_supported = !uf.empty() && !wf.empty();

    if (!r.two_sided_supported) {
        r.kappa = r.ci_low = r.ci_high = Estimate::unidentified();
        return r;
    }
    const double kappa = mean_of(wf) - mean_of(uf);
    r.kappa = Estimate::of(kappa);
    if (uf.size() < 2 || wf.size() < 2 || options.resamples == 0) {
        r.ci_low = r.ci_high = Estimate::insufficient();
        return r;
    }

    std::vector<double> draws(options.resamples);
    for (std::size_t b = 0; b < options.resamples; ++b) {
        Rng rng(derive_seed(options.seed, b));
        double su = 0.0, sw = 0.0;
        for (std::size_t k = 0; k < uf.size(); ++k) su += uf[rng.index(uf.size())];
        for (std::size_t k = 0; k < wf.size(); ++k) sw += wf[rng.index(wf.size())];
        draws[b] = sw / static_cast<double>(wf.size()) - su / static_cast<double>(uf.size());
    }
    std::sort(draws.begin(), draws.end());
    const double alpha = (1.0 - options.level) / 2.0;
    // The percentile interval is widened to cover the point estimate when
    // resampling skew pushes it outside.
    r.ci_low = Estimate::of(std::min(quantile(draws, alpha), kappa));
    r.ci_high = Estimate::of(std::max(quantile(draws, 1.0 - alpha), kappa));
    return r;
}

LogSupportReport support_separation_report(std::span<const Episode> episodes) {
    std::array<std::size_t, 4> n{};
    std::size_t uf = 0, wf = 0;
    for (const auto& e : episodes) {
        ++n[static_cast<std::size_t>(e.endpoint)];
        if (e.order == PairOrder::u_first) ++uf;
        if (e.order == PairOrder::w_first) ++wf;
    }
    LogSupportReport r;
    for (std::size_t k = 0; k < 4; ++k) r.endpoint_identified[k] = n[k] > 0;
    r.reference_identified = {n[0] > 0, n[1] > 0, n[2] > 0, uf > 0};
    r.kappa_identified = uf > 0 && wf > 0;
    r.path_identified = {r.reference_identified[0], r.reference_identified[1],
                         r.reference_identified[3], r.reference_identified[2],
                         r.reference_identified[3] && r.kappa_identified};
    return r;
}

}  // namespace ordersens::causal
