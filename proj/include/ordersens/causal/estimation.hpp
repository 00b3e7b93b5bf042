#ifndef ORDERSENS_CAUSAL_ESTIMATION_HPP
#define ORDERSENS_CAUSAL_ESTIMATION_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordersens/causal/event_log.hpp"

namespace ordersens::causal {

inline constexpr double kDefaultLambda = 0.02;

/// Local family (u, w) → v. `u` is always the smaller activity name, so it
/// plays the role of the τ-smaller element of the diamond.
struct FamilySpec {
    std::string u;
    std::string w;
    std::string v;
    double lambda = kDefaultLambda;

    /// Orders the pair and validates u ≠ w ≠ v, λ ≥ 0.
    static FamilySpec make(std::string a, std::string b, std::string target,
                           double lambda = kDefaultLambda);
    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

enum class EndpointClass { none = 0, u = 1, w = 2, both = 3 };
/// Order inside the {u,w} endpoint. `u_first` is the reference side.
enum class PairOrder { u_first, w_first, not_applicable };

const char* to_string(EndpointClass c);
const char* to_string(PairOrder o);

struct Episode {
    std::string case_id;
    EndpointClass endpoint = EndpointClass::none;
    PairOrder order = PairOrder::not_applicable;
    double outcome = 0.0;
    double remaining_days = 0.0;
    double reward = 0.0;
};

/// All (u, w, v) where u and w both precede the first v in some cases and each
/// order occurs in at least `min_two_sided` cases. Sorted by (u, w, v).
std::vector<FamilySpec> detect_families(const EventLog& log, std::size_t min_two_sided,
                                        double lambda = kDefaultLambda);

/// One episode per case containing v, anchored at its first occurrence.
/// reward = outcome − λ·(last event − anchor) in days.
std::vector<Episode> extract_episodes(const EventLog& log, const FamilySpec& family);

/// Tri-state numeric result: never silently zero.
struct Estimate {
    enum class Status { value, unidentified, insufficient_n };
    Status status = Status::unidentified;
    double value = 0.0;

    static Estimate of(double v) { return {Status::value, v}; }
    static Estimate unidentified() { return {Status::unidentified, 0.0}; }
    static Estimate insufficient() { return {Status::insufficient_n, 0.0}; }
    bool ok() const { return status == Status::value; }
};
const char* to_string(Estimate::Status s);

struct Cell {
    std::size_t count = 0;
    Estimate mean;
};

struct BootstrapOptions {
    std::size_t resamples = 1000;
    std::uint64_t seed = 20250101;
    double level = 0.95;
};

struct EstimationReport {
    FamilySpec family;
    std::array<Cell, 4> endpoints;  ///< indexed by EndpointClass
    Cell u_first;                   ///< u→w inside {u,w}
    Cell w_first;                   ///< w→u inside {u,w}
    /// κ̂ = mean(w→u) − mean(u→w).
    Estimate kappa;
    Estimate ci_low;
    Estimate ci_high;
    bool reference_supported = false;  ///< u→w observed
    bool two_sided_supported = false;  ///< both orders observed
    BootstrapOptions bootstrap;
};

/// Pooled plug-in estimates with a stratified percentile bootstrap for κ̂.
EstimationReport estimate_family(std::span<const Episode> episodes, const FamilySpec& family,
                                 BootstrapOptions options = {});

/// Count-based support diagnostics for one family.
struct LogSupportReport {
    std::array<bool, 4> endpoint_identified{};   ///< class observed
    std::array<bool, 4> reference_identified{};  ///< reference path to the endpoint observed
    bool kappa_identified = false;
    /// Candidate paths (stop, u, u→w, w, w→u): decomposition applies.
    std::array<bool, 5> path_identified{};
};
LogSupportReport support_separation_report(std::span<const Episode> episodes);

/// Deterministic 64-bit mixer for per-resample seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ordersens::causal

#endif
