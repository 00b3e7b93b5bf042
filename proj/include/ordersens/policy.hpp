#ifndef ORDERSENS_POLICY_HPP
#define ORDERSENS_POLICY_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordersens/causal/estimation.hpp"
#include "ordersens/planner.hpp"

namespace ordersens {

/// Paths on a family's two-element lattice, in planner tie-break order.
enum class FamilyPath { stop = 0, u = 1, u_then_w = 2, w = 3, w_then_u = 4 };
inline constexpr std::size_t kFamilyPaths = 5;

std::string family_path_label(FamilyPath p, const causal::FamilySpec& f);

/// Pooled path means fitted on a set of episodes.
struct FamilyValues {
    std::array<causal::Cell, kFamilyPaths> path;   ///< indexed by FamilyPath
    causal::Cell pair_pooled;                      ///< {u,w} endpoint, both orders
    /// κ̂ = V(w→u) − V(u→w), unidentified unless both orders were seen.
    causal::Estimate kappa;
};
FamilyValues fit_family_values(std::span<const causal::Episode> episodes);

struct PolicyOptions {
    /// Allow policies to stop before the pair endpoint. Off compares complete
    /// orderings of the pair only.
    bool allow_stop = false;
    /// |κ̂| at or below this counts as no order signal.
    double kappa_tol = 1e-9;
    std::size_t resplits = 30;
    double train_fraction = 0.7;
    std::uint64_t seed = 20250101;
};

struct PolicyRow {
    std::string name;
    /// Empty when the policy had nothing identified to choose from.
    std::optional<FamilyPath> selected;
    /// Endpoint-pooled is scored on its endpoint class, not on one order.
    bool pooled_endpoint = false;
    causal::Estimate heldout;
    causal::Estimate delta_ref;
    causal::Estimate delta_greedy;
    causal::Estimate win_rate;
};

struct PolicyTable {
    causal::FamilySpec family;
    std::size_t train_size = 0;
    std::size_t heldout_size = 0;
    PolicyOptions options;
    std::vector<PolicyRow> rows;  ///< sequence-sensitive first

    const PolicyRow& row(std::string_view name) const;
};

inline constexpr std::array<const char*, 7> kPolicyNames = {
    "sequence-sensitive", "reference-path", "greedy-one-step", "fixed-forward",
    "fixed-reverse",      "endpoint-pooled", "frequency"};

/// Fits on `train`, lets every policy select a path, scores it on `heldout`.
/// Win rates are left unidentified.
PolicyTable policy_compare(std::span<const causal::Episode> train, std::span<const causal::Episode> heldout,
                           const causal::FamilySpec& family, PolicyOptions options = {});

/// Seeded case-level split, the table on it, and win rates against the
/// reference-path policy over `options.resplits` further splits.
PolicyTable policy_compare_resplit(std::span<const causal::Episode> episodes, const causal::FamilySpec& family,
                                   PolicyOptions options = {});

/// Seeded train/held-out split by case.
std::pair<std::vector<causal::Episode>, std::vector<causal::Episode>> split_episodes(
    std::span<const causal::Episode> episodes, double train_fraction, std::uint64_t seed);

/// Edge field on the family's two-element lattice (ids u, w) whose path values
/// are V(γ) − V(∅). Empty when some path mean is unidentified.
std::optional<EdgeField> family_edge_field(const FamilyValues& values, const causal::FamilySpec& family);

struct FamilyPlanRow {
    causal::FamilySpec family;
    bool plannable = false;
    Path dp_path;
    Path exhaustive_path;
    double dp_value = 0.0;          ///< V(∅) + DP path value
    double exhaustive_value = 0.0;
    bool equal = false;
};
FamilyPlanRow plan_family(const FamilyValues& values, const causal::FamilySpec& family, PlanOptions options);

}  // namespace ordersens

#endif
