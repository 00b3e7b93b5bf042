#ifndef ORDERSENS_CAUSAL_MODEL_HPP
#define ORDERSENS_CAUSAL_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordersens/causal/event_log.hpp"
#include "ordersens/error.hpp"
#include "ordersens/lattice.hpp"

namespace ordersens::causal {

/// Outcome law of a terminated trajectory: acceptance is Bernoulli(accept_prob)
/// and the time from anchor to case end is exponential with mean `mean_days`.
/// The reward is 1{accepted} − λ·days.
struct OutcomeSpec {
    double accept_prob = 0.0;
    double mean_days = 0.0;
    friend bool operator==(const OutcomeSpec&, const OutcomeSpec&) = default;
};

/**
 * Finite-state sequential intervention model on a lattice slice.
 *
 * The state is (ideal, context). At state (I, x) the unit takes admissible
 * action a with probability propensity[I][x][a] or stops with the remaining
 * mass; after a, the next context is drawn from transition[(I,a)][x].
 * Rewards depend on the initial context, the action sequence, and the
 * terminal context.
 */
struct CausalModel {
    SlicePtr slice;
    std::size_t contexts = 1;
    std::vector<double> initial_law;
    /// [node][context][t] for the t-th out edge of the node.
    std::vector<std::vector<std::vector<double>>> propensity;
    /// [edge][context] -> distribution over next contexts.
    std::vector<std::vector<std::vector<double>>> transition;
    /// (initial context, additions) -> outcome law per terminal context.
    std::map<std::pair<std::size_t, std::vector<Element>>, std::vector<OutcomeSpec>> outcomes;
    double lambda = 0.02;
    std::string target_activity = "target";
    std::string end_activity = "end";

    /// Model with no actions taken (all propensities 0), identity transitions,
    /// uniform initial law and no outcome entries.
    static CausalModel blank(SlicePtr slice, std::size_t contexts);

    double propensity_of(NodeId node, std::size_t x, Element a) const;
    const OutcomeSpec& outcome(std::size_t x0, const std::vector<Element>& path, std::size_t x_end) const;
    double reward_mean(std::size_t x0, const std::vector<Element>& path, std::size_t x_end) const;

    /// Throws InputError when laws are not (sub-)probability vectors.
    void validate(double tol = 1e-9) const;
};

/// Stage and context at which a path loses support.
struct SupportFailure {
    std::size_t stage = 0;
    std::size_t context = 0;
};

class UnsupportedPath : public PreconditionError {
public:
    UnsupportedPath(const std::string& what, SupportFailure f) : PreconditionError(what), failure_(f) {}
    const SupportFailure& failure() const { return failure_; }

private:
    SupportFailure failure_;
};

/// First stage b where Pr(A_b = a_b | z_b) = 0 on the support of the path-induced state law.
std::optional<SupportFailure> check_support(const CausalModel& m, std::size_t x0, const Path& path);

/// g-formula by forward propagation of the path-induced state laws, then
/// the expected terminal conditional mean. Throws UnsupportedPath.
double g_formula_value(const CausalModel& m, std::size_t x0, const Path& path);

/// Q_z(γ) by backward recursion over the same kernel (no support needed).
double true_path_value(const CausalModel& m, std::size_t x0, const Path& path);

/// Path-induced law of the terminal context under forced γ.
std::vector<double> terminal_context_law(const CausalModel& m, std::size_t x0, const Path& path);

/// κ_z(d) = Q(ρ·v·u) − Q(ρ·u·v), ρ the reference path from the model base to d.base.
double local_order_effect(const CausalModel& m, std::size_t x0, const Diamond& d);

/// Pooled over the initial context law.
double pooled_path_value(const CausalModel& m, const Path& path);
double pooled_order_effect(const CausalModel& m, const Diamond& d);

struct ModelSupportReport {
    /// Contexts with positive initial mass; every per-context vector is aligned to this.
    std::vector<std::size_t> contexts;

    struct ReferenceEntry {
        Ideal endpoint;
        std::vector<bool> supported;
        bool identified = false;  ///< supported at every context
    };
    struct DiamondEntry {
        Diamond diamond;
        std::vector<bool> two_sided;
        bool identified = false;
    };
    struct CandidateEntry {
        Path path;
        std::vector<bool> decomposable;
        bool identified = false;
    };
    std::vector<ReferenceEntry> references;
    std::vector<DiamondEntry> diamonds;
    std::vector<CandidateEntry> candidates;
};

/// Which reference scores, local order effects and full decompositions are
/// identified at the model's initial states.
ModelSupportReport support_separation_report(const CausalModel& m, std::size_t candidate_cap = 100000);

/// Every positive-probability trajectory together with its outcome law.
struct Trajectory {
    std::size_t x0 = 0;
    std::vector<Element> additions;
    std::vector<std::size_t> contexts;  ///< x_1 .. x_L
    double probability = 0.0;
    OutcomeSpec outcome;
    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};
std::vector<Trajectory> observational_law(const CausalModel& m);
bool observationally_equivalent(const CausalModel& a, const CausalModel& b);

/// Returns (m, m′) where m′ shifts Q_{(I,x)}(v-first side of d) by Δ for x in
/// `contexts` and agrees with m on everything observable. Requires d.base to
/// be the model base and the v-first side to have zero probability there.
std::pair<CausalModel, CausalModel> nonid_witness(const CausalModel& m, const Diamond& d,
                                                  const std::vector<std::size_t>& contexts, double delta);

/// n cases in the canonical log format; deterministic given the seed.
EventLog simulate_log(const CausalModel& m, std::size_t n, std::uint64_t seed);

struct MonteCarloResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t episodes = 0;
};
/// Rewards under the forced intervention γ from context x0.
MonteCarloResult simulate_forced(const CausalModel& m, std::size_t x0, const Path& path, std::size_t n,
                                 std::uint64_t seed);

struct RandomModelOptions {
    std::size_t contexts = 2;
    /// Probabilities are multiples of 1/16, days are integers and λ = 1/64, so
    /// forward and backward evaluations agree exactly in floating point.
    bool dyadic = true;
    double zero_propensity_rate = 0.2;
};
CausalModel make_random_model(const SlicePtr& slice, std::uint64_t seed, RandomModelOptions options = {});

/// Two-element family model on the antichain {u, w} (depth 2) with context-free
/// propensities. The pooled local order effect equals `kappa`.
struct FamilyModelSpec {
    double kappa = 2.0;
    double lambda = 0.02;
    double p_first_u = 0.45;   ///< at ∅: take u
    double p_first_w = 0.45;   ///< at ∅: take w
    double p_second = 0.8;     ///< at a singleton: take the other element
    double base_days = 25.0;   ///< mean days on the reference path u→w
    std::string u = "u";
    std::string w = "w";
    std::string target = "target";
};
CausalModel make_family_model(const FamilyModelSpec& spec);

}  // namespace ordersens::causal

#endif
