#ifndef ORDERSENS_PLANNER_HPP
#define ORDERSENS_PLANNER_HPP

#include <vector>

#include "ordersens/valuation.hpp"

namespace ordersens {

struct PlanOptions {
    /// Include the stop option (max with 0). Off plans over maximal paths only.
    bool allow_stop = true;
    /// Path budget for exhaustive search.
    std::size_t path_cap = 1'000'000;
};

struct PlanResult {
    Path best_path;
    double best_value = 0.0;
    /// U(K) per slice node (dynamic programming only).
    std::vector<double> value_table;
};

/// Backward recursion U(K) = max{0, max_a g(K,a) + U(K∪{a})} on the slice,
/// then forward replay. Ties go to stopping, then to the τ-smallest action.
PlanResult dp_plan(const EdgeField& g, PlanOptions options = {});

/// Enumerates Γ_H(base) and keeps the lexicographically first maximizer, the
/// same tie-break as dp_plan. Throws CapExceeded past options.path_cap.
PlanResult exhaustive_plan(const EdgeField& g, PlanOptions options = {});

struct OrderBoundReport {
    double epsilon = 0.0;          ///< max |κ| over slice diamonds
    double max_gap = 0.0;          ///< max |V(γ) − V(γ′)| over path pairs
    double worst_case_bound = 0.0; ///< C(L,2)·ε
    double tightest_ratio = 0.0;   ///< max |ΔV| / (N_swap·ε) over pairs with N_swap·ε > 0
    std::size_t pairs = 0;
    std::size_t violations = 0;
    bool holds = true;
};

/// Checks |V(γ) − V(γ′)| ≤ N_swap(γ,γ′)·ε ≤ C(L,2)·ε for every pair in Γ(i, j).
OrderBoundReport order_bound_check(const EdgeField& g, const Ideal& i, const Ideal& j,
                                   PathEnumOptions options = {}, double tol = kDefaultTolerance);

}  // namespace ordersens

#endif
