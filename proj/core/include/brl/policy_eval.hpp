#pragma once

#include <functional>

#include "brl/bmdp.hpp"
#include "brl/gridded_q.hpp"

namespace brl {

/// Budgeted policy restricted to grid points: mixture of augmented actions
/// at (state index, budget grid index).
using GridPolicy = std::function<MixturePolicy(int state, int budget_index)>;

/// Raised when a fixed-point iteration fails to reach its tolerance; the
/// last sup-norm residual is carried along.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// One application of the expectation operator under a fixed policy:
/// (T^pi q)(s, a) = R(s, a) + gamma * sum_{s'} P(s'|s,a) E_{a' ~ pi(s', beta_a)} q(s', a').
/// Mixture allocations off the grid are projected to the nearest grid
/// point; projections are counted into *off_grid_count when provided.
GriddedQ bellman_expectation_backup(const BudgetedMdp& mdp, const GridPolicy& policy,
                                    const GriddedQ& q, long* off_grid_count = nullptr);

struct PolicyEvalResult {
    GriddedQ q;
    int iterations = 0;
    double residual = 0.0;
};

/// Iterates the expectation backup from zero until the sup-norm change
/// drops below tol. Throws ConvergenceError after max_iters.
PolicyEvalResult policy_evaluation(const BudgetedMdp& mdp, const GridPolicy& policy,
                                   const BudgetGrid& grid, double tol, int max_iters = 100000);

} // namespace brl
