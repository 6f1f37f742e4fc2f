#include "brl/policy_eval.hpp"

#include <cmath>
#include <sstream>

namespace brl {

namespace {

// Expected q over the mixture at (s', budget index), with allocations
// snapped to the grid.
VectorSignal mixture_value(const GriddedQ& q, int s2, int bi, const MixturePolicy& mix,
                           long* off_grid_count) {
    bool off1 = false;
    bool off2 = false;
    const int j1 = q.grid.snap_index(mix.first.budget_allocation, &off1);
    const int j2 = q.grid.snap_index(mix.second.budget_allocation, &off2);
    if (off_grid_count != nullptr) *off_grid_count += (off1 ? 1 : 0) + (off2 ? 1 : 0);
    const VectorSignal v1 = q.at(s2, bi, mix.first.action, j1);
    const VectorSignal v2 = q.at(s2, bi, mix.second.action, j2);
    if (mix.weight == 0.0) return v1;
    return v1 * (1.0 - mix.weight) + v2 * mix.weight;
}

} // namespace

GriddedQ bellman_expectation_backup(const BudgetedMdp& mdp, const GridPolicy& policy,
                                    const GriddedQ& q, long* off_grid_count) {
    const int nb = q.grid.size();
    GriddedQ out = GriddedQ::zeros(mdp.n_states, mdp.n_actions, q.grid);

    // Continuation value of each (next state, next budget) cell under the
    // policy; computed once, reused by every predecessor.
    std::vector<VectorSignal> cont(static_cast<std::size_t>(mdp.n_states) * nb);
    for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        for (int bj = 0; bj < nb; ++bj) {
            if (mdp.is_terminal(s2)) continue;
            cont[s2 * nb + bj] = mixture_value(q, s2, bj, policy(s2, bj), off_grid_count);
        }
    }

    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const VectorSignal immediate{mdp.r(s, a), mdp.c(s, a)};
            for (int bj = 0; bj < nb; ++bj) {
                VectorSignal acc;
                for (int s2 = 0; s2 < mdp.n_states; ++s2) {
                    const double pr = mdp.p(s, a, s2);
                    if (pr == 0.0) continue;
                    acc += cont[s2 * nb + bj] * pr;
                }
                const VectorSignal value = immediate + acc * mdp.gamma;
                for (int bi = 0; bi < nb; ++bi) out.at(s, bi, a, bj) = value;
            }
        }
    }
    return out;
}

PolicyEvalResult policy_evaluation(const BudgetedMdp& mdp, const GridPolicy& policy,
                                   const BudgetGrid& grid, double tol, int max_iters) {
    if (mdp.gamma >= 1.0) {
        throw std::invalid_argument("policy_evaluation: gamma must be < 1 (or truncate the horizon)");
    }
    GriddedQ q = GriddedQ::zeros(mdp.n_states, mdp.n_actions, grid);
    double residual = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        GriddedQ next = bellman_expectation_backup(mdp, policy, q);
        residual = sup_norm_diff(next, q);
        q = std::move(next);
        if (residual < tol) return {std::move(q), it, residual};
    }
    std::ostringstream os;
    os << "policy_evaluation: no convergence after " << max_iters
       << " iterations (last residual " << residual << ")";
    throw ConvergenceError(os.str(), residual);
}

} // namespace brl
