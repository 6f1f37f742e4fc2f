#pragma once

#include <iosfwd>
#include <utility>

#include "brl/bmdp.hpp"
#include "brl/gridded_q.hpp"
#include "brl/hull.hpp"

namespace brl {

/// Per-iteration record of a budgeted value-iteration run. Convergence is
/// not guaranteed (the optimality operator is not a contraction), so the
/// report — not an exception — is the contract.
struct ConvergenceReport {
    struct Row {
        int iteration = 0;
        double residual_r = 0.0;
        double residual_c = 0.0;
        long infeasibility_count = 0;
    };
    std::vector<Row> rows;
    bool converged = false;

    double final_residual() const {
        if (rows.empty()) return 0.0;
        return std::max(rows.back().residual_r, rows.back().residual_c);
    }
    void write_csv(std::ostream& os) const;
};

/// One application of the optimality operator: for every cell,
/// R(s, a) + gamma * sum_{s'} P(s'|s,a) E_{a' ~ pi_hull((s', beta_a); q)} q((s', beta_a), a').
/// Terminal states contribute zero continuation. Hull infeasibilities are
/// counted, never fatal.
GriddedQ bellman_optimality_backup(const BudgetedMdp& mdp, const GriddedQ& q,
                                   long* infeasibility_count = nullptr, int workers = 1);

/// Fixed-point iteration of the optimality backup from Q_0 = 0.
/// max_iters == 0 selects 10 * ceil(log(1/tol) / log(1/gamma)).
std::pair<GriddedQ, ConvergenceReport> budgeted_value_iteration(const BudgetedMdp& mdp,
                                                                const BudgetGrid& grid,
                                                                double tol = 1e-8,
                                                                int max_iters = 0,
                                                                int workers = 1);

/// Sampled form of the optimality backup on one observed transition:
/// (r, c) + gamma * E_{a' ~ pi_hull(next_state; q)} q(next_state, a'),
/// with zero continuation on terminal transitions.
VectorSignal sampled_backup(const BiQFunction& q, const Transition& t, const BudgetGrid& grid,
                            double gamma, bool* infeasible = nullptr);

/// Executable counter-example to contractivity: builds the two Q tables
/// that differ by epsilon everywhere yet map to images one apart, applies
/// one exact backup on the grid {0, epsilon} and returns
/// ||T Q1 - T Q2||_inf / ||Q1 - Q2||_inf (>= 1/epsilon).
/// Requires at least two actions and gamma in (0, 1).
double noncontraction_witness(double epsilon, const BudgetedMdp& mdp);

/// Observed contraction factor ||T q1 - T q2||_inf / ||q1 - q2||_inf;
/// returns 0 for identical inputs. Diagnostic only.
double empirical_contraction_factor(const BudgetedMdp& mdp, const GriddedQ& q1, const GriddedQ& q2);

} // namespace brl
