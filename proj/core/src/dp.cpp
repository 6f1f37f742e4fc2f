#include "brl/dp.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace brl {

namespace {

// Candidate points at (state index, allocation grid) read straight from a
// GriddedQ table, in the canonical allocation-major order.
std::vector<QPoint> grid_candidates(const GriddedQ& q, int s2) {
    std::vector<QPoint> pts;
    pts.reserve(static_cast<std::size_t>(q.grid.size()) * q.n_actions);
    for (int k = 0; k < q.grid.size(); ++k) {
        const double alloc = q.grid.value(k);
        for (int a = 0; a < q.n_actions; ++a) {
            const VectorSignal& v = q.at(s2, 0, a, k);
            pts.push_back(QPoint{v.cost, v.reward, AugmentedAction{a, alloc}});
        }
    }
    return pts;
}

void parallel_for(int n, int workers, const std::function<void(int, int)>& body) {
    if (workers <= 1 || n <= 1) {
        body(0, n);
        return;
    }
    const int chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        const int lo = std::min(n, w * chunk);
        const int hi = std::min(n, (w + 1) * chunk);
        if (lo < hi) pool.emplace_back(body, lo, hi);
    }
    body(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

} // namespace

void ConvergenceReport::write_csv(std::ostream& os) const {
    os << "iteration,residual_r,residual_c,infeasibility_count\n";
    for (const auto& r : rows) {
        os << r.iteration << ',' << r.residual_r << ',' << r.residual_c << ','
           << r.infeasibility_count << '\n';
    }
}

GriddedQ bellman_optimality_backup(const BudgetedMdp& mdp, const GriddedQ& q,
                                   long* infeasibility_count, int workers) {
    const int nb = q.grid.size();
    GriddedQ out = GriddedQ::zeros(mdp.n_states, mdp.n_actions, q.grid);

    // Greedy continuation value of every (next state, next budget) cell.
    std::vector<VectorSignal> cont(static_cast<std::size_t>(mdp.n_states) * nb);
    std::atomic<long> infeasible{0};
    parallel_for(mdp.n_states * nb, workers, [&](int lo, int hi) {
        long local = 0;
        for (int cell = lo; cell < hi; ++cell) {
            const int s2 = cell / nb;
            const int bj = cell % nb;
            if (mdp.is_terminal(s2)) continue;
            const auto pts = grid_candidates(q, s2);
            const HullPolicy hp = hull_policy_from_points(pts, q.grid.value(bj));
            cont[cell] = hp.expected;
            if (hp.infeasible) ++local;
        }
        infeasible += local;
    });
    if (infeasibility_count != nullptr) *infeasibility_count += infeasible.load();

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

std::pair<GriddedQ, ConvergenceReport> budgeted_value_iteration(const BudgetedMdp& mdp,
                                                                const BudgetGrid& grid,
                                                                double tol, int max_iters,
                                                                int workers) {
    if (max_iters <= 0) {
        if (mdp.gamma >= 1.0) {
            throw std::invalid_argument(
                "budgeted_value_iteration: gamma >= 1 requires an explicit max_iters");
        }
        max_iters = 10 * static_cast<int>(std::ceil(std::log(1.0 / tol) / std::log(1.0 / mdp.gamma)));
    }

    GriddedQ q = GriddedQ::zeros(mdp.n_states, mdp.n_actions, grid);
    ConvergenceReport report;
    for (int it = 1; it <= max_iters; ++it) {
        long infeasible = 0;
        GriddedQ next = bellman_optimality_backup(mdp, q, &infeasible, workers);

        ConvergenceReport::Row row;
        row.iteration = it;
        row.infeasibility_count = infeasible;
        for (std::size_t i = 0; i < q.values.size(); ++i) {
            const VectorSignal d = next.values[i] - q.values[i];
            row.residual_r = std::max(row.residual_r, std::abs(d.reward));
            row.residual_c = std::max(row.residual_c, std::abs(d.cost));
        }
        report.rows.push_back(row);
        q = std::move(next);
        if (std::max(row.residual_r, row.residual_c) < tol) {
            report.converged = true;
            break;
        }
    }
    return {std::move(q), std::move(report)};
}

VectorSignal sampled_backup(const BiQFunction& q, const Transition& t, const BudgetGrid& grid,
                            double gamma, bool* infeasible) {
    const VectorSignal immediate{t.reward, t.cost};
    if (t.terminal) return immediate;
    const auto pts = collect_candidates(q, t.next_aug_state.state, grid);
    const HullPolicy hp = hull_policy_from_points(pts, grid.snap(t.next_aug_state.budget));
    if (infeasible != nullptr) *infeasible = hp.infeasible;
    return immediate + hp.expected * gamma;
}

double noncontraction_witness(double epsilon, const BudgetedMdp& mdp) {
    if (epsilon <= 0.0) throw std::domain_error("noncontraction_witness: epsilon must be positive");
    if (mdp.n_actions < 2) {
        throw std::domain_error("noncontraction_witness: needs at least two actions "
                                "(with one action the operator is a contraction)");
    }
    if (!(mdp.gamma > 0.0 && mdp.gamma < 1.0)) {
        throw std::domain_error("noncontraction_witness: gamma must lie in (0, 1)");
    }

    // Allocation grid {0, epsilon}: the backup at allocation epsilon is the
    // interesting one.
    const BudgetGrid grid(0.0, epsilon, epsilon);
    GriddedQ q1 = GriddedQ::zeros(mdp.n_states, mdp.n_actions, grid);
    GriddedQ q2 = GriddedQ::zeros(mdp.n_states, mdp.n_actions, grid);
    const double inv_gamma = 1.0 / mdp.gamma;
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int bi = 0; bi < grid.size(); ++bi) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                for (int bj = 0; bj < grid.size(); ++bj) {
                    if (a == 0) {
                        q1.at(s, bi, a, bj) = {0.0, 0.0};
                        q2.at(s, bi, a, bj) = {0.0, epsilon};
                    } else {
                        q1.at(s, bi, a, bj) = {inv_gamma, epsilon};
                        q2.at(s, bi, a, bj) = {inv_gamma, 2.0 * epsilon};
                    }
                }
            }
        }
    }
    return empirical_contraction_factor(mdp, q1, q2);
}

double empirical_contraction_factor(const BudgetedMdp& mdp, const GriddedQ& q1,
                                    const GriddedQ& q2) {
    const double denom = sup_norm_diff(q1, q2);
    if (denom == 0.0) return 0.0;
    const GriddedQ t1 = bellman_optimality_backup(mdp, q1);
    const GriddedQ t2 = bellman_optimality_backup(mdp, q2);
    return sup_norm_diff(t1, t2) / denom;
}

} // namespace brl
