#pragma once

#include <iosfwd>
#include <memory>

#include "brl/batch.hpp"
#include "brl/bi_q.hpp"
#include "brl/hull.hpp"
#include "brl/regressor.hpp"

namespace brl {

enum class RegressorKind { kMlp, kTabular };

struct BftqConfig {
    BudgetGrid budget_grid{0.0, 1.0, 0.01};
    double gamma = 1.0;
    int ftq_epochs = 12; // outer fitted iterations
    RegressorSpec regressor;
    RegressorKind regressor_kind = RegressorKind::kMlp;
    /// Action count of the environment; 0 infers it from the batch.
    int n_actions = 0;
    int workers = 1;
    /// Early stop on target sup-norm change; 0 disables (the table-driven
    /// fixed iteration count is the default protocol).
    double convergence_tol = 0.0;
    bool warm_start = true;
    /// Symmetric clip applied to regression targets; 0 disables.
    double target_clip = 0.0;

    void validate() const;
};

struct ComputeTargetsResult {
    std::vector<VectorSignal> targets; // input order
    long infeasibility_count = 0;
    long off_grid_count = 0;
};

/// Fitted-target computation over a batch: stage 1 evaluates Q on every
/// (next state, action, grid budget) triple, stage 2 builds per-transition
/// hull policies and emits (r, c) + gamma * mixture value. Both stages
/// split across workers by transition index; the output is bit-identical
/// for any worker count.
ComputeTargetsResult compute_targets(const TransitionBatch& batch, const BiQFunction& q,
                                     const BftqConfig& cfg);

struct BftqReport {
    struct Row {
        int iteration = 0;
        double target_change = 0.0; // sup-norm vs previous iteration's targets
        double fit_loss = 0.0;      // final epoch loss of the regressor
        long infeasibility_count = 0;
    };
    std::vector<Row> rows;
    void write_csv(std::ostream& os) const;
};

struct BftqResult {
    std::shared_ptr<BiQFunction> q;
    BftqReport report;
};

/// Budgeted fitted iteration: from Q_0 = 0, alternate target computation
/// under the greedy hull policy with supervised regression, for
/// cfg.ftq_epochs rounds.
BftqResult bftq_train(const TransitionBatch& batch, const BftqConfig& cfg, Rng& rng);

/// Executable budgeted policy wrapping a trained Q: snaps the requested
/// budget to the grid, computes the hull mixture over actions x grid and
/// samples it. The returned allocation becomes the caller's next budget.
class BudgetedQPolicy {
public:
    BudgetedQPolicy(std::shared_ptr<const BiQFunction> q, const BudgetGrid& grid)
        : q_(std::move(q)), grid_(grid) {}

    MixturePolicy mixture(const StateVec& state, double beta, bool* infeasible = nullptr) const;
    AugmentedAction act(const StateVec& state, double beta, Rng& rng) const;

    const BudgetGrid& grid() const { return grid_; }
    const BiQFunction& q() const { return *q_; }

private:
    std::shared_ptr<const BiQFunction> q_;
    BudgetGrid grid_;
};

} // namespace brl
