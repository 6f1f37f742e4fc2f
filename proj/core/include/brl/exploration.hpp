#pragma once

#include <iosfwd>

#include "brl/batch.hpp"
#include "brl/env.hpp"
#include "brl/types.hpp"

namespace brl {

/// Interface the exploration loop uses to exploit and to refresh the
/// greedy policy between minibatches. The policy must stay frozen while a
/// minibatch is being collected.
class SolverHandle {
public:
    virtual ~SolverHandle() = default;
    virtual void retrain(const TransitionBatch& all_data) = 0;
    virtual bool ready() const = 0;
    virtual AugmentedAction greedy(const StateVec& state, double beta, Rng& rng) const = 0;
};

struct ExplorationConfig {
    long total_samples = 5000;
    int minibatches = 10;
    double epsilon_decay = 0.001;
    double epsilon_floor = 0.0;

    /// Realization of the random budgeted policy: the cheap per-draw
    /// construction (uniform action, allocation ~ U[0, min(2 beta,
    /// beta_max)]) or the uniform-on-the-constrained-simplex variant.
    enum class BudgetSampler { kConstrainedUniform, kSimplexDirichlet };
    BudgetSampler budget_sampler = BudgetSampler::kConstrainedUniform;

    /// Risk-sensitive exploration respects the current budget in
    /// expectation; the risk-neutral baseline ignores budgets entirely
    /// (uniform allocations, reward-greedy exploitation).
    enum class Strategy { kRiskSensitive, kRiskNeutral };
    Strategy strategy = Strategy::kRiskSensitive;

    int workers = 1;

    /// Grid used only by the simplex sampler's candidate atoms.
    BudgetGrid simplex_grid{0.0, 1.0, 0.1};

    void validate() const;
};

/// beta_0 ~ U(B): the whole range of risk levels gets explored.
double sample_initial_budget(Rng& rng, const BudgetInterval& budget_space);

/// Random budgeted action with E[beta_a] <= beta: uniform action and
/// allocation ~ U[0, min(2 beta, beta_max)].
AugmentedAction sample_random_budgeted_action(const AugmentedState& s, int n_actions,
                                              const BudgetInterval& budget_space, Rng& rng);

/// Uniform draw from the simplex of distributions over A x grid whose
/// expected allocation respects beta (Dirichlet weights, rejection on the
/// expectation constraint), followed by one atom draw.
AugmentedAction sample_random_budgeted_action_simplex(const AugmentedState& s, int n_actions,
                                                      const BudgetGrid& grid,
                                                      const BudgetInterval& budget_space, Rng& rng);

struct EpisodeLog {
    long episode = 0;
    int steps = 0;
    double epsilon_at_start = 0.0;
    double beta0 = 0.0;
    double return_r = 0.0;
    double return_c = 0.0;
};

struct CollectResult {
    TransitionBatch batch;
    std::vector<EpisodeLog> episodes;
    long retrain_calls = 0;
};

void write_exploration_log_csv(std::ostream& os, const std::vector<EpisodeLog>& episodes);

/// Epsilon-mixture batch collection (risk-sensitive by default): episodes
/// draw beta_0 uniformly, thread budgets through allocations, and follow
/// the random budgeted policy with probability epsilon_k = max(floor,
/// exp(-decay * k)), exploiting the solver's greedy policy otherwise.
/// After each minibatch the solver retrains on everything collected so
/// far. Episodes run on per-episode derived seeds; the batch bytes are
/// identical for any worker count. `solver` may be null (pure
/// exploration).
CollectResult collect_batch(const EnvFactory& make_env, SolverHandle* solver,
                            const ExplorationConfig& cfg, const BudgetInterval& budget_space,
                            std::uint64_t master_seed);

} // namespace brl
