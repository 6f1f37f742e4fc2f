#pragma once

#include <iosfwd>
#include <memory>

#include "brl/batch.hpp"
#include "brl/env.hpp"
#include "brl/exploration.hpp"
#include "brl/regressor.hpp"

namespace brl {

/// Scalar action-value function (the Lagrangian baseline works on the
/// penalised signal r - lambda * c).
class ScalarQ {
public:
    virtual ~ScalarQ() = default;
    virtual int n_actions() const = 0;
    virtual std::vector<double> evaluate_all(const StateVec& state) const = 0;

    int greedy_action(const StateVec& state) const {
        const auto v = evaluate_all(state);
        int best = 0;
        for (int a = 1; a < static_cast<int>(v.size()); ++a) {
            if (v[a] > v[best]) best = a;
        }
        return best;
    }
};

struct FtqConfig {
    RegressorSpec regressor;
    RegressorKind regressor_kind = RegressorKind::kMlp;
    double gamma = 1.0;
    int ftq_epochs = 12;
    int n_actions = 0; // 0 infers from the batch
    int workers = 1;
};

struct FtqResult {
    std::shared_ptr<ScalarQ> q;
    std::vector<double> fit_loss; // final epoch loss per outer iteration
};

/// Standard fitted iteration on the scalar signal r - lambda * c with
/// max-over-actions backup; the greedy policy ignores budgets.
FtqResult ftq_train(const TransitionBatch& batch, double lambda, const FtqConfig& cfg, Rng& rng);

/// Mean rollout cost/reward of each trained penalty level, sorted by
/// lambda. The smallest multiplier whose mean cost meets the budget is
/// the interesting one; mixtures interpolate between neighbours.
struct CalibrationEntry {
    double lambda = 0.0;
    double mean_cost = 0.0;
    double mean_reward = 0.0;
    double cost_std = 0.0;
};

struct CalibrationCurve {
    std::vector<CalibrationEntry> entries;
    void write_csv(std::ostream& os) const;
};

/// Randomized mixture of two deterministic penalty policies, indices into
/// the `policies` argument of calibrate(): with probability `weight_low`
/// play the riskier policies[low] (smaller lambda, larger mean cost),
/// else the feasible policies[high].
struct LambdaMixture {
    int low = 0;
    int high = 0;
    double weight_low = 0.0;
    bool infeasible = false;
};

struct CalibrationResult {
    CalibrationCurve curve;
    LambdaMixture mixture;
    long rollouts_used = 0; // extra environment interactions this baseline needs
};

/// Estimates each policy's mean cost over n_rollouts episodes (initial
/// budget irrelevant: these policies ignore budgets), then picks the
/// adjacent pair whose mean costs flank beta and the weight that makes
/// the interpolated mean cost equal beta. All-feasible degenerates to the
/// best-reward Dirac; none-feasible to the min-cost Dirac with a flag.
/// With conservative_k > 0 the comparison uses mean + k * std instead of
/// the mean.
CalibrationResult calibrate(const std::vector<std::shared_ptr<ScalarQ>>& policies,
                            const std::vector<double>& lambdas, const EnvFactory& make_env,
                            double beta, int n_rollouts, double gamma, std::uint64_t seed,
                            double conservative_k = 0.0);

/// Geometric lambda grid used by the baseline protocol (10 trainings per
/// budgeted training).
std::vector<double> lambda_grid(double lambda_min, double lambda_max, int count);

/// Exploration handle exploiting a reward-greedy scalar policy (the
/// risk-neutral baseline): allocations are uniform, actions maximize the
/// plain reward signal.
class RewardGreedySolver final : public SolverHandle {
public:
    RewardGreedySolver(FtqConfig cfg, BudgetInterval budget_space, std::uint64_t seed)
        : cfg_(std::move(cfg)), budget_space_(budget_space), seed_(seed) {}

    void retrain(const TransitionBatch& all_data) override;
    bool ready() const override { return q_ != nullptr; }
    AugmentedAction greedy(const StateVec& state, double beta, Rng& rng) const override;

private:
    FtqConfig cfg_;
    BudgetInterval budget_space_;
    std::uint64_t seed_;
    std::shared_ptr<ScalarQ> q_;
    long generation_ = 0;
};

} // namespace brl
