#pragma once

#include "brl/bmdp.hpp"
#include "brl/env.hpp"

namespace brl {

/// Deterministically generated chain fixture: every state has a safe
/// action (zero cost, small reward, steps toward state 0) and a risky one
/// (larger reward, cost in [0.5, 1], steps toward the last state).
/// Transitions are one-hot, so the fixture doubles as an exact oracle
/// instance for the sampled operators. gamma = 0.9, budgets in [0, 1].
BudgetedMdp finite_chain_bmdp(int n_states, std::uint64_t seed);

/// Environment wrapper around a finite BMDP; states are index-encoded
/// single-entry vectors and episodes are truncated at `horizon` steps.
class BmdpEnv final : public Environment {
public:
    BmdpEnv(BudgetedMdp mdp, int horizon, int initial_state = 0);

    StateVec reset(Rng& rng) override;
    EnvStep step(int action, Rng& rng) override;

    int n_actions() const override { return mdp_.n_actions; }
    int state_dim() const override { return 1; }
    int horizon() const override { return horizon_; }
    std::string name() const override { return "finite_chain"; }

    const BudgetedMdp& mdp() const { return mdp_; }

private:
    BudgetedMdp mdp_;
    int horizon_;
    int initial_state_;
    int state_ = 0;
    int t_ = 0;
    bool done_ = true;
};

} // namespace brl
