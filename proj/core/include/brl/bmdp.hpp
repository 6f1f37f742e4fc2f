#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "brl/types.hpp"

namespace brl {

/// Finite tabular budgeted MDP: transition kernel plus separate reward and
/// cost tables and an interval of admissible budgets.
///
/// All tables use (state, action) indexing; the transition table adds a
/// next-state axis. Instances are immutable after validate() and safe to
/// share across threads.
struct BudgetedMdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transition; // [s][a][s'], row-stochastic in s'
    std::vector<double> reward;     // [s][a]
    std::vector<double> cost;       // [s][a]
    double gamma = 0.9;
    BudgetInterval budget_space;
    std::vector<bool> terminal;     // optional; empty = no terminal states

    double p(int s, int a, int s2) const { return transition[(s * n_actions + a) * n_states + s2]; }
    double r(int s, int a) const { return reward[s * n_actions + a]; }
    double c(int s, int a) const { return cost[s * n_actions + a]; }
    bool is_terminal(int s) const { return !terminal.empty() && terminal[s]; }

    /// Checks row-stochasticity (1e-12), finiteness and interval ordering.
    /// Throws std::invalid_argument on violation.
    void validate() const;

    static BudgetedMdp load_json(const std::string& path);
    static BudgetedMdp from_json_text(const std::string& text);
    void save_json(const std::string& path) const;
};

/// One sample of the augmented dynamics: the state component is drawn from
/// P(.|s, a), the budget component is the allocated budget exactly.
AugmentedState augmented_transition_sample(const BudgetedMdp& mdp, const AugmentedState& s,
                                           const AugmentedAction& a, Rng& rng);

} // namespace brl
