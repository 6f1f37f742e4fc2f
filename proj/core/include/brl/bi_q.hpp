#pragma once

#include <memory>
#include <vector>

#include "brl/types.hpp"

namespace brl {

/// Two-component action-value function (Q_r, Q_c) over augmented
/// state-actions. Implementations must be deterministic: repeated
/// evaluation on identical inputs returns bit-identical values.
class BiQFunction {
public:
    virtual ~BiQFunction() = default;

    virtual int n_actions() const = 0;

    /// Q values for every action at (state, budget_allocation); size n_actions.
    virtual std::vector<VectorSignal> evaluate_all(const StateVec& state,
                                                   double budget_allocation) const = 0;

    VectorSignal evaluate(const AugmentedState& s, const AugmentedAction& a) const {
        return evaluate_all(s.state, a.budget_allocation).at(a.action);
    }
};

/// The all-zero Q function (the Q_0 of fitted iteration schemes).
class ZeroBiQ final : public BiQFunction {
public:
    explicit ZeroBiQ(int n_actions) : n_actions_(n_actions) {}
    int n_actions() const override { return n_actions_; }
    std::vector<VectorSignal> evaluate_all(const StateVec&, double) const override {
        return std::vector<VectorSignal>(n_actions_);
    }

private:
    int n_actions_;
};

} // namespace brl
