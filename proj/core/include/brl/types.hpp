#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "brl/rng.hpp"

namespace brl {

/// Environment state as a real vector. Finite-MDP states are encoded as a
/// single-entry vector holding the state index.
using StateVec = std::vector<double>;

/// Joint (reward, cost) signal: one sample of the two-component return.
struct VectorSignal {
    double reward = 0.0;
    double cost = 0.0;

    VectorSignal operator+(const VectorSignal& o) const { return {reward + o.reward, cost + o.cost}; }
    VectorSignal operator-(const VectorSignal& o) const { return {reward - o.reward, cost - o.cost}; }
    VectorSignal operator*(double k) const { return {reward * k, cost * k}; }
    VectorSignal& operator+=(const VectorSignal& o) {
        reward += o.reward;
        cost += o.cost;
        return *this;
    }
    /// max(|reward|, |cost|) — the norm used for all sup-norm computations.
    double abs_max() const { return std::max(std::abs(reward), std::abs(cost)); }
};

/// Closed interval of admissible budgets.
struct BudgetInterval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double b) const { return b >= lo && b <= hi; }
    double clamp(double b) const { return b < lo ? lo : (b > hi ? hi : b); }
    double width() const { return hi - lo; }
};

/// (state, remaining budget).
struct AugmentedState {
    StateVec state;
    double budget = 0.0;
};

/// (action index, budget allocated to the rest of the trajectory).
struct AugmentedAction {
    int action = 0;
    double budget_allocation = 0.0;

    bool operator==(const AugmentedAction& o) const {
        return action == o.action && budget_allocation == o.budget_allocation;
    }
};

/// Two-support randomized policy over augmented actions; `weight` is the
/// probability of `second`. weight in {0, 1} degenerates to a Dirac.
struct MixturePolicy {
    AugmentedAction first;
    AugmentedAction second;
    double weight = 0.0;

    static MixturePolicy dirac(const AugmentedAction& a) { return {a, a, 0.0}; }
    bool is_dirac() const { return weight <= 0.0 || weight >= 1.0 || first == second; }
    const AugmentedAction& sample(Rng& rng) const { return rng.uniform01() < weight ? second : first; }
};

/// One experienced interaction. The budget dynamics are deterministic:
/// next_aug_state.budget must equal aug_action.budget_allocation bit-exactly.
struct Transition {
    AugmentedState aug_state;
    AugmentedAction aug_action;
    double reward = 0.0;
    double cost = 0.0;
    AugmentedState next_aug_state;
    bool terminal = false;
};

/// Uniform discretisation of a budget interval, e.g. 0:0.01:1.
class BudgetGrid {
public:
    BudgetGrid() : BudgetGrid(0.0, 1.0, 0.01) {}
    BudgetGrid(double lo, double hi, double step);

    /// Parses the "lo:step:hi" notation, e.g. "0:0.01:1".
    static BudgetGrid parse(const std::string& text);

    int size() const { return n_; }
    double lo() const { return lo_; }
    double hi() const { return value(n_ - 1); }
    double step() const { return step_; }
    double value(int i) const { return lo_ + step_ * i; }

    /// Index of the grid point nearest to b (b clamped to the interval).
    /// If off_grid is non-null it is set when b was not already a grid
    /// value (within 1e-9 of the span).
    int snap_index(double b, bool* off_grid = nullptr) const;
    double snap(double b) const { return value(snap_index(b)); }

    std::vector<double> values() const;

    bool operator==(const BudgetGrid& o) const {
        return lo_ == o.lo_ && step_ == o.step_ && n_ == o.n_;
    }

private:
    double lo_;
    double step_;
    int n_;
};

/// sup over t of max(|r_t|, |c_t|).
double sup_norm(const std::vector<VectorSignal>& a);
double sup_norm_diff(const std::vector<VectorSignal>& a, const std::vector<VectorSignal>& b);

/// G = sum_t gamma^t (r_t, c_t), summed in time order. Empty input -> (0, 0).
VectorSignal discounted_return(const std::vector<VectorSignal>& trajectory, double gamma);

} // namespace brl
