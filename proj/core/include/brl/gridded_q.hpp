#pragma once

#include <memory>
#include <vector>

#include "brl/bi_q.hpp"
#include "brl/types.hpp"

namespace brl {

/// Tabular Q iterate on the augmented grid, indexed
/// (state, budget index, action, allocation index).
struct GriddedQ {
    int n_states = 0;
    int n_actions = 0;
    BudgetGrid grid;
    std::vector<VectorSignal> values;

    static GriddedQ zeros(int n_states, int n_actions, const BudgetGrid& grid);

    std::size_t index(int s, int bi, int a, int bj) const {
        return ((static_cast<std::size_t>(s) * grid.size() + bi) * n_actions + a) * grid.size() + bj;
    }
    VectorSignal& at(int s, int bi, int a, int bj) { return values[index(s, bi, a, bj)]; }
    const VectorSignal& at(int s, int bi, int a, int bj) const { return values[index(s, bi, a, bj)]; }
};

double sup_norm_diff(const GriddedQ& a, const GriddedQ& b);

/// Adapter exposing a GriddedQ as a BiQFunction over index-encoded states.
/// Off-grid budgets snap to the nearest grid point.
class GriddedQFunction final : public BiQFunction {
public:
    explicit GriddedQFunction(GriddedQ q) : q_(std::move(q)) {}

    int n_actions() const override { return q_.n_actions; }

    std::vector<VectorSignal> evaluate_all(const StateVec& state, double alloc) const override {
        const int s = static_cast<int>(state.at(0));
        const int bj = q_.grid.snap_index(alloc);
        std::vector<VectorSignal> out(q_.n_actions);
        // Values are invariant in the state-budget axis; read them at index 0.
        for (int a = 0; a < q_.n_actions; ++a) out[a] = q_.at(s, 0, a, bj);
        return out;
    }

    const GriddedQ& table() const { return q_; }

private:
    GriddedQ q_;
};

} // namespace brl
