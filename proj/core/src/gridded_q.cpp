#include "brl/gridded_q.hpp"

#include <algorithm>

namespace brl {

GriddedQ GriddedQ::zeros(int n_states, int n_actions, const BudgetGrid& grid) {
    GriddedQ q;
    q.n_states = n_states;
    q.n_actions = n_actions;
    q.grid = grid;
    q.values.assign(static_cast<std::size_t>(n_states) * grid.size() * n_actions * grid.size(),
                    VectorSignal{});
    return q;
}

double sup_norm_diff(const GriddedQ& a, const GriddedQ& b) {
    double m = 0.0;
    const std::size_t n = std::min(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, (a.values[i] - b.values[i]).abs_max());
    return m;
}

} // namespace brl
