#pragma once

#include <span>

#include "brl/hull.hpp"

namespace brl {

/// Exact solver for the nested greedy program, used as an oracle against
/// pi_hull and never on the runtime path. Maximizes expected Q_r subject
/// to expected Q_c <= beta over all action distributions, then among the
/// maximizers (reward ties within 1e-9) minimizes expected Q_c. Since
/// optimal solutions are mixtures of at most two deterministic choices,
/// the program is solved by enumerating all single points and all
/// two-point segment crossings of the budget line.
///
/// Intended for small candidate sets (|A x grid| <= ~100).
HullPolicy greedy_policy_lp_oracle_points(const std::vector<QPoint>& candidates, double beta);

HullPolicy greedy_policy_lp_oracle(const AugmentedState& s, const BiQFunction& q,
                                   std::span<const AugmentedAction> actions);

} // namespace brl
