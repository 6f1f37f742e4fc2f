#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "brl/bi_q.hpp"
#include "brl/types.hpp"

namespace brl {

/// A candidate (Q_c, Q_r) value with the augmented action that produced it.
struct QPoint {
    double q_cost = 0.0;
    double q_reward = 0.0;
    AugmentedAction origin;
};

/// Top frontier of the convex hull of undominated value points in the
/// (Q_c, Q_r) plane: the graph of a concave, non-decreasing function.
///
/// `vertices` are the hull vertices sorted by strictly increasing q_cost;
/// `collinear` records input points that lie on the frontier without being
/// vertices. The flanking search for a budget runs over both (the two
/// nearest frontier points bracketing the budget).
struct HullFrontier {
    std::vector<QPoint> vertices;
    std::vector<QPoint> collinear;

    /// vertices and collinear points merged, sorted by increasing q_cost.
    std::vector<QPoint> support() const;

    double min_cost() const { return vertices.front().q_cost; }
    double max_cost() const { return vertices.back().q_cost; }
    const QPoint& top() const { return vertices.back(); }

    /// Value of the piecewise-linear frontier at the given cost (clamped
    /// to [min_cost, max_cost]).
    double reward_at(double cost) const;
};

/// Greedy budgeted decision at one augmented state: the mixture, its exact
/// expected value, and whether the budget was below the cheapest candidate.
struct HullPolicy {
    MixturePolicy mixture;
    VectorSignal expected;
    bool infeasible = false;
};

/// Removes points whose cost exceeds the cheapest cost among the
/// maximum-reward points. At least one point always survives.
/// Throws std::domain_error on empty input.
std::vector<QPoint> prune_dominated(const std::vector<QPoint>& points);

/// Upper-left chain of the 2-D convex hull of already-pruned points,
/// computed with a monotone chain after sorting by (q_cost, q_reward);
/// cost ties keep only the max-reward point.
HullFrontier top_frontier(const std::vector<QPoint>& pruned);

/// Full greedy computation from raw candidate points: prune, build the
/// frontier, then either return the max-reward Dirac (budget above the
/// frontier), the flanking two-point mixture with
/// p = (beta - q_c^1) / (q_c^2 - q_c^1), or — when beta is below every
/// candidate cost — the cheapest Dirac with the infeasible flag raised.
HullPolicy hull_policy_from_points(const std::vector<QPoint>& candidates, double beta);

/// Candidate enumeration over actions x budget grid used by every caller
/// that derives points from a Q function: allocation-major order, so that
/// exact and sampled operators perform identical arithmetic.
std::vector<QPoint> collect_candidates(const BiQFunction& q, const StateVec& state,
                                       const BudgetGrid& grid);

/// Greedy budgeted policy at an augmented state (the convex-hull form of
/// the nested constrained program).
HullPolicy pi_hull(const AugmentedState& s, const BiQFunction& q,
                   std::span<const AugmentedAction> actions);

/// Debug dump: one row per frontier point (q_cost, q_reward, action,
/// budget_allocation, vertex flag).
void write_frontier_csv(std::ostream& os, const HullFrontier& frontier);

} // namespace brl
