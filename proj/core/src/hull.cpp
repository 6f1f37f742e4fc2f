#include "brl/hull.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace brl {

namespace {

double bbox_scale(const std::vector<QPoint>& pts) {
    double m = 1.0;
    for (const auto& p : pts) m = std::max({m, std::abs(p.q_cost), std::abs(p.q_reward)});
    return m;
}

double cross(const QPoint& o, const QPoint& a, const QPoint& b) {
    return (a.q_cost - o.q_cost) * (b.q_reward - o.q_reward) -
           (a.q_reward - o.q_reward) * (b.q_cost - o.q_cost);
}

bool point_order(const QPoint& a, const QPoint& b) {
    if (a.q_cost != b.q_cost) return a.q_cost < b.q_cost;
    if (a.q_reward != b.q_reward) return a.q_reward > b.q_reward;
    if (a.origin.action != b.origin.action) return a.origin.action < b.origin.action;
    return a.origin.budget_allocation < b.origin.budget_allocation;
}

} // namespace

std::vector<QPoint> HullFrontier::support() const {
    std::vector<QPoint> s = vertices;
    s.insert(s.end(), collinear.begin(), collinear.end());
    std::sort(s.begin(), s.end(), point_order);
    return s;
}

double HullFrontier::reward_at(double cost) const {
    if (cost <= vertices.front().q_cost) return vertices.front().q_reward;
    if (cost >= vertices.back().q_cost) return vertices.back().q_reward;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[i + 1];
        if (cost <= b.q_cost) {
            const double t = (cost - a.q_cost) / (b.q_cost - a.q_cost);
            return a.q_reward + t * (b.q_reward - a.q_reward);
        }
    }
    return vertices.back().q_reward;
}

std::vector<QPoint> prune_dominated(const std::vector<QPoint>& points) {
    if (points.empty()) throw std::domain_error("prune_dominated: empty candidate set");
    const double tol = 1e-12 * bbox_scale(points);

    double max_reward = points.front().q_reward;
    for (const auto& p : points) max_reward = std::max(max_reward, p.q_reward);

    // Cheapest cost among the maximum-reward points.
    double pivot_cost = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (p.q_reward >= max_reward - tol) pivot_cost = std::min(pivot_cost, p.q_cost);
    }

    std::vector<QPoint> kept;
    kept.reserve(points.size());
    for (const auto& p : points) {
        if (p.q_cost <= pivot_cost + tol) kept.push_back(p);
    }
    return kept;
}

HullFrontier top_frontier(const std::vector<QPoint>& pruned) {
    if (pruned.empty()) throw std::domain_error("top_frontier: empty input");
    const double scale = bbox_scale(pruned);
    const double area_tol = 1e-12 * scale * scale;
    const double cost_tol = 1e-12 * scale;

    std::vector<QPoint> pts = pruned;
    std::sort(pts.begin(), pts.end(), point_order);

    // Cost ties keep only the max-reward point (the first of each group).
    std::vector<QPoint> uniq;
    uniq.reserve(pts.size());
    for (const auto& p : pts) {
        if (!uniq.empty() && std::abs(p.q_cost - uniq.back().q_cost) <= cost_tol) continue;
        uniq.push_back(p);
    }

    HullFrontier f;
    if (uniq.size() == 1) {
        f.vertices = uniq;
        return f;
    }

    // Monotone chain, upper hull only; collinear points are popped.
    std::vector<QPoint> hull;
    hull.reserve(uniq.size());
    for (const auto& p : uniq) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull[hull.size() - 1], p) >= -area_tol) {
            hull.pop_back();
        }
        hull.push_back(p);
    }
    f.vertices = std::move(hull);

    // Deduplicated points that sit on the frontier without being vertices.
    for (const auto& p : uniq) {
        bool vertex = false;
        for (const auto& v : f.vertices) {
            if (v.q_cost == p.q_cost && v.q_reward == p.q_reward) {
                vertex = true;
                break;
            }
        }
        if (!vertex && std::abs(p.q_reward - f.reward_at(p.q_cost)) <= 1e-9 * scale) {
            f.collinear.push_back(p);
        }
    }
    return f;
}

HullPolicy hull_policy_from_points(const std::vector<QPoint>& candidates, double beta) {
    const auto kept = prune_dominated(candidates);
    const HullFrontier frontier = top_frontier(kept);

    HullPolicy out;
    if (beta >= frontier.max_cost()) {
        const QPoint& top = frontier.top();
        out.mixture = MixturePolicy::dirac(top.origin);
        out.expected = {top.q_reward, top.q_cost};
        return out;
    }
    if (beta < frontier.min_cost()) {
        // Budget below the cheapest achievable cost: fall back to the
        // safest Dirac and flag, so callers keep running on optimistic
        // learned Q values.
        const QPoint& low = frontier.vertices.front();
        out.mixture = MixturePolicy::dirac(low.origin);
        out.expected = {low.q_reward, low.q_cost};
        out.infeasible = true;
        return out;
    }

    const auto support = frontier.support();
    for (std::size_t i = 0; i + 1 < support.size(); ++i) {
        const QPoint& a = support[i];
        const QPoint& b = support[i + 1];
        if (a.q_cost <= beta && beta < b.q_cost) {
            const double p = (beta - a.q_cost) / (b.q_cost - a.q_cost);
            out.mixture = MixturePolicy{a.origin, b.origin, p};
            out.expected = {a.q_reward + p * (b.q_reward - a.q_reward),
                            a.q_cost + p * (b.q_cost - a.q_cost)};
            return out;
        }
    }
    // beta == max_cost handled above; reaching here means beta sits on the
    // last support point exactly.
    const QPoint& top = frontier.top();
    out.mixture = MixturePolicy::dirac(top.origin);
    out.expected = {top.q_reward, top.q_cost};
    return out;
}

std::vector<QPoint> collect_candidates(const BiQFunction& q, const StateVec& state,
                                       const BudgetGrid& grid) {
    std::vector<QPoint> pts;
    pts.reserve(static_cast<std::size_t>(grid.size()) * q.n_actions());
    for (int k = 0; k < grid.size(); ++k) {
        const double alloc = grid.value(k);
        const auto vals = q.evaluate_all(state, alloc);
        for (int a = 0; a < static_cast<int>(vals.size()); ++a) {
            pts.push_back(QPoint{vals[a].cost, vals[a].reward, AugmentedAction{a, alloc}});
        }
    }
    return pts;
}

HullPolicy pi_hull(const AugmentedState& s, const BiQFunction& q,
                   std::span<const AugmentedAction> actions) {
    if (actions.empty()) throw std::domain_error("pi_hull: empty action set");
    std::vector<QPoint> pts;
    pts.reserve(actions.size());
    for (const auto& a : actions) {
        const VectorSignal v = q.evaluate(s, a);
        pts.push_back(QPoint{v.cost, v.reward, a});
    }
    return hull_policy_from_points(pts, s.budget);
}

void write_frontier_csv(std::ostream& os, const HullFrontier& frontier) {
    os << "q_cost,q_reward,action,budget_allocation,vertex\n";
    for (const auto& v : frontier.vertices) {
        os << v.q_cost << ',' << v.q_reward << ',' << v.origin.action << ','
           << v.origin.budget_allocation << ",1\n";
    }
    for (const auto& v : frontier.collinear) {
        os << v.q_cost << ',' << v.q_reward << ',' << v.origin.action << ','
           << v.origin.budget_allocation << ",0\n";
    }
}

} // namespace brl
