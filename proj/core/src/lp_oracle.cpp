#include "brl/lp_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brl {

namespace {

constexpr double kRewardTieTol = 1e-9;

struct Candidate {
    MixturePolicy mixture;
    VectorSignal expected;
};

} // namespace

HullPolicy greedy_policy_lp_oracle_points(const std::vector<QPoint>& candidates, double beta) {
    if (candidates.empty()) throw std::domain_error("greedy_policy_lp_oracle: empty candidate set");

    std::vector<Candidate> feas;
    feas.reserve(candidates.size());
    for (const auto& p : candidates) {
        if (p.q_cost <= beta) {
            feas.push_back({MixturePolicy::dirac(p.origin), {p.q_reward, p.q_cost}});
        }
    }
    // Boundary points where a two-point segment crosses the budget line.
    const std::size_t n = candidates.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const QPoint& a = candidates[i];
            const QPoint& b = candidates[j];
            const bool a_in = a.q_cost <= beta;
            const bool b_in = b.q_cost <= beta;
            if (a_in == b_in) continue;
            const double t = (beta - a.q_cost) / (b.q_cost - a.q_cost);
            if (t < 0.0 || t > 1.0) continue;
            Candidate c;
            c.mixture = MixturePolicy{a.origin, b.origin, t};
            c.expected = {a.q_reward + t * (b.q_reward - a.q_reward), beta};
            feas.push_back(c);
        }
    }

    HullPolicy out;
    if (feas.empty()) {
        // Infeasible budget: report the cheapest deterministic choice.
        const QPoint* low = &candidates.front();
        for (const auto& p : candidates) {
            if (p.q_cost < low->q_cost ||
                (p.q_cost == low->q_cost && p.q_reward > low->q_reward)) {
                low = &p;
            }
        }
        out.mixture = MixturePolicy::dirac(low->origin);
        out.expected = {low->q_reward, low->q_cost};
        out.infeasible = true;
        return out;
    }

    double best_reward = -std::numeric_limits<double>::infinity();
    for (const auto& c : feas) best_reward = std::max(best_reward, c.expected.reward);

    const Candidate* best = nullptr;
    for (const auto& c : feas) {
        if (c.expected.reward < best_reward - kRewardTieTol) continue;
        if (best == nullptr || c.expected.cost < best->expected.cost) best = &c;
    }
    out.mixture = best->mixture;
    out.expected = best->expected;
    return out;
}

HullPolicy greedy_policy_lp_oracle(const AugmentedState& s, const BiQFunction& q,
                                   std::span<const AugmentedAction> actions) {
    std::vector<QPoint> pts;
    pts.reserve(actions.size());
    for (const auto& a : actions) {
        const VectorSignal v = q.evaluate(s, a);
        pts.push_back(QPoint{v.cost, v.reward, a});
    }
    return greedy_policy_lp_oracle_points(pts, s.budget);
}

} // namespace brl
