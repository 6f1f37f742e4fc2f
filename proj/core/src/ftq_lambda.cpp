#include "brl/ftq_lambda.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

namespace brl {

namespace {

class TabularScalarQ final : public ScalarQ {
public:
    explicit TabularScalarQ(int n_actions) : n_actions_(n_actions) {}

    int n_actions() const override { return n_actions_; }
    std::vector<double> evaluate_all(const StateVec& state) const override {
        const long s = static_cast<long>(state.at(0));
        std::vector<double> out(n_actions_, 0.0);
        for (int a = 0; a < n_actions_; ++a) {
            const auto it = cells_.find(s * n_actions_ + a);
            if (it != cells_.end()) out[a] = it->second.first / it->second.second;
        }
        return out;
    }

    void fit(const std::vector<StateVec>& xs, const std::vector<int>& actions,
             const std::vector<double>& ys) {
        cells_.clear();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            auto& cell = cells_[static_cast<long>(xs[i].at(0)) * n_actions_ + actions[i]];
            cell.first += ys[i];
            cell.second += 1;
        }
    }

private:
    int n_actions_;
    std::map<long, std::pair<double, long>> cells_;
};

class NetScalarQ final : public ScalarQ {
public:
    explicit NetScalarQ(ScalarNetwork net) : net_(std::move(net)) {}
    int n_actions() const override { return net_.n_actions(); }
    std::vector<double> evaluate_all(const StateVec& state) const override {
        return net_.evaluate_all(state);
    }
    ScalarNetwork& net() { return net_; }

private:
    ScalarNetwork net_;
};

} // namespace

FtqResult ftq_train(const TransitionBatch& batch, double lambda, const FtqConfig& cfg, Rng& rng) {
    if (batch.empty()) throw std::invalid_argument("ftq_train: empty batch");
    if (lambda < 0.0) throw std::invalid_argument("ftq_train: lambda must be >= 0");

    int na = cfg.n_actions;
    if (na <= 0) {
        for (const auto& t : batch.items) na = std::max(na, t.aug_action.action + 1);
    }

    const std::size_t n = batch.size();
    std::vector<StateVec> xs(n);
    std::vector<int> actions(n);
    std::vector<double> penalized(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = batch.items[i].aug_state.state;
        actions[i] = batch.items[i].aug_action.action;
        penalized[i] = batch.items[i].reward - lambda * batch.items[i].cost;
    }

    FtqResult result;
    std::shared_ptr<TabularScalarQ> table;
    std::shared_ptr<NetScalarQ> net;
    std::shared_ptr<ScalarQ> current;

    std::vector<double> ys(n);
    for (int it = 0; it < cfg.ftq_epochs; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double cont = 0.0;
            if (current != nullptr && !batch.items[i].terminal) {
                const auto v = current->evaluate_all(batch.items[i].next_aug_state.state);
                cont = *std::max_element(v.begin(), v.end());
            }
            ys[i] = penalized[i] + cfg.gamma * cont;
        }
        if (cfg.regressor_kind == RegressorKind::kTabular) {
            if (table == nullptr) table = std::make_shared<TabularScalarQ>(na);
            table->fit(xs, actions, ys);
            current = table;
            result.fit_loss.push_back(0.0);
        } else {
            if (net == nullptr) {
                net = std::make_shared<NetScalarQ>(
                    ScalarNetwork(batch.state_dim, na, cfg.regressor, rng));
            }
            const auto trace = fit_scalar(net->net(), xs, actions, ys, rng);
            result.fit_loss.push_back(trace.empty() ? 0.0 : trace.back());
            current = net;
        }
    }
    result.q = current;
    return result;
}

void CalibrationCurve::write_csv(std::ostream& os) const {
    os << "lambda,mean_cost,cost_std,mean_reward\n";
    for (const auto& e : entries) {
        os << e.lambda << ',' << e.mean_cost << ',' << e.cost_std << ',' << e.mean_reward << '\n';
    }
}

CalibrationResult calibrate(const std::vector<std::shared_ptr<ScalarQ>>& policies,
                            const std::vector<double>& lambdas, const EnvFactory& make_env,
                            double beta, int n_rollouts, double gamma, std::uint64_t seed,
                            double conservative_k) {
    if (policies.size() < 2 || policies.size() != lambdas.size()) {
        throw std::invalid_argument("calibrate: need >= 2 trained lambda policies");
    }
    if (n_rollouts <= 0) throw std::domain_error("calibrate: n_rollouts must be positive");

    CalibrationResult result;
    std::vector<int> policy_of_entry(policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
        double sum_r = 0.0, sum_c = 0.0, sum_c2 = 0.0;
        for (int rollout = 0; rollout < n_rollouts; ++rollout) {
            Rng rng(Rng::derive(seed, p * 1000003ull + rollout));
            auto env = make_env();
            StateVec s = env->reset(rng);
            double gr = 0.0, gc = 0.0, disc = 1.0;
            while (true) {
                const int a = policies[p]->greedy_action(s);
                const EnvStep st = env->step(a, rng);
                gr += disc * st.reward;
                gc += disc * st.cost;
                disc *= gamma;
                s = st.next_state;
                if (st.done) break;
            }
            sum_r += gr;
            sum_c += gc;
            sum_c2 += gc * gc;
        }
        CalibrationEntry e;
        e.lambda = lambdas[p];
        e.mean_reward = sum_r / n_rollouts;
        e.mean_cost = sum_c / n_rollouts;
        const double var = std::max(sum_c2 / n_rollouts - e.mean_cost * e.mean_cost, 0.0);
        e.cost_std = std::sqrt(var);
        result.curve.entries.push_back(e);
        result.rollouts_used += n_rollouts;
    }
    // Sort by lambda, remembering which policy each entry came from.
    std::vector<std::size_t> order(policies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.curve.entries[a].lambda < result.curve.entries[b].lambda;
    });
    std::vector<CalibrationEntry> sorted;
    sorted.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.push_back(result.curve.entries[order[i]]);
        policy_of_entry[i] = static_cast<int>(order[i]);
    }
    result.curve.entries = std::move(sorted);

    const auto& es = result.curve.entries;
    auto effective_cost = [&](const CalibrationEntry& e) {
        return e.mean_cost + conservative_k * e.cost_std;
    };

    // Feasible = meets the budget on average.
    int best_feasible = -1;
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (effective_cost(es[i]) <= beta) {
            if (best_feasible < 0 || es[i].mean_reward > es[best_feasible].mean_reward) {
                best_feasible = static_cast<int>(i);
            }
        }
    }
    LambdaMixture mix;
    if (best_feasible < 0) {
        // No feasible policy: safest Dirac, flagged.
        int lowest = 0;
        for (std::size_t i = 1; i < es.size(); ++i) {
            if (effective_cost(es[i]) < effective_cost(es[lowest])) lowest = static_cast<int>(i);
        }
        mix.low = mix.high = lowest;
        mix.weight_low = 0.0;
        mix.infeasible = true;
    } else {
        bool all_feasible = true;
        for (const auto& e : es) all_feasible = all_feasible && effective_cost(e) <= beta;
        if (all_feasible) {
            mix.low = mix.high = best_feasible;
            mix.weight_low = 0.0;
        } else {
            // Adjacent pair flanking the budget: the violating lower-lambda
            // policy and the feasible higher-lambda one.
            int low = -1, high = -1;
            for (std::size_t i = 0; i + 1 < es.size(); ++i) {
                if (effective_cost(es[i]) > beta && effective_cost(es[i + 1]) <= beta) {
                    low = static_cast<int>(i);
                    high = static_cast<int>(i + 1);
                    break;
                }
            }
            if (low < 0) {
                mix.low = mix.high = best_feasible;
                mix.weight_low = 0.0;
            } else {
                const double c_low = effective_cost(es[low]);
                const double c_high = effective_cost(es[high]);
                mix.low = low;
                mix.high = high;
                mix.weight_low = (beta - c_high) / (c_low - c_high);
            }
        }
    }
    // Entries were sorted by lambda; translate back to policy indices.
    mix.low = policy_of_entry[mix.low];
    mix.high = policy_of_entry[mix.high];
    result.mixture = mix;
    return result;
}

std::vector<double> lambda_grid(double lambda_min, double lambda_max, int count) {
    if (count < 2 || !(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
        throw std::invalid_argument("lambda_grid: need count >= 2 and 0 < lambda_min < lambda_max");
    }
    std::vector<double> out(count);
    const double ratio = std::log(lambda_max / lambda_min) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = lambda_min * std::exp(ratio * i);
    return out;
}

void RewardGreedySolver::retrain(const TransitionBatch& all_data) {
    Rng rng(Rng::derive(seed_, 0x72657472ull + generation_));
    ++generation_;
    q_ = ftq_train(all_data, 0.0, cfg_, rng).q;
}

AugmentedAction RewardGreedySolver::greedy(const StateVec& state, double, Rng& rng) const {
    const int a = q_->greedy_action(state);
    return {a, rng.uniform(0.0, budget_space_.hi)};
}

} // namespace brl
