#include "brl/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace brl {

void ExplorationConfig::validate() const {
    if (total_samples <= 0) throw std::invalid_argument("ExplorationConfig: total_samples must be positive");
    if (minibatches <= 0) throw std::invalid_argument("ExplorationConfig: minibatches must be positive");
    if (epsilon_decay < 0.0) throw std::invalid_argument("ExplorationConfig: decay must be >= 0");
    if (epsilon_floor < 0.0 || epsilon_floor > 1.0) {
        throw std::invalid_argument("ExplorationConfig: epsilon_floor must lie in [0, 1]");
    }
    if (workers < 1) throw std::invalid_argument("ExplorationConfig: workers must be >= 1");
}

double sample_initial_budget(Rng& rng, const BudgetInterval& budget_space) {
    return rng.uniform(budget_space.lo, budget_space.hi);
}

AugmentedAction sample_random_budgeted_action(const AugmentedState& s, int n_actions,
                                              const BudgetInterval& budget_space, Rng& rng) {
    const int a = rng.uniform_index(n_actions);
    const double cap = std::min(2.0 * s.budget, budget_space.hi);
    const double beta_a = cap <= 0.0 ? 0.0 : rng.uniform(0.0, cap);
    return {a, beta_a};
}

AugmentedAction sample_random_budgeted_action_simplex(const AugmentedState& s, int n_actions,
                                                      const BudgetGrid& grid,
                                                      const BudgetInterval& budget_space, Rng& rng) {
    const int n_atoms = n_actions * grid.size();
    std::vector<double> w(n_atoms);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        // Dirichlet(1,...,1) via normalized exponentials.
        double total = 0.0;
        for (double& wi : w) {
            wi = -std::log(1.0 - rng.uniform01());
            total += wi;
        }
        double mean_alloc = 0.0;
        for (int i = 0; i < n_atoms; ++i) {
            w[i] /= total;
            mean_alloc += w[i] * grid.value(i % grid.size());
        }
        if (mean_alloc > s.budget) continue;

        double u = rng.uniform01();
        for (int i = 0; i < n_atoms; ++i) {
            u -= w[i];
            if (u < 0.0) {
                return {i / grid.size(), std::min(grid.value(i % grid.size()), budget_space.hi)};
            }
        }
        return {n_actions - 1, std::min(grid.hi(), budget_space.hi)};
    }
    // Rejection starved (tiny budget): degenerate to the cheapest atoms.
    return {rng.uniform_index(n_actions), grid.lo()};
}

void write_exploration_log_csv(std::ostream& os, const std::vector<EpisodeLog>& episodes) {
    os << "episode,steps,epsilon_at_start,beta_0,return_r,return_c\n";
    for (const auto& e : episodes) {
        os << e.episode << ',' << e.steps << ',' << e.epsilon_at_start << ',' << e.beta0 << ','
           << e.return_r << ',' << e.return_c << '\n';
    }
}

namespace {

struct EpisodeResult {
    std::vector<Transition> transitions;
    EpisodeLog log;
};

double epsilon_at(const ExplorationConfig& cfg, long step_count) {
    return std::max(cfg.epsilon_floor, std::exp(-cfg.epsilon_decay * static_cast<double>(step_count)));
}

EpisodeResult run_episode(Environment& env, SolverHandle* solver, const ExplorationConfig& cfg,
                          const BudgetInterval& budget_space, std::uint64_t master_seed,
                          long episode_index, long k0) {
    Rng rng(Rng::derive(master_seed, static_cast<std::uint64_t>(episode_index)));
    EpisodeResult out;
    out.log.episode = episode_index;
    out.log.epsilon_at_start = epsilon_at(cfg, k0);

    StateVec s = env.reset(rng);
    double beta = sample_initial_budget(rng, budget_space);
    out.log.beta0 = beta;

    const bool risk_neutral = cfg.strategy == ExplorationConfig::Strategy::kRiskNeutral;
    for (int t = 0;; ++t) {
        // Epsilon decays per global step; within a minibatch only the
        // episode's own steps advance it, so parallel scheduling cannot
        // change the data.
        const double eps = epsilon_at(cfg, k0 + t);
        const double z = rng.uniform01();

        AugmentedAction a;
        if (z < eps || solver == nullptr || !solver->ready()) {
            const AugmentedState aug{s, beta};
            if (risk_neutral) {
                a = {rng.uniform_index(env.n_actions()), rng.uniform(0.0, budget_space.hi)};
            } else if (cfg.budget_sampler == ExplorationConfig::BudgetSampler::kSimplexDirichlet) {
                a = sample_random_budgeted_action_simplex(aug, env.n_actions(), cfg.simplex_grid,
                                                          budget_space, rng);
            } else {
                a = sample_random_budgeted_action(aug, env.n_actions(), budget_space, rng);
            }
        } else {
            a = solver->greedy(s, beta, rng);
        }

        const EnvStep st = env.step(a.action, rng);
        Transition tr;
        tr.aug_state = {s, beta};
        tr.aug_action = a;
        tr.reward = st.reward;
        tr.cost = st.cost;
        tr.next_aug_state = {st.next_state, a.budget_allocation};
        tr.terminal = st.done;
        out.transitions.push_back(std::move(tr));

        out.log.return_r += st.reward;
        out.log.return_c += st.cost;
        s = st.next_state;
        beta = a.budget_allocation;
        if (st.done) break;
    }
    out.log.steps = static_cast<int>(out.transitions.size());
    return out;
}

} // namespace

CollectResult collect_batch(const EnvFactory& make_env, SolverHandle* solver,
                            const ExplorationConfig& cfg, const BudgetInterval& budget_space,
                            std::uint64_t master_seed) {
    cfg.validate();

    CollectResult result;
    {
        auto probe = make_env();
        result.batch.state_dim = probe->state_dim();
    }

    const long per_minibatch = (cfg.total_samples + cfg.minibatches - 1) / cfg.minibatches;
    long episode_index = 0;
    long global_steps = 0;

    for (int m = 0; m < cfg.minibatches; ++m) {
        const long quota =
            std::min<long>(per_minibatch, cfg.total_samples - static_cast<long>(result.batch.size()));
        if (quota <= 0) break;

        long collected = 0;
        while (collected < quota) {
            // One round of `workers` episodes; results are consumed in
            // episode-index order, so the batch is identical for any
            // worker count (surplus episodes are discarded).
            const int round = cfg.workers;
            std::vector<EpisodeResult> results(round);
            auto worker = [&](int lo, int hi) {
                for (int i = lo; i < hi; ++i) {
                    auto env = make_env();
                    results[i] = run_episode(*env, solver, cfg, budget_space, master_seed,
                                             episode_index + i, global_steps);
                }
            };
            if (round == 1) {
                worker(0, 1);
            } else {
                std::vector<std::thread> pool;
                const int chunk = 1;
                for (int w = 1; w < round; w += chunk) pool.emplace_back(worker, w, std::min(round, w + chunk));
                worker(0, 1);
                for (auto& t : pool) t.join();
            }
            int consumed = 0;
            for (int i = 0; i < round && collected < quota; ++i) {
                auto& ep = results[i];
                collected += ep.log.steps;
                global_steps += ep.log.steps;
                result.episodes.push_back(ep.log);
                for (auto& tr : ep.transitions) result.batch.items.push_back(std::move(tr));
                ++consumed;
            }
            // Surplus episodes of the round are discarded and their
            // indices re-run later, keeping the batch independent of the
            // worker count.
            episode_index += consumed;
        }

        // Last-minibatch truncation to the exact sample count.
        if (static_cast<long>(result.batch.size()) > cfg.total_samples) {
            result.batch.items.resize(cfg.total_samples);
        }
        if (solver != nullptr) {
            solver->retrain(result.batch);
            ++result.retrain_calls;
        }
    }
    return result;
}

} // namespace brl
