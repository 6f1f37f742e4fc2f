#include "brl/bftq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace brl {

void BftqConfig::validate() const {
    if (budget_grid.size() < 1) throw std::invalid_argument("BftqConfig: empty budget grid");
    if (ftq_epochs <= 0) throw std::invalid_argument("BftqConfig: ftq_epochs must be positive");
    if (workers < 1) throw std::invalid_argument("BftqConfig: workers must be >= 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("BftqConfig: gamma must lie in [0, 1]");
}

namespace {

void parallel_chunks(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& body) {
    if (workers <= 1 || n <= 1) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, (w + 1) * chunk);
        if (lo < hi) pool.emplace_back(body, lo, hi);
    }
    body(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

} // namespace

ComputeTargetsResult compute_targets(const TransitionBatch& batch, const BiQFunction& q,
                                     const BftqConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("compute_targets: empty batch");
    const std::size_t n = batch.size();
    const int nb = cfg.budget_grid.size();
    const int na = q.n_actions();

    // Stage 1: evaluate Q on every (next state, grid budget, action)
    // triple. One evaluation covers all actions.
    std::vector<VectorSignal> evals(n * static_cast<std::size_t>(nb) * na);
    parallel_chunks(n, cfg.workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (batch.items[i].terminal) continue;
            const StateVec& s2 = batch.items[i].next_aug_state.state;
            for (int k = 0; k < nb; ++k) {
                const auto vals = q.evaluate_all(s2, cfg.budget_grid.value(k));
                std::copy(vals.begin(), vals.end(),
                          evals.begin() + (i * nb + k) * na);
            }
        }
    });

    // Stage 2: per transition, prune + hull + flanking interpolation.
    ComputeTargetsResult out;
    out.targets.resize(n);
    std::atomic<long> infeasible{0};
    std::atomic<long> off_grid{0};
    parallel_chunks(n, cfg.workers, [&](std::size_t lo, std::size_t hi) {
        long local_inf = 0;
        long local_off = 0;
        std::vector<QPoint> pts;
        for (std::size_t i = lo; i < hi; ++i) {
            const Transition& t = batch.items[i];
            const VectorSignal immediate{t.reward, t.cost};
            if (t.terminal) {
                out.targets[i] = immediate;
                continue;
            }
            pts.clear();
            for (int k = 0; k < nb; ++k) {
                const double alloc = cfg.budget_grid.value(k);
                const VectorSignal* row = &evals[(i * nb + k) * na];
                for (int a = 0; a < na; ++a) {
                    pts.push_back(QPoint{row[a].cost, row[a].reward, AugmentedAction{a, alloc}});
                }
            }
            bool off = false;
            const int bj = cfg.budget_grid.snap_index(t.next_aug_state.budget, &off);
            if (off) ++local_off;
            const HullPolicy hp = hull_policy_from_points(pts, cfg.budget_grid.value(bj));
            if (hp.infeasible) ++local_inf;
            VectorSignal y = immediate + hp.expected * cfg.gamma;
            if (cfg.target_clip > 0.0) {
                y.reward = std::clamp(y.reward, -cfg.target_clip, cfg.target_clip);
                y.cost = std::clamp(y.cost, -cfg.target_clip, cfg.target_clip);
            }
            out.targets[i] = y;
        }
        infeasible += local_inf;
        off_grid += local_off;
    });
    out.infeasibility_count = infeasible.load();
    out.off_grid_count = off_grid.load();
    return out;
}

void BftqReport::write_csv(std::ostream& os) const {
    os << "iteration,target_change,fit_loss,infeasibility_count\n";
    for (const auto& r : rows) {
        os << r.iteration << ',' << r.target_change << ',' << r.fit_loss << ','
           << r.infeasibility_count << '\n';
    }
}

BftqResult bftq_train(const TransitionBatch& batch, const BftqConfig& cfg, Rng& rng) {
    cfg.validate();
    if (batch.empty()) throw std::invalid_argument("bftq_train: empty batch");

    int na = cfg.n_actions;
    if (na <= 0) {
        for (const auto& t : batch.items) na = std::max(na, t.aug_action.action + 1);
    }

    std::vector<QSample> xs;
    xs.reserve(batch.size());
    for (const auto& t : batch.items) {
        xs.push_back(QSample{t.aug_state.state, t.aug_action.budget_allocation, t.aug_action.action});
    }

    std::shared_ptr<QNetwork> net;
    std::shared_ptr<TabularRegressor> table;
    std::shared_ptr<BiQFunction> current = std::make_shared<ZeroBiQ>(na);

    BftqResult result;
    std::vector<VectorSignal> prev_targets(batch.size());
    for (int it = 1; it <= cfg.ftq_epochs; ++it) {
        ComputeTargetsResult tg = compute_targets(batch, *current, cfg);

        BftqReport::Row row;
        row.iteration = it;
        row.infeasibility_count = tg.infeasibility_count;
        row.target_change = sup_norm_diff(tg.targets, prev_targets);

        if (cfg.regressor_kind == RegressorKind::kTabular) {
            if (table == nullptr) {
                table = std::make_shared<TabularRegressor>(na, cfg.budget_grid);
            }
            table->fit(xs, tg.targets);
            current = table;
            row.fit_loss = 0.0;
        } else {
            if (net == nullptr || !cfg.warm_start) {
                net = std::make_shared<QNetwork>(static_cast<int>(batch.state_dim), na,
                                                 cfg.regressor, rng);
            }
            try {
                const auto trace = fit(*net, xs, tg.targets, rng);
                row.fit_loss = trace.empty() ? 0.0 : trace.back();
            } catch (const FitDivergence& e) {
                std::ostringstream os;
                os << e.what() << " (outer iteration " << it << ")";
                throw FitDivergence(os.str(), e.trace());
            }
            current = net;
        }

        prev_targets = std::move(tg.targets);
        result.report.rows.push_back(row);
        if (cfg.convergence_tol > 0.0 && it > 1 && row.target_change < cfg.convergence_tol) break;
    }
    result.q = current;
    return result;
}

MixturePolicy BudgetedQPolicy::mixture(const StateVec& state, double beta, bool* infeasible) const {
    const double snapped = grid_.snap(beta);
    const auto pts = collect_candidates(*q_, state, grid_);
    const HullPolicy hp = hull_policy_from_points(pts, snapped);
    if (infeasible != nullptr) *infeasible = hp.infeasible;
    return hp.mixture;
}

AugmentedAction BudgetedQPolicy::act(const StateVec& state, double beta, Rng& rng) const {
    return mixture(state, beta).sample(rng);
}

} // namespace brl
