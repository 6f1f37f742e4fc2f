#include "brl/envs/finite_chain.hpp"

#include <stdexcept>

namespace brl {

BudgetedMdp finite_chain_bmdp(int n_states, std::uint64_t seed) {
    if (n_states < 2) throw std::invalid_argument("finite_chain_bmdp: need at least 2 states");

    Rng rng(Rng::derive(seed, 0x65636861696eull)); // "echain"
    BudgetedMdp m;
    m.n_states = n_states;
    m.n_actions = 2;
    m.gamma = 0.9;
    m.budget_space = {0.0, 1.0};
    const std::size_t sa = static_cast<std::size_t>(n_states) * 2;
    m.transition.assign(sa * n_states, 0.0);
    m.reward.resize(sa);
    m.cost.resize(sa);

    constexpr int kSafe = 0;
    constexpr int kRisky = 1;
    for (int s = 0; s < n_states; ++s) {
        const int back = std::max(s - 1, 0);
        const int fwd = std::min(s + 1, n_states - 1);
        m.transition[(s * 2 + kSafe) * n_states + back] = 1.0;
        m.transition[(s * 2 + kRisky) * n_states + fwd] = 1.0;

        m.reward[s * 2 + kSafe] = 0.1 + 0.2 * rng.uniform01();
        m.cost[s * 2 + kSafe] = 0.0;
        m.reward[s * 2 + kRisky] = 0.6 + 0.4 * rng.uniform01();
        m.cost[s * 2 + kRisky] = 0.5 + 0.5 * rng.uniform01();
    }
    m.validate();
    return m;
}

BmdpEnv::BmdpEnv(BudgetedMdp mdp, int horizon, int initial_state)
    : mdp_(std::move(mdp)), horizon_(horizon), initial_state_(initial_state) {
    mdp_.validate();
    if (initial_state_ < 0 || initial_state_ >= mdp_.n_states) {
        throw std::invalid_argument("BmdpEnv: bad initial state");
    }
}

StateVec BmdpEnv::reset(Rng&) {
    state_ = initial_state_;
    t_ = 0;
    done_ = false;
    return {static_cast<double>(state_)};
}

EnvStep BmdpEnv::step(int action, Rng& rng) {
    if (done_) throw std::logic_error("BmdpEnv: step() after episode end");
    if (action < 0 || action >= mdp_.n_actions) throw std::domain_error("BmdpEnv: bad action index");

    EnvStep out;
    out.reward = mdp_.r(state_, action);
    out.cost = mdp_.c(state_, action);

    const double u = rng.uniform01();
    double acc = 0.0;
    int next = mdp_.n_states - 1;
    for (int s2 = 0; s2 < mdp_.n_states; ++s2) {
        acc += mdp_.p(state_, action, s2);
        if (u < acc) {
            next = s2;
            break;
        }
    }
    state_ = next;
    ++t_;
    out.next_state = {static_cast<double>(state_)};
    out.done = mdp_.is_terminal(state_) || (horizon_ > 0 && t_ >= horizon_);
    done_ = out.done;
    return out;
}

} // namespace brl
