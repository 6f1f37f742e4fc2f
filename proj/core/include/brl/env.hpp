#pragma once

#include <functional>
#include <memory>
#include <string>

#include "brl/types.hpp"

namespace brl {

/// Result of one environment step.
struct EnvStep {
    StateVec next_state;
    double reward = 0.0;
    double cost = 0.0;
    bool done = false;
};

/// Episodic simulated environment. Instances are single-threaded; run one
/// instance per worker. All randomness comes through the passed Rng, so a
/// (config, seed) pair reproduces the episode exactly.
class Environment {
public:
    virtual ~Environment() = default;

    virtual StateVec reset(Rng& rng) = 0;
    virtual EnvStep step(int action, Rng& rng) = 0;

    virtual int n_actions() const = 0;
    virtual int state_dim() const = 0;
    /// Hard episode length cap; 0 means none.
    virtual int horizon() const = 0;
    virtual std::string name() const = 0;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

} // namespace brl
