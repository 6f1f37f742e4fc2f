#pragma once

#include <string>
#include <vector>

#include "brl/types.hpp"

namespace brl {

/// Persisted collection of experienced transitions; the dataset consumed
/// by the batch learners.
struct TransitionBatch {
    int state_dim = 0;
    std::vector<Transition> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    void push_back(Transition t) { items.push_back(std::move(t)); }

    /// CSV with header s_0..s_{d-1},beta,action,beta_a,reward,cost,
    /// sp_0..sp_{d-1},done. Values round-trip exactly (shortest-exact
    /// formatting).
    void save_csv(const std::string& path) const;
    static TransitionBatch load_csv(const std::string& path);

    /// Length-prefixed little-endian binary; preferred for large batches.
    void save_binary(const std::string& path) const;
    static TransitionBatch load_binary(const std::string& path);
};

} // namespace brl
