#pragma once

#include <string>
#include <vector>

#include "brl/env.hpp"

namespace brl {

/// Continuous 2-D gridworld with two parallel corridors: a risky one with
/// high per-cell rewards and a unit cost at its outermost cell, and a safe
/// one with lower rewards and no cost. Moves are unit steps perturbed by
/// per-axis Gaussian noise; walls block movement (the move becomes a
/// no-op). In both corridors the outermost cell yields the most reward.
///
/// Layout legend: '#' wall, '.' open, 'r' risky corridor, 'R' risky
/// terminal, 's' safe corridor, 'S' safe terminal, '@' start (open).
/// Rows are listed top to bottom. Corridor cell depth is the row distance
/// from the bottom row.
struct CorridorsConfig {
    int width = 7;
    int height = 6;
    double noise_std_x = 0.25;
    double noise_std_y = 0.25;
    int horizon = 9;
    std::vector<std::string> layout{
        "#R###S#",
        "#r###s#",
        "#r###s#",
        "#r###s#",
        "#r###s#",
        "...@...",
    };
    double reward_risky_per_depth = 0.2;
    double reward_safe_per_depth = 0.1;
    double cost_risky_terminal = 1.0;

    static CorridorsConfig load_json(const std::string& path);
    void save_json(const std::string& path) const;
};

class CorridorsEnv final : public Environment {
public:
    explicit CorridorsEnv(CorridorsConfig cfg);

    StateVec reset(Rng& rng) override;
    EnvStep step(int action, Rng& rng) override;

    int n_actions() const override { return 4; } // up, down, left, right
    int state_dim() const override { return 2; }
    int horizon() const override { return cfg_.horizon; }
    std::string name() const override { return "corridors"; }

    enum CellType { kWall, kOpen, kRisky, kRiskyTerminal, kSafe, kSafeTerminal };
    CellType cell_at(double x, double y) const;
    /// Per-visit signal of the cell at (x, y).
    VectorSignal cell_signal(double x, double y) const;

    const CorridorsConfig& config() const { return cfg_; }

private:
    CorridorsConfig cfg_;
    double x_ = 0.0, y_ = 0.0;
    int t_ = 0;
    bool done_ = true;

    int depth_of_row(int row) const { return row; } // bottom row is depth 0
    CellType cell(int col, int row) const;
};

} // namespace brl
