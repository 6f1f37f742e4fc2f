#include "brl/envs/corridors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace brl {

CorridorsConfig CorridorsConfig::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corridors config: " + path);
    nlohmann::json j;
    in >> j;
    CorridorsConfig c;
    c.width = j.at("width").get<int>();
    c.height = j.at("height").get<int>();
    const auto& noise = j.at("noise_std");
    c.noise_std_x = noise.at(0).get<double>();
    c.noise_std_y = noise.at(1).get<double>();
    c.horizon = j.at("horizon").get<int>();
    c.layout = j.at("layout").get<std::vector<std::string>>();
    c.reward_risky_per_depth = j.at("reward_risky_per_depth").get<double>();
    c.reward_safe_per_depth = j.at("reward_safe_per_depth").get<double>();
    c.cost_risky_terminal = j.at("cost_risky_terminal").get<double>();
    return c;
}

void CorridorsConfig::save_json(const std::string& path) const {
    nlohmann::json j;
    j["width"] = width;
    j["height"] = height;
    j["noise_std"] = {noise_std_x, noise_std_y};
    j["horizon"] = horizon;
    j["layout"] = layout;
    j["reward_risky_per_depth"] = reward_risky_per_depth;
    j["reward_safe_per_depth"] = reward_safe_per_depth;
    j["cost_risky_terminal"] = cost_risky_terminal;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

CorridorsEnv::CorridorsEnv(CorridorsConfig cfg) : cfg_(std::move(cfg)) {
    if (static_cast<int>(cfg_.layout.size()) != cfg_.height) {
        throw std::invalid_argument("corridors: layout row count != height");
    }
    for (const auto& row : cfg_.layout) {
        if (static_cast<int>(row.size()) != cfg_.width) {
            throw std::invalid_argument("corridors: layout row width != width");
        }
    }
}

CorridorsEnv::CellType CorridorsEnv::cell(int col, int row) const {
    // Layout rows are listed top to bottom; row 0 is the bottom.
    const char ch = cfg_.layout[cfg_.height - 1 - row][col];
    switch (ch) {
        case '#': return kWall;
        case 'r': return kRisky;
        case 'R': return kRiskyTerminal;
        case 's': return kSafe;
        case 'S': return kSafeTerminal;
        default: return kOpen;
    }
}

CorridorsEnv::CellType CorridorsEnv::cell_at(double x, double y) const {
    const int col = std::clamp(static_cast<int>(x), 0, cfg_.width - 1);
    const int row = std::clamp(static_cast<int>(y), 0, cfg_.height - 1);
    return cell(col, row);
}

VectorSignal CorridorsEnv::cell_signal(double x, double y) const {
    const int col = std::clamp(static_cast<int>(x), 0, cfg_.width - 1);
    const int row = std::clamp(static_cast<int>(y), 0, cfg_.height - 1);
    const int depth = depth_of_row(row);
    switch (cell(col, row)) {
        case kRisky: return {cfg_.reward_risky_per_depth * depth, 0.0};
        case kRiskyTerminal: return {cfg_.reward_risky_per_depth * depth, cfg_.cost_risky_terminal};
        case kSafe: return {cfg_.reward_safe_per_depth * depth, 0.0};
        case kSafeTerminal: return {cfg_.reward_safe_per_depth * depth, 0.0};
        default: return {0.0, 0.0};
    }
}

StateVec CorridorsEnv::reset(Rng&) {
    x_ = 0.0;
    y_ = 0.0;
    bool found = false;
    for (int row = 0; row < cfg_.height && !found; ++row) {
        for (int col = 0; col < cfg_.width && !found; ++col) {
            if (cfg_.layout[cfg_.height - 1 - row][col] == '@') {
                x_ = col + 0.5;
                y_ = row + 0.5;
                found = true;
            }
        }
    }
    if (!found) throw std::invalid_argument("corridors: layout has no start cell '@'");
    t_ = 0;
    done_ = false;
    return {x_, y_};
}

EnvStep CorridorsEnv::step(int action, Rng& rng) {
    if (done_) throw std::logic_error("corridors: step() after episode end");
    if (action < 0 || action >= 4) throw std::domain_error("corridors: bad action index");

    static constexpr double kDx[4] = {0.0, 0.0, -1.0, 1.0};
    static constexpr double kDy[4] = {1.0, -1.0, 0.0, 0.0};

    double nx = x_ + kDx[action] + rng.normal(0.0, cfg_.noise_std_x);
    double ny = y_ + kDy[action] + rng.normal(0.0, cfg_.noise_std_y);
    nx = std::clamp(nx, 0.0, static_cast<double>(cfg_.width));
    ny = std::clamp(ny, 0.0, static_cast<double>(cfg_.height));

    if (cell_at(nx, ny) == kWall) {
        // Blocked: the move is a no-op.
        nx = x_;
        ny = y_;
    }
    x_ = nx;
    y_ = ny;
    ++t_;

    EnvStep out;
    out.next_state = {x_, y_};
    const VectorSignal sig = cell_signal(x_, y_);
    out.reward = sig.reward;
    out.cost = sig.cost;
    const CellType c = cell_at(x_, y_);
    out.done = (c == kRiskyTerminal || c == kSafeTerminal || t_ >= cfg_.horizon);
    done_ = out.done;
    return out;
}

} // namespace brl
