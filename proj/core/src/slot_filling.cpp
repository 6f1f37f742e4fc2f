#include "brl/envs/slot_filling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace brl {

SlotFillingConfig SlotFillingConfig::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open slot-filling config: " + path);
    nlohmann::json j;
    in >> j;
    SlotFillingConfig c;
    c.n_slots = j.at("n_slots").get<int>();
    c.ser = j.at("ser").get<double>();
    c.mu_understand = j.at("mu_understand").get<double>();
    c.mu_misunderstand = j.at("mu_misunderstand").get<double>();
    c.sigma = j.at("sigma").get<double>();
    c.hangup_prob = j.at("hangup_prob").get<double>();
    c.horizon = j.at("horizon").get<int>();
    return c;
}

void SlotFillingConfig::save_json(const std::string& path) const {
    nlohmann::json j;
    j["n_slots"] = n_slots;
    j["ser"] = ser;
    j["mu_understand"] = mu_understand;
    j["mu_misunderstand"] = mu_misunderstand;
    j["sigma"] = sigma;
    j["hangup_prob"] = hangup_prob;
    j["horizon"] = horizon;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

SlotFillingEnv::SlotFillingEnv(SlotFillingConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.n_slots <= 0) throw std::invalid_argument("slot_filling: n_slots must be positive");
    if (cfg_.ser < 0.0 || cfg_.ser > 1.0 || cfg_.hangup_prob < 0.0 || cfg_.hangup_prob > 1.0) {
        throw std::invalid_argument("slot_filling: probabilities must lie in [0, 1]");
    }
}

int SlotFillingEnv::state_dim() const {
    // srs + argmin one-hot + last user act + last system act + t/H.
    return cfg_.n_slots + cfg_.n_slots + kNumUserActs + n_actions() + 1;
}

StateVec SlotFillingEnv::observe() const {
    StateVec s;
    s.reserve(state_dim());
    for (double v : srs_) s.push_back(v);

    int argmin = 0;
    for (int i = 1; i < cfg_.n_slots; ++i) {
        if (srs_[i] < srs_[argmin]) argmin = i;
    }
    for (int i = 0; i < cfg_.n_slots; ++i) s.push_back(i == argmin ? 1.0 : 0.0);
    for (int i = 0; i < kNumUserActs; ++i) s.push_back(i == last_user_ ? 1.0 : 0.0);
    for (int i = 0; i < n_actions(); ++i) s.push_back(i == last_system_ ? 1.0 : 0.0);
    s.push_back(static_cast<double>(t_) / cfg_.horizon);
    return s;
}

StateVec SlotFillingEnv::reset(Rng&) {
    srs_.assign(cfg_.n_slots, 0.0); // unasked slots have no recognition score
    valid_.assign(cfg_.n_slots, false);
    last_user_ = kNone;
    last_system_ = -1;
    t_ = 0;
    done_ = false;
    return observe();
}

EnvStep SlotFillingEnv::step(int action, Rng& rng) {
    if (done_) throw std::logic_error("slot_filling: step() after episode end");
    if (action < 0 || action >= n_actions()) throw std::domain_error("slot_filling: bad action index");

    EnvStep out;
    last_system_ = action;

    if (action < cfg_.n_slots) {
        // ask_oral(i): understood with probability 1 - ser.
        const int slot = action;
        const bool understood = !rng.bernoulli(cfg_.ser);
        valid_[slot] = understood;
        const double mu = understood ? cfg_.mu_understand : cfg_.mu_misunderstand;
        const double x = rng.normal(mu, cfg_.sigma);
        srs_[slot] = 1.0 / (1.0 + std::exp(-x));
        last_user_ = kInform;
    } else if (action < 2 * cfg_.n_slots) {
        // ask_num_pad(i): no recognition errors, but hang-up risk.
        const int slot = action - cfg_.n_slots;
        if (rng.bernoulli(cfg_.hangup_prob)) {
            last_user_ = kHangup;
            out.cost = 1.0;
            out.done = true;
        } else {
            valid_[slot] = true;
            srs_[slot] = 1.0;
            last_user_ = kInform;
        }
    } else {
        // summarize_and_inform: success only when every slot is correct.
        const bool all_valid = std::all_of(valid_.begin(), valid_.end(), [](bool v) { return v; });
        if (all_valid) {
            out.reward = 1.0;
            out.done = true;
            last_user_ = kInform;
        } else {
            last_user_ = kDenySummarize;
        }
    }

    ++t_;
    if (!out.done && t_ >= cfg_.horizon) out.done = true; // dialogue failure
    done_ = out.done;
    out.next_state = observe();
    return out;
}

} // namespace brl
