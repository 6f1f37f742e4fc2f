#pragma once

#include <string>

#include "brl/env.hpp"

namespace brl {

/// Slot-filling dialogue simulation. The system fills n_slots form slots by
/// asking the user orally (subject to recognition errors with probability
/// ser; the recognition score is srs = 1/(1+exp(-x)), x ~ N(mu, sigma)) or
/// via the numeric pad (always correct, srs = 1, but the user hangs up
/// with probability hangup_prob, which terminates the dialogue with cost
/// 1). Summarizing ends the dialogue with reward 1 if every slot is
/// correct; on a wrong summary the user denies and the dialogue continues
/// until the horizon, which is a failure.
struct SlotFillingConfig {
    int n_slots = 3;
    double ser = 0.6;
    double mu_understand = 0.25;
    double mu_misunderstand = -0.25;
    double sigma = 0.6;
    double hangup_prob = 0.25;
    int horizon = 10;

    static SlotFillingConfig load_json(const std::string& path);
    void save_json(const std::string& path) const;
};

/// Actions: ask_oral(i) for i < n_slots, then ask_num_pad(i), then
/// summarize_and_inform — 2*n_slots + 1 in total.
///
/// Observed state: (srs per slot, one-hot argmin srs, one-hot last user
/// act, one-hot last system act, t/H). Slot validity is hidden.
class SlotFillingEnv final : public Environment {
public:
    explicit SlotFillingEnv(SlotFillingConfig cfg);

    StateVec reset(Rng& rng) override;
    EnvStep step(int action, Rng& rng) override;

    int n_actions() const override { return 2 * cfg_.n_slots + 1; }
    int state_dim() const override;
    int horizon() const override { return cfg_.horizon; }
    std::string name() const override { return "slot_filling"; }

    enum UserAct { kNone = -1, kInform = 0, kDenySummarize = 1, kHangup = 2 };
    static constexpr int kNumUserActs = 3;

    int ask_oral(int slot) const { return slot; }
    int ask_num_pad(int slot) const { return cfg_.n_slots + slot; }
    int summarize_action() const { return 2 * cfg_.n_slots; }

    const SlotFillingConfig& config() const { return cfg_; }

    /// Hidden slot correctness, exposed for tests and transcript dumps.
    const std::vector<bool>& valid_slots() const { return valid_; }

private:
    StateVec observe() const;

    SlotFillingConfig cfg_;
    std::vector<double> srs_;
    std::vector<bool> valid_;
    int last_user_ = kNone;
    int last_system_ = -1;
    int t_ = 0;
    bool done_ = true;
};

} // namespace brl
