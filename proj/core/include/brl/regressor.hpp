#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "brl/bi_q.hpp"
#include "brl/nn.hpp"
#include "brl/types.hpp"

namespace brl {

/// Hyper-parameters of the Q-function regressor, mirroring the usual
/// experiment-table keys (architecture, regularisation, learning rate,
/// epoch counts, reward normalisation).
struct RegressorSpec {
    std::vector<int> hidden_layers{64, 32};
    /// Budget-encoder widths; empty selects one layer as wide as the state.
    std::vector<int> budget_encoder_layers{};
    std::string activation = "relu";
    std::string init_scheme = "xavier";
    double learning_rate = 1e-3;
    double weight_decay = 0.0;
    int epochs = 500;
    int batch_size = 0; // 0 = full batch
    bool normalize_targets = true;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const;
};

/// Thrown when the fitted loss exceeds 1e6 times its initial value; the
/// per-epoch trace up to the failure is attached.
class FitDivergence : public std::runtime_error {
public:
    FitDivergence(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const { return trace_; }

private:
    std::vector<double> trace_;
};

/// One training sample for the budgeted regressor: the network input plus
/// which action's heads receive gradient.
struct QSample {
    StateVec state;
    double budget_allocation = 0.0;
    int action = 0;
};

/// Feed-forward Q-network with a separate budget encoder: the scalar
/// allocation runs through the encoder, is concatenated with the state
/// and flows through the trunk; the linear head emits 2*|A| values laid
/// out as [Q_r(a_0..a_{A-1}), Q_c(a_0..a_{A-1})]. One forward pass
/// evaluates all actions.
class QNetwork final : public BiQFunction {
public:
    QNetwork(int state_dim, int n_actions, const RegressorSpec& spec, Rng& rng);

    int n_actions() const override { return n_actions_; }
    int state_dim() const { return state_dim_; }

    std::vector<VectorSignal> evaluate_all(const StateVec& state,
                                           double budget_allocation) const override;

    /// Raw network output before target de-normalisation (size 2*|A|).
    std::vector<double> raw_forward(const StateVec& state, double budget_allocation) const;

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// Loss (masked squared error in normalised target space plus the L2
    /// term) and its parameter gradient on a batch. Exposed so tests can
    /// check the analytic gradient against finite differences.
    double loss_and_grad(const std::vector<QSample>& xs, const std::vector<VectorSignal>& ys,
                         std::vector<double>* grad) const;

    /// Sets the target-standardisation statistics used by evaluate_all.
    void set_normalization(double mu_r, double sd_r, double mu_c, double sd_c);
    void clear_normalization();

    void save(const std::string& path) const;
    static QNetwork load(const std::string& path);

    const RegressorSpec& spec() const { return spec_; }

private:
    QNetwork() = default;

    int state_dim_ = 0;
    int n_actions_ = 0;
    int n_encoder_layers_ = 0;
    std::vector<nn::LayerSpec> layers_; // encoder chain, then trunk chain, then linear head
    std::vector<std::size_t> w_off_, b_off_;
    std::vector<double> params_;
    RegressorSpec spec_;

    double mu_r_ = 0.0, sd_r_ = 1.0, mu_c_ = 0.0, sd_c_ = 1.0;

    void build_layout();
    void forward_internal(const StateVec& state, double alloc,
                          std::vector<std::vector<double>>& acts) const;
};

/// Trains the network in place by full-batch (or mini-batch) adaptive
/// moment descent on the masked squared error; targets are standardised
/// per channel when the spec asks for it. Returns the per-epoch loss
/// trace. Throws FitDivergence when the loss explodes.
std::vector<double> fit(QNetwork& net, const std::vector<QSample>& xs,
                        const std::vector<VectorSignal>& ys, Rng& rng);

/// Exact lookup regressor on the finite (state, action, allocation-grid)
/// lattice: stores the mean target per key, predicts (0, 0) off-support.
class TabularRegressor final : public BiQFunction {
public:
    TabularRegressor(int n_actions, const BudgetGrid& grid) : n_actions_(n_actions), grid_(grid) {}

    int n_actions() const override { return n_actions_; }
    std::vector<VectorSignal> evaluate_all(const StateVec& state,
                                           double budget_allocation) const override;

    void fit(const std::vector<QSample>& xs, const std::vector<VectorSignal>& ys);

private:
    struct Cell {
        VectorSignal sum;
        long count = 0;
    };
    std::int64_t key(int state, int action, int alloc_index) const;

    int n_actions_;
    BudgetGrid grid_;
    std::map<std::int64_t, Cell> cells_;
};

/// Scalar-reward sibling of QNetwork used by the Lagrangian baseline:
/// state in, |A| action values out, no budget input.
class ScalarNetwork {
public:
    ScalarNetwork(int state_dim, int n_actions, const RegressorSpec& spec, Rng& rng);

    int n_actions() const { return n_actions_; }
    std::vector<double> evaluate_all(const StateVec& state) const;

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    double loss_and_grad(const std::vector<StateVec>& xs, const std::vector<int>& actions,
                         const std::vector<double>& ys, std::vector<double>* grad) const;

    void set_normalization(double mu, double sd);

    void save(const std::string& path) const;
    static ScalarNetwork load(const std::string& path);

    const RegressorSpec& spec() const { return spec_; }

private:
    ScalarNetwork() = default;

    int state_dim_ = 0;
    int n_actions_ = 0;
    std::vector<nn::LayerSpec> layers_;
    std::vector<std::size_t> w_off_, b_off_;
    std::vector<double> params_;
    RegressorSpec spec_;
    double mu_ = 0.0, sd_ = 1.0;
};

std::vector<double> fit_scalar(ScalarNetwork& net, const std::vector<StateVec>& xs,
                               const std::vector<int>& actions, const std::vector<double>& ys,
                               Rng& rng);

} // namespace brl
