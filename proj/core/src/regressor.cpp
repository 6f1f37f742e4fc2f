#include "brl/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace brl {

namespace {

constexpr std::uint32_t kMagic = 0x42524C51; // "BRLQ"
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kKindBiQ = 1;
constexpr std::uint32_t kKindScalar = 2;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("model file truncated");
    return v;
}

double channel_mean(const std::vector<VectorSignal>& ys, bool cost) {
    double m = 0.0;
    for (const auto& y : ys) m += cost ? y.cost : y.reward;
    return ys.empty() ? 0.0 : m / ys.size();
}

double channel_std(const std::vector<VectorSignal>& ys, bool cost, double mu) {
    double s = 0.0;
    for (const auto& y : ys) {
        const double d = (cost ? y.cost : y.reward) - mu;
        s += d * d;
    }
    const double sd = ys.empty() ? 0.0 : std::sqrt(s / ys.size());
    return std::max(sd, 1e-8);
}

void shuffle_indices(std::vector<int>& idx, Rng& rng) {
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
        const int j = rng.uniform_index(i + 1);
        std::swap(idx[i], idx[j]);
    }
}

} // namespace

void RegressorSpec::validate() const {
    for (int w : hidden_layers) {
        if (w <= 0) throw std::invalid_argument("RegressorSpec: hidden layer width must be positive");
    }
    for (int w : budget_encoder_layers) {
        if (w <= 0) throw std::invalid_argument("RegressorSpec: encoder width must be positive");
    }
    if (!(learning_rate > 0.0)) throw std::invalid_argument("RegressorSpec: learning_rate must be > 0");
    if (epochs <= 0) throw std::invalid_argument("RegressorSpec: epochs must be > 0");
    if (activation != "relu") throw std::invalid_argument("RegressorSpec: unsupported activation " + activation);
    if (init_scheme != "xavier") throw std::invalid_argument("RegressorSpec: unsupported init " + init_scheme);
}

QNetwork::QNetwork(int state_dim, int n_actions, const RegressorSpec& spec, Rng& rng)
    : state_dim_(state_dim), n_actions_(n_actions), spec_(spec) {
    spec_.validate();
    if (state_dim <= 0 || n_actions <= 0) {
        throw std::invalid_argument("QNetwork: state_dim and n_actions must be positive");
    }

    std::vector<int> enc = spec_.budget_encoder_layers;
    if (enc.empty()) enc = {state_dim}; // default: one layer as wide as the state
    int prev = 1;
    for (int w : enc) {
        layers_.push_back({prev, w, true});
        prev = w;
    }
    n_encoder_layers_ = static_cast<int>(layers_.size());

    int trunk_in = state_dim + prev;
    for (int w : spec_.hidden_layers) {
        layers_.push_back({trunk_in, w, true});
        trunk_in = w;
    }
    layers_.push_back({trunk_in, 2 * n_actions, false});

    build_layout();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        nn::xavier_init(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], rng);
    }
}

void QNetwork::build_layout() {
    std::size_t off = 0;
    w_off_.clear();
    b_off_.clear();
    for (const auto& l : layers_) {
        w_off_.push_back(off);
        off += static_cast<std::size_t>(l.in) * l.out;
        b_off_.push_back(off);
        off += l.out;
    }
    params_.assign(off, 0.0);
}

void QNetwork::forward_internal(const StateVec& state, double alloc,
                                std::vector<std::vector<double>>& acts) const {
    const int n_enc = n_encoder_layers_;
    const int n_layers = static_cast<int>(layers_.size());
    // Slot n_enc holds the concatenated trunk input; encoder outputs come
    // before it, trunk/head outputs after.
    acts.assign(n_layers + 1, {});

    const double beta_in[1] = {alloc};
    const double* x = beta_in;
    for (int l = 0; l < n_enc; ++l) {
        acts[l].resize(layers_[l].out);
        nn::affine_forward(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], x,
                           acts[l].data());
        x = acts[l].data();
    }

    auto& concat = acts[n_enc];
    concat.reserve(state.size() + (n_enc > 0 ? layers_[n_enc - 1].out : 1));
    concat.assign(state.begin(), state.end());
    if (n_enc > 0) {
        concat.insert(concat.end(), acts[n_enc - 1].begin(), acts[n_enc - 1].end());
    } else {
        concat.push_back(alloc);
    }

    const double* tx = concat.data();
    for (int l = n_enc; l < n_layers; ++l) {
        auto& out = acts[l + 1];
        out.resize(layers_[l].out);
        nn::affine_forward(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], tx,
                           out.data());
        tx = out.data();
    }
}

std::vector<double> QNetwork::raw_forward(const StateVec& state, double budget_allocation) const {
    if (static_cast<int>(state.size()) != state_dim_) {
        throw std::domain_error("QNetwork: state dimension mismatch");
    }
    std::vector<std::vector<double>> acts;
    forward_internal(state, budget_allocation, acts);
    return acts.back();
}

std::vector<VectorSignal> QNetwork::evaluate_all(const StateVec& state,
                                                 double budget_allocation) const {
    const auto raw = raw_forward(state, budget_allocation);
    std::vector<VectorSignal> out(n_actions_);
    for (int a = 0; a < n_actions_; ++a) {
        out[a].reward = raw[a] * sd_r_ + mu_r_;
        out[a].cost = raw[n_actions_ + a] * sd_c_ + mu_c_;
    }
    return out;
}

void QNetwork::set_normalization(double mu_r, double sd_r, double mu_c, double sd_c) {
    mu_r_ = mu_r;
    sd_r_ = sd_r;
    mu_c_ = mu_c;
    sd_c_ = sd_c;
}

void QNetwork::clear_normalization() { set_normalization(0.0, 1.0, 0.0, 1.0); }

double QNetwork::loss_and_grad(const std::vector<QSample>& xs, const std::vector<VectorSignal>& ys,
                               std::vector<double>* grad) const {
    const int n_enc = n_encoder_layers_;
    const int n_layers = static_cast<int>(layers_.size());
    const std::size_t n = xs.size();
    if (grad != nullptr) grad->assign(params_.size(), 0.0);

    double loss = 0.0;
    std::vector<std::vector<double>> acts;
    std::vector<double> dy, dx;
    for (std::size_t i = 0; i < n; ++i) {
        const QSample& s = xs[i];
        forward_internal(s.state, s.budget_allocation, acts);
        const auto& out = acts.back();

        const double ty_r = (ys[i].reward - mu_r_) / sd_r_;
        const double ty_c = (ys[i].cost - mu_c_) / sd_c_;
        const double dr = out[s.action] - ty_r;
        const double dc = out[n_actions_ + s.action] - ty_c;
        loss += dr * dr + dc * dc;
        if (grad == nullptr) continue;

        // Masked squared error: only the selected action's two heads
        // receive gradient for this sample.
        dy.assign(layers_.back().out, 0.0);
        dy[s.action] = 2.0 * dr / n;
        dy[n_actions_ + s.action] = 2.0 * dc / n;

        for (int l = n_layers - 1; l >= n_enc; --l) {
            const double* in = (l == n_enc) ? acts[n_enc].data() : acts[l].data();
            dx.assign(layers_[l].in, 0.0);
            nn::affine_backward(params_.data() + w_off_[l], layers_[l], in, acts[l + 1].data(),
                                dy.data(), grad->data() + w_off_[l], grad->data() + b_off_[l],
                                dx.data());
            dy = dx;
        }
        // Split the concat gradient; the state part stops here.
        if (n_enc > 0) {
            dy.erase(dy.begin(), dy.begin() + state_dim_);
            for (int l = n_enc - 1; l >= 0; --l) {
                const double beta_in[1] = {s.budget_allocation};
                const double* in = (l == 0) ? beta_in : acts[l - 1].data();
                dx.assign(layers_[l].in, 0.0);
                nn::affine_backward(params_.data() + w_off_[l], layers_[l], in, acts[l].data(),
                                    dy.data(), grad->data() + w_off_[l], grad->data() + b_off_[l],
                                    dx.data());
                dy = dx;
            }
        }
    }
    loss /= std::max<std::size_t>(n, 1);

    if (spec_.weight_decay > 0.0) {
        double reg = 0.0;
        for (std::size_t i = 0; i < params_.size(); ++i) reg += params_[i] * params_[i];
        loss += 0.5 * spec_.weight_decay * reg;
        if (grad != nullptr) {
            for (std::size_t i = 0; i < params_.size(); ++i) {
                (*grad)[i] += spec_.weight_decay * params_[i];
            }
        }
    }
    return loss;
}

std::vector<double> fit(QNetwork& net, const std::vector<QSample>& xs,
                        const std::vector<VectorSignal>& ys, Rng& rng) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("fit: need |X| = |Y| > 0");
    }
    const RegressorSpec& spec = net.spec();
    if (spec.normalize_targets) {
        const double mu_r = channel_mean(ys, false);
        const double mu_c = channel_mean(ys, true);
        net.set_normalization(mu_r, channel_std(ys, false, mu_r), mu_c, channel_std(ys, true, mu_c));
    } else {
        net.clear_normalization();
    }

    nn::Adam adam(net.params().size(), spec.learning_rate, spec.adam_beta1, spec.adam_beta2,
                  spec.adam_eps);
    std::vector<double> trace;
    trace.reserve(spec.epochs);
    std::vector<double> grad;
    double initial = -1.0;

    const int n = static_cast<int>(xs.size());
    const int bs = (spec.batch_size > 0 && spec.batch_size < n) ? spec.batch_size : n;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        double epoch_loss = 0.0;
        if (bs == n) {
            epoch_loss = net.loss_and_grad(xs, ys, &grad);
            adam.step(net.params(), grad);
        } else {
            shuffle_indices(order, rng);
            std::vector<QSample> bx(bs);
            std::vector<VectorSignal> by(bs);
            int chunks = 0;
            for (int start = 0; start + bs <= n; start += bs) {
                for (int k = 0; k < bs; ++k) {
                    bx[k] = xs[order[start + k]];
                    by[k] = ys[order[start + k]];
                }
                epoch_loss += net.loss_and_grad(bx, by, &grad);
                adam.step(net.params(), grad);
                ++chunks;
            }
            epoch_loss /= std::max(chunks, 1);
        }
        trace.push_back(epoch_loss);
        if (initial < 0.0) initial = std::max(epoch_loss, 1e-12);
        if (epoch_loss > 1e6 * initial) {
            std::ostringstream os;
            os << "fit: diverged at epoch " << epoch << " (loss " << epoch_loss << ", initial "
               << initial << ")";
            throw FitDivergence(os.str(), trace);
        }
    }
    return trace;
}

std::int64_t TabularRegressor::key(int state, int action, int alloc_index) const {
    return (static_cast<std::int64_t>(state) * n_actions_ + action) * grid_.size() + alloc_index;
}

std::vector<VectorSignal> TabularRegressor::evaluate_all(const StateVec& state,
                                                         double budget_allocation) const {
    const int s = static_cast<int>(state.at(0));
    const int j = grid_.snap_index(budget_allocation);
    std::vector<VectorSignal> out(n_actions_);
    for (int a = 0; a < n_actions_; ++a) {
        const auto it = cells_.find(key(s, a, j));
        if (it != cells_.end()) {
            out[a] = it->second.sum * (1.0 / it->second.count);
        }
    }
    return out;
}

void TabularRegressor::fit(const std::vector<QSample>& xs, const std::vector<VectorSignal>& ys) {
    cells_.clear();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const int s = static_cast<int>(xs[i].state.at(0));
        const int j = grid_.snap_index(xs[i].budget_allocation);
        Cell& c = cells_[key(s, xs[i].action, j)];
        c.sum += ys[i];
        c.count += 1;
    }
}

// ---------------------------------------------------------------------------
// Serialization: little-endian flat binary with a versioned header.

namespace {

void save_net(std::ostream& os, std::uint32_t kind, int state_dim, int n_actions,
              int n_encoder_layers, const std::vector<nn::LayerSpec>& layers,
              const std::vector<double>& params, const double* norm, int norm_count) {
    write_pod(os, kMagic);
    write_pod(os, kVersion);
    write_pod(os, kind);
    write_pod(os, static_cast<std::uint32_t>(state_dim));
    write_pod(os, static_cast<std::uint32_t>(n_actions));
    write_pod(os, static_cast<std::uint32_t>(n_encoder_layers));
    write_pod(os, static_cast<std::uint32_t>(layers.size()));
    for (const auto& l : layers) {
        write_pod(os, static_cast<std::uint32_t>(l.in));
        write_pod(os, static_cast<std::uint32_t>(l.out));
        write_pod(os, static_cast<std::uint8_t>(l.relu ? 1 : 0));
    }
    for (int i = 0; i < norm_count; ++i) write_pod(os, norm[i]);
    write_pod(os, static_cast<std::uint64_t>(params.size()));
    os.write(reinterpret_cast<const char*>(params.data()),
             static_cast<std::streamsize>(params.size() * sizeof(double)));
}

struct NetHeader {
    std::uint32_t kind = 0;
    int state_dim = 0;
    int n_actions = 0;
    int n_encoder_layers = 0;
    std::vector<nn::LayerSpec> layers;
};

NetHeader load_header(std::istream& is) {
    if (read_pod<std::uint32_t>(is) != kMagic) throw std::runtime_error("bad model magic");
    if (read_pod<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported model version");
    NetHeader h;
    h.kind = read_pod<std::uint32_t>(is);
    h.state_dim = static_cast<int>(read_pod<std::uint32_t>(is));
    h.n_actions = static_cast<int>(read_pod<std::uint32_t>(is));
    h.n_encoder_layers = static_cast<int>(read_pod<std::uint32_t>(is));
    const auto n_layers = read_pod<std::uint32_t>(is);
    h.layers.resize(n_layers);
    for (auto& l : h.layers) {
        l.in = static_cast<int>(read_pod<std::uint32_t>(is));
        l.out = static_cast<int>(read_pod<std::uint32_t>(is));
        l.relu = read_pod<std::uint8_t>(is) != 0;
    }
    return h;
}

std::vector<double> load_params(std::istream& is) {
    const auto n = read_pod<std::uint64_t>(is);
    std::vector<double> p(n);
    is.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("model file truncated");
    return p;
}

} // namespace

void QNetwork::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write model file: " + path);
    const double norm[4] = {mu_r_, sd_r_, mu_c_, sd_c_};
    save_net(os, kKindBiQ, state_dim_, n_actions_, n_encoder_layers_, layers_, params_, norm, 4);
}

QNetwork QNetwork::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file: " + path);
    const NetHeader h = load_header(is);
    if (h.kind != kKindBiQ) throw std::runtime_error("model file is not a budgeted Q network");

    QNetwork net;
    net.state_dim_ = h.state_dim;
    net.n_actions_ = h.n_actions;
    net.n_encoder_layers_ = h.n_encoder_layers;
    net.layers_ = h.layers;
    net.mu_r_ = read_pod<double>(is);
    net.sd_r_ = read_pod<double>(is);
    net.mu_c_ = read_pod<double>(is);
    net.sd_c_ = read_pod<double>(is);
    net.build_layout();
    auto params = load_params(is);
    if (params.size() != net.params_.size()) throw std::runtime_error("model parameter count mismatch");
    net.params_ = std::move(params);
    return net;
}

ScalarNetwork::ScalarNetwork(int state_dim, int n_actions, const RegressorSpec& spec, Rng& rng)
    : state_dim_(state_dim), n_actions_(n_actions), spec_(spec) {
    spec_.validate();
    int prev = state_dim;
    for (int w : spec_.hidden_layers) {
        layers_.push_back({prev, w, true});
        prev = w;
    }
    layers_.push_back({prev, n_actions, false});

    std::size_t off = 0;
    for (const auto& l : layers_) {
        w_off_.push_back(off);
        off += static_cast<std::size_t>(l.in) * l.out;
        b_off_.push_back(off);
        off += l.out;
    }
    params_.assign(off, 0.0);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        nn::xavier_init(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], rng);
    }
}

std::vector<double> ScalarNetwork::evaluate_all(const StateVec& state) const {
    const double* x = state.data();
    std::vector<double> cur, next;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        next.resize(layers_[l].out);
        nn::affine_forward(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], x,
                           next.data());
        cur = next;
        x = cur.data();
    }
    for (double& v : cur) v = v * sd_ + mu_;
    return cur;
}

double ScalarNetwork::loss_and_grad(const std::vector<StateVec>& xs, const std::vector<int>& actions,
                                    const std::vector<double>& ys, std::vector<double>* grad) const {
    const std::size_t n = xs.size();
    if (grad != nullptr) grad->assign(params_.size(), 0.0);

    double loss = 0.0;
    std::vector<std::vector<double>> acts(layers_.size());
    std::vector<double> dy, dx;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = xs[i].data();
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            acts[l].resize(layers_[l].out);
            nn::affine_forward(params_.data() + w_off_[l], params_.data() + b_off_[l], layers_[l], x,
                               acts[l].data());
            x = acts[l].data();
        }
        const double ty = (ys[i] - mu_) / sd_;
        const double d = acts.back()[actions[i]] - ty;
        loss += d * d;
        if (grad == nullptr) continue;

        dy.assign(n_actions_, 0.0);
        dy[actions[i]] = 2.0 * d / n;
        for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
            const double* in = (l == 0) ? xs[i].data() : acts[l - 1].data();
            dx.assign(layers_[l].in, 0.0);
            nn::affine_backward(params_.data() + w_off_[l], layers_[l], in, acts[l].data(),
                                dy.data(), grad->data() + w_off_[l], grad->data() + b_off_[l],
                                dx.data());
            dy = dx;
        }
    }
    loss /= std::max<std::size_t>(n, 1);
    if (spec_.weight_decay > 0.0) {
        double reg = 0.0;
        for (double p : params_) reg += p * p;
        loss += 0.5 * spec_.weight_decay * reg;
        if (grad != nullptr) {
            for (std::size_t i = 0; i < params_.size(); ++i) (*grad)[i] += spec_.weight_decay * params_[i];
        }
    }
    return loss;
}

void ScalarNetwork::set_normalization(double mu, double sd) {
    mu_ = mu;
    sd_ = sd;
}

void ScalarNetwork::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write model file: " + path);
    const double norm[2] = {mu_, sd_};
    save_net(os, kKindScalar, state_dim_, n_actions_, 0, layers_, params_, norm, 2);
}

ScalarNetwork ScalarNetwork::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file: " + path);
    const NetHeader h = load_header(is);
    if (h.kind != kKindScalar) throw std::runtime_error("model file is not a scalar Q network");

    ScalarNetwork net;
    net.state_dim_ = h.state_dim;
    net.n_actions_ = h.n_actions;
    net.layers_ = h.layers;
    net.mu_ = read_pod<double>(is);
    net.sd_ = read_pod<double>(is);
    std::size_t off = 0;
    for (const auto& l : net.layers_) {
        net.w_off_.push_back(off);
        off += static_cast<std::size_t>(l.in) * l.out;
        net.b_off_.push_back(off);
        off += l.out;
    }
    auto params = load_params(is);
    if (params.size() != off) throw std::runtime_error("model parameter count mismatch");
    net.params_ = std::move(params);
    return net;
}

std::vector<double> fit_scalar(ScalarNetwork& net, const std::vector<StateVec>& xs,
                               const std::vector<int>& actions, const std::vector<double>& ys,
                               Rng& rng) {
    if (xs.empty() || xs.size() != ys.size() || xs.size() != actions.size()) {
        throw std::invalid_argument("fit_scalar: need |X| = |Y| > 0");
    }
    (void)rng; // full-batch training consumes no randomness
    const RegressorSpec& spec = net.spec();
    if (spec.normalize_targets) {
        double mu = 0.0;
        for (double y : ys) mu += y;
        mu /= ys.size();
        double sd = 0.0;
        for (double y : ys) sd += (y - mu) * (y - mu);
        sd = std::max(std::sqrt(sd / ys.size()), 1e-8);
        net.set_normalization(mu, sd);
    } else {
        net.set_normalization(0.0, 1.0);
    }

    nn::Adam adam(net.params().size(), spec.learning_rate, spec.adam_beta1, spec.adam_beta2,
                  spec.adam_eps);
    std::vector<double> trace;
    std::vector<double> grad;
    double initial = -1.0;
    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        const double loss = net.loss_and_grad(xs, actions, ys, &grad);
        adam.step(net.params(), grad);
        trace.push_back(loss);
        if (initial < 0.0) initial = std::max(loss, 1e-12);
        if (loss > 1e6 * initial) {
            throw FitDivergence("fit_scalar: diverged", trace);
        }
    }
    return trace;
}

} // namespace brl
