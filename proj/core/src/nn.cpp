#include "brl/nn.hpp"

#include <cmath>

namespace brl::nn {

void affine_forward(const double* w, const double* b, const LayerSpec& spec, const double* x,
                    double* y) {
    for (int o = 0; o < spec.out; ++o) {
        const double* row = w + static_cast<std::size_t>(o) * spec.in;
        double acc = b[o];
        for (int i = 0; i < spec.in; ++i) acc += row[i] * x[i];
        y[o] = (spec.relu && acc < 0.0) ? 0.0 : acc;
    }
}

void affine_backward(const double* w, const LayerSpec& spec, const double* x, const double* y,
                     double* dy, double* dw, double* db, double* dx) {
    if (spec.relu) {
        for (int o = 0; o < spec.out; ++o) {
            if (y[o] <= 0.0) dy[o] = 0.0;
        }
    }
    for (int o = 0; o < spec.out; ++o) {
        const double g = dy[o];
        if (g == 0.0) continue;
        double* wrow = dw + static_cast<std::size_t>(o) * spec.in;
        for (int i = 0; i < spec.in; ++i) wrow[i] += g * x[i];
        db[o] += g;
    }
    if (dx != nullptr) {
        for (int i = 0; i < spec.in; ++i) dx[i] = 0.0;
        for (int o = 0; o < spec.out; ++o) {
            const double g = dy[o];
            if (g == 0.0) continue;
            const double* row = w + static_cast<std::size_t>(o) * spec.in;
            for (int i = 0; i < spec.in; ++i) dx[i] += g * row[i];
        }
    }
}

void xavier_init(double* w, double* b, const LayerSpec& spec, Rng& rng) {
    const double bound = std::sqrt(6.0 / (spec.in + spec.out));
    const std::size_t n = static_cast<std::size_t>(spec.in) * spec.out;
    for (std::size_t i = 0; i < n; ++i) w[i] = rng.uniform(-bound, bound);
    for (int o = 0; o < spec.out; ++o) b[o] = 0.0;
}

Adam::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
        const double mhat = m_[i] / bc1;
        const double vhat = v_[i] / bc2;
        params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
}

} // namespace brl::nn
