#pragma once

#include <cstddef>
#include <vector>

#include "brl/rng.hpp"

namespace brl::nn {

struct LayerSpec {
    int in = 0;
    int out = 0;
    bool relu = false;
};

/// y = W x + b, optional rectifier. W is row-major [out][in].
void affine_forward(const double* w, const double* b, const LayerSpec& spec, const double* x,
                    double* y);

/// Backpropagation through one affine(+relu) layer. `y` is the stored
/// post-activation output, `dy` the incoming gradient (overwritten with
/// the pre-activation gradient when the layer rectifies), `x` the stored
/// input. Parameter gradients are accumulated; `dx` may be null.
void affine_backward(const double* w, const LayerSpec& spec, const double* x, const double* y,
                     double* dy, double* dw, double* db, double* dx);

/// Glorot/Xavier uniform initialisation: W ~ U(+-sqrt(6/(in+out))), b = 0.
void xavier_init(double* w, double* b, const LayerSpec& spec, Rng& rng);

/// Adaptive-moment optimizer over a flat parameter vector, with the
/// customary default coefficients. L2 regularisation enters through the
/// gradient (loss carries 0.5 * weight_decay * ||theta||^2).
class Adam {
public:
    Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(std::vector<double>& params, const std::vector<double>& grads);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<double> m_, v_;
};

} // namespace brl::nn
