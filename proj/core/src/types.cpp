#include "brl/types.hpp"

#include <algorithm>
#include <cmath>

namespace brl {

BudgetGrid::BudgetGrid(double lo, double hi, double step) : lo_(lo), step_(step) {
    if (!(step > 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("BudgetGrid: need step > 0 and hi >= lo");
    }
    n_ = static_cast<int>(std::round((hi - lo) / step)) + 1;
    if (n_ < 1) n_ = 1;
}

BudgetGrid BudgetGrid::parse(const std::string& text) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) {
        throw std::invalid_argument("BudgetGrid: expected \"lo:step:hi\", got \"" + text + "\"");
    }
    const double lo = std::stod(text.substr(0, p1));
    const double step = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    const double hi = std::stod(text.substr(p2 + 1));
    return BudgetGrid(lo, hi, step);
}

int BudgetGrid::snap_index(double b, bool* off_grid) const {
    int i = static_cast<int>(std::round((b - lo_) / step_));
    i = std::clamp(i, 0, n_ - 1);
    if (off_grid != nullptr) {
        const double span = std::max(step_ * (n_ - 1), 1e-300);
        *off_grid = std::abs(b - value(i)) > 1e-9 * span;
    }
    return i;
}

std::vector<double> BudgetGrid::values() const {
    std::vector<double> v(n_);
    for (int i = 0; i < n_; ++i) v[i] = value(i);
    return v;
}

double sup_norm(const std::vector<VectorSignal>& a) {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, x.abs_max());
    return m;
}

double sup_norm_diff(const std::vector<VectorSignal>& a, const std::vector<VectorSignal>& b) {
    double m = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, (a[i] - b[i]).abs_max());
    return m;
}

VectorSignal discounted_return(const std::vector<VectorSignal>& trajectory, double gamma) {
    VectorSignal g;
    double disc = 1.0;
    for (const auto& r : trajectory) {
        g += r * disc;
        disc *= gamma;
    }
    return g;
}

} // namespace brl
