#include "acusum/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acusum {

EwmaGlrtState EwmaGlrtState::initial(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("EWMA-GLRT: lambda must lie in (0, 1)");
    EwmaGlrtState s;
    s.lambda = lambda;
    return s;
}

EwmaGlrtState ewma_glrt_step(const EwmaGlrtState& state, double x) {
    EwmaGlrtState next = state;
    const double lambda = state.lambda;
    next.u = lambda * x + (1.0 - lambda) * state.u;
    const double d = x - next.u;
    next.v = lambda * d * d + (1.0 - lambda) * state.v;
    next.elr = next.u * next.u + next.v - std::log(next.v) - 1.0;
    return next;
}

// ---------------------------------------------------------------------------

GlrtWindowState::GlrtWindowState(std::size_t window, double gamma)
    : window_(window),
      gamma_(gamma),
      values_(window, 0.0),
      cum1_(window + 1, 0.0),
      cum2_(window + 1, 0.0),
      half_n_log_bound_(window + 1, 0.0) {
    if (window < 2) throw std::invalid_argument("GLRT: window must hold at least two observations");
    if (!(gamma > 0.0)) throw std::invalid_argument("GLRT: gamma must be > 0");
    for (std::size_t n = 1; n <= window; ++n) {
        const double bound = 1.0 - gamma * static_cast<double>(n);
        half_n_log_bound_[n] = bound > 0 ? 0.5 * static_cast<double>(n) * std::log(bound) : 0.0;
    }
}

std::size_t GlrtWindowState::slot(std::size_t steps_back) const {
    return (head_ + window_ + 1 - steps_back) % (window_ + 1);
}

void GlrtWindowState::push(double x) {
    const std::size_t prev = head_;
    head_ = (head_ + 1) % (window_ + 1);
    cum1_[head_] = cum1_[prev] + x;
    cum2_[head_] = cum2_[prev] + x * x;
    values_[next_value_] = x;
    next_value_ = (next_value_ + 1) % window_;
    size_ = std::min(size_ + 1, window_);

    if (++since_rebase_ >= window_) {
        const double base1 = cum1_[slot(size_)];
        const double base2 = cum2_[slot(size_)];
        for (std::size_t i = 0; i <= window_; ++i) {
            cum1_[i] -= base1;
            cum2_[i] -= base2;
        }
        since_rebase_ = 0;
    }
}

double GlrtWindowState::recent(std::size_t k) const {
    if (k >= size_) throw std::out_of_range("GLRT: no such observation in the window");
    return values_[(next_value_ + window_ - 1 - k) % window_];
}

double GlrtWindowState::sum_last(std::size_t n) const { return cum1_[head_] - cum1_[slot(n)]; }
double GlrtWindowState::sum_sq_last(std::size_t n) const { return cum2_[head_] - cum2_[slot(n)]; }

double GlrtWindowState::bounded_variance(std::size_t n, double s1, double s2) const {
    const double nn = static_cast<double>(n);
    const double sse = std::max(0.0, s2 - s1 * (s1 / nn));
    return std::max(1.0 - gamma_ * nn, sse / nn);
}

double GlrtWindowState::segment_llr(std::size_t n) const {
    const double s1 = sum_last(n);
    const double s2 = sum_sq_last(n);
    const double nn = static_cast<double>(n);
    const double sse = std::max(0.0, s2 - s1 * (s1 / nn));
    const double var = sse / nn;
    const double bound = 1.0 - gamma_ * nn;
    if (var <= bound) return -sse / (2.0 * bound) - half_n_log_bound_[n] + 0.5 * s2;
    return -0.5 * nn - 0.5 * nn * std::log(var) + 0.5 * s2;
}

double GlrtWindowState::max_ratio() const {
    double best = 0.0;
    for (std::size_t n = 2; n <= size_; ++n) best = std::max(best, segment_llr(n));
    return best;
}

bool GlrtWindowState::exceeds(double level) const {
    const double top1 = cum1_[head_];
    const double top2 = cum2_[head_];
    for (std::size_t n = 2; n <= size_; ++n) {
        const std::size_t s = slot(n);
        const double s1 = top1 - cum1_[s];
        const double s2 = top2 - cum2_[s];
        const double nn = static_cast<double>(n);
        const double sse = std::max(0.0, s2 - s1 * (s1 / nn));
        const double var = sse / nn;
        if (var > 1.0 - gamma_ * nn && var > 0.0) {
            // log v >= 1 - 1/v bounds the ratio from above without a logarithm.
            const double upper = 0.5 * s2 - nn + 0.5 * nn / var;
            if (upper < level - 1e-9 * (1.0 + std::abs(level) + s2 + nn)) continue;
        }
        if (segment_llr(n) > level) return true;
    }
    return level < 0.0;
}

GlrtWindowState glrt_step(GlrtWindowState state, double x) {
    state.push(x);
    state.refresh();
    return state;
}

// ---------------------------------------------------------------------------

WuCusumState WuCusumState::initial(const WuCusumParams& params) {
    if (!(params.a > 0 && params.b > 0)) throw std::invalid_argument("Wu CUSUM: gains a, b must be > 0");
    if (!(params.delta_plus > 0 && params.delta_minus < 0))
        throw std::invalid_argument("Wu CUSUM: need delta_plus > 0 > delta_minus");
    if (!(params.rho > 0)) throw std::invalid_argument("Wu CUSUM: rho must be > 0");
    WuCusumState s;
    s.params = params;
    s.up = {0.0, 0, params.delta_plus, params.rho};
    s.down = {0.0, 0, params.delta_minus, params.rho};
    return s;
}

namespace {

WuArm wu_arm_step(const WuArm& arm, double x, std::int64_t t, double delta, const WuCusumParams& p) {
    const double mu = arm.mu_hat;
    const double theta = arm.theta_hat;
    WuArm next = arm;
    next.stat = std::max(0.0, arm.stat + 0.5 * ((theta - 1.0) / theta * x * x - std::log(theta)) +
                                  mu / theta * (x - 0.5 * mu));
    if (next.stat == 0.0) {
        next.tau = t;
        next.mu_hat = delta;
        next.theta_hat = p.rho;
        return next;
    }
    const double elapsed = static_cast<double>(t - next.tau);
    const double mu_step = mu + (x - mu) / (p.a + elapsed);
    next.mu_hat = delta > 0 ? std::max(delta, mu_step) : std::min(delta, mu_step);
    const double centre = p.variance_centre == WuVarianceCentre::UpdatedMean ? next.mu_hat : mu;
    const double dev = x - centre;
    next.theta_hat = std::max(p.rho, theta + (dev * dev - theta) / (p.b + elapsed));
    return next;
}

}  // namespace

WuCusumState wu_cusum_step(const WuCusumState& state, double x, std::int64_t t) {
    WuCusumState next = state;
    next.up = wu_arm_step(state.up, x, t, state.params.delta_plus, state.params);
    next.down = wu_arm_step(state.down, x, t, state.params.delta_minus, state.params);
    return next;
}

}  // namespace acusum
