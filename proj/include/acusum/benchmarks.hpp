#pragma once

#include <cstdint>
#include <vector>

namespace acusum {

// ---------------------------------------------------------------------------
// EWMA-based GLRT chart

struct EwmaGlrtState {
    double u = 0.0;
    double v = 1.0;
    double lambda = 0.05;
    double elr = 0.0;

    static EwmaGlrtState initial(double lambda);
};

/// u <- lambda x + (1-lambda) u, then v from the updated u,
/// elr = u^2 + v - log v - 1.
EwmaGlrtState ewma_glrt_step(const EwmaGlrtState& state, double x);

// ---------------------------------------------------------------------------
// Windowed GLRT chart with a lower bound on the variance estimate

/// Sliding window over the most recent observations with prefix sums of x
/// and x^2. The statistic is the largest segment log-likelihood ratio over
/// the segments ending now, of length 2 up to the window size.
class GlrtWindowState {
public:
    explicit GlrtWindowState(std::size_t window = 800, double gamma = 0.005);

    /// Appends x, evicting the oldest observation when the window is full.
    /// Does not refresh the statistic.
    void push(double x);

    /// Recomputes the statistic from the prefix sums.
    void refresh() { stat_ = max_ratio(); }

    /// Largest segment ratio for the current window (0 with fewer than two observations).
    double max_ratio() const;

    /// True iff some segment ratio exceeds `level`. Uses a cheap upper bound
    /// to skip most logarithms; agrees with `max_ratio() > level`.
    bool exceeds(double level) const;

    double stat() const { return stat_; }
    std::size_t window() const { return window_; }
    double gamma() const { return gamma_; }
    /// Observations currently held.
    std::size_t size() const { return size_; }
    /// k-th most recent observation, k = 0 is the newest.
    double recent(std::size_t k) const;

    /// Sums of the last n observations and their squares, from prefix sums.
    double sum_last(std::size_t n) const;
    double sum_sq_last(std::size_t n) const;

    /// max(1 - gamma n, MLE variance) for a segment of length n with sum s1 and sum of squares s2.
    double bounded_variance(std::size_t n, double s1, double s2) const;
    /// Log-likelihood ratio of N(mean, bounded variance) against N(0, 1) for the last n observations.
    double segment_llr(std::size_t n) const;

private:
    std::size_t slot(std::size_t steps_back) const;

    std::size_t window_;
    double gamma_;
    std::vector<double> values_;
    // Cumulative sums at the end of each of the last window_+1 time points,
    // relative to a base that is rebased every window_ pushes.
    std::vector<double> cum1_;
    std::vector<double> cum2_;
    std::vector<double> half_n_log_bound_;
    std::size_t head_ = 0;  // slot of the newest cumulative sum
    std::size_t next_value_ = 0;
    std::size_t size_ = 0;
    std::size_t since_rebase_ = 0;
    double stat_ = 0.0;
};

/// Pushes x and recomputes the statistic.
GlrtWindowState glrt_step(GlrtWindowState state, double x);

// ---------------------------------------------------------------------------
// Wu's adaptive CUSUM with mean-up and mean-down arms

/// Which mean estimate the variance step is centred on.
enum class WuVarianceCentre { UpdatedMean, PreviousMean };

struct WuCusumParams {
    double a = 0.5;
    double b = 0.5;
    double delta_plus = 0.25;
    double delta_minus = -0.25;
    double rho = 1.05;
    WuVarianceCentre variance_centre = WuVarianceCentre::UpdatedMean;
};

struct WuArm {
    double stat = 0.0;
    std::int64_t tau = 0;
    double mu_hat = 0.0;
    double theta_hat = 1.0;
};

struct WuCusumState {
    WuCusumParams params;
    WuArm up;
    WuArm down;

    static WuCusumState initial(const WuCusumParams& params = {});
    double stat() const { return up.stat > down.stat ? up.stat : down.stat; }
};

/// One step at time t. The increment uses the estimates from t - 1; a zero
/// statistic resets the arm, otherwise the estimates take a stochastic
/// approximation step clamped at (delta, rho).
WuCusumState wu_cusum_step(const WuCusumState& state, double x, std::int64_t t);

}  // namespace acusum
