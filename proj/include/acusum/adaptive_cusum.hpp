#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "acusum/core_types.hpp"

namespace acusum {

/// Log-likelihood ratio of N(mu, theta) against N(0, 1) at x.
inline double llr_increment(double x, double mu, double theta) {
    const double d = x - mu;
    return 0.5 * x * x - d * d / (2.0 * theta) - 0.5 * std::log(theta);
}

/// Page's CUSUM recursion with known out-of-control mean and variance.
/// Throws std::invalid_argument unless theta1 > 0 and c_prev >= 0.
double classic_cusum_step(double c_prev, double x, double mu1, double theta1);

/// Clamped Bayesian estimate of the post-change mean for the given branch.
/// Mean-None branches always return 0.
double update_mean_estimate(DirectionPair dir, std::int64_t n, double sum_s, const ChartConfig& cfg);

/// Clamped inverse-gamma posterior mean of the post-change variance.
/// Variance-None branches always return 1.
double update_var_estimate(DirectionPair dir, std::int64_t n, double sum_q, const ChartConfig& cfg);

/// Cold-start state of one branch: empty window, prior estimates.
BranchState cold_branch(DirectionPair dir, const ChartConfig& cfg);

/// Advances one branch to time t.
///
/// The estimation window is [tau_hat + 1, t - 1]; x_prev (the observation at
/// t - 1) joins it only if the statistic was positive after t - 1. Otherwise
/// the window restarts empty. x itself never enters the estimates used at t.
BranchState branch_step(const BranchState& prev, DirectionPair dir, std::optional<double> x_prev, double x,
                        std::int64_t t, const ChartConfig& cfg);

/// All eight branch statistics plus the last observation they still need.
struct AdaptiveChartState {
    PerBranch<BranchState> branches;
    std::int64_t t = 0;
    std::optional<double> x_prev;

    static AdaptiveChartState cold(const ChartConfig& cfg);

    friend bool operator==(const AdaptiveChartState&, const AdaptiveChartState&) = default;
};

/// Advances every branch with the same observation.
void chart_step(AdaptiveChartState& state, double x, const ChartConfig& cfg);

void to_json(nlohmann::json& j, const AdaptiveChartState& s);
void from_json(const nlohmann::json& j, AdaptiveChartState& s);

}  // namespace acusum
