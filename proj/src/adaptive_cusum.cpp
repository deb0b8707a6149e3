#include "acusum/adaptive_cusum.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace acusum {

double classic_cusum_step(double c_prev, double x, double mu1, double theta1) {
    if (!(theta1 > 0)) throw std::invalid_argument("classic_cusum_step: theta1 must be > 0");
    if (!(c_prev >= 0)) throw std::invalid_argument("classic_cusum_step: c_prev must be >= 0");
    return std::max(0.0, c_prev + llr_increment(x, mu1, theta1));
}

double update_mean_estimate(DirectionPair dir, std::int64_t n, double sum_s, const ChartConfig& cfg) {
    const double count = cfg.eta + static_cast<double>(n);
    switch (dir.mean_dir()) {
    case Shift::Up:
        return std::max(cfg.rho_mu, (cfg.s + sum_s) / count);
    case Shift::Down:
        return std::min(-cfg.rho_mu, (-cfg.s + sum_s) / count);
    case Shift::None:
        break;
    }
    return 0.0;
}

double update_var_estimate(DirectionPair dir, std::int64_t n, double sum_q, const ChartConfig& cfg) {
    const double half_n = 0.5 * static_cast<double>(n);
    switch (dir.var_dir()) {
    case Shift::Up:
        return std::max(cfg.rho_theta_up, (cfg.beta + 0.5 * sum_q) / (cfg.alpha_up - 1.0 + half_n));
    case Shift::Down:
        return std::min(cfg.rho_theta_down, (cfg.beta + 0.5 * sum_q) / (cfg.alpha_down - 1.0 + half_n));
    case Shift::None:
        break;
    }
    return 1.0;
}

BranchState cold_branch(DirectionPair dir, const ChartConfig& cfg) {
    BranchState b;
    b.mu_hat = update_mean_estimate(dir, 0, 0.0, cfg);
    b.theta_hat = update_var_estimate(dir, 0, 0.0, cfg);
    return b;
}

BranchState branch_step(const BranchState& prev, DirectionPair dir, std::optional<double> x_prev, double x,
                        std::int64_t t, const ChartConfig& cfg) {
    BranchState next = prev;
    if (x_prev && prev.c > 0) {
        next.n = prev.n + 1;
        next.sum_s = prev.sum_s + *x_prev;
        next.mu_hat = update_mean_estimate(dir, next.n, next.sum_s, cfg);
        const double dev = *x_prev - next.mu_hat;
        next.sum_q = prev.sum_q + dev * dev;
    } else {
        next.n = 0;
        next.sum_s = 0.0;
        next.sum_q = 0.0;
        next.tau_hat = t - 1;
        next.mu_hat = update_mean_estimate(dir, 0, 0.0, cfg);
    }
    next.theta_hat = update_var_estimate(dir, next.n, next.sum_q, cfg);
    assert(next.theta_hat > 0);

    next.c = std::max(0.0, prev.c + llr_increment(x, next.mu_hat, next.theta_hat));
    if (next.c == 0.0) next.tau_hat = t;
    return next;
}

AdaptiveChartState AdaptiveChartState::cold(const ChartConfig& cfg) {
    AdaptiveChartState s;
    for (DirectionPair d : kAllDirections) s.branches[d] = cold_branch(d, cfg);
    return s;
}

void chart_step(AdaptiveChartState& state, double x, const ChartConfig& cfg) {
    const std::int64_t t = state.t + 1;
    for (DirectionPair d : kAllDirections) state.branches[d] = branch_step(state.branches[d], d, state.x_prev, x, t, cfg);
    state.t = t;
    state.x_prev = x;
}

void to_json(nlohmann::json& j, const AdaptiveChartState& s) {
    nlohmann::json branches = nlohmann::json::object();
    for (DirectionPair d : kAllDirections) branches[std::string(d.name())] = s.branches[d];
    j = nlohmann::json{
        {"t", s.t},
        {"x_prev", s.x_prev ? nlohmann::json(*s.x_prev) : nlohmann::json(nullptr)},
        {"branches", std::move(branches)},
    };
}

void from_json(const nlohmann::json& j, AdaptiveChartState& s) {
    AdaptiveChartState out;
    j.at("t").get_to(out.t);
    if (!j.at("x_prev").is_null()) out.x_prev = j.at("x_prev").get<double>();
    const auto& branches = j.at("branches");
    if (branches.size() != DirectionPair::kCount)
        throw std::invalid_argument("AdaptiveChartState: expected exactly 8 branches");
    for (DirectionPair d : kAllDirections) branches.at(std::string(d.name())).get_to(out.branches[d]);
    s = out;
}

}  // namespace acusum
