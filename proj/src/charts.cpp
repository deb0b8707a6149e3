#include "acusum/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "acusum/monitor.hpp"
#include "acusum/rng.hpp"

namespace acusum {

PrimaryChart::PrimaryChart(ChartConfig cfg, std::shared_ptr<const IcDistributionTable> tables,
                           std::shared_ptr<const SteadyStateReservoir> reservoir)
    : cfg_(std::move(cfg)), tables_(std::move(tables)), reservoir_(std::move(reservoir)) {
    cfg_.validate();
    if (!tables_) throw std::invalid_argument("PrimaryChart: IC tables are required");
    if (tables_->config_hash != cfg_.hash())
        throw std::invalid_argument("PrimaryChart: IC tables were estimated under a different chart configuration");
    if (reservoir_ && reservoir_->snapshots.empty()) throw std::invalid_argument("PrimaryChart: empty reservoir");
    state_ = AdaptiveChartState::cold(cfg_);
}

void PrimaryChart::restart(std::uint64_t init_seed) {
    if (!reservoir_) {
        state_ = AdaptiveChartState::cold(cfg_);
        return;
    }
    NormalStream pick(init_seed);
    state_ = reservoir_->snapshots[pick.index(reservoir_->snapshots.size())];
}

void PrimaryChart::set_level(double level) {
    // q > level  <=>  F(c) > 1 - exp(-level)  <=>  c > threshold. The level is
    // nudged down so the filter can only err towards reporting.
    const double nudged = level - 1e-9 * (1.0 + std::abs(level));
    const double p = -std::expm1(-nudged);
    for (DirectionPair d : kAllDirections) c_threshold_[d] = (*tables_)[d].exceedance_threshold(p);
}

bool PrimaryChart::step(double x) {
    chart_step(state_, x, cfg_);
    bool hit = false;
    for (DirectionPair d : kAllDirections) hit |= state_.branches[d].c > c_threshold_[d];
    return hit;
}

double PrimaryChart::statistic() const {
    double q_max = 0.0;
    for (DirectionPair d : kAllDirections)
        q_max = std::max(q_max, q_transform(p_transform(*tables_, d, state_.branches[d].c)));
    return q_max;
}

std::vector<DirectionPair> PrimaryChart::triggering(double level) const {
    std::vector<DirectionPair> out;
    for (DirectionPair d : kAllDirections)
        if (q_transform(p_transform(*tables_, d, state_.branches[d].c)) > level) out.push_back(d);
    return out;
}

WuChart::WuChart(WuCusumParams params) : params_(params), state_(WuCusumState::initial(params)) {}

GlrtChart::GlrtChart(std::size_t window, double gamma) : window_(window), gamma_(gamma), state_(window, gamma) {}

double GlrtChart::statistic() const { return state_.max_ratio(); }

EwmaGlrtChart::EwmaGlrtChart(double lambda) : lambda_(lambda), state_(EwmaGlrtState::initial(lambda)) {}

std::string EwmaGlrtChart::label() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "EWMA_GLRT_%g", lambda_);
    return buf;
}

}  // namespace acusum
