#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "acusum/adaptive_cusum.hpp"
#include "acusum/benchmarks.hpp"
#include "acusum/ic_tables.hpp"

namespace acusum {

/// What the run-length machinery needs from a chart.
///
/// restart() puts the chart in its initial state (a chart may draw that state
/// from init_seed). set_level() fixes the alarm level. step() advances by one
/// observation and returns true when statistic() may exceed the level; it
/// never returns false when statistic() > level. statistic() is exact.
template <class C>
concept MonitoringChart = std::copy_constructible<C> && requires(C c, const C cc, double x, std::uint64_t seed) {
    c.restart(seed);
    c.set_level(x);
    { c.step(x) } -> std::same_as<bool>;
    { cc.statistic() } -> std::convertible_to<double>;
    { cc.label() } -> std::convertible_to<std::string>;
};

/// The eight-branch adaptive chart aggregated through q = max -log(1 - F(C)).
class PrimaryChart {
public:
    /// A null reservoir means cold starts.
    PrimaryChart(ChartConfig cfg, std::shared_ptr<const IcDistributionTable> tables,
                 std::shared_ptr<const SteadyStateReservoir> reservoir);

    void restart(std::uint64_t init_seed);
    void set_level(double level);
    bool step(double x);
    double statistic() const;
    std::string label() const { return "P_CUSUM"; }

    /// Branches with q above `level`.
    std::vector<DirectionPair> triggering(double level) const;

    const AdaptiveChartState& state() const { return state_; }
    const ChartConfig& config() const { return cfg_; }
    const IcDistributionTable& tables() const { return *tables_; }

private:
    ChartConfig cfg_;
    std::shared_ptr<const IcDistributionTable> tables_;
    std::shared_ptr<const SteadyStateReservoir> reservoir_;
    AdaptiveChartState state_;
    PerBranch<double> c_threshold_{std::numeric_limits<double>::infinity()};
};

class WuChart {
public:
    explicit WuChart(WuCusumParams params = {});

    void restart(std::uint64_t) { state_ = WuCusumState::initial(params_); t_ = 0; }
    void set_level(double level) { level_ = level; }
    bool step(double x) {
        state_ = wu_cusum_step(state_, x, ++t_);
        return state_.stat() > level_;
    }
    double statistic() const { return state_.stat(); }
    std::string label() const { return "Wu_CUSUM"; }
    const WuCusumState& state() const { return state_; }

private:
    WuCusumParams params_;
    WuCusumState state_;
    std::int64_t t_ = 0;
    double level_ = 0.0;
};

class GlrtChart {
public:
    explicit GlrtChart(std::size_t window = 800, double gamma = 0.005);

    void restart(std::uint64_t) { state_ = GlrtWindowState(window_, gamma_); }
    void set_level(double level) { level_ = level; }
    bool step(double x) {
        state_.push(x);
        return state_.exceeds(level_);
    }
    double statistic() const;
    std::string label() const { return "GLRT"; }

private:
    std::size_t window_;
    double gamma_;
    GlrtWindowState state_;
    double level_ = 0.0;
};

class EwmaGlrtChart {
public:
    explicit EwmaGlrtChart(double lambda);

    void restart(std::uint64_t) { state_ = EwmaGlrtState::initial(lambda_); }
    void set_level(double level) { level_ = level; }
    bool step(double x) {
        state_ = ewma_glrt_step(state_, x);
        return state_.elr > level_;
    }
    double statistic() const { return state_.elr; }
    std::string label() const;
    double lambda() const { return lambda_; }

private:
    double lambda_;
    EwmaGlrtState state_;
    double level_ = 0.0;
};

}  // namespace acusum
