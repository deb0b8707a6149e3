#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "acusum/calibration.hpp"
#include "acusum/ic_tables.hpp"

namespace acusum::testing {

/// Two-sided one-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic p-value of the KS statistic with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double lambda = (rn + 0.12 + 0.11 / rn) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// A cheaply calibrated chart shared by the unit tests: minimum-size tables
/// and a limit calibrated on 5000 replications.
struct SmallFixture {
    ChartConfig config;
    std::shared_ptr<const IcDistributionTable> tables;
    std::shared_ptr<const SteadyStateReservoir> reservoir;
    double h = 0.0;
};

inline const SmallFixture& small_fixture() {
    static const SmallFixture fixture = [] {
        SmallFixture f;
        IcEstimationOptions opt;
        opt.burn_in = 100'000;
        opt.samples = 10'000;
        opt.reservoir_size = 1'000;
        opt.seed = 42;
        auto ic = estimate_ic_tables(f.config, opt);
        f.tables = std::make_shared<const IcDistributionTable>(std::move(ic.tables));
        f.reservoir = std::make_shared<const SteadyStateReservoir>(std::move(ic.reservoir));
        f.h = calibrate_control_limit(f.tables, f.reservoir, f.config, 500.0, 5000, 0.02, 4.0, 6.0, 7).h;
        f.config.control_limit_h = f.h;
        return f;
    }();
    return fixture;
}

}  // namespace acusum::testing
