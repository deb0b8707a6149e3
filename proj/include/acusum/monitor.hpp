#pragma once

#include <string>
#include <vector>

#include "acusum/adaptive_cusum.hpp"
#include "acusum/ic_tables.hpp"

namespace acusum {

/// Probability-integral transform of a branch statistic; zero maps to zero.
double p_transform(const IcDistributionTable& table, DirectionPair dir, double c);

/// -log(1 - p). Throws std::domain_error unless 0 <= p < 1.
double q_transform(double p);

struct MonitorVerdict {
    std::int64_t t = 0;
    double q_max = 0.0;
    bool alarmed = false;
    /// Branches with q > h, in canonical order.
    std::vector<DirectionPair> triggering;
    PerBranch<double> per_branch_q;
};

/// Transforms every branch of `state` to its q value and compares the maximum with h.
MonitorVerdict evaluate(const AdaptiveChartState& state, const IcDistributionTable& tables, double h);

/// Advances the chart by one observation and reports the verdict at the new time.
/// Does not reset after an alarm.
MonitorVerdict monitor_step(AdaptiveChartState& state, double x, const IcDistributionTable& tables,
                            const ChartConfig& cfg);

/// "mean increase", "variance decrease", "mean decrease with variance increase", ...
std::string describe(DirectionPair dir);

struct DiagnosisEntry {
    DirectionPair dir;
    double q = 0.0;
    std::string change;
};

/// Triggering branches ordered by q, largest first. Throws std::logic_error
/// when the verdict is not an alarm.
std::vector<DiagnosisEntry> diagnose(const MonitorVerdict& verdict);

/// One-line rendering of a diagnosis, e.g. "mean increase (q=9.1); variance increase (q=7.4)".
std::string format_diagnosis(const std::vector<DiagnosisEntry>& entries);

void to_json(nlohmann::json& j, const MonitorVerdict& v);

}  // namespace acusum
