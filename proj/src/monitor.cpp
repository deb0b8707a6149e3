#include "acusum/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace acusum {

double p_transform(const IcDistributionTable& table, DirectionPair dir, double c) {
    if (!(c >= 0)) throw std::domain_error("p_transform: statistic must be >= 0");
    if (c == 0.0) return 0.0;
    return table[dir].cdf(c);
}

double q_transform(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("q_transform: p must lie in [0, 1)");
    return -std::log1p(-p);
}

MonitorVerdict evaluate(const AdaptiveChartState& state, const IcDistributionTable& tables, double h) {
    MonitorVerdict v;
    v.t = state.t;
    for (DirectionPair d : kAllDirections) {
        const double q = q_transform(p_transform(tables, d, state.branches[d].c));
        v.per_branch_q[d] = q;
        v.q_max = std::max(v.q_max, q);
        if (q > h) v.triggering.push_back(d);
    }
    v.alarmed = !v.triggering.empty();
    return v;
}

MonitorVerdict monitor_step(AdaptiveChartState& state, double x, const IcDistributionTable& tables,
                            const ChartConfig& cfg) {
    if (tables.config_hash != cfg.hash())
        throw std::invalid_argument("monitor_step: IC tables were estimated under a different chart configuration");
    const double h = cfg.h();
    chart_step(state, x, cfg);
    return evaluate(state, tables, h);
}

std::string describe(DirectionPair dir) {
    auto part = [](Shift s, const char* what) -> std::string {
        switch (s) {
        case Shift::Up:
            return std::string(what) + " increase";
        case Shift::Down:
            return std::string(what) + " decrease";
        case Shift::None:
            break;
        }
        return {};
    };
    const std::string mean = part(dir.mean_dir(), "mean");
    const std::string var = part(dir.var_dir(), "variance");
    if (mean.empty()) return var;
    if (var.empty()) return mean;
    return mean + " with " + var;
}

std::vector<DiagnosisEntry> diagnose(const MonitorVerdict& verdict) {
    if (!verdict.alarmed || verdict.triggering.empty())
        throw std::logic_error("diagnose: verdict is not an alarm");
    std::vector<DiagnosisEntry> out;
    for (DirectionPair d : verdict.triggering) out.push_back({d, verdict.per_branch_q[d], describe(d)});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.q > b.q; });
    return out;
}

std::string format_diagnosis(const std::vector<DiagnosisEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        if (!out.empty()) out += "; ";
        char buf[32];
        std::snprintf(buf, sizeof buf, " (q=%.3f)", e.q);
        out += e.change + buf;
    }
    return out;
}

void to_json(nlohmann::json& j, const MonitorVerdict& v) {
    nlohmann::json triggering = nlohmann::json::array();
    for (DirectionPair d : v.triggering) triggering.push_back(std::string(d.name()));
    nlohmann::json q = nlohmann::json::object();
    for (DirectionPair d : kAllDirections) q[std::string(d.name())] = v.per_branch_q[d];
    j = nlohmann::json{
        {"t", v.t}, {"q_max", v.q_max}, {"alarmed", v.alarmed}, {"triggering", std::move(triggering)}, {"q", std::move(q)},
    };
}

}  // namespace acusum
