#include "acusum/stream_monitor.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace acusum {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::optional<InputRow> parse_row(const std::string& line) {
    const std::string_view s = trim(line);
    if (s.empty()) return std::nullopt;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
        const auto v = parse_number(s);
        if (!v) return std::nullopt;
        return InputRow{{}, *v};
    }
    if (s.find(',', comma + 1) != std::string_view::npos) return std::nullopt;
    const auto v = parse_number(s.substr(comma + 1));
    if (!v) return std::nullopt;
    return InputRow{std::string(trim(s.substr(0, comma))), *v};
}

std::vector<double> read_phase1(std::istream& in) {
    std::vector<double> values;
    std::string line;
    bool first = true;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto row = parse_row(line);
        if (!row) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("phase I data: line " + std::to_string(line_no) + " is not a number");
        }
        first = false;
        values.push_back(row->value);
    }
    return values;
}

void to_json(nlohmann::json& j, const AlarmReport& r) {
    nlohmann::json changes = nlohmann::json::array();
    for (const auto& e : r.diagnosis)
        changes.push_back({{"branch", std::string(e.dir.name())}, {"q", e.q}, {"change", e.change}});
    j = nlohmann::json{
        {"alarm_t", r.t},
        {"index", r.index},
        {"changes", changes},
        {"change_point_t", r.change_point_t},
        {"diagnosis", format_diagnosis(r.diagnosis)},
    };
}

StreamMonitor::StreamMonitor(ChartConfig cfg, std::shared_ptr<const IcDistributionTable> tables,
                             PhaseIBaseline baseline)
    : cfg_(std::move(cfg)), tables_(std::move(tables)), baseline_(baseline), state_(AdaptiveChartState::cold(cfg_)) {
    if (!tables_) throw std::invalid_argument("StreamMonitor: tables are required");
    if (tables_->config_hash != cfg_.hash())
        throw std::invalid_argument("StreamMonitor: tables were built for config " + tables_->config_hash +
                                    ", active config is " + cfg_.hash());
    cfg_.h();  // throws when uncalibrated
    standardize(0.0, baseline_);  // validates sigma0
}

MonitorVerdict StreamMonitor::push(double raw, const std::string& index) {
    const double x = standardize(raw, baseline_);
    ++t_;
    MonitorVerdict v = monitor_step(state_, x, *tables_, cfg_);
    const std::int64_t chart_t = v.t;
    v.t = t_;
    last_alarm_.reset();
    if (v.alarmed) {
        ++alarms_;
        AlarmReport r;
        r.t = t_;
        r.index = index;
        r.chart_t = chart_t;
        r.diagnosis = diagnose(v);
        const std::int64_t tau_hat = state_.branches[r.diagnosis.front().dir].tau_hat;
        r.change_point_t = t_ - (chart_t - tau_hat);
        last_alarm_ = std::move(r);
        state_ = AdaptiveChartState::cold(cfg_);
    }
    return v;
}

StreamSummary run_monitor(StreamMonitor& monitor, std::istream& in, std::ostream& verdicts, std::ostream& reports) {
    StreamSummary summary;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto row = parse_row(line);
        if (!row) {
            if (!first) ++summary.skipped;
            first = false;
            continue;
        }
        first = false;
        const auto verdict = monitor.push(row->value, row->index);
        ++summary.rows;
        verdicts << nlohmann::json(verdict).dump() << '\n';
        if (const auto& alarm = monitor.last_alarm()) {
            ++summary.alarms;
            reports << nlohmann::json(*alarm).dump() << '\n';
        }
    }
    verdicts.flush();
    return summary;
}

}  // namespace acusum
