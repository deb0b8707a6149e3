#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acusum/monitor.hpp"

namespace acusum {

/// One parsed input row: the index/timestamp column is kept verbatim.
struct InputRow {
    std::string index;
    double value = 0.0;
};

/// Parses "index,value" (or a bare "value"). Returns nullopt for a row that
/// does not parse or whose value is not finite.
std::optional<InputRow> parse_row(const std::string& line);

/// Reads the value column of a Phase I file (optional header, index,value or value rows).
std::vector<double> read_phase1(std::istream& in);

struct AlarmReport {
    std::int64_t t = 0;        // observation number in the stream, 1-based
    std::string index;         // input index of the alarming row
    std::int64_t chart_t = 0;  // steps since the last (re)start
    std::vector<DiagnosisEntry> diagnosis;
    /// Estimated change-point of the top branch, as a stream observation number.
    std::int64_t change_point_t = 0;
};

void to_json(nlohmann::json& j, const AlarmReport& r);

/// Live monitoring: standardizes raw values, advances the chart and restarts
/// it cold after every alarm.
class StreamMonitor {
public:
    StreamMonitor(ChartConfig cfg, std::shared_ptr<const IcDistributionTable> tables, PhaseIBaseline baseline);

    /// Verdict for one raw observation. `index` only labels alarm reports.
    MonitorVerdict push(double raw, const std::string& index = {});
    /// Report for the most recent push if it alarmed.
    const std::optional<AlarmReport>& last_alarm() const { return last_alarm_; }
    std::int64_t observations() const { return t_; }
    std::int64_t alarms() const { return alarms_; }

private:
    ChartConfig cfg_;
    std::shared_ptr<const IcDistributionTable> tables_;
    PhaseIBaseline baseline_;
    AdaptiveChartState state_;
    std::int64_t t_ = 0;
    std::int64_t alarms_ = 0;
    std::optional<AlarmReport> last_alarm_;
};

struct StreamSummary {
    std::int64_t rows = 0;  // parsed rows, equal to verdict lines written
    std::int64_t skipped = 0;
    std::int64_t alarms = 0;
};

/// Reads CSV rows from `in`, writes one JSON verdict line per parsed row to
/// `verdicts` and one JSON alarm report per alarm to `reports`. A first line
/// that does not parse is taken as a header.
StreamSummary run_monitor(StreamMonitor& monitor, std::istream& in, std::ostream& verdicts, std::ostream& reports);

}  // namespace acusum
