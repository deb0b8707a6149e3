#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acusum/artifact.hpp"
#include "acusum/calibration.hpp"
#include "acusum/simulation.hpp"

namespace acusum {

inline constexpr int kTableCount = 6;

/// Scenario rows of comparison table `id` (1..6). The first row is the
/// in-control scenario, simulated with tau = 0 so its delay is the ARL0.
/// Throws std::out_of_range for any other id.
std::vector<Scenario> table_scenarios(int id);

/// Column keys in display order: P_CUSUM, Wu_CUSUM, GLRT, EWMA_GLRT_<lambda>.
std::vector<std::string> table_columns();

inline constexpr const char* kPrimaryColumn = "P_CUSUM";

/// The charts of one comparison with their control limits.
struct ChartSuite {
    ChartConfig config;  // must carry control_limit_h
    std::shared_ptr<const IcDistributionTable> tables;
    std::shared_ptr<const SteadyStateReservoir> reservoir;
    std::map<std::string, double> benchmark_limits;

    static ChartSuite from_artifact(const IcArtifact& artifact);

    /// Limit for a column; throws std::runtime_error telling the user how to
    /// obtain a missing one.
    double limit(const std::string& column) const;
};

/// Wu's chart is built for variance increases; its pure variance-decrease
/// cells are left empty.
bool cell_omitted(const std::string& column, const Scenario& scenario);

struct TableOptions {
    std::int64_t reps = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    /// Subset of table_columns(); empty means all.
    std::vector<std::string> columns;
    std::int64_t max_steps = kRunawayCap;
};

struct TableCell {
    std::optional<ArlResult> result;  // empty for omitted cells
};

struct TableResult {
    int id = 0;
    std::int64_t reps = 0;
    std::uint64_t seed = 0;
    std::vector<Scenario> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> cells;  // [row][column]
};

/// Every cell uses the same per-scenario random streams, so columns are
/// compared on common random numbers. `progress`, if set, receives one line
/// per finished cell.
TableResult reproduce_table(int id, const ChartSuite& suite, const TableOptions& options,
                            const std::function<void(const std::string&)>& progress = {});

/// Header: scenario, then <col>_mean and <col>_se per column; a trailing
/// runaway column per chart is added only when some cell hit the cap.
std::string table_to_csv(const TableResult& table);

std::string table_filename(int id, std::int64_t reps, std::uint64_t seed);

/// Estimates one cell outside of a table.
ArlResult estimate_cell(const std::string& column, const ChartSuite& suite, const Scenario& scenario,
                        const SimulationOptions& options);

}  // namespace acusum
