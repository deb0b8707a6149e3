#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "acusum/core_types.hpp"
#include "acusum/calibration.hpp"
#include "acusum/ic_tables.hpp"

namespace acusum {

inline constexpr int kArtifactVersion = 1;

/// Everything a monitor or simulation needs: the chart constants with their
/// control limit, the in-control tables, the reservoir and any benchmark
/// limits calibrated alongside.
struct IcArtifact {
    ChartConfig config;
    std::shared_ptr<const IcDistributionTable> tables;
    std::shared_ptr<const SteadyStateReservoir> reservoir;
    /// Keyed by BenchmarkSpec::key(), e.g. "GLRT" or "EWMA_GLRT_0.05".
    std::map<std::string, double> benchmark_limits;
};

nlohmann::json artifact_to_json(const IcArtifact& artifact);
/// Checks version, branch order and that the embedded tables carry the hash
/// of the embedded config.
IcArtifact artifact_from_json(const nlohmann::json& j);

void save_artifact(const IcArtifact& artifact, const std::string& path);
IcArtifact load_artifact(const std::string& path);
/// As above, and refuses an artifact whose config hash differs from `active`.
IcArtifact load_artifact(const std::string& path, const ChartConfig& active);

struct ArtifactBuildOptions {
    IcEstimationOptions ic;  // ic.seed is overwritten by seed
    std::int64_t reps = 10'000;
    double tol = 0.005;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::vector<BenchmarkSpec> benchmarks;
};

/// Estimates the in-control tables, calibrates the aggregated chart and each
/// requested benchmark to cfg.arl0_target. Sub-seeds are derived from
/// options.seed, so the result depends on nothing else. `progress` receives
/// one line per finished stage.
IcArtifact calibrate_artifact(ChartConfig cfg, const ArtifactBuildOptions& options,
                              const std::function<void(const std::string&)>& progress = {});

}  // namespace acusum
