#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "acusum/charts.hpp"
#include "acusum/simulation.hpp"

namespace acusum {

/// Control limit of the aggregated chart for a target in-control ARL, with
/// every replication started from a reservoir snapshot. reps must be >= 5000.
CalibrationResult calibrate_control_limit(std::shared_ptr<const IcDistributionTable> tables,
                                          std::shared_ptr<const SteadyStateReservoir> reservoir,
                                          const ChartConfig& cfg, double target_arl0, std::int64_t reps, double tol,
                                          double h_lo, double h_hi, std::uint64_t seed, unsigned threads = 0);

/// Finds a bracket with a pilot run, then calibrates as above.
CalibrationResult calibrate_control_limit_auto(std::shared_ptr<const IcDistributionTable> tables,
                                               std::shared_ptr<const SteadyStateReservoir> reservoir,
                                               const ChartConfig& cfg, double target_arl0, std::int64_t reps,
                                               double tol, std::uint64_t seed, unsigned threads = 0);

enum class BenchmarkKind { WuCusum, Glrt, EwmaGlrt };

struct BenchmarkSpec {
    BenchmarkKind kind = BenchmarkKind::WuCusum;
    double lambda = 0.05;      // EWMA-GLRT
    std::size_t window = 800;  // GLRT
    double gamma = 0.005;      // GLRT
    WuCusumParams wu;

    static BenchmarkSpec wu_cusum() { return {}; }
    static BenchmarkSpec glrt(std::size_t window = 800, double gamma = 0.005);
    static BenchmarkSpec ewma_glrt(double lambda);
    /// Parses "Wu_CUSUM", "GLRT" or "EWMA_GLRT_<lambda>".
    static BenchmarkSpec parse(const std::string& key);

    /// Column label, also the key under which the limit is stored.
    std::string key() const;
};

using AnyChart = std::variant<PrimaryChart, WuChart, GlrtChart, EwmaGlrtChart>;

AnyChart make_chart(const BenchmarkSpec& spec);

/// Calibrates a benchmark chart from a cold start. Without an explicit
/// bracket one is found with a pilot run.
CalibrationResult calibrate_benchmark(const BenchmarkSpec& spec, double target_arl0, std::int64_t reps, double tol,
                                      std::uint64_t seed, unsigned threads = 0,
                                      std::optional<std::pair<double, double>> bracket = std::nullopt);

}  // namespace acusum
