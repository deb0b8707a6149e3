#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "acusum/adaptive_cusum.hpp"
#include "acusum/core_types.hpp"

namespace acusum {

/// Stationary in-control distribution of one branch statistic: the sorted
/// nonzero values plus the probability mass at zero.
///
/// The CDF follows the k/(M+1) convention: the k-th order statistic maps to
/// k/(M+1), values in between are interpolated linearly and anything outside
/// the sample range is clamped to [1/(M+1), M/(M+1)].
struct BranchDistribution {
    std::vector<double> sorted_nonzero_c;
    double zero_fraction = 0.0;
    /// Recording points that contributed (zeros and nonzeros).
    std::int64_t recorded = 0;

    std::size_t size() const { return sorted_nonzero_c.size(); }
    double cdf(double c) const;

    /// The c* with cdf(c) > p exactly when c > c*. Returns 0 below the lower
    /// clamp and +infinity at or above the upper clamp.
    double exceedance_threshold(double p) const;

    friend bool operator==(const BranchDistribution&, const BranchDistribution&) = default;
};

struct IcDistributionTable {
    PerBranch<BranchDistribution> branches;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::int64_t burn_in = 0;
    std::int64_t spacing = 0;

    const BranchDistribution& operator[](DirectionPair d) const { return branches[d]; }

    friend bool operator==(const IcDistributionTable&, const IcDistributionTable&) = default;
};

/// Full chart states sampled from a long in-control run, used to start
/// simulated runs in the stationary regime.
struct SteadyStateReservoir {
    std::vector<AdaptiveChartState> snapshots;
    std::int64_t burn_in = 0;
    std::int64_t spacing = 0;

    friend bool operator==(const SteadyStateReservoir&, const SteadyStateReservoir&) = default;
};

struct IcEstimationOptions {
    std::int64_t burn_in = 100'000;
    /// Nonzero values kept per branch (M).
    std::int64_t samples = 100'000;
    /// Steps between recordings of the branch statistics.
    std::int64_t spacing = 25;
    std::int64_t reservoir_size = 5'000;
    std::int64_t reservoir_spacing = 500;
    std::uint64_t seed = 1;
};

struct IcCalibration {
    IcDistributionTable tables;
    SteadyStateReservoir reservoir;
};

/// Runs one long standard-normal stream through the eight-branch engine and
/// collects the per-branch tables and the reservoir. Throws if a branch never
/// leaves zero or never returns to it.
IcCalibration estimate_ic_tables(const ChartConfig& cfg, const IcEstimationOptions& options);

/// Empirical CDF of a positive branch statistic, in [1/(M+1), M/(M+1)].
double empirical_cdf(const IcDistributionTable& table, DirectionPair dir, double c);

/// Sorts and removes near-duplicates (relative gap below eps).
void sort_and_dedupe(std::vector<double>& values, double eps = 1e-12);

}  // namespace acusum
