#include "acusum/ic_tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acusum/rng.hpp"

namespace acusum {

double BranchDistribution::cdf(double c) const {
    const auto& xs = sorted_nonzero_c;
    if (xs.empty()) throw std::logic_error("BranchDistribution: empty table");
    const double denom = static_cast<double>(xs.size()) + 1.0;
    if (c <= xs.front()) return 1.0 / denom;
    if (c >= xs.back()) return static_cast<double>(xs.size()) / denom;
    // xs[i-1] <= c < xs[i], ranks are 1-based.
    const auto it = std::upper_bound(xs.begin(), xs.end(), c);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double lo = xs[i - 1];
    const double hi = xs[i];
    return (static_cast<double>(i) + (c - lo) / (hi - lo)) / denom;
}

double BranchDistribution::exceedance_threshold(double p) const {
    const auto& xs = sorted_nonzero_c;
    if (xs.empty()) throw std::logic_error("BranchDistribution: empty table");
    const double m = static_cast<double>(xs.size());
    const double rank = p * (m + 1.0);
    if (rank < 1.0) return 0.0;
    if (rank >= m) return std::numeric_limits<double>::infinity();
    const auto i = static_cast<std::size_t>(std::floor(rank));
    const double frac = rank - static_cast<double>(i);
    return xs[i - 1] + frac * (xs[i] - xs[i - 1]);
}

void sort_and_dedupe(std::vector<double>& values, double eps) {
    std::sort(values.begin(), values.end());
    auto close = [eps](double a, double b) { return b - a <= eps * std::max(1.0, std::abs(a)); };
    values.erase(std::unique(values.begin(), values.end(), close), values.end());
}

IcCalibration estimate_ic_tables(const ChartConfig& cfg, const IcEstimationOptions& opt) {
    cfg.validate();
    if (opt.burn_in < 100'000) throw std::invalid_argument("estimate_ic_tables: burn_in must be >= 1e5");
    if (opt.samples < 10'000) throw std::invalid_argument("estimate_ic_tables: samples must be >= 1e4");
    if (opt.spacing < 1 || opt.reservoir_spacing < 1)
        throw std::invalid_argument("estimate_ic_tables: spacings must be >= 1");
    if (opt.reservoir_size < 0) throw std::invalid_argument("estimate_ic_tables: negative reservoir size");

    NormalStream normal(derive_seed(opt.seed, {0x1c7ab1e5ULL}));
    AdaptiveChartState state = AdaptiveChartState::cold(cfg);
    for (std::int64_t i = 0; i < opt.burn_in; ++i) chart_step(state, normal(), cfg);

    IcCalibration out;
    auto& tables = out.tables;
    tables.config_hash = cfg.hash();
    tables.seed = opt.seed;
    tables.burn_in = opt.burn_in;
    tables.spacing = opt.spacing;
    auto& reservoir = out.reservoir;
    reservoir.burn_in = opt.burn_in;
    reservoir.spacing = opt.reservoir_spacing;
    reservoir.snapshots.reserve(static_cast<std::size_t>(opt.reservoir_size));

    const auto wanted = static_cast<std::size_t>(opt.samples);
    PerBranch<std::int64_t> zeros(0);
    for (auto& b : tables.branches) b.sorted_nonzero_c.reserve(wanted);

    // A branch that has not filled after this many recordings is treated as degenerate.
    const std::int64_t max_recordings = 1000 * opt.samples;
    std::int64_t recordings = 0;
    auto tables_full = [&] {
        return std::all_of(tables.branches.begin(), tables.branches.end(),
                           [&](const BranchDistribution& b) { return b.sorted_nonzero_c.size() >= wanted; });
    };
    bool full = false;
    for (std::int64_t step = 1; !full || std::ssize(reservoir.snapshots) < opt.reservoir_size; ++step) {
        chart_step(state, normal(), cfg);
        if (!full && step % opt.spacing == 0) {
            for (DirectionPair d : kAllDirections) {
                auto& b = tables.branches[d];
                if (b.sorted_nonzero_c.size() >= wanted) continue;
                ++b.recorded;
                const double c = state.branches[d].c;
                if (c > 0)
                    b.sorted_nonzero_c.push_back(c);
                else
                    ++zeros[d];
            }
            full = tables_full();
            if (++recordings > max_recordings)
                throw std::runtime_error("estimate_ic_tables: a branch statistic is (almost) always zero");
        }
        if (step % opt.reservoir_spacing == 0 && std::ssize(reservoir.snapshots) < opt.reservoir_size)
            reservoir.snapshots.push_back(state);
    }

    for (DirectionPair d : kAllDirections) {
        auto& b = tables.branches[d];
        b.zero_fraction = static_cast<double>(zeros[d]) / static_cast<double>(b.recorded);
        if (!(b.zero_fraction > 0.0 && b.zero_fraction < 1.0))
            throw std::runtime_error("estimate_ic_tables: branch " + std::string(d.name()) +
                                     " never reset to zero during the recording period");
        sort_and_dedupe(b.sorted_nonzero_c);
    }
    return out;
}

double empirical_cdf(const IcDistributionTable& table, DirectionPair dir, double c) { return table[dir].cdf(c); }

}  // namespace acusum
