#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acusum/charts.hpp"
#include "acusum/parallel.hpp"
#include "acusum/rng.hpp"

namespace acusum {

inline constexpr std::int64_t kRunawayCap = 1'000'000;

/// In-control N(0,1) up to and including tau, N(mu1, sigma1^2) afterwards.
struct Scenario {
    double mu1 = 0.0;
    double sigma1 = 1.0;
    std::int64_t tau = 50;
    std::string label;

    static Scenario make(double mu1, double sigma1, std::int64_t tau = 50);
    bool in_control() const { return mu1 == 0.0 && sigma1 == 1.0; }
    /// Stable identifier derived from (mu1, sigma1, tau), used for seeding.
    std::uint64_t id() const;
};

struct RunLengthRecord {
    std::int64_t signal_time = 0;
    std::int64_t delay = 0;
    /// Runs thrown away because they signalled at or before tau.
    std::int64_t discarded_count = 0;
    /// Primary chart only: branches above the limit at the signal.
    std::vector<DirectionPair> triggering;
    bool runaway = false;
};

struct ArlEstimate {
    double mean_delay = 0.0;
    double std_error = 0.0;
    std::int64_t reps = 0;
};

struct ArlResult {
    ArlEstimate estimate;
    std::int64_t runaway_count = 0;
    std::int64_t discarded_total = 0;
    std::vector<RunLengthRecord> records;  // only when requested
};

struct SimulationOptions {
    std::int64_t reps = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::int64_t max_steps = kRunawayCap;
    bool keep_records = false;
};

/// Mean and plain standard error (sample sd / sqrt(n)); summation in index order.
ArlEstimate summarize(const std::vector<double>& values);

namespace detail {

inline constexpr std::int64_t kMaxAttempts = 100'000;

template <class C>
void fill_triggering(const C& chart, double h, RunLengthRecord& rec) {
    if constexpr (requires { chart.triggering(h); }) rec.triggering = chart.triggering(h);
}

}  // namespace detail

/// One conditioned run: signals at or before tau discard the run, which is
/// restarted on a fresh substream. `chart` is used as scratch space.
template <MonitoringChart C>
RunLengthRecord simulate_run(C& chart, const Scenario& scenario, double h, std::uint64_t seed, std::uint64_t rep,
                             std::int64_t max_steps = kRunawayCap) {
    if (!(scenario.sigma1 > 0)) throw std::invalid_argument("simulate_run: sigma1 must be > 0");
    RunLengthRecord rec;
    chart.set_level(h);
    for (std::int64_t attempt = 0; attempt < detail::kMaxAttempts; ++attempt) {
        const std::uint64_t run_seed = derive_seed(seed, {scenario.id(), rep, static_cast<std::uint64_t>(attempt)});
        NormalStream z(run_seed);
        chart.restart(derive_seed(run_seed, {0x5eedULL}));
        std::int64_t t = 1;
        for (; t <= max_steps; ++t) {
            const double e = z();
            const double x = t <= scenario.tau ? e : scenario.mu1 + scenario.sigma1 * e;
            if (chart.step(x) && chart.statistic() > h) break;
        }
        if (t > max_steps) {
            rec.runaway = true;
            rec.signal_time = max_steps;
            rec.delay = max_steps - scenario.tau;
            return rec;
        }
        if (t <= scenario.tau) {
            ++rec.discarded_count;
            continue;
        }
        rec.signal_time = t;
        rec.delay = t - scenario.tau;
        detail::fill_triggering(chart, h, rec);
        return rec;
    }
    throw std::runtime_error("simulate_run: every attempt signalled before the change-point");
}

/// Conditioned ARL over opt.reps replications. Deterministic for a given
/// seed whatever opt.threads is.
template <MonitoringChart C>
ArlResult estimate_arl(const C& prototype, const Scenario& scenario, double h, const SimulationOptions& opt) {
    if (opt.reps < 1) throw std::invalid_argument("estimate_arl: reps must be >= 1");
    std::vector<RunLengthRecord> records(static_cast<std::size_t>(opt.reps));
    parallel_for(records.size(), opt.threads, [&](std::size_t i) {
        C chart = prototype;
        records[i] = simulate_run(chart, scenario, h, opt.seed, i, opt.max_steps);
    });
    ArlResult out;
    std::vector<double> delays;
    delays.reserve(records.size());
    for (const auto& r : records) {
        out.discarded_total += r.discarded_count;
        if (r.runaway)
            ++out.runaway_count;
        else
            delays.push_back(static_cast<double>(r.delay));
    }
    out.estimate = summarize(delays);
    if (opt.keep_records) out.records = std::move(records);
    return out;
}

// ---------------------------------------------------------------------------
// Calibration under common random numbers

/// Record-breaking values of a chart's statistic along one in-control run:
/// (value, time) pairs with strictly increasing values, starting above the
/// floor level. The run length for any limit h between the floor and the
/// ceiling is the time of the first record above h.
struct RunProfile {
    std::vector<std::pair<double, std::int64_t>> records;
    std::int64_t length = 0;

    std::int64_t run_length(double h) const;
};

/// Stream identifier reserved for in-control calibration runs.
inline constexpr std::uint64_t kCalibrationStream = 0xca11b4a7e0000000ULL;

template <MonitoringChart C>
std::vector<RunProfile> simulate_profiles(const C& prototype, double floor, double ceiling,
                                          const SimulationOptions& opt) {
    std::vector<RunProfile> profiles(static_cast<std::size_t>(opt.reps));
    parallel_for(profiles.size(), opt.threads, [&](std::size_t i) {
        C chart = prototype;
        const std::uint64_t run_seed = derive_seed(opt.seed, {kCalibrationStream, i});
        NormalStream z(run_seed);
        chart.restart(derive_seed(run_seed, {0x5eedULL}));
        double level = floor;
        chart.set_level(level);
        RunProfile& p = profiles[i];
        std::int64_t t = 1;
        for (; t <= opt.max_steps; ++t) {
            if (!chart.step(z())) continue;
            const double s = chart.statistic();
            if (s <= level) continue;
            p.records.emplace_back(s, t);
            if (s > ceiling) break;
            level = s;
            chart.set_level(level);
        }
        p.length = std::min(t, opt.max_steps);
    });
    return profiles;
}

/// Mean in-control run length at limit h from a set of profiles.
double mean_run_length(const std::vector<RunProfile>& profiles, double h);
ArlEstimate run_length_summary(const std::vector<RunProfile>& profiles, double h);

struct CalibrationResult {
    double h = 0.0;
    ArlEstimate arl;
    int iterations = 0;
};

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, double best_h) : std::runtime_error(what), best_h_(best_h) {}
    double best_h() const { return best_h_; }

private:
    double best_h_;
};

/// Bisection on h over a fixed set of in-control profiles. Returns the first
/// h whose estimated ARL is within tol * target of target.
CalibrationResult bisect_limit(const std::vector<RunProfile>& profiles, double target, double tol, double h_lo,
                               double h_hi, int max_iterations = 60);

/// Simulates opt.reps in-control runs (common random numbers across h) and
/// bisects for the limit. Throws CalibrationError naming both endpoint ARLs
/// when [h_lo, h_hi] does not bracket the target.
template <MonitoringChart C>
CalibrationResult calibrate_limit(const C& prototype, double target, double tol, double h_lo, double h_hi,
                                  const SimulationOptions& opt) {
    if (!(h_lo < h_hi)) throw std::invalid_argument("calibrate_limit: need h_lo < h_hi");
    if (!(target > 0) || !(tol > 0)) throw std::invalid_argument("calibrate_limit: target and tol must be > 0");
    const auto profiles = simulate_profiles(prototype, h_lo, h_hi, opt);
    return bisect_limit(profiles, target, tol, h_lo, h_hi);
}

/// Finds [h_lo, h_hi] whose pilot ARLs sit around 0.8 and 1.25 times the
/// target, starting from h_guess and growing or shrinking by `growth`.
template <MonitoringChart C>
std::pair<double, double> find_bracket(const C& prototype, double target, double h_guess, SimulationOptions pilot,
                                       double growth = 1.15) {
    if (!(h_guess > 0) || !(growth > 1)) throw std::invalid_argument("find_bracket: need h_guess > 0, growth > 1");
    auto pilot_arl = [&](double h) { return mean_run_length(simulate_profiles(prototype, h, h, pilot), h); };
    double lo = h_guess;
    double hi = h_guess;
    for (int i = 0; pilot_arl(lo) > 0.8 * target; ++i) {
        if (i == 60) throw std::runtime_error("find_bracket: could not find a lower limit");
        lo /= growth;
    }
    for (int i = 0; pilot_arl(hi) < 1.25 * target; ++i) {
        if (i == 60) throw std::runtime_error("find_bracket: could not find an upper limit");
        hi *= growth;
    }
    // Narrow the bracket on one pilot profile set.
    const auto profiles = simulate_profiles(prototype, lo, hi, pilot);
    auto crossing = [&](double level) {
        double a = lo;
        double b = hi;
        for (int i = 0; i < 50; ++i) {
            const double mid = 0.5 * (a + b);
            (mean_run_length(profiles, mid) < level ? a : b) = mid;
        }
        return std::pair{a, b};
    };
    return {crossing(0.8 * target).first, crossing(1.25 * target).second};
}

}  // namespace acusum
