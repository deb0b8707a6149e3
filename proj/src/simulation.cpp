#include "acusum/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

namespace acusum {

namespace {

std::uint64_t bits_of(double v) {
    std::uint64_t b = 0;
    std::memcpy(&b, &v, sizeof v);
    return b;
}

}  // namespace

Scenario Scenario::make(double mu1, double sigma1, std::int64_t tau) {
    Scenario s;
    s.mu1 = mu1;
    s.sigma1 = sigma1;
    s.tau = tau;
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%g, %g)", mu1, sigma1);
    s.label = buf;
    return s;
}

std::uint64_t Scenario::id() const {
    return derive_seed(bits_of(mu1), {bits_of(sigma1), static_cast<std::uint64_t>(tau)});
}

ArlEstimate summarize(const std::vector<double>& values) {
    ArlEstimate e;
    e.reps = static_cast<std::int64_t>(values.size());
    if (values.empty()) {
        e.mean_delay = std::nan("");
        e.std_error = std::nan("");
        return e;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    e.mean_delay = sum / n;
    if (values.size() < 2) {
        e.std_error = std::nan("");
        return e;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean_delay) * (v - e.mean_delay);
    e.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return e;
}

std::int64_t RunProfile::run_length(double h) const {
    const auto it = std::find_if(records.begin(), records.end(), [h](const auto& r) { return r.first > h; });
    return it == records.end() ? length : it->second;
}

double mean_run_length(const std::vector<RunProfile>& profiles, double h) {
    double sum = 0.0;
    for (const auto& p : profiles) sum += static_cast<double>(p.run_length(h));
    return profiles.empty() ? std::nan("") : sum / static_cast<double>(profiles.size());
}

ArlEstimate run_length_summary(const std::vector<RunProfile>& profiles, double h) {
    std::vector<double> lengths;
    lengths.reserve(profiles.size());
    for (const auto& p : profiles) lengths.push_back(static_cast<double>(p.run_length(h)));
    return summarize(lengths);
}

CalibrationResult bisect_limit(const std::vector<RunProfile>& profiles, double target, double tol, double h_lo,
                               double h_hi, int max_iterations) {
    const double arl_lo = mean_run_length(profiles, h_lo);
    const double arl_hi = mean_run_length(profiles, h_hi);
    if (!(arl_lo < target && target < arl_hi)) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "calibration bracket [%g, %g] does not contain the target ARL %g: ARL(h_lo) = %.2f, "
                      "ARL(h_hi) = %.2f",
                      h_lo, h_hi, target, arl_lo, arl_hi);
        throw CalibrationError(buf, std::abs(arl_lo - target) < std::abs(arl_hi - target) ? h_lo : h_hi);
    }
    double lo = h_lo;
    double hi = h_hi;
    double best = h_lo;
    double best_gap = std::abs(arl_lo - target);
    for (int it = 1; it <= max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double arl = mean_run_length(profiles, mid);
        const double gap = std::abs(arl - target);
        if (gap < best_gap) {
            best = mid;
            best_gap = gap;
        }
        if (gap <= tol * target) return {mid, run_length_summary(profiles, mid), it};
        (arl < target ? lo : hi) = mid;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "calibration did not reach the target ARL %g within %d iterations (best h = %.6f)",
                  target, max_iterations, best);
    throw CalibrationError(buf, best);
}

}  // namespace acusum
