#include "acusum/calibration.hpp"

#include <cstdio>
#include <stdexcept>

namespace acusum {

namespace {

constexpr std::int64_t kPilotReps = 400;

// Starting points for the bracket search; anything in the right order of
// magnitude works.
double initial_guess(const BenchmarkSpec& spec) {
    switch (spec.kind) {
    case BenchmarkKind::WuCusum:
        return 5.0;
    case BenchmarkKind::Glrt:
        return 8.0;
    case BenchmarkKind::EwmaGlrt:
        return 0.5 * spec.lambda;
    }
    return 1.0;
}

SimulationOptions pilot_options(std::uint64_t seed, unsigned threads) {
    SimulationOptions pilot;
    pilot.reps = kPilotReps;
    pilot.seed = derive_seed(seed, {0x9170ULL});
    pilot.threads = threads;
    return pilot;
}

}  // namespace

CalibrationResult calibrate_control_limit(std::shared_ptr<const IcDistributionTable> tables,
                                          std::shared_ptr<const SteadyStateReservoir> reservoir,
                                          const ChartConfig& cfg, double target_arl0, std::int64_t reps, double tol,
                                          double h_lo, double h_hi, std::uint64_t seed, unsigned threads) {
    if (reps < 5000) throw std::invalid_argument("calibrate_control_limit: reps must be >= 5000");
    if (!reservoir) throw std::invalid_argument("calibrate_control_limit: a steady-state reservoir is required");
    const PrimaryChart chart(cfg, std::move(tables), std::move(reservoir));
    SimulationOptions opt;
    opt.reps = reps;
    opt.seed = seed;
    opt.threads = threads;
    return calibrate_limit(chart, target_arl0, tol, h_lo, h_hi, opt);
}

CalibrationResult calibrate_control_limit_auto(std::shared_ptr<const IcDistributionTable> tables,
                                               std::shared_ptr<const SteadyStateReservoir> reservoir,
                                               const ChartConfig& cfg, double target_arl0, std::int64_t reps,
                                               double tol, std::uint64_t seed, unsigned threads) {
    if (!reservoir) throw std::invalid_argument("calibrate_control_limit: a steady-state reservoir is required");
    const PrimaryChart chart(cfg, tables, reservoir);
    const auto [lo, hi] = find_bracket(chart, target_arl0, 6.0, pilot_options(seed, threads));
    return calibrate_control_limit(std::move(tables), std::move(reservoir), cfg, target_arl0, reps, tol, lo, hi, seed,
                                   threads);
}

BenchmarkSpec BenchmarkSpec::glrt(std::size_t window, double gamma) {
    BenchmarkSpec s;
    s.kind = BenchmarkKind::Glrt;
    s.window = window;
    s.gamma = gamma;
    return s;
}

BenchmarkSpec BenchmarkSpec::ewma_glrt(double lambda) {
    BenchmarkSpec s;
    s.kind = BenchmarkKind::EwmaGlrt;
    s.lambda = lambda;
    return s;
}

BenchmarkSpec BenchmarkSpec::parse(const std::string& key) {
    if (key == "Wu_CUSUM") return wu_cusum();
    if (key == "GLRT") return glrt();
    const std::string prefix = "EWMA_GLRT_";
    if (key.starts_with(prefix)) {
        std::size_t used = 0;
        const std::string rest = key.substr(prefix.size());
        double lambda = 0.0;
        try {
            lambda = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == rest.size() && used > 0) return ewma_glrt(lambda);
    }
    throw std::invalid_argument("unknown benchmark '" + key + "' (expected Wu_CUSUM, GLRT or EWMA_GLRT_<lambda>)");
}

std::string BenchmarkSpec::key() const {
    switch (kind) {
    case BenchmarkKind::WuCusum:
        return "Wu_CUSUM";
    case BenchmarkKind::Glrt:
        return "GLRT";
    case BenchmarkKind::EwmaGlrt:
        break;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "EWMA_GLRT_%g", lambda);
    return buf;
}

AnyChart make_chart(const BenchmarkSpec& spec) {
    switch (spec.kind) {
    case BenchmarkKind::WuCusum:
        return WuChart(spec.wu);
    case BenchmarkKind::Glrt:
        return GlrtChart(spec.window, spec.gamma);
    case BenchmarkKind::EwmaGlrt:
        break;
    }
    return EwmaGlrtChart(spec.lambda);
}

CalibrationResult calibrate_benchmark(const BenchmarkSpec& spec, double target_arl0, std::int64_t reps, double tol,
                                      std::uint64_t seed, unsigned threads,
                                      std::optional<std::pair<double, double>> bracket) {
    if (reps < 1000) throw std::invalid_argument("calibrate_benchmark: reps must be >= 1000");
    SimulationOptions opt;
    opt.reps = reps;
    opt.seed = seed;
    opt.threads = threads;
    return std::visit(
        [&](const auto& chart) {
            const auto [lo, hi] =
                bracket ? *bracket : find_bracket(chart, target_arl0, initial_guess(spec), pilot_options(seed, threads));
            return calibrate_limit(chart, target_arl0, tol, lo, hi, opt);
        },
        make_chart(spec));
}

}  // namespace acusum
