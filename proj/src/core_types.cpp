#include "acusum/core_types.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

namespace acusum {

namespace {

constexpr std::array<std::string_view, DirectionPair::kCount> kNames = {
    "(+,+)", "(+,-)", "(+,.)", "(-,+)", "(-,-)", "(-,.)", "(.,+)", "(.,-)",
};

const std::set<std::string> kConfigFields = {
    "s", "eta", "rho_mu", "alpha_up", "alpha_down", "beta",
    "rho_theta_up", "rho_theta_down", "control_limit_h", "arl0_target",
};

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ChartConfig: ") + what);
}

}  // namespace

DirectionPair DirectionPair::make(Shift mean_dir, Shift var_dir) {
    if (mean_dir == Shift::None && var_dir == Shift::None)
        throw std::invalid_argument("DirectionPair: (None, None) is the in-control case");
    return DirectionPair(static_cast<std::uint8_t>(3 * static_cast<int>(mean_dir) + static_cast<int>(var_dir)));
}

DirectionPair DirectionPair::parse(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return from_index(i);
    throw std::invalid_argument("DirectionPair: unknown name '" + std::string(name) + "'");
}

std::string_view DirectionPair::name() const { return kNames[index_]; }

void ChartConfig::validate() const {
    require(std::isfinite(s) && s > 0, "s must be > 0");
    require(std::isfinite(eta) && eta > 0, "eta must be > 0");
    require(std::isfinite(rho_mu) && rho_mu > 0, "rho_mu must be > 0");
    require(std::isfinite(alpha_up) && alpha_up > 1, "alpha_up must be > 1");
    require(std::isfinite(alpha_down) && alpha_down > 1, "alpha_down must be > 1");
    require(std::isfinite(beta) && beta > 0, "beta must be > 0");
    require(std::isfinite(rho_theta_up) && rho_theta_up > 1, "rho_theta_up must be > 1");
    require(std::isfinite(rho_theta_down) && rho_theta_down > 0 && rho_theta_down < 1,
            "rho_theta_down must lie in (0, 1)");
    require(std::isfinite(arl0_target) && arl0_target > 0, "arl0_target must be > 0");
    if (control_limit_h)
        require(std::isfinite(*control_limit_h) && *control_limit_h > 0, "control_limit_h must be > 0");
}

double ChartConfig::h() const {
    if (!control_limit_h) throw std::logic_error("ChartConfig: control limit has not been calibrated");
    return *control_limit_h;
}

std::string ChartConfig::hash() const {
    // FNV-1a over the bit patterns, so that any change to a constant is detected.
    std::uint64_t state = 0xcbf29ce484222325ULL;
    for (double v : {s, eta, rho_mu, alpha_up, alpha_down, beta, rho_theta_up, rho_theta_down}) {
        std::uint64_t bits = 0;
        static_assert(sizeof bits == sizeof v);
        std::memcpy(&bits, &v, sizeof v);
        for (int i = 0; i < 8; ++i) {
            state ^= (bits >> (8 * i)) & 0xffU;
            state *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state));
    return buf;
}

void to_json(nlohmann::json& j, const ChartConfig& cfg) {
    j = nlohmann::json{
        {"s", cfg.s},
        {"eta", cfg.eta},
        {"rho_mu", cfg.rho_mu},
        {"alpha_up", cfg.alpha_up},
        {"alpha_down", cfg.alpha_down},
        {"beta", cfg.beta},
        {"rho_theta_up", cfg.rho_theta_up},
        {"rho_theta_down", cfg.rho_theta_down},
        {"control_limit_h", cfg.control_limit_h ? nlohmann::json(*cfg.control_limit_h) : nlohmann::json(nullptr)},
        {"arl0_target", cfg.arl0_target},
    };
}

void from_json(const nlohmann::json& j, ChartConfig& cfg) {
    if (!j.is_object()) throw std::invalid_argument("ChartConfig: expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kConfigFields.contains(key)) throw std::invalid_argument("ChartConfig: unknown field '" + key + "'");

    ChartConfig out;
    auto read = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = j.at(key).get<double>();
    };
    read("s", out.s);
    read("eta", out.eta);
    read("rho_mu", out.rho_mu);
    read("alpha_up", out.alpha_up);
    read("alpha_down", out.alpha_down);
    read("beta", out.beta);
    read("rho_theta_up", out.rho_theta_up);
    read("rho_theta_down", out.rho_theta_down);
    read("arl0_target", out.arl0_target);
    if (j.contains("control_limit_h") && !j.at("control_limit_h").is_null())
        out.control_limit_h = j.at("control_limit_h").get<double>();
    out.validate();
    cfg = out;
}

ChartConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return nlohmann::json::parse(in).get<ChartConfig>();
}

void to_json(nlohmann::json& j, const BranchState& b) {
    j = nlohmann::json{
        {"c", b.c},         {"n", b.n},          {"sum_s", b.sum_s},         {"sum_q", b.sum_q},
        {"tau_hat", b.tau_hat}, {"mu_hat", b.mu_hat}, {"theta_hat", b.theta_hat},
    };
}

void from_json(const nlohmann::json& j, BranchState& b) {
    j.at("c").get_to(b.c);
    j.at("n").get_to(b.n);
    j.at("sum_s").get_to(b.sum_s);
    j.at("sum_q").get_to(b.sum_q);
    j.at("tau_hat").get_to(b.tau_hat);
    j.at("mu_hat").get_to(b.mu_hat);
    j.at("theta_hat").get_to(b.theta_hat);
}

double standardize(double raw, const PhaseIBaseline& baseline) {
    if (!std::isfinite(raw)) throw std::invalid_argument("standardize: non-finite observation");
    if (!(baseline.sigma0 > 0) || !std::isfinite(baseline.sigma0) || !std::isfinite(baseline.mu0))
        throw std::invalid_argument("standardize: baseline needs finite mu0 and sigma0 > 0");
    return (raw - baseline.mu0) / baseline.sigma0;
}

PhaseIBaseline estimate_baseline(std::span<const double> phase1) {
    if (phase1.size() < 2) throw std::invalid_argument("estimate_baseline: need at least two observations");
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double x : phase1) {
        if (!std::isfinite(x)) throw std::invalid_argument("estimate_baseline: non-finite observation");
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    }
    const double var = m2 / static_cast<double>(k - 1);
    if (!(var > 0)) throw std::invalid_argument("estimate_baseline: phase I data has zero variance");
    return {mean, std::sqrt(var)};
}

}  // namespace acusum
