#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace acusum {

/// Direction of a hypothesised shift in one parameter.
enum class Shift : std::uint8_t { Up, Down, None };

/// One of the eight non-trivial (mean, variance) shift hypotheses.
///
/// (None, None) cannot be constructed. The canonical order is
/// (+,+), (+,-), (+,.), (-,+), (-,-), (-,.), (.,+), (.,-) and index()
/// returns the position in that order.
class DirectionPair {
public:
    static constexpr std::size_t kCount = 8;

    /// Throws std::invalid_argument for (None, None).
    static DirectionPair make(Shift mean_dir, Shift var_dir);
    static constexpr DirectionPair from_index(std::size_t i) { return DirectionPair(static_cast<std::uint8_t>(i)); }
    /// Parses "(+,-)" style names. Throws std::invalid_argument on anything else.
    static DirectionPair parse(std::string_view name);

    constexpr std::size_t index() const { return index_; }
    constexpr Shift mean_dir() const { return static_cast<Shift>(index_ / 3); }
    constexpr Shift var_dir() const { return static_cast<Shift>(index_ % 3); }
    std::string_view name() const;

    friend constexpr bool operator==(DirectionPair a, DirectionPair b) { return a.index_ == b.index_; }
    friend constexpr auto operator<=>(DirectionPair a, DirectionPair b) { return a.index_ <=> b.index_; }

private:
    // index = 3 * mean + var with Up=0, Down=1, None=2; index 8 would be (None, None).
    explicit constexpr DirectionPair(std::uint8_t i) : index_(i) {}
    std::uint8_t index_;
};

inline constexpr std::array<DirectionPair, DirectionPair::kCount> kAllDirections = {
    DirectionPair::from_index(0), DirectionPair::from_index(1), DirectionPair::from_index(2),
    DirectionPair::from_index(3), DirectionPair::from_index(4), DirectionPair::from_index(5),
    DirectionPair::from_index(6), DirectionPair::from_index(7),
};

/// Fixed-size map from DirectionPair to T.
template <class T>
class PerBranch {
public:
    PerBranch() = default;
    explicit PerBranch(const T& fill) { values_.fill(fill); }

    T& operator[](DirectionPair d) { return values_[d.index()]; }
    const T& operator[](DirectionPair d) const { return values_[d.index()]; }

    auto begin() { return values_.begin(); }
    auto end() { return values_.end(); }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(const PerBranch&, const PerBranch&) = default;

private:
    std::array<T, DirectionPair::kCount> values_{};
};

/// Prior and clamp constants of the adaptive chart plus its control limit.
struct ChartConfig {
    double s = 1.0;
    double eta = 4.0;
    double rho_mu = 0.25;
    double alpha_up = 12.0;
    double alpha_down = 16.3;
    double beta = 15.0;
    double rho_theta_up = 1.05;
    double rho_theta_down = static_cast<double>(20.0L / 21.0L);  // 1 / 1.05
    /// Unset until calibrated.
    std::optional<double> control_limit_h;
    double arl0_target = 500.0;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    /// The control limit, or std::logic_error if the config is uncalibrated.
    double h() const;

    /// Hex digest of the constants that shape the in-control distributions
    /// (everything except control_limit_h and arl0_target).
    std::string hash() const;

    friend bool operator==(const ChartConfig&, const ChartConfig&) = default;
};

void to_json(nlohmann::json& j, const ChartConfig& cfg);
/// Rejects unknown fields and validates the result.
void from_json(const nlohmann::json& j, ChartConfig& cfg);

ChartConfig load_config(const std::string& path);

/// Recursive state of a single branch statistic.
struct BranchState {
    double c = 0.0;
    std::int64_t n = 0;
    double sum_s = 0.0;
    double sum_q = 0.0;
    std::int64_t tau_hat = 0;
    double mu_hat = 0.0;
    double theta_hat = 1.0;

    friend bool operator==(const BranchState&, const BranchState&) = default;
};

void to_json(nlohmann::json& j, const BranchState& b);
void from_json(const nlohmann::json& j, BranchState& b);

struct Observation {
    std::int64_t t = 0;
    double x = 0.0;
};

/// In-control mean and standard deviation of the raw process.
struct PhaseIBaseline {
    double mu0 = 0.0;
    double sigma0 = 1.0;
};

/// (raw - mu0) / sigma0. Throws on non-finite input or a non-positive sigma0.
double standardize(double raw, const PhaseIBaseline& baseline);

/// Sample mean and n-1 standard deviation. Needs two or more values with
/// nonzero spread.
PhaseIBaseline estimate_baseline(std::span<const double> phase1);

}  // namespace acusum
