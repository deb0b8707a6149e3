#include <doctest.h>

#include <cmath>
#include <random>

#include "acusum/adaptive_cusum.hpp"
#include "oracles.hpp"

using namespace acusum;

namespace {

const DirectionPair kUpUp = DirectionPair::parse("(+,+)");
const DirectionPair kNoneDown = DirectionPair::parse("(.,-)");

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("adaptive_cusum") {

TEST_CASE("mean estimate examples") {
    const ChartConfig cfg;
    const auto up = DirectionPair::parse("(+,.)");
    const auto down = DirectionPair::parse("(-,+)");
    CHECK(update_mean_estimate(up, 0, 0.0, cfg) == doctest::Approx(0.25));
    CHECK(update_mean_estimate(up, 4, 6.0, cfg) == doctest::Approx(0.875));
    CHECK(update_mean_estimate(up, 4, -2.0, cfg) == doctest::Approx(0.25));
    CHECK(update_mean_estimate(down, 4, -6.0, cfg) == doctest::Approx(-0.875));
    CHECK(update_mean_estimate(down, 0, 0.0, cfg) == doctest::Approx(-0.25));
    CHECK(update_mean_estimate(kNoneDown, 10, 50.0, cfg) == 0.0);
}

TEST_CASE("variance estimate examples") {
    const ChartConfig cfg;
    const auto down = DirectionPair::parse("(+,-)");
    CHECK(update_var_estimate(kUpUp, 0, 0.0, cfg) == doctest::Approx(15.0 / 11.0));
    CHECK(update_var_estimate(kUpUp, 20, 40.0, cfg) == doctest::Approx(35.0 / 21.0));
    CHECK(update_var_estimate(kUpUp, 100, 50.0, cfg) == doctest::Approx(1.05));
    CHECK(update_var_estimate(down, 100, 30.0, cfg) == doctest::Approx(30.0 / 65.3));
    CHECK(update_var_estimate(down, 0, 0.0, cfg) == doctest::Approx(1.0 / 1.05));
    CHECK(update_var_estimate(DirectionPair::parse("(+,.)"), 3, 9.0, cfg) == 1.0);
}

TEST_CASE("classic CUSUM examples") {
    CHECK(classic_cusum_step(0.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK(classic_cusum_step(0.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(classic_cusum_step(0.5, -2.0, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(classic_cusum_step(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(classic_cusum_step(-1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("branch step examples from a cold start") {
    const ChartConfig cfg;
    const BranchState cold = cold_branch(kUpUp, cfg);
    CHECK(cold.c == 0.0);
    CHECK(cold.n == 0);
    CHECK(cold.tau_hat == 0);

    const BranchState a = branch_step(cold, kUpUp, std::nullopt, 1.0, 1, cfg);
    CHECK(a.mu_hat == doctest::Approx(0.25));
    CHECK(a.theta_hat == doctest::Approx(15.0 / 11.0));
    CHECK(a.c == doctest::Approx(0.5 - 0.20625 - 0.5 * std::log(15.0 / 11.0)));
    CHECK(a.c == doctest::Approx(0.138673).epsilon(1e-6));
    CHECK(a.tau_hat == 0);

    const BranchState b = branch_step(cold, kUpUp, std::nullopt, 0.0, 1, cfg);
    CHECK(b.c == 0.0);
    CHECK(b.tau_hat == 1);

    // The increment is the classic CUSUM kernel at the current estimates.
    const BranchState c = branch_step(a, kUpUp, 1.0, 2.0, 2, cfg);
    CHECK(c.c == doctest::Approx(classic_cusum_step(a.c, 2.0, c.mu_hat, c.theta_hat)).epsilon(1e-15));
    CHECK(c.n == 1);
    CHECK(c.sum_s == 1.0);
    CHECK(c.mu_hat == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("chart step examples") {
    const ChartConfig cfg;
    AdaptiveChartState s = AdaptiveChartState::cold(cfg);
    for (const auto& b : s.branches) {
        CHECK(b.c == 0.0);
        CHECK(b.n == 0);
        CHECK(b.sum_s == 0.0);
        CHECK(b.sum_q == 0.0);
        CHECK(b.tau_hat == 0);
    }
    AdaptiveChartState zero = s;
    chart_step(zero, 0.0, cfg);
    CHECK(zero.t == 1);
    CHECK(zero.branches[kNoneDown].c == doctest::Approx(-0.5 * std::log(1.0 / 1.05)));
    CHECK(zero.branches[kNoneDown].c == doctest::Approx(0.024395).epsilon(1e-5));
    CHECK(zero.branches[kUpUp].c == 0.0);

    chart_step(s, 1.0, cfg);
    CHECK(s.t == 1);
    CHECK(s.branches[kUpUp].c == doctest::Approx(0.138673).epsilon(1e-6));
    chart_step(s, 0.3, cfg);
    CHECK(s.t == 2);
}

TEST_CASE("identical densities leave the statistic unchanged") {
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) CHECK(llr_increment(x, 0.0, 1.0) == 0.0);
}

TEST_CASE("recursive bookkeeping equals window recomputation") {
    const ChartConfig cfg;
    std::mt19937_64 rng(2024);
    for (int stream = 0; stream < 150; ++stream) {
        const auto xs = testing::regime_stream(rng, 500);
        AdaptiveChartState state = AdaptiveChartState::cold(cfg);
        std::vector<testing::WindowOracle> oracles;
        for (DirectionPair d : kAllDirections) oracles.emplace_back(d, cfg);
        for (double x : xs) {
            chart_step(state, x, cfg);
            for (DirectionPair d : kAllDirections) {
                const BranchState want = oracles[d.index()].step(x);
                const BranchState& got = state.branches[d];
                REQUIRE(got.n == want.n);
                REQUIRE(got.tau_hat == want.tau_hat);
                REQUIRE(close(got.sum_s, want.sum_s));
                REQUIRE(close(got.sum_q, want.sum_q));
                REQUIRE(close(got.mu_hat, want.mu_hat));
                REQUIRE(close(got.theta_hat, want.theta_hat));
                REQUIRE(close(got.c, want.c));
            }
        }
    }
}

TEST_CASE("invariants hold along random streams") {
    const ChartConfig cfg;
    std::mt19937_64 rng(77);
    for (int stream = 0; stream < 50; ++stream) {
        const auto xs = testing::regime_stream(rng, 1000);
        AdaptiveChartState state = AdaptiveChartState::cold(cfg);
        for (double x : xs) {
            chart_step(state, x, cfg);
            for (DirectionPair d : kAllDirections) {
                const BranchState& b = state.branches[d];
                REQUIRE(b.c >= 0.0);
                REQUIRE(b.sum_q >= 0.0);
                if (b.c > 0.0)
                    REQUIRE(b.n == state.t - 1 - b.tau_hat);
                else
                    REQUIRE(b.tau_hat == state.t);
                switch (d.mean_dir()) {
                case Shift::Up: REQUIRE(b.mu_hat >= cfg.rho_mu); break;
                case Shift::Down: REQUIRE(b.mu_hat <= -cfg.rho_mu); break;
                case Shift::None: REQUIRE(b.mu_hat == 0.0); break;
                }
                switch (d.var_dir()) {
                case Shift::Up: REQUIRE(b.theta_hat >= cfg.rho_theta_up); break;
                case Shift::Down: REQUIRE(b.theta_hat <= cfg.rho_theta_down); break;
                case Shift::None: REQUIRE(b.theta_hat == 1.0); break;
                }
                REQUIRE(b.theta_hat > 0.0);
            }
        }
    }
}

TEST_CASE("estimates at time t do not depend on x_t") {
    const ChartConfig cfg;
    std::mt19937_64 rng(5);
    const auto xs = testing::regime_stream(rng, 300);
    AdaptiveChartState state = AdaptiveChartState::cold(cfg);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        AdaptiveChartState a = state;
        AdaptiveChartState b = state;
        chart_step(a, xs[i], cfg);
        chart_step(b, xs[i] + 3.7, cfg);
        for (DirectionPair d : kAllDirections) {
            REQUIRE(a.branches[d].mu_hat == b.branches[d].mu_hat);
            REQUIRE(a.branches[d].theta_hat == b.branches[d].theta_hat);
            REQUIRE(a.branches[d].n == b.branches[d].n);
        }
        state = a;
    }
}

TEST_CASE("chart state JSON round-trip") {
    const ChartConfig cfg;
    AdaptiveChartState s = AdaptiveChartState::cold(cfg);
    const nlohmann::json cold = s;
    CHECK(cold.get<AdaptiveChartState>() == s);
    std::mt19937_64 rng(9);
    for (double x : testing::regime_stream(rng, 200)) chart_step(s, x, cfg);
    const nlohmann::json j = s;
    CHECK(j.at("branches").size() == 8);
    CHECK(j.get<AdaptiveChartState>() == s);
    nlohmann::json broken = j;
    broken["branches"].erase("(.,-)");
    CHECK_THROWS(broken.get<AdaptiveChartState>());
}

}
