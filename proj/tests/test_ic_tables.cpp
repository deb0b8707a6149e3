#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "acusum/ic_tables.hpp"
#include "support.hpp"

using namespace acusum;

namespace {

BranchDistribution table_of(std::vector<double> xs) {
    BranchDistribution b;
    b.sorted_nonzero_c = std::move(xs);
    b.zero_fraction = 0.5;
    return b;
}

}  // namespace

TEST_SUITE("ic_tables") {

TEST_CASE("empirical CDF convention on a tiny table") {
    const auto b = table_of({1, 2, 3});
    CHECK(b.cdf(2.0) == doctest::Approx(0.5));
    CHECK(b.cdf(0.5) == doctest::Approx(0.25));
    CHECK(b.cdf(10.0) == doctest::Approx(0.75));
    CHECK(b.cdf(1.0) == doctest::Approx(0.25));
    CHECK(b.cdf(3.0) == doctest::Approx(0.75));
    CHECK(b.cdf(1.5) == doctest::Approx(0.375));
    CHECK(b.cdf(2.75) == doctest::Approx((2.0 + 0.75) / 4.0));

    IcDistributionTable t;
    for (auto& br : t.branches) br = b;
    CHECK(empirical_cdf(t, DirectionPair::parse("(-,.)"), 2.0) == doctest::Approx(0.5));
}

TEST_CASE("exceedance threshold inverts the CDF") {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e;
    std::vector<double> xs(500);
    for (auto& x : xs) x = e(rng);
    sort_and_dedupe(xs);
    const auto b = table_of(xs);
    const double m = static_cast<double>(b.size());
    CHECK(b.exceedance_threshold(0.5 / (m + 1)) == 0.0);
    CHECK(std::isinf(b.exceedance_threshold(m / (m + 1))));
    std::uniform_real_distribution<double> u(1.0 / (m + 1), m / (m + 1));
    for (int i = 0; i < 2000; ++i) {
        const double p = u(rng);
        const double c = b.exceedance_threshold(p);
        CHECK(b.cdf(c) == doctest::Approx(p).epsilon(1e-9));
        CHECK(b.cdf(c * (1 + 1e-9) + 1e-12) > p);
    }
}

TEST_CASE("CDF is monotone") {
    const auto b = table_of({0.1, 0.2, 0.4, 0.8, 1.6, 3.2});
    double prev = 0.0;
    for (double c = 0.01; c < 5.0; c += 0.01) {
        const double f = b.cdf(c);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("sort_and_dedupe yields a strictly ascending array") {
    std::vector<double> xs{3.0, 1.0, 2.0, 1.0, 1.0 + 1e-15, 2.5};
    sort_and_dedupe(xs);
    CHECK(xs == std::vector<double>{1.0, 2.0, 2.5, 3.0});
}

TEST_CASE("estimation preconditions") {
    const ChartConfig cfg;
    IcEstimationOptions opt;
    opt.burn_in = 99'999;
    CHECK_THROWS_AS(estimate_ic_tables(cfg, opt), std::invalid_argument);
    opt.burn_in = 100'000;
    opt.samples = 9'999;
    CHECK_THROWS_AS(estimate_ic_tables(cfg, opt), std::invalid_argument);
}

TEST_CASE("estimated tables satisfy their invariants") {
    const auto& f = testing::small_fixture();
    const ChartConfig cfg;
    CHECK(f.tables->config_hash == cfg.hash());
    CHECK(f.tables->burn_in == 100'000);
    for (DirectionPair d : kAllDirections) {
        const auto& b = (*f.tables)[d];
        CAPTURE(d.name());
        CHECK(b.zero_fraction > 0.0);
        CHECK(b.zero_fraction < 1.0);
        CHECK(b.size() >= 9'990);
        CHECK(b.sorted_nonzero_c.front() > 0.0);
        CHECK(std::adjacent_find(b.sorted_nonzero_c.begin(), b.sorted_nonzero_c.end(),
                                 [](double a, double c) { return !(a < c); }) == b.sorted_nonzero_c.end());
    }
    CHECK(f.reservoir->snapshots.size() == 1000);
    CHECK(f.reservoir->burn_in >= 100'000);
    for (const auto& s : f.reservoir->snapshots) {
        REQUIRE(s.x_prev.has_value());
        for (const auto& b : s.branches) REQUIRE(b.c >= 0.0);
    }
}

TEST_CASE("regenerating with the same seed is bit-identical") {
    const ChartConfig cfg;
    IcEstimationOptions opt;
    opt.samples = 10'000;
    opt.reservoir_size = 100;
    opt.seed = 5;
    const auto a = estimate_ic_tables(cfg, opt);
    const auto b = estimate_ic_tables(cfg, opt);
    CHECK(a.tables == b.tables);
    CHECK(a.reservoir == b.reservoir);
    opt.seed = 6;
    const auto c = estimate_ic_tables(cfg, opt);
    CHECK_FALSE(a.tables == c.tables);
}

TEST_CASE("transformed in-control statistics are uniform") {
    // A fresh chain, sampled sparsely: the slowly resetting branches are
    // strongly autocorrelated.
    const auto& f = testing::small_fixture();
    const ChartConfig cfg;
    AdaptiveChartState state = f.reservoir->snapshots.front();
    NormalStream z(987654321);
    PerBranch<std::vector<double>> p;
    std::int64_t step = 0;
    while (std::any_of(p.begin(), p.end(), [](const auto& v) { return v.size() < 1000; })) {
        chart_step(state, z(), cfg);
        if (++step % 500 != 0) continue;
        for (DirectionPair d : kAllDirections) {
            const double c = state.branches[d].c;
            if (c > 0 && p[d].size() < 1000) p[d].push_back((*f.tables)[d].cdf(c));
        }
    }
    for (DirectionPair d : kAllDirections) {
        CAPTURE(d.name());
        const double ks = testing::ks_statistic(p[d], [](double x) { return std::clamp(x, 0.0, 1.0); });
        CHECK(testing::ks_pvalue(ks, p[d].size()) > 0.001);
    }
}

}
