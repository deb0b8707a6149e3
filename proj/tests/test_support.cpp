#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace acusum::testing;

TEST_SUITE("support") {

TEST_CASE("KS p-value matches known critical values") {
    // Asymptotic 1% and 5% points of the Kolmogorov distribution.
    CHECK(ks_pvalue(1.6276 / std::sqrt(1e6), 1'000'000) == doctest::Approx(0.01).epsilon(0.02));
    CHECK(ks_pvalue(1.3581 / std::sqrt(1e6), 1'000'000) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(ks_pvalue(0.0, 100) == 1.0);
}

TEST_CASE("KS accepts a matching sample and rejects a shifted one") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u;
    std::vector<double> good(5000);
    std::vector<double> bad(5000);
    for (auto& x : good) x = u(rng);
    for (auto& x : bad) x = std::pow(u(rng), 1.1);
    auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_pvalue(ks_statistic(good, cdf), good.size()) > 0.01);
    CHECK(ks_pvalue(ks_statistic(bad, cdf), bad.size()) < 0.01);
}

}
