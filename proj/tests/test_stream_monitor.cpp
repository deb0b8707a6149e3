#include <doctest.h>

#include <sstream>

#include "acusum/stream_monitor.hpp"
#include "support.hpp"

using namespace acusum;

TEST_SUITE("stream_monitor") {

TEST_CASE("row parsing") {
    auto r = parse_row("2024-01-01,1.5");
    REQUIRE(r);
    CHECK(r->index == "2024-01-01");
    CHECK(r->value == 1.5);
    r = parse_row("  -0.25 ");
    REQUIRE(r);
    CHECK(r->value == -0.25);
    CHECK_FALSE(parse_row("t,value"));
    CHECK_FALSE(parse_row("3,nan"));
    CHECK_FALSE(parse_row("3,inf"));
    CHECK_FALSE(parse_row("3,"));
    CHECK_FALSE(parse_row("abc"));
}

TEST_CASE("phase I reader skips a header") {
    std::istringstream in("t,value\n1,10\n2,12\n3,11\n");
    CHECK(read_phase1(in) == std::vector<double>{10, 12, 11});
    std::istringstream bare("1\n2\n\n3\n");
    CHECK(read_phase1(bare) == std::vector<double>{1, 2, 3});
}

TEST_CASE("monitor agrees with the chart on standardized data and restarts after alarms") {
    const auto& f = testing::small_fixture();
    const PhaseIBaseline base{10.0, 2.0};
    StreamMonitor m(f.config, f.tables, base);
    AdaptiveChartState ref = AdaptiveChartState::cold(f.config);
    NormalStream z(4);
    std::int64_t since_restart = 0;
    for (int t = 1; t <= 3000; ++t) {
        const double x = t > 1000 ? 1.5 + z() : z();
        const auto v = m.push(base.mu0 + base.sigma0 * x, std::to_string(t));
        const auto expected = monitor_step(ref, standardize(base.mu0 + base.sigma0 * x, base), *f.tables, f.config);
        ++since_restart;
        REQUIRE(v.q_max == expected.q_max);
        REQUIRE(v.alarmed == expected.alarmed);
        REQUIRE(v.t == t);
        REQUIRE(m.last_alarm().has_value() == v.alarmed);
        if (v.alarmed) {
            const auto& rep = *m.last_alarm();
            CHECK(rep.t == t);
            CHECK(rep.index == std::to_string(t));
            CHECK(rep.chart_t == since_restart);
            CHECK(rep.change_point_t >= t - since_restart);
            CHECK(rep.change_point_t < t);
            CHECK_FALSE(rep.diagnosis.empty());
            ref = AdaptiveChartState::cold(f.config);
            since_restart = 0;
        }
    }
    CHECK(m.observations() == 3000);
    CHECK(m.alarms() > 10);
}

TEST_CASE("monitor refuses unusable inputs") {
    const auto& f = testing::small_fixture();
    ChartConfig uncalibrated = f.config;
    uncalibrated.control_limit_h.reset();
    CHECK_THROWS(StreamMonitor(uncalibrated, f.tables, {}));
    ChartConfig other = f.config;
    other.eta = 5.0;
    CHECK_THROWS(StreamMonitor(other, f.tables, {}));
    CHECK_THROWS(StreamMonitor(f.config, f.tables, {0.0, 0.0}));
}

TEST_CASE("run_monitor writes one verdict per parsed row") {
    const auto& f = testing::small_fixture();
    StreamMonitor m(f.config, f.tables, {});
    std::ostringstream csv;
    csv << "time,value\n";
    NormalStream z(8);
    for (int t = 1; t <= 400; ++t) csv << t << ',' << (t > 200 ? 3.0 + z() : z()) << '\n';
    csv << "garbage\n\n401,0.1\n";
    std::istringstream in(csv.str());
    std::ostringstream verdicts;
    std::ostringstream reports;
    const auto s = run_monitor(m, in, verdicts, reports);
    CHECK(s.rows == 401);
    CHECK(s.skipped == 1);
    CHECK(s.alarms >= 1);
    std::istringstream lines(verdicts.str());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("q_max"));
        ++n;
    }
    CHECK(n == 401);
    std::istringstream rep_lines(reports.str());
    std::getline(rep_lines, line);
    const auto first = nlohmann::json::parse(line);
    CHECK(first.contains("alarm_t"));
    CHECK(first.contains("changes"));
    CHECK(first.at("alarm_t").get<int>() > 200);
}

TEST_CASE("empty input") {
    const auto& f = testing::small_fixture();
    StreamMonitor m(f.config, f.tables, {});
    std::istringstream in("");
    std::ostringstream v;
    std::ostringstream r;
    const auto s = run_monitor(m, in, v, r);
    CHECK(s.rows == 0);
    CHECK(v.str().empty());
}

}
