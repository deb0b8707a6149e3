#include <doctest.h>

#include <set>
#include <sstream>

#include "acusum/tables.hpp"
#include "support.hpp"

using namespace acusum;

namespace {

ChartSuite fixture_suite() {
    const auto& f = testing::small_fixture();
    ChartSuite s;
    s.config = f.config;
    s.tables = f.tables;
    s.reservoir = f.reservoir;
    s.benchmark_limits = {{"Wu_CUSUM", 4.07},       {"GLRT", 6.35},          {"EWMA_GLRT_0.01", 0.0303},
                          {"EWMA_GLRT_0.05", 0.2416}, {"EWMA_GLRT_0.1", 0.5478}, {"EWMA_GLRT_0.2", 1.2158}};
    return s;
}

}  // namespace

TEST_SUITE("tables") {

TEST_CASE("scenario grids") {
    const std::vector<std::size_t> sizes = {9, 17, 25, 17, 25, 17};
    for (int id = 1; id <= kTableCount; ++id) {
        const auto rows = table_scenarios(id);
        CAPTURE(id);
        CHECK(rows.size() == sizes[id - 1]);
        CHECK(rows.front().in_control());
        CHECK(rows.front().tau == 0);
        std::set<std::string> labels;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].tau == 50);
            CHECK_FALSE(rows[i].in_control());
            labels.insert(rows[i].label);
        }
        CHECK(labels.size() == rows.size() - 1);
    }
    CHECK(table_scenarios(1)[1].label == "(0.25, 1)");
    CHECK(table_scenarios(2)[9].label == "(0, 0.9)");
    CHECK_THROWS_AS(table_scenarios(0), std::out_of_range);
    CHECK_THROWS_AS(table_scenarios(7), std::out_of_range);
}

TEST_CASE("columns and omitted cells") {
    const std::vector<std::string> expected = {"P_CUSUM",        "Wu_CUSUM",      "GLRT",         "EWMA_GLRT_0.01",
                                               "EWMA_GLRT_0.05", "EWMA_GLRT_0.1", "EWMA_GLRT_0.2"};
    CHECK(table_columns() == expected);
    CHECK(cell_omitted("Wu_CUSUM", Scenario::make(0, 0.8)));
    CHECK_FALSE(cell_omitted("Wu_CUSUM", Scenario::make(0, 1.2)));
    CHECK_FALSE(cell_omitted("Wu_CUSUM", Scenario::make(0.5, 0.8)));
    CHECK_FALSE(cell_omitted("GLRT", Scenario::make(0, 0.8)));
}

TEST_CASE("missing limits give an actionable error") {
    ChartSuite s = fixture_suite();
    s.benchmark_limits.erase("GLRT");
    CHECK_THROWS_WITH(s.limit("GLRT"), doctest::Contains("acusum calibrate --benchmarks GLRT"));
    s.config.control_limit_h.reset();
    CHECK_THROWS_WITH(s.limit("P_CUSUM"), doctest::Contains("acusum calibrate"));
}

TEST_CASE("small table run and CSV layout") {
    const ChartSuite suite = fixture_suite();
    TableOptions opt;
    opt.reps = 30;
    opt.seed = 2;
    opt.threads = 2;
    opt.columns = {"P_CUSUM", "Wu_CUSUM", "EWMA_GLRT_0.1"};
    const auto t = reproduce_table(5, suite, opt);
    REQUIRE(t.rows.size() == 25);
    REQUIRE(t.cells.size() == 25);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        REQUIRE(t.cells[r].size() == 3);
        for (std::size_t c = 0; c < 3; ++c) CHECK(t.cells[r][c].result.has_value() == !cell_omitted(t.columns[c], t.rows[r]));
    }
    const std::string csv = table_to_csv(t);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "scenario,P_CUSUM_mean,P_CUSUM_se,Wu_CUSUM_mean,Wu_CUSUM_se,EWMA_GLRT_0.1_mean,EWMA_GLRT_0.1_se");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 25);
    CHECK(csv.find("\"(0.25, 0.9)\",") != std::string::npos);

    // Same seed, different thread count: identical output.
    opt.threads = 1;
    CHECK(table_to_csv(reproduce_table(5, suite, opt)) == csv);
}

TEST_CASE("runaway columns appear only when a run hits the cap") {
    const ChartSuite suite = fixture_suite();
    TableOptions opt;
    opt.reps = 20;
    opt.columns = {"P_CUSUM"};
    opt.max_steps = 100;
    const auto t = reproduce_table(1, suite, opt);
    REQUIRE(t.cells[0][0].result->runaway_count > 0);
    const std::string csv = table_to_csv(t);
    CHECK(csv.substr(0, csv.find('\n')) == "scenario,P_CUSUM_mean,P_CUSUM_se,P_CUSUM_runaway");
}

TEST_CASE("estimate_cell matches the table cell") {
    const ChartSuite suite = fixture_suite();
    TableOptions opt;
    opt.reps = 40;
    opt.seed = 9;
    opt.columns = {"GLRT"};
    const auto t = reproduce_table(3, suite, opt);
    SimulationOptions so;
    so.reps = 40;
    so.seed = 9;
    const auto cell = estimate_cell("GLRT", suite, t.rows[3], so);
    CHECK(cell.estimate.mean_delay == t.cells[3][0].result->estimate.mean_delay);
}

TEST_CASE("file names") {
    CHECK(table_filename(3, 10000, 1) == "table3_10000reps_seed1.csv");
}

}
