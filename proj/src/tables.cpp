#include "acusum/tables.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace acusum {

namespace {

std::vector<Scenario> grid(const std::vector<double>& sigmas, const std::vector<double>& mus) {
    std::vector<Scenario> out{Scenario::make(0.0, 1.0, 0)};
    for (double sigma : sigmas)
        for (double mu : mus) out.push_back(Scenario::make(mu, sigma));
    return out;
}

const std::vector<double> kMeanSteps{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::vector<Scenario> table_scenarios(int id) {
    switch (id) {
    case 1:
        return grid({1.0}, kMeanSteps);
    case 2: {
        std::vector<Scenario> out{Scenario::make(0.0, 1.0, 0)};
        for (double sigma : {1.1, 1.15, 1.2, 1.3, 1.4, 1.6, 1.8, 2.0, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3})
            out.push_back(Scenario::make(0.0, sigma));
        return out;
    }
    case 3:
        return grid({1.1, 1.2, 1.4}, kMeanSteps);
    case 4:
        return grid({1.7, 2.0}, kMeanSteps);
    case 5:
        return grid({0.9, 0.8, 0.7}, kMeanSteps);
    case 6:
        return grid({0.6, 0.5}, kMeanSteps);
    default:
        throw std::out_of_range("table id must be between 1 and 6, got " + std::to_string(id));
    }
}

std::vector<std::string> table_columns() {
    return {kPrimaryColumn, "Wu_CUSUM", "GLRT", "EWMA_GLRT_0.01", "EWMA_GLRT_0.05", "EWMA_GLRT_0.1", "EWMA_GLRT_0.2"};
}

ChartSuite ChartSuite::from_artifact(const IcArtifact& artifact) {
    return {artifact.config, artifact.tables, artifact.reservoir, artifact.benchmark_limits};
}

double ChartSuite::limit(const std::string& column) const {
    if (column == kPrimaryColumn) {
        if (!config.control_limit_h)
            throw std::runtime_error("the artifact has no control limit for P_CUSUM; run `acusum calibrate` first");
        return *config.control_limit_h;
    }
    const auto it = benchmark_limits.find(column);
    if (it == benchmark_limits.end())
        throw std::runtime_error("the artifact has no control limit for " + column +
                                 "; run `acusum calibrate --benchmarks " + column + "` first");
    return it->second;
}

bool cell_omitted(const std::string& column, const Scenario& scenario) {
    return column == "Wu_CUSUM" && scenario.mu1 == 0.0 && scenario.sigma1 < 1.0;
}

ArlResult estimate_cell(const std::string& column, const ChartSuite& suite, const Scenario& scenario,
                        const SimulationOptions& options) {
    const double h = suite.limit(column);
    if (column == kPrimaryColumn) {
        const PrimaryChart chart(suite.config, suite.tables, suite.reservoir);
        return estimate_arl(chart, scenario, h, options);
    }
    return std::visit([&](const auto& chart) { return estimate_arl(chart, scenario, h, options); },
                      make_chart(BenchmarkSpec::parse(column)));
}

TableResult reproduce_table(int id, const ChartSuite& suite, const TableOptions& options,
                            const std::function<void(const std::string&)>& progress) {
    TableResult out;
    out.id = id;
    out.reps = options.reps;
    out.seed = options.seed;
    out.rows = table_scenarios(id);
    out.columns = options.columns.empty() ? table_columns() : options.columns;
    if (options.reps < 1) throw std::invalid_argument("reproduce_table: reps must be >= 1");
    // Fail before any simulation if a limit is missing.
    for (const auto& col : out.columns) suite.limit(col);

    SimulationOptions sim;
    sim.reps = options.reps;
    sim.seed = options.seed;
    sim.threads = options.threads;
    sim.max_steps = options.max_steps;

    out.cells.assign(out.rows.size(), std::vector<TableCell>(out.columns.size()));
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
        for (std::size_t c = 0; c < out.columns.size(); ++c) {
            if (cell_omitted(out.columns[c], out.rows[r])) continue;
            out.cells[r][c].result = estimate_cell(out.columns[c], suite, out.rows[r], sim);
            if (progress) {
                const auto& e = out.cells[r][c].result->estimate;
                char buf[160];
                std::snprintf(buf, sizeof buf, "table %d %s %s: %.2f (%.3f)", id, out.rows[r].label.c_str(),
                              out.columns[c].c_str(), e.mean_delay, e.std_error);
                progress(buf);
            }
        }
    }
    return out;
}

std::string table_to_csv(const TableResult& table) {
    bool any_runaway = false;
    for (const auto& row : table.cells)
        for (const auto& cell : row)
            if (cell.result && cell.result->runaway_count > 0) any_runaway = true;

    std::ostringstream os;
    os << "scenario";
    for (const auto& col : table.columns) os << ',' << col << "_mean," << col << "_se";
    if (any_runaway)
        for (const auto& col : table.columns) os << ',' << col << "_runaway";
    os << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << '"' << table.rows[r].label << '"';
        for (const auto& cell : table.cells[r]) {
            os << ',';
            if (cell.result) os << format_number(cell.result->estimate.mean_delay);
            os << ',';
            if (cell.result) os << format_number(cell.result->estimate.std_error);
        }
        if (any_runaway)
            for (const auto& cell : table.cells[r]) {
                os << ',';
                if (cell.result) os << cell.result->runaway_count;
            }
        os << '\n';
    }
    return os.str();
}

std::string table_filename(int id, std::int64_t reps, std::uint64_t seed) {
    return "table" + std::to_string(id) + "_" + std::to_string(reps) + "reps_seed" + std::to_string(seed) + ".csv";
}

}  // namespace acusum
