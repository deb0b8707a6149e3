#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acusum/artifact.hpp"
#include "acusum/calibration.hpp"
#include "acusum/stream_monitor.hpp"
#include "acusum/tables.hpp"

namespace fs = std::filesystem;
using namespace acusum;

namespace {

constexpr int kUsageError = 2;

void note(const std::string& msg) { std::cerr << msg << '\n'; }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

IcArtifact open_artifact(const std::string& path, const std::string& config_path) {
    if (config_path.empty()) return load_artifact(path);
    return load_artifact(path, load_config(config_path));
}

/// "(2, 1)", "2,1" or "2 1".
Scenario parse_scenario(std::string s, std::int64_t tau) {
    for (char& c : s)
        if (c == '(' || c == ')' || c == ',') c = ' ';
    std::istringstream is(s);
    double mu = 0.0;
    double sigma = 0.0;
    std::string rest;
    if (!(is >> mu >> sigma) || (is >> rest) || !(sigma > 0))
        throw CLI::ValidationError("--scenario", "expected '(mu, sigma)' with sigma > 0");
    return Scenario::make(mu, sigma, tau);
}

struct CalibrateArgs {
    std::string config;
    std::int64_t burn_in = 100'000;
    std::int64_t samples = 100'000;
    std::int64_t reps = 10'000;
    double tol = 0.005;
    std::uint64_t seed = 1;
    std::string out = "ic_tables.json";
    std::string benchmarks = "all";
    unsigned threads = 0;
};

int run_calibrate(const CalibrateArgs& a) {
    ChartConfig cfg = a.config.empty() ? ChartConfig{} : load_config(a.config);
    std::vector<BenchmarkSpec> benchmarks;
    if (a.benchmarks == "all") {
        for (const auto& col : table_columns())
            if (col != kPrimaryColumn) benchmarks.push_back(BenchmarkSpec::parse(col));
    } else if (a.benchmarks != "none") {
        for (const auto& key : split_list(a.benchmarks)) benchmarks.push_back(BenchmarkSpec::parse(key));
    }

    ArtifactBuildOptions opt;
    opt.ic.burn_in = a.burn_in;
    opt.ic.samples = a.samples;
    opt.reps = a.reps;
    opt.tol = a.tol;
    opt.seed = a.seed;
    opt.threads = a.threads;
    opt.benchmarks = benchmarks;
    const IcArtifact art = calibrate_artifact(cfg, opt, note);
    save_artifact(art, a.out);
    note("wrote " + a.out);
    return 0;
}

struct TablesArgs {
    std::vector<int> ids;
    std::string list;
    std::string artifact = "ic_tables.json";
    std::string config;
    std::int64_t reps = 10'000;
    std::uint64_t seed = 1;
    std::string outdir = ".";
    std::string columns;
    unsigned threads = 0;
};

int run_tables(TablesArgs a) {
    for (const auto& s : split_list(a.list)) {
        int id = 0;
        try {
            id = std::stoi(s);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--tables", "'" + s + "' is not a table number");
        }
        a.ids.push_back(id);
    }
    if (a.ids.empty()) throw CLI::ValidationError("tables", "give at least one table number (1-6)");
    for (int id : a.ids)
        if (id < 1 || id > kTableCount)
            throw CLI::ValidationError("tables", "table " + std::to_string(id) + " does not exist (1-6)");

    const ChartSuite suite = ChartSuite::from_artifact(open_artifact(a.artifact, a.config));
    TableOptions opt;
    opt.reps = a.reps;
    opt.seed = a.seed;
    opt.threads = a.threads;
    opt.columns = split_list(a.columns);
    fs::create_directories(a.outdir);
    for (int id : a.ids) {
        const auto start = std::chrono::steady_clock::now();
        const auto table = reproduce_table(id, suite, opt, [](const std::string& line) { note(line); });
        const fs::path path = fs::path(a.outdir) / table_filename(id, a.reps, a.seed);
        std::ofstream out(path, std::ios::binary);
        out << table_to_csv(table);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        char buf[64];
        std::snprintf(buf, sizeof buf, " (%.1fs)", elapsed(start));
        note("wrote " + path.string() + buf);
    }
    return 0;
}

struct MonitorArgs {
    std::string artifact = "ic_tables.json";
    std::string config;
    std::optional<double> mu0;
    std::optional<double> sigma0;
    std::string phase1;
    std::string input = "-";
    std::string out = "-";
};

int run_monitor_cmd(const MonitorArgs& a) {
    const IcArtifact art = open_artifact(a.artifact, a.config);
    PhaseIBaseline baseline;
    if (!a.phase1.empty()) {
        std::ifstream in(a.phase1);
        if (!in) throw std::runtime_error("cannot open " + a.phase1);
        const auto values = read_phase1(in);
        baseline = estimate_baseline(values);
        char buf[120];
        std::snprintf(buf, sizeof buf, "baseline from %zu phase I values: mu0 = %.6g, sigma0 = %.6g", values.size(),
                      baseline.mu0, baseline.sigma0);
        note(buf);
    } else {
        baseline.mu0 = *a.mu0;
        baseline.sigma0 = *a.sigma0;
    }
    StreamMonitor monitor(art.config, art.tables, baseline);

    std::ifstream file_in;
    std::istream* in = &std::cin;
    if (a.input != "-") {
        file_in.open(a.input);
        if (!file_in) throw std::runtime_error("cannot open " + a.input);
        in = &file_in;
    }
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (a.out != "-") {
        file_out.open(a.out, std::ios::binary);
        if (!file_out) throw std::runtime_error("cannot write " + a.out);
        out = &file_out;
    }
    const auto summary = run_monitor(monitor, *in, *out, std::cerr);
    note("rows: " + std::to_string(summary.rows) + ", alarms: " + std::to_string(summary.alarms) +
         ", skipped malformed rows: " + std::to_string(summary.skipped));
    return 0;
}

struct DemoArgs {
    std::string artifact = "ic_tables.json";
    std::string config;
    std::string scenario = "(2, 1)";
    std::int64_t tau = 50;
    std::uint64_t seed = 1;
};

int run_demo(const DemoArgs& a) {
    const IcArtifact art = open_artifact(a.artifact, a.config);
    const Scenario sc = parse_scenario(a.scenario, a.tau);
    StreamMonitor monitor(art.config, art.tables, PhaseIBaseline{});
    NormalStream z(derive_seed(a.seed, {sc.id()}));
    for (std::int64_t t = 1; t <= kRunawayCap; ++t) {
        const double e = z();
        const double x = t <= sc.tau ? e : sc.mu1 + sc.sigma1 * e;
        monitor.push(x, std::to_string(t));
        if (const auto& alarm = monitor.last_alarm()) {
            std::cout << "scenario " << sc.label << ", change at t = " << sc.tau << ", seed " << a.seed << '\n';
            std::cout << "alarm at t = " << alarm->t << (alarm->t <= sc.tau ? " (before the change)" : "") << '\n';
            std::cout << "estimated change-point: t = " << alarm->change_point_t << '\n';
            std::cout << "diagnosis: " << format_diagnosis(alarm->diagnosis) << '\n';
            std::cout << nlohmann::json(*alarm).dump() << '\n';
            return 0;
        }
    }
    note("no alarm within " + std::to_string(kRunawayCap) + " observations");
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive CUSUM monitoring of the mean and variance of a Gaussian stream"};
    app.require_subcommand(1);

    CalibrateArgs cal;
    auto* c = app.add_subcommand("calibrate", "Estimate in-control tables and calibrate control limits");
    c->add_option("--config", cal.config, "Chart constants (JSON); defaults when omitted")->check(CLI::ExistingFile);
    c->add_option("--burn-in", cal.burn_in, "In-control burn-in steps")->capture_default_str();
    c->add_option("--samples", cal.samples, "Nonzero values kept per branch (M)")->capture_default_str();
    c->add_option("--reps", cal.reps, "Replications per calibration")->capture_default_str();
    c->add_option("--tol", cal.tol, "Relative ARL0 tolerance")->capture_default_str();
    c->add_option("--seed", cal.seed, "Root seed")->capture_default_str();
    c->add_option("--out", cal.out, "Artifact path")->capture_default_str();
    c->add_option("--benchmarks", cal.benchmarks, "all, none or a list such as GLRT,EWMA_GLRT_0.05")
        ->capture_default_str();
    c->add_option("--threads", cal.threads, "Worker threads (0 = all cores)");

    TablesArgs tab;
    auto* t = app.add_subcommand("tables", "Reproduce the ARL comparison tables as CSV");
    t->add_option("ids", tab.ids, "Table numbers (1-6)");
    t->add_option("--tables", tab.list, "Comma-separated table numbers");
    t->add_option("--artifact", tab.artifact, "Calibrated artifact")->capture_default_str();
    t->add_option("--config", tab.config, "Expected chart constants")->check(CLI::ExistingFile);
    t->add_option("--reps", tab.reps, "Replications per cell")->capture_default_str();
    t->add_option("--seed", tab.seed, "Root seed")->capture_default_str();
    t->add_option("--outdir", tab.outdir, "Output directory")->capture_default_str();
    t->add_option("--columns", tab.columns, "Subset of columns, e.g. P_CUSUM,GLRT");
    t->add_option("--threads", tab.threads, "Worker threads (0 = all cores)");

    MonitorArgs mon;
    auto* m = app.add_subcommand("monitor", "Monitor a CSV stream of (index, value) rows");
    m->add_option("--artifact", mon.artifact, "Calibrated artifact")->capture_default_str();
    m->add_option("--config", mon.config, "Expected chart constants")->check(CLI::ExistingFile);
    auto* mu0 = m->add_option("--mu0", mon.mu0, "In-control mean");
    auto* sigma0 = m->add_option("--sigma0", mon.sigma0, "In-control standard deviation");
    auto* phase1 = m->add_option("--phase1", mon.phase1, "Phase I CSV to estimate mu0 and sigma0")
                       ->check(CLI::ExistingFile);
    mu0->needs(sigma0);
    sigma0->needs(mu0);
    phase1->excludes(mu0)->excludes(sigma0);
    m->add_option("--input", mon.input, "Input CSV or - for stdin")->capture_default_str();
    m->add_option("--out", mon.out, "Verdict JSON lines or - for stdout")->capture_default_str();

    DemoArgs demo;
    auto* d = app.add_subcommand("diagnose-demo", "Simulate a shift and show the post-alarm diagnosis");
    d->add_option("--artifact", demo.artifact, "Calibrated artifact")->capture_default_str();
    d->add_option("--config", demo.config, "Expected chart constants")->check(CLI::ExistingFile);
    d->add_option("--scenario", demo.scenario, "Out-of-control (mu, sigma)")->capture_default_str();
    d->add_option("--tau", demo.tau, "Change-point")->capture_default_str();
    d->add_option("--seed", demo.seed, "Root seed")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (m->parsed() && mon.phase1.empty() && !(mon.mu0 && mon.sigma0))
            throw CLI::RequiredError("monitor needs --mu0 and --sigma0, or --phase1");
        if (c->parsed()) return run_calibrate(cal);
        if (t->parsed()) return run_tables(tab);
        if (m->parsed()) return run_monitor_cmd(mon);
        return run_demo(demo);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
