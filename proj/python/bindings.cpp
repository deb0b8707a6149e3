#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "acusum/artifact.hpp"
#include "acusum/stream_monitor.hpp"
#include "acusum/tables.hpp"

namespace py = pybind11;
using namespace acusum;

namespace {

std::string name_of(DirectionPair d) { return std::string(d.name()); }

py::dict branch_dict(const BranchState& b) {
    py::dict d;
    d["c"] = b.c;
    d["n"] = b.n;
    d["sum_s"] = b.sum_s;
    d["sum_q"] = b.sum_q;
    d["tau_hat"] = b.tau_hat;
    d["mu_hat"] = b.mu_hat;
    d["theta_hat"] = b.theta_hat;
    return d;
}

py::dict verdict_dict(const MonitorVerdict& v, const std::optional<AlarmReport>& report) {
    py::dict d;
    d["t"] = v.t;
    d["q_max"] = v.q_max;
    d["alarmed"] = v.alarmed;
    py::list triggering;
    for (auto dir : v.triggering) triggering.append(name_of(dir));
    d["triggering"] = triggering;
    py::dict q;
    for (auto dir : kAllDirections) q[py::str(name_of(dir))] = v.per_branch_q[dir];
    d["q"] = q;
    if (report) {
        py::list diagnosis;
        for (const auto& e : report->diagnosis) diagnosis.append(py::make_tuple(name_of(e.dir), e.q, e.change));
        d["diagnosis"] = diagnosis;
        d["change_point_t"] = report->change_point_t;
    }
    return d;
}

py::dict arl_dict(const ArlResult& r) {
    py::dict d;
    d["mean_delay"] = r.estimate.mean_delay;
    d["std_error"] = r.estimate.std_error;
    d["reps"] = r.estimate.reps;
    d["runaway"] = r.runaway_count;
    d["discarded"] = r.discarded_total;
    return d;
}

std::vector<BenchmarkSpec> parse_benchmarks(const std::vector<std::string>& keys) {
    std::vector<BenchmarkSpec> out;
    for (const auto& k : keys) {
        if (k == "all") {
            for (const auto& col : table_columns())
                if (col != kPrimaryColumn) out.push_back(BenchmarkSpec::parse(col));
        } else {
            out.push_back(BenchmarkSpec::parse(k));
        }
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adaptive CUSUM chart for the mean and variance of a Gaussian stream";

    py::class_<ChartConfig>(m, "ChartConfig")
        .def(py::init<>())
        .def_readwrite("s", &ChartConfig::s)
        .def_readwrite("eta", &ChartConfig::eta)
        .def_readwrite("rho_mu", &ChartConfig::rho_mu)
        .def_readwrite("alpha_up", &ChartConfig::alpha_up)
        .def_readwrite("alpha_down", &ChartConfig::alpha_down)
        .def_readwrite("beta", &ChartConfig::beta)
        .def_readwrite("rho_theta_up", &ChartConfig::rho_theta_up)
        .def_readwrite("rho_theta_down", &ChartConfig::rho_theta_down)
        .def_readwrite("control_limit_h", &ChartConfig::control_limit_h)
        .def_readwrite("arl0_target", &ChartConfig::arl0_target)
        .def("validate", &ChartConfig::validate)
        .def("hash", &ChartConfig::hash)
        .def("to_json", [](const ChartConfig& c) { return nlohmann::json(c).dump(); })
        .def_static("from_json", [](const std::string& s) { return nlohmann::json::parse(s).get<ChartConfig>(); })
        .def("__eq__", [](const ChartConfig& a, const ChartConfig& b) { return a == b; });

    m.def("branch_names", [] {
        std::vector<std::string> out;
        for (auto d : kAllDirections) out.push_back(name_of(d));
        return out;
    });
    m.def("describe", [](const std::string& branch) { return describe(DirectionPair::parse(branch)); },
          "Plain-language change described by a branch such as '(+,.)'.");
    m.def("q_transform", &q_transform, py::arg("p"));

    py::class_<IcArtifact>(m, "Artifact")
        .def_static("load", py::overload_cast<const std::string&>(&load_artifact), py::arg("path"))
        .def_static(
            "load_checked", py::overload_cast<const std::string&, const ChartConfig&>(&load_artifact),
            py::arg("path"), py::arg("config"), "Load, refusing an artifact built for a different configuration.")
        .def("save", [](const IcArtifact& a, const std::string& path) { save_artifact(a, path); }, py::arg("path"))
        .def_readonly("config", &IcArtifact::config)
        .def_readonly("benchmark_limits", &IcArtifact::benchmark_limits)
        .def_property_readonly("control_limit", [](const IcArtifact& a) { return a.config.control_limit_h; })
        .def_property_readonly("table_sizes", [](const IcArtifact& a) {
            py::dict d;
            for (auto dir : kAllDirections) d[py::str(name_of(dir))] = (*a.tables)[dir].size();
            return d;
        });

    m.def(
        "calibrate",
        [](const ChartConfig& cfg, std::int64_t burn_in, std::int64_t samples, std::int64_t reps, double tol,
           std::uint64_t seed, const std::vector<std::string>& benchmarks, unsigned threads) {
            ArtifactBuildOptions opt;
            opt.ic.burn_in = burn_in;
            opt.ic.samples = samples;
            opt.reps = reps;
            opt.tol = tol;
            opt.seed = seed;
            opt.threads = threads;
            opt.benchmarks = parse_benchmarks(benchmarks);
            py::gil_scoped_release release;
            return calibrate_artifact(cfg, opt);
        },
        py::arg("config") = ChartConfig{}, py::arg("burn_in") = 100'000, py::arg("samples") = 100'000,
        py::arg("reps") = 10'000, py::arg("tol") = 0.005, py::arg("seed") = 1,
        py::arg("benchmarks") = std::vector<std::string>{}, py::arg("threads") = 0,
        "Estimate in-control tables and calibrate control limits. benchmarks: keys such as 'GLRT', or 'all'.");

    m.def("table_columns", &table_columns);
    m.def("table_scenarios", [](int id) {
        py::list rows;
        for (const auto& s : table_scenarios(id)) rows.append(py::make_tuple(s.mu1, s.sigma1, s.tau, s.label));
        return rows;
    });

    m.def(
        "estimate_arl",
        [](const IcArtifact& art, const std::string& column, double mu1, double sigma1, std::int64_t tau,
           std::int64_t reps, std::uint64_t seed, unsigned threads) {
            SimulationOptions so;
            so.reps = reps;
            so.seed = seed;
            so.threads = threads;
            const ChartSuite suite = ChartSuite::from_artifact(art);
            const Scenario sc = Scenario::make(mu1, sigma1, tau);
            py::gil_scoped_release release;
            return estimate_cell(column, suite, sc, so);
        },
        py::arg("artifact"), py::arg("column"), py::arg("mu1"), py::arg("sigma1"), py::arg("tau") = 50,
        py::arg("reps") = 10'000, py::arg("seed") = 1, py::arg("threads") = 0,
        "Conditioned mean detection delay of one chart under one scenario.");

    py::class_<ArlResult>(m, "ArlResult")
        .def_property_readonly("mean_delay", [](const ArlResult& r) { return r.estimate.mean_delay; })
        .def_property_readonly("std_error", [](const ArlResult& r) { return r.estimate.std_error; })
        .def_property_readonly("reps", [](const ArlResult& r) { return r.estimate.reps; })
        .def_readonly("runaway", &ArlResult::runaway_count)
        .def_readonly("discarded", &ArlResult::discarded_total)
        .def("as_dict", &arl_dict);

    m.def(
        "reproduce_table",
        [](const IcArtifact& art, int id, std::int64_t reps, std::uint64_t seed, unsigned threads,
           const std::vector<std::string>& columns) {
            TableOptions opt;
            opt.reps = reps;
            opt.seed = seed;
            opt.threads = threads;
            opt.columns = columns;
            const ChartSuite suite = ChartSuite::from_artifact(art);
            py::gil_scoped_release release;
            return table_to_csv(reproduce_table(id, suite, opt));
        },
        py::arg("artifact"), py::arg("table_id"), py::arg("reps") = 10'000, py::arg("seed") = 1,
        py::arg("threads") = 0, py::arg("columns") = std::vector<std::string>{}, "One comparison table as CSV text.");

    py::class_<StreamMonitor>(m, "Monitor")
        .def(py::init([](const IcArtifact& art, double mu0, double sigma0) {
                 return StreamMonitor(art.config, art.tables, PhaseIBaseline{mu0, sigma0});
             }),
             py::arg("artifact"), py::arg("mu0") = 0.0, py::arg("sigma0") = 1.0)
        .def_static(
            "from_phase1",
            [](const IcArtifact& art, const std::vector<double>& phase1) {
                return StreamMonitor(art.config, art.tables, estimate_baseline(phase1));
            },
            py::arg("artifact"), py::arg("phase1"))
        .def(
            "push",
            [](StreamMonitor& mon, double raw, const std::string& index) {
                const auto v = mon.push(raw, index);
                return verdict_dict(v, mon.last_alarm());
            },
            py::arg("x"), py::arg("index") = "", "Verdict for one raw observation; restarts after an alarm.")
        .def(
            "push_many",
            [](StreamMonitor& mon, py::array_t<double, py::array::c_style | py::array::forcecast> xs) {
                const auto in = xs.unchecked<1>();
                py::array_t<double> q(in.shape(0));
                py::array_t<bool> alarmed(in.shape(0));
                auto qv = q.mutable_unchecked<1>();
                auto av = alarmed.mutable_unchecked<1>();
                for (py::ssize_t i = 0; i < in.shape(0); ++i) {
                    const auto v = mon.push(in(i));
                    qv(i) = v.q_max;
                    av(i) = v.alarmed;
                }
                return py::make_tuple(q, alarmed);
            },
            py::arg("xs"), "Pushes a 1-D array; returns (q_max, alarmed) arrays.")
        .def_property_readonly("observations", &StreamMonitor::observations)
        .def_property_readonly("alarms", &StreamMonitor::alarms);

    py::class_<AdaptiveChartState>(m, "AdaptiveChart")
        .def(py::init([](const ChartConfig& cfg) { return AdaptiveChartState::cold(cfg); }),
             py::arg("config") = ChartConfig{}, "The eight raw branch statistics from a cold start.")
        .def(
            "step", [](AdaptiveChartState& s, double x, const ChartConfig& cfg) { chart_step(s, x, cfg); },
            py::arg("x"), py::arg("config") = ChartConfig{})
        .def_readonly("t", &AdaptiveChartState::t)
        .def("branches", [](const AdaptiveChartState& s) {
            py::dict d;
            for (auto dir : kAllDirections) d[py::str(name_of(dir))] = branch_dict(s.branches[dir]);
            return d;
        });

    py::class_<EwmaGlrtState>(m, "EwmaGlrt")
        .def(py::init(&EwmaGlrtState::initial), py::arg("lam"))
        .def(
            "step",
            [](EwmaGlrtState& s, double x) {
                s = ewma_glrt_step(s, x);
                return s.elr;
            },
            py::arg("x"))
        .def_readonly("u", &EwmaGlrtState::u)
        .def_readonly("v", &EwmaGlrtState::v);

    py::class_<GlrtWindowState>(m, "Glrt")
        .def(py::init<std::size_t, double>(), py::arg("window") = 800, py::arg("gamma") = 0.005)
        .def(
            "step",
            [](GlrtWindowState& s, double x) {
                s.push(x);
                s.refresh();
                return s.stat();
            },
            py::arg("x"));

    py::class_<WuChart>(m, "WuCusum")
        .def(py::init([] {
            WuChart c;
            c.set_level(std::numeric_limits<double>::infinity());
            return c;
        }))
        .def(
            "step",
            [](WuChart& c, double x) {
                c.step(x);
                return c.statistic();
            },
            py::arg("x"));
}
