#include "acusum/artifact.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace acusum {

namespace {

using nlohmann::json;

json branch_to_json(const BranchDistribution& b) {
    return json{
        {"M", b.size()},
        {"zero_fraction", b.zero_fraction},
        {"recorded", b.recorded},
        {"sorted_nonzero_c", b.sorted_nonzero_c},
    };
}

BranchDistribution branch_from_json(const json& j, const std::string& name) {
    BranchDistribution b;
    j.at("sorted_nonzero_c").get_to(b.sorted_nonzero_c);
    j.at("zero_fraction").get_to(b.zero_fraction);
    j.at("recorded").get_to(b.recorded);
    if (j.at("M").get<std::size_t>() != b.size())
        throw std::runtime_error("artifact: branch " + name + " has M inconsistent with its array");
    for (std::size_t i = 1; i < b.size(); ++i)
        if (!(b.sorted_nonzero_c[i - 1] < b.sorted_nonzero_c[i]))
            throw std::runtime_error("artifact: branch " + name + " is not strictly ascending");
    if (b.sorted_nonzero_c.empty() || !(b.sorted_nonzero_c.front() > 0))
        throw std::runtime_error("artifact: branch " + name + " must hold positive values");
    return b;
}

}  // namespace

json artifact_to_json(const IcArtifact& a) {
    if (!a.tables || !a.reservoir) throw std::invalid_argument("artifact: tables and reservoir are required");
    json order = json::array();
    json tables = json::object();
    for (DirectionPair d : kAllDirections) {
        order.push_back(std::string(d.name()));
        tables[std::string(d.name())] = branch_to_json((*a.tables)[d]);
    }
    return json{
        {"version", kArtifactVersion},
        {"config_hash", a.tables->config_hash},
        {"config", a.config},
        {"branch_order", order},
        {"seed", a.tables->seed},
        {"burn_in", a.tables->burn_in},
        {"spacing", a.tables->spacing},
        {"tables", tables},
        {"reservoir",
         {{"burn_in", a.reservoir->burn_in},
          {"spacing", a.reservoir->spacing},
          {"snapshots", a.reservoir->snapshots}}},
        {"benchmark_limits", a.benchmark_limits},
    };
}

IcArtifact artifact_from_json(const json& j) {
    const int version = j.at("version").get<int>();
    if (version != kArtifactVersion)
        throw std::runtime_error("artifact: unsupported version " + std::to_string(version));
    IcArtifact a;
    a.config = j.at("config").get<ChartConfig>();
    const auto hash = j.at("config_hash").get<std::string>();
    if (hash != a.config.hash())
        throw std::runtime_error("artifact: stored config hash " + hash + " does not match its config (" +
                                 a.config.hash() + ")");
    const auto& order = j.at("branch_order");
    if (order.size() != DirectionPair::kCount) throw std::runtime_error("artifact: branch_order must list 8 branches");
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i].get<std::string>() != std::string(kAllDirections[i].name()))
            throw std::runtime_error("artifact: unexpected branch order");

    auto tables = std::make_shared<IcDistributionTable>();
    tables->config_hash = hash;
    j.at("seed").get_to(tables->seed);
    j.at("burn_in").get_to(tables->burn_in);
    j.at("spacing").get_to(tables->spacing);
    const auto& tj = j.at("tables");
    for (DirectionPair d : kAllDirections) tables->branches[d] = branch_from_json(tj.at(std::string(d.name())), std::string(d.name()));

    auto reservoir = std::make_shared<SteadyStateReservoir>();
    const auto& rj = j.at("reservoir");
    rj.at("burn_in").get_to(reservoir->burn_in);
    rj.at("spacing").get_to(reservoir->spacing);
    rj.at("snapshots").get_to(reservoir->snapshots);

    a.tables = std::move(tables);
    a.reservoir = std::move(reservoir);
    if (j.contains("benchmark_limits")) j.at("benchmark_limits").get_to(a.benchmark_limits);
    return a;
}

void save_artifact(const IcArtifact& artifact, const std::string& path) {
    const json j = artifact_to_json(artifact);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << j.dump() << '\n';
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot move " + tmp + " to " + path);
}

IcArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open artifact " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("artifact " + path + ": " + e.what());
    }
    return artifact_from_json(j);
}

IcArtifact load_artifact(const std::string& path, const ChartConfig& active) {
    IcArtifact a = load_artifact(path);
    if (a.config.hash() != active.hash())
        throw std::runtime_error("artifact " + path + " was built for config " + a.config.hash() +
                                 ", active config is " + active.hash());
    return a;
}

IcArtifact calibrate_artifact(ChartConfig cfg, const ArtifactBuildOptions& options,
                              const std::function<void(const std::string&)>& progress) {
    auto report = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    auto since = [](std::chrono::steady_clock::time_point start) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    cfg.control_limit_h.reset();
    cfg.validate();
    char buf[256];

    auto start = std::chrono::steady_clock::now();
    IcEstimationOptions ic_opt = options.ic;
    ic_opt.seed = options.seed;
    auto ic = estimate_ic_tables(cfg, ic_opt);
    std::snprintf(buf, sizeof buf, "in-control tables: burn-in %lld, M = %lld, seed %llu in %.1fs",
                  static_cast<long long>(ic_opt.burn_in), static_cast<long long>(ic_opt.samples),
                  static_cast<unsigned long long>(ic_opt.seed), since(start));
    report(buf);

    IcArtifact art;
    art.tables = std::make_shared<const IcDistributionTable>(std::move(ic.tables));
    art.reservoir = std::make_shared<const SteadyStateReservoir>(std::move(ic.reservoir));

    start = std::chrono::steady_clock::now();
    const auto primary = calibrate_control_limit_auto(art.tables, art.reservoir, cfg, cfg.arl0_target, options.reps,
                                                      options.tol, derive_seed(options.seed, {0x9a1ULL}),
                                                      options.threads);
    cfg.control_limit_h = primary.h;
    std::snprintf(buf, sizeof buf, "P_CUSUM: h = %.6f, ARL0 = %.1f (SE %.2f) in %.1fs", primary.h,
                  primary.arl.mean_delay, primary.arl.std_error, since(start));
    report(buf);

    for (const auto& spec : options.benchmarks) {
        start = std::chrono::steady_clock::now();
        const auto r = calibrate_benchmark(spec, cfg.arl0_target, options.reps, options.tol,
                                           derive_seed(options.seed, {0xbe7cULL}), options.threads);
        art.benchmark_limits[spec.key()] = r.h;
        std::snprintf(buf, sizeof buf, "%s: h = %.6f, ARL0 = %.1f (SE %.2f) in %.1fs", spec.key().c_str(), r.h,
                      r.arl.mean_delay, r.arl.std_error, since(start));
        report(buf);
    }
    art.config = cfg;
    return art;
}

}  // namespace acusum
