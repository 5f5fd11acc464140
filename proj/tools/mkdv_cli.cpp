// Command-line front end: scattering tables, PDE evolution, Painleve tables,
// the full comparison pipeline, and power-law fits.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mkdv/harness.hpp"
#include "mkdv/io.hpp"

namespace fs = std::filesystem;
using namespace mkdv;

namespace {

ExperimentConfig load_config(const std::string& path, int threads_override,
                             std::uint64_t seed_override, bool seed_given) {
    ExperimentConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError("config not readable: " + path);
        cfg = read_config_json(in);
    }
    if (threads_override > 0) cfg.threads = threads_override;
    if (seed_given) cfg.seed = seed_override;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw IoError("cannot write " + (dir / name).string());
    return os;
}

int run_scatter(const ExperimentConfig& cfg, const fs::path& out) {
    const auto n = static_cast<std::size_t>(
                       std::llround(2.0 * cfg.scattering.half_width / cfg.scattering.dx)) +
                   1;
    const auto grid = SpatialGrid::line(-cfg.scattering.half_width, cfg.scattering.dx, n);
    const Potential u0 = build_profile(cfg.profile, grid);
    const ReflectionTable table =
        reflection_coefficient(u0, cfg.scattering.z_max, cfg.scattering.dz, cfg.threads);
    {
        auto os = open_out(out, "reflection.csv");
        write_csv(table, os);
    }
    {
        auto os = open_out(out, "reflection.json");
        write_json(table, os);
    }
    std::cout << "wrote " << (out / "reflection.csv").string() << " ("
              << table.size() << " nodes, max unitarity residual "
              << format_double(table.max_unitarity_residual) << ")\n";
    return 0;
}

int run_evolve(const ExperimentConfig& cfg, const fs::path& out) {
    const auto grid = SpatialGrid::periodic_centered(cfg.solver.length, cfg.solver.n);
    const Potential u0 = build_profile(cfg.profile, grid);
    EvolutionConfig ecfg;
    ecfg.dt = cfg.solver.dt;
    ecfg.t_final = cfg.times.back();
    ecfg.record_times = cfg.times;
    ecfg.dealias_fraction = cfg.solver.dealias_fraction;
    ecfg.scheme = cfg.solver.scheme;
    ecfg.threads = cfg.threads;
    const EvolutionResult result = evolve(u0, ecfg);
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
        auto os = open_out(out, name);
        write_snapshot_csv(grid, result.snapshots[i], os);
    }
    {
        auto os = open_out(out, "evolution.json");
        write_evolution_manifest(grid, ecfg, result, os);
    }
    std::cout << "wrote " << result.snapshots.size() << " snapshots to " << out.string() << '\n';
    for (const auto& w : result.warnings) std::cout << "warning: " << w << '\n';
    return 0;
}

int run_painleve(const ExperimentConfig& cfg, double rho, const fs::path& out) {
    const PainleveSolution sol =
        painleve2_solve(rho, cfg.painleve.s_min, cfg.painleve.s_max, cfg.painleve.ds);
    auto os = open_out(out, "painleve.csv");
    write_csv(sol, os);
    std::cout << "wrote " << (out / "painleve.csv").string() << " (" << sol.size()
              << " nodes, P(0) = " << format_double(painleve_eval(sol, 0.0)) << ")\n";
    return 0;
}

int run_compare_cmd(const ExperimentConfig& cfg, const fs::path& out) {
    const CompareReport report = run_compare(cfg);
    emit_report(report, out);
    std::cout << "wrote report to " << out.string() << " (" << report.rows.size() << " rows";
    if (report.painleve_used) std::cout << ", rho = " << format_double(report.rho);
    std::cout << ")\n";
    for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
    return 0;
}

int run_fit(const std::string& input) {
    std::ifstream in(input);
    if (!in) throw IoError("series not readable: " + input);
    std::string line;
    if (!std::getline(in, line) || line != "t,err")
        throw IoError("series must start with a t,err header");
    std::vector<std::pair<double, double>> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, err;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &err) != 2)
            throw IoError("series: malformed row: " + line);
        series.emplace_back(t, err);
    }
    const DecayFit fit = fit_decay(series);
    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["n_points"] = fit.n_points;
    std::cout << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"defocusing MKdV: scattering data, long-time asymptotics, reference solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", fit_input;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double rho = 0.0;

    app.add_option("--config", config_path, "experiment config (json)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (default: config value)");
    auto* seed_opt = app.add_option("--seed", seed, "rng seed (noise tests only)");

    auto* scatter = app.add_subcommand("scatter", "potential -> reflection-coefficient table");
    auto* evolve_cmd = app.add_subcommand("evolve", "potential -> PDE snapshots");
    auto* painleve = app.add_subcommand("painleve", "rho -> Painleve II table");
    painleve->add_option("--rho", rho, "Ablowitz-Segur boundary datum, |rho| < 1")->required();
    auto* compare = app.add_subcommand("compare", "full asymptotics-vs-solver pipeline");
    auto* fit = app.add_subcommand("fit", "power-law fit of a t,err series");
    fit->add_option("--input", fit_input, "csv with t,err header")->required();

    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    try {
        const ExperimentConfig cfg = load_config(config_path, threads, seed, seed_given);
        if (scatter->parsed()) return run_scatter(cfg, out_dir);
        if (evolve_cmd->parsed()) return run_evolve(cfg, out_dir);
        if (painleve->parsed()) return run_painleve(cfg, rho, out_dir);
        if (compare->parsed()) return run_compare_cmd(cfg, out_dir);
        if (fit->parsed()) return run_fit(fit_input);
    } catch (const Error& e) {
        nlohmann::json j;
        j["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"] = {{"kind", "internal"}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    }
    return 0;
}
