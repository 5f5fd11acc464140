#include "mkdv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mkdv/interp.hpp"
#include "mkdv/io.hpp"
#include "mkdv/svg.hpp"

namespace mkdv {

namespace {

using nlohmann::json;

std::string kind_name(ProfileSpec::Kind k) {
    switch (k) {
        case ProfileSpec::Kind::Sech: return "sech";
        case ProfileSpec::Kind::Gaussian: return "gaussian";
        case ProfileSpec::Kind::File: return "file";
    }
    return "?";
}

ProfileSpec::Kind profile_kind(const std::string& s) {
    if (s == "sech") return ProfileSpec::Kind::Sech;
    if (s == "gaussian") return ProfileSpec::Kind::Gaussian;
    if (s == "file") return ProfileSpec::Kind::File;
    throw ConfigError("unknown profile kind: " + s);
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "ray" : out;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["profile"] = {{"kind", kind_name(cfg.profile.kind)},
                    {"amplitude", cfg.profile.amplitude},
                    {"width", cfg.profile.width},
                    {"path", cfg.profile.path}};
    j["solver"] = {{"length", cfg.solver.length},
                   {"n", cfg.solver.n},
                   {"dt", cfg.solver.dt},
                   {"dealias_fraction", cfg.solver.dealias_fraction},
                   {"scheme", cfg.solver.scheme == TimeScheme::Etdrk4 ? "etdrk4" : "strang"}};
    j["scattering"] = {{"z_max", cfg.scattering.z_max},
                       {"dz", cfg.scattering.dz},
                       {"dx", cfg.scattering.dx},
                       {"half_width", cfg.scattering.half_width}};
    j["painleve"] = {{"s_min", cfg.painleve.s_min},
                     {"s_max", cfg.painleve.s_max},
                     {"ds", cfg.painleve.ds}};
    j["thresholds"] = {{"m_prime", cfg.thresholds.m_prime},
                       {"tau_i", cfg.thresholds.tau_i},
                       {"tau_v", cfg.thresholds.tau_v},
                       {"growth_exponent", cfg.thresholds.growth_exponent}};
    j["envelope"] = {{"p", cfg.envelope.p}, {"eta", cfg.envelope.eta}, {"c", cfg.envelope.c}};
    j["rays"] = json::array();
    for (const auto& r : cfg.rays)
        j["rays"].push_back({{"kind", r.kind == RaySpec::Kind::Ratio ? "ratio" : "fixed_x"},
                             {"value", r.value},
                             {"name", r.name}});
    j["times"] = cfg.times;
    j["threads"] = cfg.threads;
    j["seed"] = cfg.seed;
    return j;
}

} // namespace

void ExperimentConfig::validate() const {
    if (profile.kind != ProfileSpec::Kind::File && !(profile.amplitude > 0.0))
        throw ConfigError("profile amplitude must be positive");
    if (profile.kind != ProfileSpec::Kind::File && !(profile.width > 0.0))
        throw ConfigError("profile width must be positive");
    if (times.empty()) throw ConfigError("need at least one probe time");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw ConfigError("probe times must be positive");
        if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("times must be sorted");
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
    thresholds.validate();
}

ExperimentConfig read_config_json(std::istream& is) {
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("profile")) {
            const auto& p = j["profile"];
            cfg.profile.kind = profile_kind(p.value("kind", "sech"));
            cfg.profile.amplitude = p.value("amplitude", cfg.profile.amplitude);
            cfg.profile.width = p.value("width", cfg.profile.width);
            cfg.profile.path = p.value("path", cfg.profile.path);
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            cfg.solver.length = s.value("length", cfg.solver.length);
            cfg.solver.n = s.value("n", cfg.solver.n);
            cfg.solver.dt = s.value("dt", cfg.solver.dt);
            cfg.solver.dealias_fraction = s.value("dealias_fraction", cfg.solver.dealias_fraction);
            const std::string scheme = s.value("scheme", "etdrk4");
            if (scheme == "etdrk4") cfg.solver.scheme = TimeScheme::Etdrk4;
            else if (scheme == "strang") cfg.solver.scheme = TimeScheme::StrangSplit;
            else throw ConfigError("unknown scheme: " + scheme);
        }
        if (j.contains("scattering")) {
            const auto& s = j["scattering"];
            cfg.scattering.z_max = s.value("z_max", cfg.scattering.z_max);
            cfg.scattering.dz = s.value("dz", cfg.scattering.dz);
            cfg.scattering.dx = s.value("dx", cfg.scattering.dx);
            cfg.scattering.half_width = s.value("half_width", cfg.scattering.half_width);
        }
        if (j.contains("painleve")) {
            const auto& s = j["painleve"];
            cfg.painleve.s_min = s.value("s_min", cfg.painleve.s_min);
            cfg.painleve.s_max = s.value("s_max", cfg.painleve.s_max);
            cfg.painleve.ds = s.value("ds", cfg.painleve.ds);
        }
        if (j.contains("thresholds")) {
            const auto& s = j["thresholds"];
            cfg.thresholds.m_prime = s.value("m_prime", cfg.thresholds.m_prime);
            cfg.thresholds.tau_i = s.value("tau_i", cfg.thresholds.tau_i);
            cfg.thresholds.tau_v = s.value("tau_v", cfg.thresholds.tau_v);
            cfg.thresholds.growth_exponent =
                s.value("growth_exponent", cfg.thresholds.growth_exponent);
        }
        if (j.contains("envelope")) {
            const auto& s = j["envelope"];
            cfg.envelope.p = s.value("p", cfg.envelope.p);
            cfg.envelope.eta = s.value("eta", cfg.envelope.eta);
            cfg.envelope.c = s.value("c", cfg.envelope.c);
        }
        if (j.contains("rays")) {
            cfg.rays.clear();
            for (const auto& r : j["rays"]) {
                RaySpec ray;
                const std::string kind = r.value("kind", "ratio");
                if (kind == "ratio") ray.kind = RaySpec::Kind::Ratio;
                else if (kind == "fixed_x") ray.kind = RaySpec::Kind::FixedX;
                else throw ConfigError("unknown ray kind: " + kind);
                ray.value = r.value("value", 0.0);
                ray.name = r.value("name", std::string("ray") + std::to_string(cfg.rays.size()));
                cfg.rays.push_back(ray);
            }
        }
        if (j.contains("times")) cfg.times = j["times"].get<std::vector<double>>();
        cfg.threads = j.value("threads", cfg.threads);
        cfg.seed = j.value("seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

Potential build_profile(const ProfileSpec& profile, const SpatialGrid& grid) {
    std::vector<double> v(grid.n, 0.0);
    switch (profile.kind) {
        case ProfileSpec::Kind::Sech:
            for (std::size_t i = 0; i < grid.n; ++i)
                v[i] = profile.amplitude / std::cosh(grid.x(i) / profile.width);
            break;
        case ProfileSpec::Kind::Gaussian:
            for (std::size_t i = 0; i < grid.n; ++i) {
                const double s = grid.x(i) / profile.width;
                v[i] = profile.amplitude * std::exp(-s * s);
            }
            break;
        case ProfileSpec::Kind::File: {
            std::ifstream in(profile.path);
            if (!in) throw IoError("profile file not readable: " + profile.path);
            std::string line;
            if (!std::getline(in, line) || line != "x,u")
                throw IoError("profile file must start with an x,u header");
            std::vector<double> xs, us;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                double x, u;
                if (std::sscanf(line.c_str(), "%lf,%lf", &x, &u) != 2)
                    throw IoError("profile file: malformed row: " + line);
                xs.push_back(x);
                us.push_back(u);
            }
            if (xs.size() < 4) throw IoError("profile file needs at least 4 samples");
            const double fdx = xs[1] - xs[0];
            for (std::size_t i = 1; i < xs.size(); ++i)
                if (std::abs(xs[i] - xs[0] - fdx * static_cast<double>(i)) > 1e-9)
                    throw IoError("profile file grid must be uniform");
            for (std::size_t i = 0; i < grid.n; ++i) {
                const double x = grid.x(i);
                if (x < xs.front() || x > xs.back()) continue;  // zero outside the file range
                v[i] = cubic_interp_uniform<double>(xs.front(), fdx, std::span<const double>(us),
                                                    x);
            }
            break;
        }
    }
    return Potential::make(grid, std::move(v));
}

DecayFit fit_decay(std::span<const std::pair<double, double>> series) {
    if (series.size() < 3) throw InvalidArgument("fit_decay: need at least 3 points");
    const auto n = static_cast<double>(series.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> lx(series.size()), ly(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& [t, err] = series[i];
        if (!(t > 0.0)) throw InvalidArgument("fit_decay: times must be positive");
        if (!(err > 0.0)) throw InvalidArgument("fit_decay: errors must be positive");
        lx[i] = std::log(t);
        ly[i] = std::log(err);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14) throw InvalidArgument("fit_decay: degenerate time grid");
    DecayFit fit;
    fit.n_points = static_cast<int>(series.size());
    fit.exponent = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.exponent * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double pred = fit.intercept + fit.exponent * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
    }
    fit.r_squared = (ss_tot > 1e-28) ? 1.0 - ss_res / ss_tot : (ss_res < 1e-28 ? 1.0 : 0.0);
    return fit;
}

double field_at(const SpatialGrid& grid, std::span<const double> field, double x) {
    return cubic_interp_uniform<double>(grid.x_min, grid.dx, field, x);
}

double window_sup(const SpatialGrid& grid, std::span<const double> field, double x_lo,
                  double x_hi) {
    double sup = 0.0;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil((x_lo - grid.x_min) / grid.dx));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor((x_hi - grid.x_min) / grid.dx));
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
         i <= std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(grid.n) - 1); ++i)
        sup = std::max(sup, std::abs(field[static_cast<std::size_t>(i)]));
    return sup;
}

std::vector<double> zero_crossings(const SpatialGrid& grid, std::span<const double> field,
                                   double x_lo, double x_hi) {
    std::vector<double> out;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil((x_lo - grid.x_min) / grid.dx));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor((x_hi - grid.x_min) / grid.dx));
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
         i < std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(grid.n) - 1); ++i) {
        const double a = field[static_cast<std::size_t>(i)];
        const double b = field[static_cast<std::size_t>(i) + 1];
        if (a == 0.0) {
            out.push_back(grid.x(static_cast<std::size_t>(i)));
        } else if ((a < 0.0) != (b < 0.0)) {
            const double frac = a / (a - b);
            out.push_back(grid.x(static_cast<std::size_t>(i)) + frac * grid.dx);
        }
    }
    return out;
}

std::vector<double> predicted_region1_crossings(const ReflectionTable& table, double t,
                                                double x_lo, double x_hi) {
    const auto leading_cos = [&](double x) {
        return std::cos(region1_phase(make_geometry(x, t), table));
    };
    std::vector<double> out;
    constexpr int kScan = 256;
    const double h = (x_hi - x_lo) / kScan;
    double prev = leading_cos(x_lo);
    for (int i = 1; i <= kScan; ++i) {
        const double x = x_lo + h * i;
        const double cur = leading_cos(x);
        if ((prev < 0.0) != (cur < 0.0)) {
            double a = x - h, b = x, fa = prev;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = leading_cos(m);
                if ((fa < 0.0) != (fm < 0.0)) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
                if (b - a < 1e-10 * (x_hi - x_lo)) break;
            }
            out.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    return out;
}

CompareReport run_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    CompareReport report;
    report.cfg = cfg;

    const SpatialGrid scatter_grid = SpatialGrid::line(
        -cfg.scattering.half_width, cfg.scattering.dx,
        static_cast<std::size_t>(
            std::llround(2.0 * cfg.scattering.half_width / cfg.scattering.dx)) +
            1);
    const Potential u_scatter = build_profile(cfg.profile, scatter_grid);
    report.degenerate = (u_scatter.max_abs() == 0.0);

    const SpatialGrid solver_grid = SpatialGrid::periodic_centered(cfg.solver.length, cfg.solver.n);
    const Potential u_solver = build_profile(cfg.profile, solver_grid);

    const ReflectionTable table =
        reflection_coefficient(u_scatter, cfg.scattering.z_max, cfg.scattering.dz, cfg.threads);

    EvolutionConfig ecfg;
    ecfg.dt = cfg.solver.dt;
    ecfg.t_final = cfg.times.back();
    ecfg.record_times = cfg.times;
    ecfg.dealias_fraction = cfg.solver.dealias_fraction;
    ecfg.scheme = cfg.solver.scheme;
    ecfg.threads = cfg.threads;
    const EvolutionResult evo = evolve(u_solver, ecfg);
    report.warnings = evo.warnings;

    const auto snapshot_for = [&](double t) -> const EvolutionSnapshot& {
        for (const auto& s : evo.snapshots)
            if (std::abs(s.t - t) < 1e-9) return s;
        throw Error("internal", "missing snapshot at t = " + format_double(t));
    };

    // Painleve data only if some probe lands in Regions II-IV
    bool need_painleve = false;
    for (const auto& ray : cfg.rays) {
        for (double t : cfg.times) {
            const Region label = classify_region(make_geometry(ray.x_at(t), t), cfg.thresholds);
            if (label == Region::II || label == Region::III || label == Region::IV)
                need_painleve = true;
        }
    }

    std::optional<PainleveSolution> painleve;
    if (need_painleve) {
        if (report.degenerate) {
            report.rho = 0.0;
        } else {
            std::vector<std::pair<double, double>> origin;
            for (double t : cfg.times)
                origin.emplace_back(t,
                                    field_at(solver_grid, snapshot_for(t).field, 0.0));
            report.rho =
                calibrate_rho(table, origin, cfg.painleve.s_min, &report.calibration);
        }
        painleve = painleve2_solve(report.rho, cfg.painleve.s_min, cfg.painleve.s_max,
                                   cfg.painleve.ds);
        report.painleve_used = true;
    }

    for (const auto& ray : cfg.rays) {
        std::vector<std::pair<double, double>> err_series;
        for (double t : cfg.times) {
            const double x = ray.x_at(t);
            CompareRow row;
            row.x = x;
            row.t = t;
            try {
                const PhaseGeometry geom = make_geometry(x, t);
                row.region = classify_region(geom, cfg.thresholds);
                row.u_num = field_at(solver_grid, snapshot_for(t).field, x);
                switch (row.region) {
                    case Region::I:
                        row.u_as = region1_leading(geom, table);
                        break;
                    case Region::II:
                    case Region::III:
                    case Region::IV:
                        row.u_as = region234_leading(geom, *painleve);
                        break;
                    case Region::V:
                        row.u_as = 0.0;  // leading term is pure decay
                        break;
                }
                row.err = std::abs(row.u_num - row.u_as);
                row.envelope = error_envelope(geom, row.region, cfg.envelope);
            } catch (const Error& e) {
                throw Error(e.kind(), std::string(e.what()) + " [probe x = " + format_double(x) +
                                          ", t = " + format_double(t) + "]");
            }
            err_series.emplace_back(t, row.err);
            report.rows.push_back(row);
        }
        if (!report.degenerate && err_series.size() >= 3 &&
            std::all_of(err_series.begin(), err_series.end(),
                        [](const auto& p) { return p.second > 0.0; })) {
            report.fits.emplace_back(ray.name, fit_decay(err_series));
        }
    }
    return report;
}

void emit_report(const CompareReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const auto open = [&](const std::string& name) {
        std::ofstream os(out_dir / name, std::ios::binary);
        if (!os) throw IoError("cannot write " + (out_dir / name).string());
        return os;
    };

    {
        auto os = open("results.csv");
        os << "x,t,region,u_num,u_as,err,envelope\n";
        for (const auto& r : report.rows) {
            os << format_double(r.x) << ',' << format_double(r.t) << ',' << to_string(r.region)
               << ',' << format_double(r.u_num) << ',' << format_double(r.u_as) << ','
               << format_double(r.err) << ',' << format_double(r.envelope) << '\n';
        }
    }
    {
        auto os = open("fits.csv");
        os << "ray,exponent,r_squared\n";
        for (const auto& [name, fit] : report.fits) {
            os << name << ',' << format_double(fit.exponent) << ','
               << format_double(fit.r_squared) << '\n';
        }
    }
    {
        auto os = open("manifest.json");
        nlohmann::json j;
        j["version"] = kVersion;
        j["config"] = nlohmann::json::parse(config_to_json(report.cfg));
        j["rho"] = report.rho;
        j["painleve_used"] = report.painleve_used;
        j["calibration"] = {{"residual_plus", report.calibration.residual_plus},
                            {"residual_minus", report.calibration.residual_minus},
                            {"ratio", report.calibration.ratio},
                            {"chosen", report.calibration.chosen}};
        j["degenerate"] = report.degenerate;
        j["warnings"] = report.warnings;
        os << j.dump(2) << '\n';
    }

    for (const auto& ray : report.cfg.rays) {
        SvgSeries num{"|u_num|", "#1f77b4", false, {}};
        SvgSeries as{"|u_as|", "#d62728", false, {}};
        SvgSeries err{"|u_num - u_as|", "#2ca02c", false, {}};
        SvgSeries env{"error envelope", "#7f7f7f", true, {}};
        for (const auto& r : report.rows) {
            if (std::abs(r.x - ray.x_at(r.t)) > 1e-9) continue;
            num.points.emplace_back(r.t, std::abs(r.u_num));
            as.points.emplace_back(r.t, std::abs(r.u_as));
            err.points.emplace_back(r.t, r.err);
            env.points.emplace_back(r.t, r.envelope);
        }
        auto os = open("ray_" + sanitize(ray.name) + ".svg");
        write_loglog_svg("ray " + ray.name, "t", "amplitude", {num, as, err, env}, os);
    }
}

} // namespace mkdv
