#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mkdv/harness.hpp"

using namespace mkdv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small, fast configuration used by the pipeline tests
ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.profile = {ProfileSpec::Kind::Sech, 0.3, 1.0, ""};
    cfg.solver.length = 400.0;
    cfg.solver.n = 4096;
    cfg.solver.dt = 0.05;
    cfg.scattering.z_max = 2.0;
    cfg.scattering.dz = 0.02;
    cfg.scattering.dx = 0.01;
    cfg.scattering.half_width = 30.0;
    cfg.times = {4.0, 6.0, 9.0};
    cfg.rays = {{RaySpec::Kind::FixedX, 0.0, "origin"}, {RaySpec::Kind::Ratio, -3.0, "left"}};
    return cfg;
}

} // namespace

TEST_CASE("fit_decay recovers exact power laws") {
    std::vector<std::pair<double, double>> series;
    for (double t : {10.0, 20.0, 40.0, 80.0}) series.emplace_back(t, std::pow(t, -0.75));
    const DecayFit fit = fit_decay(series);
    CHECK(fit.exponent == doctest::Approx(-0.75).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.n_points == 4);
}

TEST_CASE("fit_decay on constant series gives zero exponent") {
    std::vector<std::pair<double, double>> series{{10.0, 0.5}, {20.0, 0.5}, {40.0, 0.5}};
    const DecayFit fit = fit_decay(series);
    CHECK(fit.exponent == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit_decay with multiplicative noise stays near the true slope") {
    std::mt19937_64 rng(1234ULL);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i < 24; ++i) {
        const double t = 10.0 * std::pow(1.3, i);
        series.emplace_back(t, std::pow(t, -0.5) * (1.0 + noise(rng)));
    }
    const DecayFit fit = fit_decay(series);
    CHECK(std::abs(fit.exponent + 0.5) < 0.05);
}

TEST_CASE("fit_decay rejects bad input") {
    std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 0.5}};
    CHECK_THROWS_AS(fit_decay(two), InvalidArgument);
    std::vector<std::pair<double, double>> neg{{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.2}};
    CHECK_THROWS_AS(fit_decay(neg), InvalidArgument);
}

TEST_CASE("config json round trip") {
    ExperimentConfig cfg = small_config();
    cfg.thresholds.tau_i = 3.0;
    cfg.thresholds.tau_v = 3.0;
    cfg.threads = 2;
    const std::string text = config_to_json(cfg);
    std::istringstream in(text);
    const ExperimentConfig back = read_config_json(in);
    CHECK(config_to_json(back) == text);
    CHECK(back.solver.n == cfg.solver.n);
    CHECK(back.rays.size() == cfg.rays.size());
    CHECK(back.thresholds.tau_i == cfg.thresholds.tau_i);
}

TEST_CASE("config validation rejects bad input") {
    ExperimentConfig cfg = small_config();
    cfg.times = {5.0, 3.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.profile.amplitude = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    std::istringstream bad("{\"profile\": {\"kind\": \"triangle\"}}");
    CHECK_THROWS_AS(read_config_json(bad), ConfigError);
}

TEST_CASE("window helpers: sup, crossings, interpolation") {
    SpatialGrid g = SpatialGrid::periodic_centered(20.0, 256);
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = std::sin(g.x(i));
    CHECK(field_at(g, v, 0.4) == doctest::Approx(std::sin(0.4)).epsilon(1e-6));
    CHECK(window_sup(g, v, -2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-3));
    const auto crossings = zero_crossings(g, v, -1.0, 4.0);
    REQUIRE(crossings.size() == 2);  // x = 0 and x = pi
    CHECK(crossings[0] == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(crossings[1] == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("zero initial data produces a degenerate flagged report") {
    ExperimentConfig cfg = small_config();
    cfg.profile.kind = ProfileSpec::Kind::File;
    // zero everywhere: a file profile with all-zero samples
    const fs::path tmp = fs::temp_directory_path() / "mkdv_zero_profile.csv";
    {
        std::ofstream os(tmp);
        os << "x,u\n";
        for (int i = -100; i <= 100; ++i) os << 0.1 * i << ",0\n";
    }
    cfg.profile.path = tmp.string();
    const CompareReport report = run_compare(cfg);
    CHECK(report.degenerate);
    for (const auto& row : report.rows) {
        CHECK(row.u_num == 0.0);
        CHECK(row.u_as == 0.0);
        CHECK(row.err == 0.0);
    }
    CHECK(report.fits.empty());
}

TEST_CASE("compare pipeline: labels and emitted files") {
    ExperimentConfig cfg = small_config();
    const CompareReport report = run_compare(cfg);
    REQUIRE(report.rows.size() == 6);

    // origin rows are Region III (tau = 0), left-ray rows depend on tau
    for (const auto& row : report.rows) {
        if (row.x == 0.0) CHECK(row.region == Region::III);
        const Region again =
            classify_region(make_geometry(row.x, row.t), cfg.thresholds);
        CHECK(row.region == again);
        CHECK(row.envelope > 0.0);
    }
    CHECK(report.painleve_used);

    const fs::path out = fs::temp_directory_path() / "mkdv_report_test";
    fs::remove_all(out);
    emit_report(report, out);
    CHECK(fs::exists(out / "results.csv"));
    CHECK(fs::exists(out / "fits.csv"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "ray_origin.svg"));
    CHECK(fs::exists(out / "ray_left.svg"));

    const std::string results = slurp(out / "results.csv");
    CHECK(results.substr(0, 34) == "x,t,region,u_num,u_as,err,envelope");
    const std::string svg = slurp(out / "ray_origin.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("compare runs are deterministic byte-for-byte") {
    ExperimentConfig cfg = small_config();
    const fs::path out1 = fs::temp_directory_path() / "mkdv_det_1";
    const fs::path out2 = fs::temp_directory_path() / "mkdv_det_2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    emit_report(run_compare(cfg), out1);
    emit_report(run_compare(cfg), out2);
    for (const char* name : {"results.csv", "fits.csv", "manifest.json"}) {
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }

    // thread count must not change any emitted byte
    cfg.threads = 4;
    const fs::path out4 = fs::temp_directory_path() / "mkdv_det_4";
    fs::remove_all(out4);
    emit_report(run_compare(cfg), out4);
    CHECK(slurp(out1 / "results.csv") == slurp(out4 / "results.csv"));
}
