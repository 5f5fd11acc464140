#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mkdv/asymptotics.hpp"
#include "mkdv/phase.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/solver.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

inline constexpr const char* kVersion = "0.1.0";

struct ProfileSpec {
    enum class Kind { Sech, Gaussian, File };
    Kind kind = Kind::Sech;
    double amplitude = 0.3;
    double width = 1.0;
    std::string path;  // File kind: csv with x,u rows
};

struct RaySpec {
    enum class Kind { Ratio, FixedX };
    Kind kind = Kind::Ratio;
    double value = -3.0;  // x = value * t, or x = value for FixedX
    std::string name = "ray";

    double x_at(double t) const { return kind == Kind::Ratio ? value * t : value; }
};

struct ScatteringParams {
    double z_max = 6.0;
    double dz = 0.005;
    double dx = 0.005;       // potential sampling step
    double half_width = 32.0;  // potential domain [-half_width, half_width]
};

struct PainleveParams {
    double s_min = -12.0;
    double s_max = 8.0;
    double ds = 1e-3;
};

struct SolverParams {
    double length = 1600.0;
    std::size_t n = 16384;
    double dt = 0.05;
    double dealias_fraction = 2.0 / 3.0;
    TimeScheme scheme = TimeScheme::Etdrk4;
};

struct ExperimentConfig {
    ProfileSpec profile;
    SolverParams solver;
    ScatteringParams scattering;
    PainleveParams painleve;
    RegionThresholds thresholds;
    EnvelopeParams envelope;
    std::vector<RaySpec> rays;
    std::vector<double> times{25.0, 50.0, 100.0, 200.0};
    int threads = 1;
    std::uint64_t seed = 0;  // noise tests only; echoed into the manifest

    void validate() const;
};

ExperimentConfig read_config_json(std::istream& is);
std::string config_to_json(const ExperimentConfig& cfg);

/// Samples the configured profile onto a grid.
Potential build_profile(const ProfileSpec& profile, const SpatialGrid& grid);

struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

/// Least-squares power-law fit on (log t, log err); rejects err <= 0 and
/// series shorter than 3.
DecayFit fit_decay(std::span<const std::pair<double, double>> series);

struct CompareRow {
    double x = 0.0;
    double t = 0.0;
    Region region = Region::III;
    double u_num = 0.0;
    double u_as = 0.0;
    double err = 0.0;
    double envelope = 0.0;
};

struct CompareReport {
    ExperimentConfig cfg;
    std::vector<CompareRow> rows;
    std::vector<std::pair<std::string, DecayFit>> fits;  // per ray, err-vs-t
    double rho = 0.0;
    CalibrationReport calibration;
    bool painleve_used = false;
    std::vector<std::string> warnings;
    bool degenerate = false;  // zero initial data
};

CompareReport run_compare(const ExperimentConfig& cfg);

/// Writes results.csv, fits.csv, manifest.json and one SVG per ray.
void emit_report(const CompareReport& report, const std::filesystem::path& out_dir);

/// Cubic interpolation of a snapshot field at position x.
double field_at(const SpatialGrid& grid, std::span<const double> field, double x);

/// max |u| over the grid nodes inside [x_lo, x_hi].
double window_sup(const SpatialGrid& grid, std::span<const double> field, double x_lo,
                  double x_hi);

/// Zero crossings of the sampled field inside [x_lo, x_hi] (linear root pass).
std::vector<double> zero_crossings(const SpatialGrid& grid, std::span<const double> field,
                                   double x_lo, double x_hi);

/// Zero crossings of the Region I leading cosine inside [x_lo, x_hi] at time
/// t (roots of the predicted phase mod pi), by bisection on the phase.
std::vector<double> predicted_region1_crossings(const ReflectionTable& table, double t,
                                                double x_lo, double x_hi);

} // namespace mkdv
