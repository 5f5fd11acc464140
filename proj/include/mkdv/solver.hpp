#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/scattering.hpp"

namespace mkdv {

enum class TimeScheme { Etdrk4, StrangSplit };

/// Time-stepping configuration for the periodic reference solver of
/// u_t = -u_xxx + 6 u^2 u_x.
struct EvolutionConfig {
    double dt = 0.05;
    double t_final = 0.0;
    std::vector<double> record_times;
    double dealias_fraction = 2.0 / 3.0;
    TimeScheme scheme = TimeScheme::Etdrk4;
    int threads = 1;
    double blowup_guard = 0.0;            // 0 selects 10*max|u0| + 1
    double wrap_window_fraction = 0.05;   // width of each boundary window
    double wrap_tolerance = 1e-6;         // L2-norm fraction triggering the warning
};

struct EvolutionSnapshot {
    double t = 0.0;
    std::vector<double> field;
    double imag_residue = 0.0;        // max |Im| left by the transforms, relative
    double boundary_fraction = 0.0;   // L2-norm fraction in the boundary windows
};

struct ConservedTrace {
    std::vector<double> t, i1, i2, energy;
};

struct EvolutionResult {
    std::vector<EvolutionSnapshot> snapshots;
    ConservedTrace trace;
    std::vector<std::string> warnings;
    double linear_cfl = 0.0;  // dt * xi_max^3 diagnostic
};

/// Exact linear (Airy) evolution: each Fourier mode gains e^{i t xi^3}.
std::vector<double> airy_propagator(const SpatialGrid& grid, std::span<const double> field,
                                    double t_step, int threads = 1);

/// Evolves u0 on its periodic grid, recording snapshots at cfg.record_times.
EvolutionResult evolve(const Potential& u0, const EvolutionConfig& cfg);

/// I1 = int u, I2 = int u^2, E = int (u_x^2 + u^4) with spectral derivative.
std::array<double, 3> conserved_quantities(const SpatialGrid& grid, std::span<const double> field);

void write_snapshot_csv(const SpatialGrid& grid, const EvolutionSnapshot& snap, std::ostream& os);
void write_evolution_manifest(const SpatialGrid& grid, const EvolutionConfig& cfg,
                              const EvolutionResult& result, std::ostream& os);

} // namespace mkdv
