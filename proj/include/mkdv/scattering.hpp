#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

/// Sampled real potential u0 on a uniform grid. tail_epsilon is the absolute
/// level below which the tails are treated as zero when locating the
/// effective support.
struct Potential {
    SpatialGrid grid;
    std::vector<double> values;
    double tail_epsilon = 0.0;

    /// tail_epsilon <= 0 selects the default 1e-12 * max|values|.
    static Potential make(SpatialGrid grid, std::vector<double> values, double tail_epsilon = 0.0);

    double max_abs() const;

    /// Smallest index window [first, last] with |u| >= tail_epsilon inside.
    /// Empty optional means the potential is identically below the cut.
    std::optional<std::pair<std::size_t, std::size_t>> effective_support() const;
};

/// Transition-matrix entries at one real z. b_breve(z) = conj(b(z)) holds for
/// real potentials, so only (a, b) are stored. unitarity_residual is
/// | |a|^2 - |b|^2 - 1 | and refine_delta the step-halving difference.
struct TransitionMatrix {
    double z = 0.0;
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};
    double unitarity_residual = 0.0;
    double refine_delta = 0.0;

    std::complex<double> reflection() const { return std::conj(b) / a; }
};

enum class JostScheme {
    Rk4Envelope,     // fixed-step RK4 on the oscillation-removed envelope
    MagnusMidpoint,  // exact exponential of the midpoint-frozen envelope
};

struct JostOptions {
    JostScheme scheme = JostScheme::Rk4Envelope;
    bool refine = true;        // integrate again at h/2, keep the finer result
    double tolerance = 1e-8;   // step-halving agreement required when refining
};

/// Integrates the AKNS system across the effective support of u0 with Jost
/// boundary conditions and reads off the transition matrix at real z.
TransitionMatrix jost_solve(const Potential& u0, double z, const JostOptions& opts = {});

/// Reflection coefficient sampled on the symmetric grid k*dz, |k| <= z_max/dz.
struct ReflectionTable {
    double z_max = 0.0;
    double dz = 0.0;
    std::vector<double> z_grid;
    std::vector<std::complex<double>> r_values;
    double max_unitarity_residual = 0.0;

    std::size_t size() const { return z_grid.size(); }
    std::complex<double> r0() const { return r_values[r_values.size() / 2]; }
};

ReflectionTable reflection_coefficient(const Potential& u0, double z_max, double dz,
                                       int threads = 1, const JostOptions& opts = {});

/// Builds a table from explicit samples (symmetric uniform grid required).
ReflectionTable make_reflection_table(double z_max, double dz,
                                      std::vector<std::complex<double>> r_values);

/// Cubic interpolation of the table; exact at nodes, OutOfRange beyond z_max.
std::complex<double> r_at(const ReflectionTable& table, double z);

void write_csv(const ReflectionTable& table, std::ostream& os);
ReflectionTable read_reflection_csv(std::istream& is);
void write_json(const ReflectionTable& table, std::ostream& os);
ReflectionTable read_reflection_json(std::istream& is);

} // namespace mkdv
