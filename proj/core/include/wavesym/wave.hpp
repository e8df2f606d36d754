#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "wavesym/fibers.hpp"
#include "wavesym/raster.hpp"
#include "wavesym/region.hpp"
#include "wavesym/state.hpp"

namespace wavesym {

enum class Provenance { kCharacteristic, kSpectral, kForced };

const char* provenance_name(Provenance p);

// Characteristic fields per stored time. For grid solvers level i sits at
// t = i dt and p[i][j], q[i][j] are the values on xi-bin (j + i) and eta-bin
// (j - i) at cell center x_j.
struct Trajectory {
  Resolution res;
  Provenance provenance = Provenance::kCharacteristic;
  std::vector<double> times;
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> q;

  int levels() const { return static_cast<int>(times.size()); }
  std::vector<double> u_t(int level) const;
  std::vector<double> u_x(int level) const;
  double energy(int level) const;  // ||u_x||^2 + ||u_t||^2, midpoint rule
};

// Cell samples f[i * n + j] on rows i < nt. The density, when present, is the
// continuous force used by refinement diagnostics.
struct Forcing {
  Resolution res;
  std::vector<double> samples;
  std::function<double(double t, double x)> density;

  double at(int i, int j) const { return samples[static_cast<size_t>(i) * res.n + j]; }
  // Cell-center sampling of a continuous density.
  static Forcing from_density(const Resolution& res, std::function<double(double, double)> f);
  static Forcing constant(const Resolution& res, double value);
};

Trajectory solve_free_wave(const WaveState& state, const Resolution& res);
Trajectory solve_free_wave_spectral(const SpectralData& data, int n, const std::vector<double>& times);
Trajectory solve_forced_wave(const WaveState& state, const Forcing& forcing, const RasterMask& mask);

// u(t, x) = f0(x - direction t), levels 0..nt.
struct ScalarTrajectory {
  Resolution res;
  int direction = 1;
  std::vector<std::vector<double>> u;
};

ScalarTrajectory solve_transport(const std::vector<double>& f0, int direction, const Resolution& res);
// integral over G of |u|^2, each atom taking the value of its fiber.
double transport_observed_energy(const ScalarTrajectory& traj, const RasterMask& mask);

// I(t_level) = int_{A - t} (u_x + u_t) + int_{B + t} (u_x - u_t).
double conservation_functional(const Trajectory& traj, const BinSet& a, const BinSet& b, int level);

// |int_A U(0) - int_{A-T} U(T) + iint_{G, xi in A} f| for kXi (U = u_x + u_t),
// |int_{B+T} V(T) - int_B V(0) + iint_{G, eta in B} f| for kEta (V = u_x - u_t).
// The double integral uses the forcing density when present, otherwise the
// samples the solver saw.
double green_identity_residual(const Trajectory& traj, const Forcing& forcing,
                               const RasterMask& mask, const BinSet& set, CharFamily side);

// iint_{G, fiber in set} f with the scheme's own quadrature.
double forcing_integral(const Forcing& forcing, const RasterMask& mask, const BinSet& set,
                        CharFamily side);

double total_energy(const WaveState& state);
// int_G |u_t|^2 for a grid trajectory; each atom sees u_t = p - q of its
// (xi, eta) pair, time-interpolated at the atom centroid.
double observed_energy(const Trajectory& traj, const RasterMask& mask);
// Cumulative observed energy after each row, size nt + 1, starting at 0.
std::vector<double> observed_cumulative(const Trajectory& traj, const RasterMask& mask);
// Closed-form evaluation at the rasterizer's sample points.
double observed_energy(const ReferenceSolution& ref, const SpacetimeRegion& region, int n,
                       int supersample);

// Binary dump: "WSTR", int32 n, int32 nt, float64 dt, int32 fields, then per
// field (u_t, u_x) the (nt + 1) x n samples row-major as float64.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);

struct SeriesRow {
  double t = 0.0;
  double energy = 0.0;
  double functional = 0.0;
  double observed_cum = 0.0;
  bool operator==(const SeriesRow&) const = default;
};

std::vector<SeriesRow> time_series(const Trajectory& traj, const RasterMask& mask, const BinSet& a,
                                   const BinSet& b);
// Header row "t,E,I,observed_cum".
std::string series_csv(const std::vector<SeriesRow>& rows);

}  // namespace wavesym
