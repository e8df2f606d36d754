#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wavesym/raster.hpp"
#include "wavesym/state.hpp"

namespace wavesym {

// J(alpha, beta) = iint w e^{i(alpha t + beta x)} dt dx for the
// cell-piecewise-constant occupancy w, |alpha|, |beta| <= order.
struct IndicatorSpectrum {
  Resolution res;
  int order = 0;
  std::vector<std::complex<double>> values;
  double l2_squared = 0.0;  // iint w^2

  std::complex<double> integral(int alpha, int beta) const {
    return values[static_cast<size_t>(alpha + order) * (2 * order + 1) + (beta + order)];
  }
  // Normalized coefficient, ghat(0,0) = |G| / (2 pi T_eff).
  std::complex<double> coefficient(int alpha, int beta) const;
};

IndicatorSpectrum indicator_fourier(const RasterMask& mask, int order);

// Hermitian form over z = (P_{-N..N, k != 0}, Q_{-N..N, k != 0}, b0) where
// P_k = (ik a_k + b_k)/2 and Q_k = (ik a_k - b_k)/2, so that
// u_t = b0 + sum P_k e^{ik(x+t)} - Q_k e^{ik(x-t)} and
// E = 4 pi sum (|P_k|^2 + |Q_k|^2) + 2 pi |b0|^2.
struct GramMatrix {
  int modes = 0;
  std::vector<std::complex<double>> q;  // row-major, dim x dim
  std::vector<double> weight;           // diagonal E-normalization

  int dim() const { return static_cast<int>(weight.size()); }
  std::complex<double> at(int r, int c) const { return q[static_cast<size_t>(r) * dim() + c]; }
  // Index of P_k, Q_k and b0 in the coordinate vector.
  int p_index(int k) const { return k < 0 ? k + modes : k + modes - 1; }
  int q_index(int k) const { return 2 * modes + p_index(k); }
  int b0_index() const { return 4 * modes; }
};

GramMatrix gram_matrix(const IndicatorSpectrum& spectrum, int modes);

// Coordinates of spectral data and back.
std::vector<std::complex<double>> to_coordinates(const SpectralData& data);
SpectralData from_coordinates(const std::vector<std::complex<double>>& z, int modes);

// z^H Q z.
double quadratic_form(const GramMatrix& gram, const std::vector<std::complex<double>>& z);

struct EstimatorResult {
  double lambda_min = 0.0;
  double lambda_raw = 0.0;  // eigenvalue before clamping at 0
  int modes = 0;
  SpectralData argmin;
  std::vector<std::pair<int, double>> trace;  // (N_modes, lambda_min)
};

EstimatorResult min_rayleigh(const GramMatrix& gram);
// lambda_min for each N in modes_list from one spectrum.
EstimatorResult estimate_observability(const RasterMask& mask, const std::vector<int>& modes_list);

// Direct Gauss-Legendre quadrature of int_G |u_t|^2 for spectral data, with
// w constant per cell.
double direct_observed_energy(const SpectralData& data, const RasterMask& mask, int points = 6);

struct ThresholdResult {
  bool reached = false;
  int n_threshold = 0;  // smallest N with tail <= c/10, or max resolvable N
  double tail = 0.0;
  double target = 0.0;
  int n_max = 0;
  std::vector<std::pair<int, double>> trace;  // (N, tail)
};

// tail(N) = (sum_{|alpha|^2 > 2 N^2} |J(alpha)|^2 / (4 pi^2))^{1/2}. Needs
// T_eff = 2 pi; N is limited to order / sqrt(2).
double indicator_tail(const IndicatorSpectrum& spectrum, int N);
ThresholdResult high_freq_threshold(const IndicatorSpectrum& spectrum, double c0_line);

struct HighFreqReport {
  int n_threshold = 0;
  int modes = 0;  // data supported on N < |k| <= modes
  int trials = 0;
  double worst_ratio = 0.0;
  double subspace_min = 0.0;  // exact minimum over the same subspace
};

HighFreqReport verify_high_freq_inequality(const RasterMask& mask, int N, int trials, std::uint64_t seed);

// Binary layout: int32 order, then order^2 (re, im) float64 pairs row-major.
void write_matrix(const std::filesystem::path& path, const GramMatrix& gram);

}  // namespace wavesym
