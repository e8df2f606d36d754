#pragma once

#include <complex>
#include <vector>

#include "wavesym/grid.hpp"

namespace wavesym {

// Grid form of initial data: u0x = d/dx u0 and u1 sampled per x-cell.
struct WaveState {
  std::vector<double> u0x;
  std::vector<double> u1;

  static WaveState from_characteristic(const std::vector<double>& p,
                                       const std::vector<double>& q);

  int n() const { return static_cast<int>(u0x.size()); }
  std::vector<double> p() const;  // u_xi at t = 0
  std::vector<double> q() const;  // u_eta at t = 0
  double energy() const;          // ||u0x||^2 + ||u1||^2 by the midpoint rule
  double mean_u0x() const;
};

// Fourier form: u0 = sum a_k e^{ikx}, u1 = sum b_k e^{ikx}, |k| <= modes.
// Coefficients are stored at index k + modes.
struct SpectralData {
  int modes = 0;
  std::vector<std::complex<double>> a;
  std::vector<std::complex<double>> b;

  explicit SpectralData(int modes = 0)
      : modes(modes), a(2 * modes + 1), b(2 * modes + 1) {}

  std::complex<double>& a_at(int k) { return a[k + modes]; }
  std::complex<double>& b_at(int k) { return b[k + modes]; }
  std::complex<double> a_at(int k) const { return a[k + modes]; }
  std::complex<double> b_at(int k) const { return b[k + modes]; }

  // Real data: coefficients satisfy c_{-k} = conj(c_k).
  bool is_real(double tol = 1e-12) const;
  // 2 pi sum (k^2 |a_k|^2 + |b_k|^2).
  double energy() const;
  // u0x and u1 at cell centers (j + 1/2) dx.
  WaveState sample(int n) const;
};

}  // namespace wavesym
