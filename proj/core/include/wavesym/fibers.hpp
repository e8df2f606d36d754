#pragma once

#include <vector>

#include "wavesym/grid.hpp"
#include "wavesym/raster.hpp"

namespace wavesym {

// Fiber measures in time units. m_plus[q] integrates G along the eta-line
// x - t = x_q (trace at t = 0 is bin q); m_minus[p] along the xi-line
// x + t = x_p. mu[p * n + q] is the time measure of G inside the
// (xi-bin p, eta-bin q) diamond, so its row sums are m_minus and its column
// sums m_plus.
struct FiberData {
  Resolution res;
  std::vector<double> m_plus;
  std::vector<double> m_minus;
  std::vector<double> mu;
  std::vector<double> capacity;  // mu of a fully occupied grid

  int n() const { return res.n; }
  double mu_at(int p, int q) const { return mu[static_cast<size_t>(p) * res.n + q]; }
  double cap_at(int p, int q) const { return capacity[static_cast<size_t>(p) * res.n + q]; }
  double measure() const;  // |G| from the mu table
};

FiberData fiber_profiles(const RasterMask& mask);

struct FiberRef {
  CharFamily family = CharFamily::kXi;
  int bin = 0;
  double measure = 0.0;
  bool operator==(const FiberRef&) const = default;
};

struct GccReport {
  bool holds = false;
  double c0_est = 0.0;
  double c0_line_est = 0.0;
  double gcc_floor = 0.0;
  std::vector<FiberRef> worst_fibers;
  bool weak_holds = false;
  BinSet zero_xi;   // A0
  BinSet zero_eta;  // B0

  bool operator==(const GccReport&) const = default;
};

double gcc_floor(const Resolution& res);
GccReport check_gcc(const FiberData& fibers);

// Exact best constant for transport observability: direction +1 means
// u = f(x - t), which is constant on eta-lines.
double transport_obs_constant(const FiberData& fibers, int direction);

}  // namespace wavesym
