#include "wavesym/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavesym {

double FiberData::measure() const {
  double s = 0.0;
  for (double v : mu) s += v;
  return s * res.dx;
}

FiberData fiber_profiles(const RasterMask& mask) {
  const int n = mask.n(), nt = mask.nt();
  const double quarter = mask.resolution().dx / 4.0;
  FiberData f;
  f.res = mask.resolution();
  f.mu.assign(static_cast<size_t>(n) * n, 0.0);
  f.capacity.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < 4; ++a) {
        const size_t idx =
            static_cast<size_t>(atom_xi_bin(i, j, a, n)) * n + atom_eta_bin(i, j, a, n);
        f.mu[idx] += mask.atom(i, j, a) * quarter;
        f.capacity[idx] += quarter;
      }
    }
  }
  f.m_plus.assign(n, 0.0);
  f.m_minus.assign(n, 0.0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      f.m_minus[p] += f.mu_at(p, q);
      f.m_plus[q] += f.mu_at(p, q);
    }
  }
  return f;
}

double gcc_floor(const Resolution& res) { return std::max(2.0 * res.dt(), 1e-9); }

GccReport check_gcc(const FiberData& fibers) {
  const int n = fibers.n();
  GccReport r;
  r.gcc_floor = gcc_floor(fibers.res);
  r.zero_xi = BinSet(n);
  r.zero_eta = BinSet(n);
  std::vector<FiberRef> all;
  for (int k = 0; k < n; ++k) {
    all.push_back({CharFamily::kXi, k, fibers.m_minus[k]});
    all.push_back({CharFamily::kEta, k, fibers.m_plus[k]});
    if (fibers.m_minus[k] < r.gcc_floor) r.zero_xi.set(k);
    if (fibers.m_plus[k] < r.gcc_floor) r.zero_eta.set(k);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const FiberRef& a, const FiberRef& b) { return a.measure < b.measure; });
  r.c0_est = all.empty() ? 0.0 : all.front().measure;
  r.c0_line_est = std::sqrt(2.0) * r.c0_est;
  all.resize(std::min<size_t>(all.size(), 8));
  r.worst_fibers = std::move(all);
  r.holds = r.c0_est > r.gcc_floor;
  r.weak_holds = r.zero_xi.empty() && r.zero_eta.empty();
  return r;
}

double transport_obs_constant(const FiberData& fibers, int direction) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  const auto& m = direction == 1 ? fibers.m_plus : fibers.m_minus;
  return *std::min_element(m.begin(), m.end());
}

}  // namespace wavesym
