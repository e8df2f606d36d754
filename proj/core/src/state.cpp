#include "wavesym/state.hpp"

#include <cmath>
#include <stdexcept>

namespace wavesym {

WaveState WaveState::from_characteristic(const std::vector<double>& p,
                                         const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("p and q size mismatch");
  WaveState s;
  s.u0x.resize(p.size());
  s.u1.resize(p.size());
  for (size_t j = 0; j < p.size(); ++j) {
    s.u0x[j] = p[j] + q[j];
    s.u1[j] = p[j] - q[j];
  }
  return s;
}

std::vector<double> WaveState::p() const {
  std::vector<double> out(u0x.size());
  for (size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (u0x[j] + u1[j]);
  return out;
}

std::vector<double> WaveState::q() const {
  std::vector<double> out(u0x.size());
  for (size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (u0x[j] - u1[j]);
  return out;
}

double WaveState::energy() const {
  if (u0x.empty()) return 0.0;
  const double dx = kTwoPi / n();
  double e = 0.0;
  for (size_t j = 0; j < u0x.size(); ++j) e += u0x[j] * u0x[j] + u1[j] * u1[j];
  return e * dx;
}

double WaveState::mean_u0x() const {
  if (u0x.empty()) return 0.0;
  double s = 0.0;
  for (double v : u0x) s += v;
  return s / n();
}

bool SpectralData::is_real(double tol) const {
  for (int k = 0; k <= modes; ++k) {
    if (std::abs(a_at(k) - std::conj(a_at(-k))) > tol) return false;
    if (std::abs(b_at(k) - std::conj(b_at(-k))) > tol) return false;
  }
  return true;
}

double SpectralData::energy() const {
  double e = 0.0;
  for (int k = -modes; k <= modes; ++k) {
    e += static_cast<double>(k) * k * std::norm(a_at(k)) + std::norm(b_at(k));
  }
  return kTwoPi * e;
}

WaveState SpectralData::sample(int n) const {
  if (2 * modes >= n) throw std::invalid_argument("grid too coarse for spectral data");
  WaveState s;
  s.u0x.assign(n, 0.0);
  s.u1.assign(n, 0.0);
  const double dx = kTwoPi / n;
  for (int j = 0; j < n; ++j) {
    const double x = (j + 0.5) * dx;
    std::complex<double> ux = 0.0, v = 0.0;
    for (int k = -modes; k <= modes; ++k) {
      const std::complex<double> e = std::polar(1.0, k * x);
      ux += std::complex<double>(0.0, k) * a_at(k) * e;
      v += b_at(k) * e;
    }
    s.u0x[j] = ux.real();
    s.u1[j] = v.real();
  }
  return s;
}

}  // namespace wavesym
