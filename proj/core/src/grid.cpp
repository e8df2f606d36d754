#include "wavesym/grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wavesym {

Resolution Resolution::make(int n, double T) {
  if (n < 1) throw std::invalid_argument("resolution must have n >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw std::invalid_argument("horizon must be positive");
  }
  Resolution r;
  r.n = n;
  r.dx = kTwoPi / n;
  r.nt = static_cast<int>(std::lround(T / r.dx));
  if (r.nt < 1) throw std::invalid_argument("horizon shorter than half a time step");
  return r;
}

std::vector<Interval> normalize_arc(Interval arc) {
  if (arc.hi < arc.lo) throw std::invalid_argument("arc with hi < lo");
  if (arc.hi - arc.lo >= kTwoPi) return {{0.0, kTwoPi}};
  double lo = std::fmod(arc.lo, kTwoPi);
  if (lo < 0.0) lo += kTwoPi;
  if (lo >= kTwoPi) lo = 0.0;
  double hi = lo + (arc.hi - arc.lo);
  if (hi <= kTwoPi) return {{lo, hi}};
  return {{lo, kTwoPi}, {0.0, hi - kTwoPi}};
}

BinSet BinSet::from_arcs(const std::vector<Interval>& arcs, int n) {
  BinSet s(n);
  const double dx = kTwoPi / n;
  for (int k = 0; k < n; ++k) {
    const double c = (k + 0.5) * dx;
    for (const Interval& a : arcs) {
      for (const Interval& piece : normalize_arc(a)) {
        if (piece.contains(c)) s.set(k);
      }
    }
  }
  return s;
}

BinSet BinSet::from_indices(const std::vector<int>& bins, int n) {
  BinSet s(n);
  for (int b : bins) s.set(b);
  return s;
}

int BinSet::count() const {
  int c = 0;
  for (auto b : bits_) c += b;
  return c;
}

double BinSet::measure() const { return size() == 0 ? 0.0 : count() * (kTwoPi / size()); }

BinSet BinSet::complement() const {
  BinSet s = *this;
  for (auto& b : s.bits_) b = b ? 0 : 1;
  return s;
}

BinSet BinSet::shifted(int k) const {
  BinSet s(size());
  for (int b = 0; b < size(); ++b) s.bits_[b] = bits_[wrap(b - k, size())];
  return s;
}

std::vector<int> BinSet::indices() const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k) {
    if (bits_[k]) out.push_back(k);
  }
  return out;
}

std::vector<Interval> BinSet::arcs() const {
  std::vector<Interval> out;
  const int n = size();
  if (n == 0) return out;
  const double dx = kTwoPi / n;
  int k = 0;
  while (k < n) {
    if (!bits_[k]) {
      ++k;
      continue;
    }
    int start = k;
    while (k < n && bits_[k]) ++k;
    out.push_back({start * dx, k == n ? kTwoPi : k * dx});
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace wavesym
