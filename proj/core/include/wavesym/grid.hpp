#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace wavesym {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Characteristic-aligned grid: dt == dx, so unit-slope lines run along cell
// diagonals.
struct Resolution {
  int n = 0;
  int nt = 0;
  double dx = 0.0;

  double dt() const { return dx; }
  double t_eff() const { return nt * dx; }

  // Rounds T to the nearest multiple of dx. Throws when the rounded horizon is
  // empty.
  static Resolution make(int n, double T);

  bool operator==(const Resolution&) const = default;
};

inline int wrap(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v < hi; }
  bool operator==(const Interval&) const = default;
};

// Reduces an arc [lo, hi] of the circle to at most two pieces inside [0, 2pi).
std::vector<Interval> normalize_arc(Interval arc);

// Subset of the n bins over [0, 2pi); bin k covers [k dx, (k+1) dx).
class BinSet {
 public:
  BinSet() = default;
  explicit BinSet(int n, bool value = false) : bits_(n, value ? 1 : 0) {}

  // Bins whose centers fall inside the union of arcs.
  static BinSet from_arcs(const std::vector<Interval>& arcs, int n);
  static BinSet from_indices(const std::vector<int>& bins, int n);

  int size() const { return static_cast<int>(bits_.size()); }
  bool test(int k) const { return bits_[wrap(k, size())] != 0; }
  void set(int k, bool v = true) { bits_[wrap(k, size())] = v ? 1 : 0; }
  int count() const;
  bool empty() const { return count() == 0; }
  bool full() const { return count() == size(); }
  double measure() const;

  BinSet complement() const;
  BinSet shifted(int k) const;  // bin b of the result == bin b - k of this
  std::vector<int> indices() const;
  // Maximal runs as arcs in radians, seam-wrapping runs split at 0.
  std::vector<Interval> arcs() const;

  bool operator==(const BinSet&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace wavesym
