#pragma once

#include <array>
#include <vector>

#include "wavesym/grid.hpp"
#include "wavesym/region.hpp"

namespace wavesym {

// The two diagonals split every cell into four quarter triangles ("atoms").
// Each atom lies in exactly one (xi-bin, eta-bin) pair:
//   bottom: (i+j,   j-i)     right: (i+j+1, j-i)
//   top:    (i+j+1, j-i-1)   left:  (i+j,   j-i-1)
enum Atom : int { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

inline int atom_xi_bin(int i, int j, int a, int n) {
  return wrap(i + j + ((a == kRight || a == kTop) ? 1 : 0), n);
}
inline int atom_eta_bin(int i, int j, int a, int n) {
  return wrap(j - i - ((a == kTop || a == kLeft) ? 1 : 0), n);
}

// Atom centroid offsets inside a cell, in units of the cell size, as (t, x).
inline constexpr std::array<std::array<double, 2>, 4> kAtomCentroid = {{
    {1.0 / 6.0, 0.5},
    {0.5, 5.0 / 6.0},
    {5.0 / 6.0, 0.5},
    {0.5, 1.0 / 6.0},
}};

class RasterMask {
 public:
  RasterMask() = default;
  // Per-atom occupancies, layout ((i * n) + j) * 4 + atom.
  RasterMask(Resolution res, std::vector<double> atoms, int supersample = 1);
  // Every atom of a cell takes the cell value.
  static RasterMask from_cells(Resolution res, const std::vector<double>& w);

  const Resolution& resolution() const { return res_; }
  int supersample() const { return supersample_; }
  int n() const { return res_.n; }
  int nt() const { return res_.nt; }

  double atom(int i, int j, int a) const { return atoms_[(static_cast<size_t>(i) * res_.n + j) * 4 + a]; }
  const std::vector<double>& atoms() const { return atoms_; }
  double w(int i, int j) const;
  std::vector<double> cells() const;

  double measure() const;  // |G|
  bool zero_measure() const { return zero_measure_; }

  // Cellwise rotation by k bins in x.
  RasterMask shifted_x(int k) const;
  // Rows at or beyond nt_keep cleared.
  RasterMask truncated(int nt_keep) const;

  bool operator==(const RasterMask& o) const {
    return res_ == o.res_ && atoms_ == o.atoms_;
  }

 private:
  Resolution res_;
  int supersample_ = 1;
  std::vector<double> atoms_;
  bool zero_measure_ = true;
};

// Sample points of each atom in cell units (t, x): centroids of the
// supersample^2 congruent sub-triangles.
std::array<std::vector<std::array<double, 2>>, 4> atom_sample_offsets(int supersample);

// supersample^2 stratified sub-triangle centroids per atom. Uses all hardware
// threads when threads == 0.
RasterMask rasterize(const SpacetimeRegion& region, int n, int supersample, unsigned threads = 0);

// Rows are time ascending, gray = round(255 w).
GrayImage mask_to_image(const RasterMask& mask);

}  // namespace wavesym
