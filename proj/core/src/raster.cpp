#include "wavesym/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wavesym {

RasterMask::RasterMask(Resolution res, std::vector<double> atoms, int supersample)
    : res_(res), supersample_(supersample), atoms_(std::move(atoms)) {
  if (atoms_.size() != static_cast<size_t>(res_.n) * res_.nt * 4) {
    throw std::invalid_argument("atom array does not match resolution");
  }
  for (double& v : atoms_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("occupancy outside [0,1]");
  }
  zero_measure_ = std::all_of(atoms_.begin(), atoms_.end(), [](double v) { return v == 0.0; });
}

RasterMask RasterMask::from_cells(Resolution res, const std::vector<double>& w) {
  if (w.size() != static_cast<size_t>(res.n) * res.nt) {
    throw std::invalid_argument("cell array does not match resolution");
  }
  std::vector<double> atoms(w.size() * 4);
  for (size_t c = 0; c < w.size(); ++c) {
    for (int a = 0; a < 4; ++a) atoms[c * 4 + a] = w[c];
  }
  return RasterMask(res, std::move(atoms));
}

double RasterMask::w(int i, int j) const {
  const size_t c = (static_cast<size_t>(i) * res_.n + j) * 4;
  return 0.25 * (atoms_[c] + atoms_[c + 1] + atoms_[c + 2] + atoms_[c + 3]);
}

std::vector<double> RasterMask::cells() const {
  std::vector<double> out(static_cast<size_t>(res_.n) * res_.nt);
  for (int i = 0; i < res_.nt; ++i) {
    for (int j = 0; j < res_.n; ++j) out[static_cast<size_t>(i) * res_.n + j] = w(i, j);
  }
  return out;
}

double RasterMask::measure() const {
  double s = 0.0;
  for (double v : atoms_) s += v;
  return s * res_.dx * res_.dx / 4.0;
}

RasterMask RasterMask::shifted_x(int k) const {
  std::vector<double> out(atoms_.size());
  for (int i = 0; i < res_.nt; ++i) {
    for (int j = 0; j < res_.n; ++j) {
      const int src = wrap(j - k, res_.n);
      for (int a = 0; a < 4; ++a) {
        out[(static_cast<size_t>(i) * res_.n + j) * 4 + a] = atom(i, src, a);
      }
    }
  }
  return RasterMask(res_, std::move(out), supersample_);
}

RasterMask RasterMask::truncated(int nt_keep) const {
  std::vector<double> out = atoms_;
  const size_t from = static_cast<size_t>(std::clamp(nt_keep, 0, res_.nt)) * res_.n * 4;
  std::fill(out.begin() + from, out.end(), 0.0);
  return RasterMask(res_, std::move(out), supersample_);
}

namespace {

// Corners of each atom in cell units, (t, x).
constexpr double kAtomCorners[4][3][2] = {
    {{0, 0}, {0, 1}, {0.5, 0.5}},
    {{0, 1}, {1, 1}, {0.5, 0.5}},
    {{1, 1}, {1, 0}, {0.5, 0.5}},
    {{1, 0}, {0, 0}, {0.5, 0.5}},
};

// Barycentric weights of the s^2 sub-triangle centroids of a triangle.
std::vector<std::array<double, 3>> subtriangle_centroids(int s) {
  std::vector<std::array<double, 3>> out;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; i + j < s; ++j) {
      const double u = (i + 1.0 / 3.0) / s, v = (j + 1.0 / 3.0) / s;
      out.push_back({u, v, 1.0 - u - v});
      if (i + j <= s - 2) {
        const double u2 = (i + 2.0 / 3.0) / s, v2 = (j + 2.0 / 3.0) / s;
        out.push_back({u2, v2, 1.0 - u2 - v2});
      }
    }
  }
  return out;
}

}  // namespace

std::array<std::vector<std::array<double, 2>>, 4> atom_sample_offsets(int supersample) {
  if (supersample < 1) throw std::invalid_argument("supersample must be at least 1");
  const auto bary = subtriangle_centroids(supersample);
  std::array<std::vector<std::array<double, 2>>, 4> offsets;
  for (int a = 0; a < 4; ++a) {
    for (const auto& b : bary) {
      double t = 0, x = 0;
      for (int k = 0; k < 3; ++k) {
        t += b[k] * kAtomCorners[a][k][0];
        x += b[k] * kAtomCorners[a][k][1];
      }
      offsets[a].push_back({t, x});
    }
  }
  return offsets;
}

RasterMask rasterize(const SpacetimeRegion& region, int n, int supersample, unsigned threads) {
  if (n < 8) throw std::invalid_argument("resolution too coarse: n must be at least 8");
  if (supersample < 1) throw std::invalid_argument("supersample must be at least 1");
  const Resolution res = Resolution::make(n, region.horizon());
  const auto offsets = atom_sample_offsets(supersample);
  std::vector<double> atoms(static_cast<size_t>(n) * res.nt * 4);
  const double h = res.dx;
  const double inv = 1.0 / static_cast<double>(offsets[0].size());
  auto rows = [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int a = 0; a < 4; ++a) {
          double s = 0.0;
          for (const auto& o : offsets[a]) s += region.occupancy((i + o[0]) * h, (j + o[1]) * h);
          atoms[(static_cast<size_t>(i) * n + j) * 4 + a] = std::clamp(s * inv, 0.0, 1.0);
        }
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(res.nt));
  if (threads <= 1) {
    rows(0, res.nt);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (res.nt + static_cast<int>(threads) - 1) / static_cast<int>(threads);
    for (int b = 0; b < res.nt; b += chunk) pool.emplace_back(rows, b, std::min(res.nt, b + chunk));
  }
  return RasterMask(res, std::move(atoms), supersample);
}

GrayImage mask_to_image(const RasterMask& mask) {
  GrayImage img;
  img.width = mask.n();
  img.height = mask.nt();
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  for (int i = 0; i < mask.nt(); ++i) {
    for (int j = 0; j < mask.n(); ++j) {
      img.pixels[static_cast<size_t>(i) * mask.n() + j] =
          static_cast<unsigned char>(std::lround(255.0 * mask.w(i, j)));
    }
  }
  return img;
}

}  // namespace wavesym
