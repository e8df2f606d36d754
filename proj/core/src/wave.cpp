#include "wavesym/wave.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wavesym {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kCharacteristic:
      return "characteristic-exact";
    case Provenance::kSpectral:
      return "spectral";
    case Provenance::kForced:
      return "leapfrog-forced";
  }
  return "?";
}

std::vector<double> Trajectory::u_t(int level) const {
  std::vector<double> out(p[level].size());
  for (size_t j = 0; j < out.size(); ++j) out[j] = p[level][j] - q[level][j];
  return out;
}

std::vector<double> Trajectory::u_x(int level) const {
  std::vector<double> out(p[level].size());
  for (size_t j = 0; j < out.size(); ++j) out[j] = p[level][j] + q[level][j];
  return out;
}

double Trajectory::energy(int level) const {
  double s = 0.0;
  for (size_t j = 0; j < p[level].size(); ++j) {
    s += p[level][j] * p[level][j] + q[level][j] * q[level][j];
  }
  return 2.0 * res.dx * s;
}

Forcing Forcing::from_density(const Resolution& res, std::function<double(double, double)> f) {
  Forcing out;
  out.res = res;
  out.samples.resize(static_cast<size_t>(res.n) * res.nt);
  for (int i = 0; i < res.nt; ++i) {
    for (int j = 0; j < res.n; ++j) {
      out.samples[static_cast<size_t>(i) * res.n + j] = f((i + 0.5) * res.dx, (j + 0.5) * res.dx);
    }
  }
  out.density = std::move(f);
  return out;
}

Forcing Forcing::constant(const Resolution& res, double value) {
  return from_density(res, [value](double, double) { return value; });
}

Trajectory solve_free_wave(const WaveState& state, const Resolution& res) {
  if (state.n() != res.n) throw std::invalid_argument("state size does not match resolution");
  const int n = res.n;
  const std::vector<double> p0 = state.p(), q0 = state.q();
  Trajectory tr;
  tr.res = res;
  tr.provenance = Provenance::kCharacteristic;
  tr.times.resize(res.nt + 1);
  tr.p.assign(res.nt + 1, std::vector<double>(n));
  tr.q.assign(res.nt + 1, std::vector<double>(n));
  for (int i = 0; i <= res.nt; ++i) {
    tr.times[i] = i * res.dx;
    for (int j = 0; j < n; ++j) {
      tr.p[i][j] = p0[wrap(j + i, n)];
      tr.q[i][j] = q0[wrap(j - i, n)];
    }
  }
  return tr;
}

Trajectory solve_free_wave_spectral(const SpectralData& data, int n, const std::vector<double>& times) {
  if (data.modes < 1) throw std::invalid_argument("spectral solver needs at least one mode");
  if (n < 1 || times.empty()) throw std::invalid_argument("empty sampling request");
  using C = std::complex<double>;
  const int M = data.modes;
  // c_k, d_k for the e^{ik(x+t)}, e^{ik(x-t)} parts.
  std::vector<C> c(2 * M + 1), d(2 * M + 1);
  for (int k = -M; k <= M; ++k) {
    if (k == 0) continue;
    const C ik(0.0, static_cast<double>(k));
    c[k + M] = 0.5 * (data.a_at(k) + data.b_at(k) / ik);
    d[k + M] = 0.5 * (data.a_at(k) - data.b_at(k) / ik);
  }
  const double b0 = data.b_at(0).real();
  Trajectory tr;
  tr.res.n = n;
  tr.res.dx = kTwoPi / n;
  tr.res.nt = static_cast<int>(times.size()) - 1;
  tr.provenance = Provenance::kSpectral;
  tr.times = times;
  tr.p.assign(times.size(), std::vector<double>(n));
  tr.q.assign(times.size(), std::vector<double>(n));
  for (size_t l = 0; l < times.size(); ++l) {
    const double t = times[l];
    for (int j = 0; j < n; ++j) {
      const double x = (j + 0.5) * tr.res.dx;
      const C e_plus = std::polar(1.0, x + t), e_minus = std::polar(1.0, x - t);
      C ep = 1.0, em = 1.0;
      double ux = 0.0, ut = b0;
      for (int k = 1; k <= M; ++k) {
        ep *= e_plus;
        em *= e_minus;
        const C ik(0.0, static_cast<double>(k));
        const C fp = ik * c[k + M] * ep, fm = ik * d[k + M] * em;
        const C gp = -ik * c[M - k] * std::conj(ep), gm = -ik * d[M - k] * std::conj(em);
        ux += (fp + fm + gp + gm).real();
        ut += (fp - fm + gp - gm).real();
      }
      tr.p[l][j] = 0.5 * (ux + ut);
      tr.q[l][j] = 0.5 * (ux - ut);
    }
  }
  return tr;
}

Trajectory solve_forced_wave(const WaveState& state, const Forcing& forcing, const RasterMask& mask) {
  const Resolution& res = mask.resolution();
  if (!(forcing.res == res) || forcing.samples.size() != static_cast<size_t>(res.n) * res.nt) {
    throw std::invalid_argument("forcing grid does not match the mask");
  }
  Trajectory tr = solve_free_wave(state, res);
  tr.provenance = Provenance::kForced;
  const int n = res.n;
  const double c = res.dx / 8.0;
  for (int i = 0; i < res.nt; ++i) {
    for (int j = 0; j < n; ++j) {
      const int jr = wrap(j + 1, n), jl = wrap(j - 1, n);
      const double sp = forcing.at(i, jr) * (mask.atom(i, jr, kBottom) + mask.atom(i, jr, kLeft)) +
                        forcing.at(i, j) * (mask.atom(i, j, kTop) + mask.atom(i, j, kRight));
      const double sq = forcing.at(i, j) * (mask.atom(i, j, kTop) + mask.atom(i, j, kLeft)) +
                        forcing.at(i, jl) * (mask.atom(i, jl, kBottom) + mask.atom(i, jl, kRight));
      tr.p[i + 1][j] = tr.p[i][jr] + c * sp;
      tr.q[i + 1][j] = tr.q[i][jl] - c * sq;
    }
  }
  return tr;
}

ScalarTrajectory solve_transport(const std::vector<double>& f0, int direction, const Resolution& res) {
  if (static_cast<int>(f0.size()) != res.n) throw std::invalid_argument("datum size does not match resolution");
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  ScalarTrajectory tr;
  tr.res = res;
  tr.direction = direction;
  tr.u.assign(res.nt + 1, std::vector<double>(res.n));
  for (int i = 0; i <= res.nt; ++i) {
    for (int j = 0; j < res.n; ++j) tr.u[i][j] = f0[wrap(j - direction * i, res.n)];
  }
  return tr;
}

double transport_observed_energy(const ScalarTrajectory& traj, const RasterMask& mask) {
  const Resolution& res = mask.resolution();
  if (traj.res.n != res.n) throw std::invalid_argument("trajectory does not match the mask");
  const int n = res.n;
  const std::vector<double>& f0 = traj.u.front();
  const int rows = std::min(res.nt, static_cast<int>(traj.u.size()) - 1);
  double s = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < 4; ++a) {
        const int bin = traj.direction == 1 ? atom_eta_bin(i, j, a, n) : atom_xi_bin(i, j, a, n);
        s += mask.atom(i, j, a) * f0[bin] * f0[bin];
      }
    }
  }
  return s * res.dx * res.dx / 4.0;
}

double conservation_functional(const Trajectory& traj, const BinSet& a, const BinSet& b, int level) {
  const int n = traj.res.n;
  if (a.size() != n || b.size() != n) throw std::invalid_argument("bin set size mismatch");
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    if (a.test(j + level)) s += traj.p[level][j];
    if (b.test(j - level)) s += traj.q[level][j];
  }
  return 2.0 * traj.res.dx * s;
}

namespace {

// Atom time weight of level i + 1 (centroid height inside the cell).
constexpr std::array<double, 4> kUpperWeight = {1.0 / 6.0, 0.5, 5.0 / 6.0, 0.5};

bool atom_in(const BinSet& set, CharFamily side, int i, int j, int a, int n) {
  return set.test(side == CharFamily::kXi ? atom_xi_bin(i, j, a, n) : atom_eta_bin(i, j, a, n));
}

double reference_forcing_integral(const Forcing& forcing, const RasterMask& mask, const BinSet& set,
                                  CharFamily side, int rows) {
  const Resolution& res = mask.resolution();
  const int n = res.n;
  const double h = res.dx;
  const auto offsets = atom_sample_offsets(4);
  const double area = h * h / 4.0 / static_cast<double>(offsets[0].size());
  double s = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < 4; ++a) {
        const double occ = mask.atom(i, j, a);
        if (occ == 0.0 || !atom_in(set, side, i, j, a, n)) continue;
        double f = 0.0;
        for (const auto& o : offsets[a]) f += forcing.density((i + o[0]) * h, (j + o[1]) * h);
        s += occ * f * area;
      }
    }
  }
  return s;
}

double scheme_forcing_integral(const Forcing& forcing, const RasterMask& mask, const BinSet& set,
                               CharFamily side, int rows) {
  const Resolution& res = mask.resolution();
  const int n = res.n;
  double s = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < 4; ++a) {
        if (atom_in(set, side, i, j, a, n)) s += forcing.at(i, j) * mask.atom(i, j, a);
      }
    }
  }
  return s * res.dx * res.dx / 4.0;
}

}  // namespace

double forcing_integral(const Forcing& forcing, const RasterMask& mask, const BinSet& set,
                        CharFamily side) {
  return scheme_forcing_integral(forcing, mask, set, side, mask.nt());
}

double green_identity_residual(const Trajectory& traj, const Forcing& forcing, const RasterMask& mask,
                               const BinSet& set, CharFamily side) {
  const int n = traj.res.n;
  if (set.size() != n || mask.n() != n) throw std::invalid_argument("size mismatch");
  const int last = traj.levels() - 1;
  const int rows = std::min(last, mask.nt());
  const double f = forcing.density ? reference_forcing_integral(forcing, mask, set, side, rows)
                                   : scheme_forcing_integral(forcing, mask, set, side, rows);
  double start = 0.0, end = 0.0;
  for (int j = 0; j < n; ++j) {
    if (side == CharFamily::kXi) {
      if (set.test(j)) start += traj.p[0][j];
      if (set.test(j + last)) end += traj.p[last][j];
    } else {
      if (set.test(j)) start += traj.q[0][j];
      if (set.test(j - last)) end += traj.q[last][j];
    }
  }
  start *= 2.0 * traj.res.dx;
  end *= 2.0 * traj.res.dx;
  return side == CharFamily::kXi ? std::abs(start - end + f) : std::abs(end - start + f);
}

double total_energy(const WaveState& state) { return state.energy(); }

std::vector<double> observed_cumulative(const Trajectory& traj, const RasterMask& mask) {
  const Resolution& res = mask.resolution();
  if (traj.res.n != res.n) throw std::invalid_argument("trajectory does not match the mask");
  const int n = res.n;
  const int rows = std::min(res.nt, traj.levels() - 1);
  std::vector<double> cum(rows + 1, 0.0);
  const double area = res.dx * res.dx / 4.0;
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < 4; ++a) {
        const double occ = mask.atom(i, j, a);
        if (occ == 0.0) continue;
        const int pb = atom_xi_bin(i, j, a, n), qb = atom_eta_bin(i, j, a, n);
        const double w = kUpperWeight[a];
        const double p = (1.0 - w) * traj.p[i][wrap(pb - i, n)] + w * traj.p[i + 1][wrap(pb - i - 1, n)];
        const double q = (1.0 - w) * traj.q[i][wrap(qb + i, n)] + w * traj.q[i + 1][wrap(qb + i + 1, n)];
        s += occ * (p - q) * (p - q);
      }
    }
    cum[i + 1] = cum[i] + s * area;
  }
  return cum;
}

double observed_energy(const Trajectory& traj, const RasterMask& mask) {
  return observed_cumulative(traj, mask).back();
}

double observed_energy(const ReferenceSolution& ref, const SpacetimeRegion& region, int n, int supersample) {
  const Resolution res = Resolution::make(n, region.horizon());
  const auto offsets = atom_sample_offsets(supersample);
  const double h = res.dx;
  const double area = h * h / 4.0 / static_cast<double>(offsets[0].size());
  std::vector<double> row_sum(res.nt, 0.0);
  auto rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int a = 0; a < 4; ++a) {
          for (const auto& o : offsets[a]) {
            const double t = (i + o[0]) * h, x = (j + o[1]) * h;
            const double occ = region.occupancy(t, x);
            if (occ == 0.0) continue;
            const double v = ref.u_t(t, x);
            s += occ * v * v;
          }
        }
      }
      row_sum[i] = s * area;
    }
  };
  const int threads = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, res.nt);
  {
    std::vector<std::jthread> pool;
    const int chunk = (res.nt + threads - 1) / threads;
    for (int b = 0; b < res.nt; b += chunk) pool.emplace_back(rows, b, std::min(res.nt, b + chunk));
  }
  double s = 0.0;
  for (double r : row_sum) s += r;
  return s;
}

namespace {

constexpr char kMagic[4] = {'W', 'S', 'T', 'R'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated trajectory file");
  return v;
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(kMagic, 4);
  put<std::int32_t>(os, traj.res.n);
  put<std::int32_t>(os, traj.levels() - 1);
  put<double>(os, traj.res.dt());
  put<std::int32_t>(os, 2);
  for (int l = 0; l < traj.levels(); ++l) {
    for (double v : traj.u_t(l)) put<double>(os, v);
  }
  for (int l = 0; l < traj.levels(); ++l) {
    for (double v : traj.u_x(l)) put<double>(os, v);
  }
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a trajectory file");
  const int n = get<std::int32_t>(is);
  const int nt = get<std::int32_t>(is);
  const double dt = get<double>(is);
  const int fields = get<std::int32_t>(is);
  if (n < 1 || nt < 0 || fields != 2) throw std::runtime_error("bad trajectory header");
  Trajectory tr;
  tr.res.n = n;
  tr.res.nt = nt;
  tr.res.dx = dt;
  tr.p.assign(nt + 1, std::vector<double>(n));
  tr.q.assign(nt + 1, std::vector<double>(n));
  std::vector<std::vector<double>> ut(nt + 1, std::vector<double>(n));
  for (auto& row : ut) {
    for (double& v : row) v = get<double>(is);
  }
  for (int l = 0; l <= nt; ++l) {
    tr.times.push_back(l * dt);
    for (int j = 0; j < n; ++j) {
      const double ux = get<double>(is);
      tr.p[l][j] = 0.5 * (ux + ut[l][j]);
      tr.q[l][j] = 0.5 * (ux - ut[l][j]);
    }
  }
  return tr;
}

std::vector<SeriesRow> time_series(const Trajectory& traj, const RasterMask& mask, const BinSet& a,
                                   const BinSet& b) {
  const std::vector<double> cum = observed_cumulative(traj, mask);
  std::vector<SeriesRow> rows;
  for (int l = 0; l < traj.levels(); ++l) {
    SeriesRow r;
    r.t = traj.times[l];
    r.energy = traj.energy(l);
    r.functional = conservation_functional(traj, a, b, l);
    r.observed_cum = cum[std::min<size_t>(l, cum.size() - 1)];
    rows.push_back(r);
  }
  return rows;
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::ostringstream os;
  os << "t,E,I,observed_cum\n";
  for (const SeriesRow& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.energy) << ',' << format_double(r.functional)
       << ',' << format_double(r.observed_cum) << '\n';
  }
  return os.str();
}

}  // namespace wavesym
