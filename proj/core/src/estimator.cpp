#include "wavesym/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace wavesym {

using C = std::complex<double>;

namespace {

double sinc(double v) { return std::abs(v) < 1e-12 ? 1.0 : std::sin(v) / v; }

}  // namespace

C IndicatorSpectrum::coefficient(int alpha, int beta) const {
  return integral(alpha, beta) / (kTwoPi * res.t_eff());
}

IndicatorSpectrum indicator_fourier(const RasterMask& mask, int order) {
  const Resolution& res = mask.resolution();
  if (order < 0) throw std::invalid_argument("negative spectrum order");
  if (2 * order > res.n) throw std::invalid_argument("spectrum order exceeds n/2");
  const int n = res.n, nt = res.nt, w = 2 * order + 1;
  const double h = res.dx;
  IndicatorSpectrum s;
  s.res = res;
  s.order = order;
  // Row transforms R_i(beta) = sum_j w_ij e^{i beta x_j}.
  std::vector<C> rows(static_cast<size_t>(nt) * w);
  std::vector<double> sq(nt, 0.0);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      for (int j = 0; j < n; ++j) {
        const double c = mask.w(i, j);
        if (c == 0.0) continue;
        sq[i] += c * c;
        const double x = (j + 0.5) * h;
        const C step = std::polar(1.0, x);
        C e = std::polar(1.0, -order * x);
        for (int b = 0; b < w; ++b) {
          rows[static_cast<size_t>(i) * w + b] += c * e;
          e *= step;
        }
      }
    }
  };
  const int threads = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, nt));
  {
    std::vector<std::jthread> pool;
    const int chunk = (nt + threads - 1) / threads;
    for (int b = 0; b < nt; b += chunk) pool.emplace_back(work, b, std::min(nt, b + chunk));
  }
  s.values.assign(static_cast<size_t>(w) * w, C{});
  for (int i = 0; i < nt; ++i) {
    const double t = (i + 0.5) * h;
    const C step = std::polar(1.0, t);
    C e = std::polar(1.0, -order * t);
    for (int a = 0; a < w; ++a) {
      for (int b = 0; b < w; ++b) s.values[static_cast<size_t>(a) * w + b] += e * rows[static_cast<size_t>(i) * w + b];
      e *= step;
    }
  }
  for (int a = 0; a < w; ++a) {
    for (int b = 0; b < w; ++b) {
      s.values[static_cast<size_t>(a) * w + b] *= h * h * sinc((a - order) * h / 2) * sinc((b - order) * h / 2);
    }
  }
  for (double v : sq) s.l2_squared += v;
  s.l2_squared *= h * h;
  return s;
}

namespace {

struct Coord {
  int alpha;
  int beta;
  double sign;
};

std::vector<Coord> coordinates(int modes) {
  std::vector<Coord> out;
  for (int k = -modes; k <= modes; ++k) {
    if (k != 0) out.push_back({k, k, 1.0});
  }
  for (int k = -modes; k <= modes; ++k) {
    if (k != 0) out.push_back({-k, k, -1.0});
  }
  out.push_back({0, 0, 1.0});
  return out;
}

}  // namespace

GramMatrix gram_matrix(const IndicatorSpectrum& spectrum, int modes) {
  if (modes < 1) throw std::invalid_argument("N_modes must be at least 1");
  if (spectrum.order < 2 * modes) throw std::invalid_argument("spectrum order below 2 N_modes");
  const auto cs = coordinates(modes);
  GramMatrix g;
  g.modes = modes;
  const int d = static_cast<int>(cs.size());
  g.q.resize(static_cast<size_t>(d) * d);
  g.weight.assign(d, 2.0 * kTwoPi);
  g.weight.back() = kTwoPi;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      g.q[static_cast<size_t>(r) * d + c] =
          cs[r].sign * cs[c].sign * spectrum.integral(cs[c].alpha - cs[r].alpha, cs[c].beta - cs[r].beta);
    }
  }
  return g;
}

std::vector<C> to_coordinates(const SpectralData& data) {
  const int M = data.modes;
  std::vector<C> z(4 * M + 1);
  int idx = 0;
  for (int k = -M; k <= M; ++k) {
    if (k == 0) continue;
    const C ik(0.0, k);
    z[idx] = 0.5 * (ik * data.a_at(k) + data.b_at(k));
    z[2 * M + idx] = 0.5 * (ik * data.a_at(k) - data.b_at(k));
    ++idx;
  }
  z[4 * M] = data.b_at(0);
  return z;
}

SpectralData from_coordinates(const std::vector<C>& z, int modes) {
  if (z.size() != static_cast<size_t>(4 * modes + 1)) throw std::invalid_argument("coordinate size mismatch");
  SpectralData d(modes);
  int idx = 0;
  for (int k = -modes; k <= modes; ++k) {
    if (k == 0) continue;
    const C p = z[idx], q = z[2 * modes + idx];
    d.a_at(k) = (p + q) / C(0.0, k);
    d.b_at(k) = p - q;
    ++idx;
  }
  d.b_at(0) = z[4 * modes];
  return d;
}

double quadratic_form(const GramMatrix& g, const std::vector<C>& z) {
  const int d = g.dim();
  C s{};
  for (int r = 0; r < d; ++r) {
    C row{};
    for (int c = 0; c < d; ++c) row += g.at(r, c) * z[c];
    s += std::conj(z[r]) * row;
  }
  return s.real();
}

namespace {

Eigen::MatrixXcd reduced(const GramMatrix& g, const std::vector<int>& idx) {
  const int d = static_cast<int>(idx.size());
  Eigen::MatrixXcd a(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      a(r, c) = g.at(idx[r], idx[c]) / std::sqrt(g.weight[idx[r]] * g.weight[idx[c]]);
    }
  }
  // Symmetrize away assembly roundoff.
  return 0.5 * (a + a.adjoint());
}

}  // namespace

EstimatorResult min_rayleigh(const GramMatrix& g) {
  std::vector<int> idx(g.dim());
  for (int k = 0; k < g.dim(); ++k) idx[k] = k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced(g, idx));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  EstimatorResult r;
  r.modes = g.modes;
  r.lambda_raw = es.eigenvalues()(0);
  r.lambda_min = std::max(0.0, r.lambda_raw);
  std::vector<C> z(g.dim());
  for (int k = 0; k < g.dim(); ++k) z[k] = es.eigenvectors()(k, 0) / std::sqrt(g.weight[k]);
  // Real data: z~_k = conj(z_{-k}) is an eigenvector too; keep z + z~, or
  // i (z - z~) when that vanishes.
  const int M = g.modes;
  auto mirror = [&](int k) {
    if (k == g.b0_index()) return k;
    if (k < 2 * M) return g.p_index(-(k < M ? k - M : k - M + 1));
    const int j = k - 2 * M;
    return 2 * M + g.p_index(-(j < M ? j - M : j - M + 1));
  };
  std::vector<C> re(z.size()), im(z.size());
  double nre = 0.0, nim = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    const C m = std::conj(z[mirror(static_cast<int>(k))]);
    re[k] = z[k] + m;
    im[k] = C(0.0, 1.0) * (z[k] - m);
    nre += std::norm(re[k]);
    nim += std::norm(im[k]);
  }
  r.argmin = from_coordinates(nre >= nim ? re : im, M);
  r.trace.emplace_back(M, r.lambda_min);
  return r;
}

EstimatorResult estimate_observability(const RasterMask& mask, const std::vector<int>& modes_list) {
  if (modes_list.empty()) throw std::invalid_argument("no N_modes requested");
  const int top = *std::max_element(modes_list.begin(), modes_list.end());
  const IndicatorSpectrum s = indicator_fourier(mask, 2 * top);
  EstimatorResult best;
  std::vector<std::pair<int, double>> trace;
  for (int N : modes_list) {
    EstimatorResult r = min_rayleigh(gram_matrix(s, N));
    trace.emplace_back(N, r.lambda_min);
    if (N == top) best = std::move(r);
  }
  best.trace = std::move(trace);
  return best;
}

double direct_observed_energy(const SpectralData& data, const RasterMask& mask, int points) {
  static const double kNodes6[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                    0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static const double kWeights6[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                      0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  if (points != 6) throw std::invalid_argument("only the 6-point rule is available");
  const Resolution& res = mask.resolution();
  const double h = res.dx;
  const std::vector<C> z = to_coordinates(data);
  const int M = data.modes;
  auto u_t = [&](double t, double x) {
    const C ep = std::polar(1.0, x + t), em = std::polar(1.0, x - t);
    C e_p = std::pow(ep, -M), e_m = std::pow(em, -M);
    double v = data.b_at(0).real();
    int idx = 0;
    for (int k = -M; k <= M; ++k) {
      if (k != 0) {
        v += (z[idx] * e_p - z[2 * M + idx] * e_m).real();
        ++idx;
      }
      e_p *= ep;
      e_m *= em;
    }
    return v;
  };
  double s = 0.0;
  for (int i = 0; i < res.nt; ++i) {
    for (int j = 0; j < res.n; ++j) {
      const double w = mask.w(i, j);
      if (w == 0.0) continue;
      double cell = 0.0;
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double t = (i + 0.5 + 0.5 * kNodes6[a]) * h, x = (j + 0.5 + 0.5 * kNodes6[b]) * h;
          const double v = u_t(t, x);
          cell += kWeights6[a] * kWeights6[b] * v * v;
        }
      }
      s += w * cell * h * h / 4.0;
    }
  }
  return s;
}

double indicator_tail(const IndicatorSpectrum& s, int N) {
  if (std::abs(s.res.t_eff() - kTwoPi) > 1e-9) throw std::invalid_argument("tail needs T_eff = 2 pi");
  if (2.0 * N * N > static_cast<double>(s.order) * s.order) throw std::invalid_argument("N exceeds the spectrum order");
  double head = 0.0;
  for (int a = -s.order; a <= s.order; ++a) {
    for (int b = -s.order; b <= s.order; ++b) {
      if (a * a + b * b <= 2 * N * N) head += std::norm(s.integral(a, b));
    }
  }
  const double tail2 = s.l2_squared - head / (kTwoPi * kTwoPi);
  return std::sqrt(std::max(0.0, tail2));
}

ThresholdResult high_freq_threshold(const IndicatorSpectrum& s, double c0_line) {
  if (!(c0_line > 0.0)) throw std::invalid_argument("c0 must be positive");
  ThresholdResult r;
  r.target = c0_line / 10.0;
  while (2 * (r.n_max + 1) * (r.n_max + 1) <= s.order * s.order) ++r.n_max;
  for (int N = 1; N <= r.n_max; ++N) {
    const double t = indicator_tail(s, N);
    r.trace.emplace_back(N, t);
    r.n_threshold = N;
    r.tail = t;
    if (t <= r.target) {
      r.reached = true;
      break;
    }
  }
  return r;
}

HighFreqReport verify_high_freq_inequality(const RasterMask& mask, int N, int trials, std::uint64_t seed) {
  const int K = mask.n() / 4;
  if (N < 0 || N >= K) throw std::invalid_argument("threshold leaves no resolvable high modes");
  const GramMatrix g = gram_matrix(indicator_fourier(mask, 2 * K), K);
  HighFreqReport rep;
  rep.n_threshold = N;
  rep.modes = K;
  rep.trials = trials;
  std::vector<int> idx;
  for (int k = -K; k <= K; ++k) {
    if (std::abs(k) > N) idx.push_back(g.p_index(k));
  }
  for (int k = -K; k <= K; ++k) {
    if (std::abs(k) > N) idx.push_back(g.q_index(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced(g, idx), Eigen::EigenvaluesOnly);
  rep.subspace_min = es.eigenvalues()(0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    SpectralData d(K);
    for (int k = N + 1; k <= K; ++k) {
      const C a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
      d.a_at(k) = a / static_cast<double>(k);
      d.a_at(-k) = std::conj(d.a_at(k));
      d.b_at(k) = b;
      d.b_at(-k) = std::conj(b);
    }
    const double ratio = quadratic_form(g, to_coordinates(d)) / d.energy();
    rep.worst_ratio = std::min(rep.worst_ratio, ratio);
  }
  return rep;
}

void write_matrix(const std::filesystem::path& path, const GramMatrix& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  const std::int32_t d = g.dim();
  os.write(reinterpret_cast<const char*>(&d), sizeof d);
  for (const C& v : g.q) {
    const double re = v.real(), im = v.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

}  // namespace wavesym
