#include "wavesym/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wavesym/wave.hpp"

namespace wavesym {

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::kYes:
      return "yes";
    case Tri::kNo:
      return "no";
    case Tri::kIndeterminate:
      return "indeterminate";
  }
  return "?";
}

namespace {

std::string arcs_text(const BinSet& s) {
  std::ostringstream os;
  bool first = true;
  for (const Interval& a : s.arcs()) {
    os << (first ? "" : ",") << '[' << format_double(a.lo) << ',' << format_double(a.hi) << ']';
    first = false;
  }
  return first ? "{}" : os.str();
}

double smallest_component(const SymmetryVerdict& s) {
  double m = kTwoPi;
  for (const Component& c : s.decomposition.parts) m = std::min({m, c.a.measure(), c.b.measure()});
  return m;
}

WitnessSummary simulate_witness(const WaveState& w, const RasterMask& mask) {
  WitnessSummary s;
  s.total_energy = w.energy();
  s.observed_energy = observed_energy(solve_free_wave(w, mask.resolution()), mask);
  s.ratio = s.total_energy > 0.0 ? s.observed_energy / s.total_energy : 0.0;
  return s;
}

}  // namespace

std::optional<WaveState> witness_state(const Verdict& v) {
  if (v.observable == Tri::kYes) return std::nullopt;
  switch (v.symmetry.kind) {
    case SymmetryKind::kPair:
      return witness_from_pair(v.symmetry.a, v.symmetry.b).state;
    case SymmetryKind::kWeakGccFailure:
      return zero_fiber_witness(v.symmetry.a, v.symmetry.b);
    case SymmetryKind::kNoPair:
      break;
  }
  if (v.gcc.holds || v.gcc.worst_fibers.empty()) return std::nullopt;
  const int n = v.res.n;
  BinSet xi(n), eta(n);
  const FiberRef& f = v.gcc.worst_fibers.front();
  (f.family == CharFamily::kXi ? xi : eta).set(f.bin);
  return zero_fiber_witness(xi, eta);
}

Verdict classify(const RasterMask& mask, const ClassifyOptions& options) {
  if (mask.zero_measure()) throw std::invalid_argument("empty mask: |G| = 0");
  Verdict v;
  v.res = mask.resolution();
  v.supersample = mask.supersample();
  const FiberData fibers = fiber_profiles(mask);
  v.gcc = check_gcc(fibers);
  v.symmetry = detect_osc(fibers, v.gcc);
  const bool no_pair = v.symmetry.kind == SymmetryKind::kNoPair;
  v.observable = v.gcc.holds && no_pair ? Tri::kYes : Tri::kNo;
  v.ucp = v.gcc.weak_holds && no_pair ? Tri::kYes : Tri::kNo;

  std::ostringstream gcc;
  gcc << "gcc " << (v.gcc.holds ? "holds" : "fails") << ": c0_est=" << format_double(v.gcc.c0_est)
      << " c0_line=" << format_double(v.gcc.c0_line_est) << " floor=" << format_double(v.gcc.gcc_floor);
  v.reasons.push_back(gcc.str());
  std::ostringstream sym;
  sym << "symmetry " << symmetry_kind_name(v.symmetry.kind);
  if (v.symmetry.kind == SymmetryKind::kPair) {
    sym << ": A=" << arcs_text(v.symmetry.a) << " B=" << arcs_text(v.symmetry.b)
        << " components=" << v.symmetry.components << " symdiff=" << format_double(v.symmetry.symdiff);
    if (v.symmetry.reconciled) sym << " reconciled straddling_bins=" << v.symmetry.straddling_bins;
  } else if (v.symmetry.kind == SymmetryKind::kWeakGccFailure) {
    sym << ": zero xi-fibers=" << arcs_text(v.symmetry.a) << " zero eta-fibers=" << arcs_text(v.symmetry.b);
  }
  v.reasons.push_back(sym.str());

  const double floor = v.gcc.gcc_floor;
  if (v.gcc.c0_est > 0.0 && v.gcc.c0_est <= 2.0 * floor) {
    v.observable = v.ucp = Tri::kIndeterminate;
    v.reasons.push_back("indeterminate: c0_est within two floors of zero");
  }
  if (v.symmetry.kind == SymmetryKind::kPair && smallest_component(v.symmetry) <= 2.0 * v.res.dx) {
    v.observable = v.ucp = Tri::kIndeterminate;
    v.reasons.push_back("indeterminate: a component spans at most two bins");
  }
  v.controllable = v.observable;

  if (v.observable == Tri::kNo && options.simulate_witness) {
    if (auto w = witness_state(v)) {
      WitnessSummary s = simulate_witness(*w, mask);
      if (v.symmetry.kind == SymmetryKind::kPair) {
        const Witness pw = witness_from_pair(v.symmetry.a, v.symmetry.b);
        s.kind = "osc_pair";
        s.levels = {1.0, pw.level};
        s.i0 = pw.i0;
      } else {
        s.kind = "zero_fiber";
        s.levels = {1.0, -1.0};
      }
      v.witness = s;
    }
  }
  if (options.estimate_modes > 0) {
    std::vector<int> list;
    for (int N = options.estimate_modes; N >= 1 && list.size() < 3; N /= 2) list.insert(list.begin(), N);
    const EstimatorResult r = estimate_observability(mask, list);
    v.estimate = EstimateSummary{r.modes, r.lambda_min, r.trace};
  }
  return v;
}

Verdict classify_product(const std::vector<Interval>& e, const std::vector<Interval>& f, double T, int n,
                         int supersample) {
  double le = 0.0, lf = 0.0;
  for (const Interval& i : e) le += std::max(0.0, i.length());
  for (const Interval& i : f) lf += std::max(0.0, i.length());
  if (le <= 0.0 || lf <= 0.0) throw std::invalid_argument("empty product factor");
  const SpacetimeRegion region(T, make_node(Product{e, f}));
  const RasterMask mask = rasterize(region, n, supersample);
  if (mask.zero_measure()) throw std::invalid_argument("empty product factor");
  Verdict v;
  v.res = mask.resolution();
  v.supersample = supersample;
  v.gcc = check_gcc(fiber_profiles(mask));
  v.symmetry.kind = v.gcc.weak_holds ? SymmetryKind::kNoPair : SymmetryKind::kWeakGccFailure;
  if (!v.gcc.weak_holds) {
    v.symmetry.a = v.gcc.zero_xi;
    v.symmetry.b = v.gcc.zero_eta;
  }
  v.observable = v.gcc.holds ? Tri::kYes : Tri::kNo;
  v.ucp = v.gcc.weak_holds ? Tri::kYes : Tri::kNo;
  if (v.gcc.c0_est > 0.0 && v.gcc.c0_est <= 2.0 * v.gcc.gcc_floor) v.observable = v.ucp = Tri::kIndeterminate;
  v.controllable = v.observable;
  v.product_sum = le + lf;
  v.reasons.push_back(std::string("product fast path: observable iff gcc; gcc ") +
                      (v.gcc.holds ? "holds" : "fails") + ", c0_est=" + format_double(v.gcc.c0_est));
  std::string diag = "|E|+|F|=" + format_double(le + lf);
  if (v.gcc.holds) diag += le + lf >= kTwoPi ? " >= 2pi" : " < 2pi (unexpected under gcc)";
  v.reasons.push_back(diag);
  return v;
}

namespace {

// Time measure of the interior of G along every line through a bin center
// or bin boundary; returns the minimum per family.
std::pair<double, double> every_line_measure(const SpacetimeRegion& region, int n) {
  const double T = region.horizon();
  const double dx = kTwoPi / n;
  const int samples = 8 * std::max(1, static_cast<int>(std::lround(T / dx)));
  const double dt = T / samples;
  const int lines = 2 * n;
  std::vector<double> xi(lines), eta(lines);
  auto work = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const double x0 = 0.5 * k * dx;
      double a = 0.0, b = 0.0;
      for (int m = 0; m < samples; ++m) {
        const double t = (m + 0.5) * dt;
        if (region.interior(t, x0 - t)) a += dt;
        if (region.interior(t, x0 + t)) b += dt;
      }
      xi[k] = a;
      eta[k] = b;
    }
  };
  const int threads = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, lines);
  {
    std::vector<std::jthread> pool;
    const int chunk = (lines + threads - 1) / threads;
    for (int b = 0; b < lines; b += chunk) pool.emplace_back(work, b, std::min(lines, b + chunk));
  }
  return {*std::min_element(xi.begin(), xi.end()), *std::min_element(eta.begin(), eta.end())};
}

}  // namespace

Verdict classify_open_everywhere(const RasterMask& mask, const SpacetimeRegion& region) {
  if (!region.is_open()) throw std::invalid_argument("region not declared open (raster literal present)");
  const auto [c_xi, c_eta] = every_line_measure(region, mask.n());
  const double floor = gcc_floor(mask.resolution());
  const double c = std::min(c_xi, c_eta);
  if (c > floor) {
    Verdict v;
    v.res = mask.resolution();
    v.supersample = mask.supersample();
    v.gcc = check_gcc(fiber_profiles(mask));
    v.symmetry.kind = SymmetryKind::kNoPair;
    v.symmetry.components = 1;
    v.observable = v.ucp = v.controllable = Tri::kYes;
    v.every_line_c0 = c;
    v.reasons.push_back("every-line gcc holds on the open set: c0=" + format_double(c));
    v.reasons.push_back("open set with every-line gcc admits no nontrivial symmetry pair");
    return v;
  }
  Verdict v = classify(mask);
  v.every_line_c0 = c;
  v.reasons.push_back(std::string("every-line gcc fails in ") + (c_xi <= c_eta ? "xi" : "eta") +
                      ": c0=" + format_double(c));
  return v;
}

NecessityReport gcc_necessity_check(const RasterMask& mask, int trials) {
  const Resolution& res = mask.resolution();
  const int n = res.n;
  const FiberData fibers = fiber_profiles(mask);
  std::vector<FiberRef> all;
  for (int k = 0; k < n; ++k) {
    all.push_back({CharFamily::kXi, k, fibers.m_minus[k]});
    all.push_back({CharFamily::kEta, k, fibers.m_plus[k]});
  }
  std::stable_sort(all.begin(), all.end(), [](const FiberRef& a, const FiberRef& b) { return a.measure < b.measure; });
  NecessityReport rep;
  rep.tolerance = res.dt();
  rep.all_pass = true;
  const int count = std::clamp(trials, 0, static_cast<int>(all.size()));
  for (int t = 0; t < count; ++t) {
    const FiberRef& f = all[t];
    std::vector<double> bump(n, -1.0 / n), zero(n, 0.0);
    bump[f.bin] += 1.0;
    const WaveState w = f.family == CharFamily::kXi ? WaveState::from_characteristic(bump, zero)
                                                    : WaveState::from_characteristic(zero, bump);
    NecessityProbe p;
    p.family = f.family;
    p.bin = f.bin;
    p.fiber_mass = f.measure;
    p.ratio = observed_energy(solve_free_wave(w, res), mask) / w.energy();
    p.pass = p.ratio <= p.fiber_mass + rep.tolerance;
    rep.all_pass = rep.all_pass && p.pass;
    rep.probes.push_back(p);
  }
  return rep;
}

}  // namespace wavesym
