#include "wavesym/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "wavesym/union_find.hpp"

namespace wavesym {

const char* symmetry_kind_name(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::kNoPair:
      return "no_pair";
    case SymmetryKind::kPair:
      return "pair";
    case SymmetryKind::kWeakGccFailure:
      return "weak_gcc_failure";
  }
  return "?";
}

const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::kFinite:
      return "S2c";
    case PairClass::kCountable:
      return "S2";
    case PairClass::kNeither:
      return "neither";
  }
  return "?";
}

double edge_noise_floor(const Resolution& res) { return 1e-12 * res.dx; }

namespace {

// Compact labels 0..K-1 for nodes with edges.
FiberGraph finalize(int n, UnionFind& uf, const std::vector<char>& has_edge) {
  FiberGraph g;
  g.n = n;
  g.label.assign(2 * n, -1);
  std::map<int, int> ids;
  for (int v = 0; v < 2 * n; ++v) {
    if (!has_edge[v]) continue;
    auto [it, inserted] = ids.try_emplace(uf.find(v), static_cast<int>(ids.size()));
    g.label[v] = it->second;
  }
  g.components = static_cast<int>(ids.size());
  g.xi_measure.assign(g.components, 0.0);
  g.eta_measure.assign(g.components, 0.0);
  const double dx = kTwoPi / n;
  for (int v = 0; v < 2 * n; ++v) {
    if (g.label[v] < 0) continue;
    (v < n ? g.xi_measure : g.eta_measure)[g.label[v]] += dx;
  }
  return g;
}

DecompositionPair decomposition_from_labels(int n, const std::vector<int>& label, int components) {
  DecompositionPair d;
  d.parts.assign(components, Component{BinSet(n), BinSet(n)});
  for (int v = 0; v < 2 * n; ++v) {
    if (label[v] < 0) continue;
    if (v < n) {
      d.parts[label[v]].a.set(v);
    } else {
      d.parts[label[v]].b.set(v - n);
    }
  }
  // Largest xi-measure first, ties broken by the smallest xi-bin.
  auto first_bin = [](const BinSet& s) {
    for (int k = 0; k < s.size(); ++k) {
      if (s.test(k)) return k;
    }
    return s.size();
  };
  std::stable_sort(d.parts.begin(), d.parts.end(), [&](const Component& x, const Component& y) {
    if (x.a.count() != y.a.count()) return x.a.count() > y.a.count();
    return first_bin(x.a) < first_bin(y.a);
  });
  return d;
}

SymmetryVerdict pair_verdict(const FiberData& f, DecompositionPair d) {
  SymmetryVerdict v;
  v.kind = SymmetryKind::kPair;
  v.components = static_cast<int>(d.parts.size());
  v.a = d.parts.front().a;
  v.b = d.parts.front().b;
  v.decomposition = std::move(d);
  v.symdiff = osc_check_pair(f, v.a, v.b);
  return v;
}

// Strong edges carry at least kStrongEdgeFraction of a full diamond. Nodes
// that only have weak edges join the component they share most mass with.
// Returns labels, or an empty vector when some node cannot be placed.
std::vector<int> strong_labels(const FiberData& f, int& components) {
  const int n = f.n();
  const double noise = edge_noise_floor(f.res);
  UnionFind uf(2 * n);
  std::vector<char> strong(2 * n, 0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double c = f.cap_at(p, q);
      if (c > 0.0 && f.mu_at(p, q) >= kStrongEdgeFraction * c) {
        uf.unite(p, n + q);
        strong[p] = strong[n + q] = 1;
      }
    }
  }
  std::vector<int> label(2 * n, -1);
  std::map<int, int> ids;
  for (int v = 0; v < 2 * n; ++v) {
    if (!strong[v]) continue;
    auto [it, inserted] = ids.try_emplace(uf.find(v), static_cast<int>(ids.size()));
    label[v] = it->second;
  }
  components = static_cast<int>(ids.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < 2 * n; ++v) {
      if (label[v] >= 0) continue;
      std::map<int, double> mass;
      for (int w = 0; w < n; ++w) {
        const double m = v < n ? f.mu_at(v, w) : f.mu_at(w, v - n);
        const int other = v < n ? n + w : w;
        if (m > noise && label[other] >= 0) mass[label[other]] += m;
      }
      if (mass.empty()) continue;
      auto best = std::max_element(mass.begin(), mass.end(),
                                   [](const auto& x, const auto& y) { return x.second < y.second; });
      label[v] = best->first;
      changed = true;
    }
  }
  for (int v = 0; v < 2 * n; ++v) {
    if (label[v] < 0) return {};
  }
  return label;
}

// Every cross-component link must sit on a bin next to a bin of the
// component it links to: the signature of a set boundary cutting a bin.
bool straddles_only(const FiberData& f, const std::vector<int>& label, int& straddling,
                    double& cross_mass) {
  const int n = f.n();
  const double noise = edge_noise_floor(f.res);
  std::vector<char> marked(2 * n, 0);
  cross_mass = 0.0;
  auto adjacent_to = [&](int v, int comp) {
    const int base = v < n ? 0 : n;
    const int k = v - base;
    return label[base + wrap(k - 1, n)] == comp || label[base + wrap(k + 1, n)] == comp;
  };
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double m = f.mu_at(p, q);
      if (m <= noise || label[p] == label[n + q]) continue;
      cross_mass += m;
      if (!adjacent_to(p, label[n + q]) && !adjacent_to(n + q, label[p])) return false;
      if (adjacent_to(p, label[n + q])) marked[p] = 1;
      if (adjacent_to(n + q, label[p])) marked[n + q] = 1;
    }
  }
  straddling = 0;
  for (char c : marked) straddling += c;
  return true;
}

}  // namespace

FiberGraph build_fiber_graph(const FiberData& f, double edge_floor) {
  const int n = f.n();
  UnionFind uf(2 * n);
  std::vector<char> has_edge(2 * n, 0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (f.mu_at(p, q) > edge_floor) {
        uf.unite(p, n + q);
        has_edge[p] = has_edge[n + q] = 1;
      }
    }
  }
  return finalize(n, uf, has_edge);
}

FiberGraph build_fiber_graph(const FiberData& f) {
  return build_fiber_graph(f, edge_noise_floor(f.res));
}

SymmetryVerdict detect_osc(const FiberData& f, const GccReport& gcc) {
  const int n = f.n();
  if (!gcc.weak_holds) {
    SymmetryVerdict v;
    v.kind = SymmetryKind::kWeakGccFailure;
    v.a = gcc.zero_xi;
    v.b = gcc.zero_eta;
    return v;
  }
  const FiberGraph g = build_fiber_graph(f);
  if (g.components >= 2) {
    return pair_verdict(f, decomposition_from_labels(n, g.label, g.components));
  }
  if (n >= kReconcileMinBins) {
    int comps = 0;
    const std::vector<int> label = strong_labels(f, comps);
    if (!label.empty() && comps >= 2) {
      int straddling = 0;
      double cross = 0.0;
      const double sym_tol = 8.0 / n;
      if (straddles_only(f, label, straddling, cross) &&
          cross * f.res.dx <= sym_tol * f.measure()) {
        SymmetryVerdict v = pair_verdict(f, decomposition_from_labels(n, label, comps));
        v.reconciled = true;
        v.straddling_bins = straddling;
        return v;
      }
    }
  }
  SymmetryVerdict v;
  v.kind = SymmetryKind::kNoPair;
  v.components = g.components;
  return v;
}

double osc_check_pair(const FiberData& f, const BinSet& a, const BinSet& b) {
  const int n = f.n();
  if (a.size() != n || b.size() != n) throw std::invalid_argument("bin set size mismatch");
  double s = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (a.test(p) != b.test(q)) s += f.mu_at(p, q);
    }
  }
  return s * f.res.dx;
}

SymmetryVerdict brute_force_osc(const FiberData& f) {
  const int n = f.n();
  if (n > 12) throw std::invalid_argument("brute_force_osc supports n <= 12");
  const double floor = gcc_floor(f.res);
  SymmetryVerdict v;
  BinSet zx(n), ze(n);
  for (int k = 0; k < n; ++k) {
    if (f.m_minus[k] < floor) zx.set(k);
    if (f.m_plus[k] < floor) ze.set(k);
  }
  if (!zx.empty() || !ze.empty()) {
    v.kind = SymmetryKind::kWeakGccFailure;
    v.a = zx;
    v.b = ze;
    return v;
  }
  const double noise = edge_noise_floor(f.res);
  std::vector<std::uint32_t> xi_nb(n, 0), eta_nb(n, 0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (f.mu_at(p, q) > noise) {
        xi_nb[p] |= 1u << q;
        eta_nb[q] |= 1u << p;
      }
    }
  }
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t a = 1; a < full; ++a) {
    std::uint32_t b = 0;
    for (int p = 0; p < n; ++p) {
      if (a >> p & 1u) b |= xi_nb[p];
    }
    bool closed = true;
    for (int q = 0; q < n && closed; ++q) {
      if ((b >> q & 1u) && (eta_nb[q] & ~a)) closed = false;
    }
    if (!closed) continue;
    BinSet sa(n), sb(n);
    for (int k = 0; k < n; ++k) {
      sa.set(k, a >> k & 1u);
      sb.set(k, b >> k & 1u);
    }
    v.kind = SymmetryKind::kPair;
    v.a = sa;
    v.b = sb;
    v.components = 2;
    v.decomposition.parts = {{sa, sb}, {sa.complement(), sb.complement()}};
    v.symdiff = osc_check_pair(f, sa, sb);
    return v;
  }
  v.kind = SymmetryKind::kNoPair;
  v.components = 1;
  return v;
}

Witness witness_from_pair(const BinSet& a, const BinSet& b) {
  const int n = a.size();
  if (b.size() != n) throw std::invalid_argument("bin set size mismatch");
  const bool empty = a.empty() && b.empty();
  const bool whole = a.full() && b.full();
  if (empty || whole) throw std::invalid_argument("trivial pair has no witness");
  Witness w;
  w.a = a;
  w.b = b;
  w.measure_sum = a.measure() + b.measure();
  if (w.measure_sum >= 2.0 * kTwoPi) throw std::invalid_argument("|A|+|B| = 4pi leaves the level undefined");
  w.level = -w.measure_sum / (2.0 * kTwoPi - w.measure_sum);
  std::vector<double> p(n), q(n);
  for (int k = 0; k < n; ++k) {
    p[k] = a.test(k) ? 1.0 : w.level;
    q[k] = b.test(k) ? 1.0 : w.level;
  }
  w.state = WaveState::from_characteristic(p, q);
  w.i0 = 2.0 * w.measure_sum;
  return w;
}

WaveState zero_fiber_witness(const BinSet& zero_xi, const BinSet& zero_eta) {
  const int n = zero_xi.size();
  const bool use_eta = !zero_eta.empty();
  const BinSet& z = use_eta ? zero_eta : zero_xi;
  if (z.empty()) throw std::invalid_argument("no zero fibers");
  std::vector<double> phi(n, 0.0);
  auto bins = z.indices();
  if (bins.size() > 1 && bins.size() % 2 == 1) bins.pop_back();
  double sign = 1.0, sum = 0.0;
  for (int k : bins) {
    phi[k] = sign;
    sum += sign;
    sign = -sign;
  }
  std::vector<double> other(n, -sum / n);
  return use_eta ? WaveState::from_characteristic(other, phi)
                 : WaveState::from_characteristic(phi, other);
}

SymmetricPairReport classify_symmetric_pair(const std::vector<LevelSet>& f,
                                            const std::vector<LevelSet>& g, double remainder_l2) {
  SymmetricPairReport r;
  auto fail = [&r](const std::string& why) {
    r.cls = PairClass::kNeither;
    r.violated = why;
    return r;
  };
  if (f.empty() || g.empty()) return fail("empty level list");
  const int n = f.front().set.size();
  auto check_side = [n](const std::vector<LevelSet>& side, std::string& why) {
    BinSet cover(n);
    for (size_t i = 0; i < side.size(); ++i) {
      if (side[i].set.size() != n) {
        why = "bin set size mismatch";
        return false;
      }
      if (side[i].set.empty()) {
        why = "level set of zero measure";
        return false;
      }
      for (size_t k = 0; k < i; ++k) {
        if (side[k].value == side[i].value) {
          why = "levels not distinct";
          return false;
        }
      }
      for (int b : side[i].set.indices()) {
        if (cover.test(b)) {
          why = "level sets not disjoint";
          return false;
        }
        cover.set(b);
      }
    }
    if (!cover.full()) {
      why = "level sets do not cover the circle";
      return false;
    }
    return true;
  };
  std::string why;
  if (!check_side(f, why)) return fail("f: " + why);
  if (!check_side(g, why)) return fail("g: " + why);
  if (f.size() != g.size()) return fail("f and g use different level sets");
  for (const LevelSet& lf : f) {
    const bool matched = std::any_of(g.begin(), g.end(),
                                     [&lf](const LevelSet& lg) { return lg.value == lf.value; });
    if (!matched) return fail("level " + format_double(lf.value) + " missing from g");
  }
  double mean = 0.0, scale = 0.0;
  for (const LevelSet& l : f) {
    mean += l.value * l.set.measure();
    scale += std::abs(l.value) * l.set.measure();
  }
  for (const LevelSet& l : g) {
    mean += l.value * l.set.measure();
    scale += std::abs(l.value) * l.set.measure();
  }
  r.mean = mean;
  for (const LevelSet& l : f) r.levels.push_back(l.value);
  r.levels_count = static_cast<int>(f.size());
  if (std::abs(mean) > 1e-12 * std::max(1.0, scale)) return fail("mean of f + g is not zero");
  r.cls = remainder_l2 > 0.0 ? PairClass::kCountable : PairClass::kFinite;
  return r;
}

}  // namespace wavesym
