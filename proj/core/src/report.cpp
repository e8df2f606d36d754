#include "wavesym/report.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "wavesym/symmetry.hpp"

namespace wavesym {

using nlohmann::ordered_json;

AnalysisReport make_report(const SpacetimeRegion& region, const Verdict& verdict, std::uint64_t seed) {
  AnalysisReport r;
  r.region_dsl = to_dsl(region);
  r.horizon = region.horizon();
  r.seed = seed;
  r.verdict = verdict;
  return r;
}

int exit_code(const Verdict& v) {
  switch (v.observable) {
    case Tri::kYes:
      return kExitObservable;
    case Tri::kNo:
      return kExitNotObservable;
    case Tri::kIndeterminate:
      return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

namespace {

Tri tri_from(const std::string& s) {
  if (s == "yes") return Tri::kYes;
  if (s == "no") return Tri::kNo;
  if (s == "indeterminate") return Tri::kIndeterminate;
  throw std::runtime_error("bad verdict value: " + s);
}

SymmetryKind kind_from(const std::string& s) {
  for (SymmetryKind k : {SymmetryKind::kNoPair, SymmetryKind::kPair, SymmetryKind::kWeakGccFailure}) {
    if (s == symmetry_kind_name(k)) return k;
  }
  throw std::runtime_error("bad symmetry kind: " + s);
}

CharFamily family_from(const std::string& s) {
  if (s == family_name(CharFamily::kXi)) return CharFamily::kXi;
  if (s == family_name(CharFamily::kEta)) return CharFamily::kEta;
  throw std::runtime_error("bad family: " + s);
}

// Bin sets as index runs [first, last].
ordered_json bins_json(const BinSet& s) {
  ordered_json runs = ordered_json::array();
  const int n = s.size();
  for (int k = 0; k < n;) {
    if (!s.test(k)) {
      ++k;
      continue;
    }
    int e = k;
    while (e + 1 < n && s.test(e + 1)) ++e;
    runs.push_back({k, e});
    k = e + 1;
  }
  return ordered_json{{"n", n}, {"runs", runs}};
}

BinSet bins_from(const ordered_json& j) {
  const int n = j.at("n").get<int>();
  BinSet s(n);
  for (const auto& r : j.at("runs")) {
    const int lo = r.at(0).get<int>(), hi = r.at(1).get<int>();
    if (lo < 0 || hi >= n || lo > hi) throw std::runtime_error("bad bin run");
    for (int k = lo; k <= hi; ++k) s.set(k);
  }
  return s;
}

ordered_json arcs_json(const BinSet& s) {
  ordered_json a = ordered_json::array();
  for (const Interval& i : s.arcs()) a.push_back({i.lo, i.hi});
  return a;
}

ordered_json trace_json(const std::vector<std::pair<int, double>>& t) {
  ordered_json a = ordered_json::array();
  for (const auto& [k, v] : t) a.push_back({k, v});
  return a;
}

std::vector<std::pair<int, double>> trace_from(const ordered_json& j) {
  std::vector<std::pair<int, double>> t;
  for (const auto& e : j) t.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
  return t;
}

}  // namespace

std::string to_json(const AnalysisReport& r) {
  const Verdict& v = r.verdict;
  ordered_json j;
  j["region"] = r.region_dsl;
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["resolution"] = {{"n", v.res.n},         {"nt", v.res.nt},           {"dx", v.res.dx},
                     {"dt", v.res.dt()},     {"t_eff", v.res.t_eff()},   {"supersample", v.supersample}};
  j["verdict"] = {{"observable", tri_name(v.observable)},
                  {"ucp", tri_name(v.ucp)},
                  {"controllable", tri_name(v.controllable)},
                  {"reasons", v.reasons}};
  ordered_json worst = ordered_json::array();
  for (const FiberRef& f : v.gcc.worst_fibers) {
    worst.push_back({{"family", family_name(f.family)}, {"bin", f.bin}, {"measure", f.measure}});
  }
  j["gcc"] = {{"holds", v.gcc.holds},
              {"c0_est", v.gcc.c0_est},
              {"c0_line_est", v.gcc.c0_line_est},
              {"gcc_floor", v.gcc.gcc_floor},
              {"weak_holds", v.gcc.weak_holds},
              {"worst_fibers", worst},
              {"zero_xi", bins_json(v.gcc.zero_xi)},
              {"zero_eta", bins_json(v.gcc.zero_eta)}};
  ordered_json parts = ordered_json::array();
  for (const Component& c : v.symmetry.decomposition.parts) {
    parts.push_back({{"a", bins_json(c.a)}, {"b", bins_json(c.b)}, {"a_measure", c.a.measure()},
                     {"b_measure", c.b.measure()}});
  }
  j["symmetry"] = {{"kind", symmetry_kind_name(v.symmetry.kind)},
                   {"components", v.symmetry.components},
                   {"a", bins_json(v.symmetry.a)},
                   {"b", bins_json(v.symmetry.b)},
                   {"a_arcs", arcs_json(v.symmetry.a)},
                   {"b_arcs", arcs_json(v.symmetry.b)},
                   {"symdiff", v.symmetry.symdiff},
                   {"reconciled", v.symmetry.reconciled},
                   {"straddling_bins", v.symmetry.straddling_bins},
                   {"decomposition", parts}};
  if (v.witness) {
    const WitnessSummary& w = *v.witness;
    j["witness"] = {{"kind", w.kind},
                    {"levels", w.levels},
                    {"total_energy", w.total_energy},
                    {"observed_energy", w.observed_energy},
                    {"ratio", w.ratio},
                    {"i0", w.i0}};
  } else {
    j["witness"] = nullptr;
  }
  if (v.estimate) {
    j["estimate"] = {{"modes", v.estimate->modes},
                     {"lambda_min", v.estimate->lambda_min},
                     {"trace", trace_json(v.estimate->trace)}};
  } else {
    j["estimate"] = nullptr;
  }
  j["product_sum"] = v.product_sum ? ordered_json(*v.product_sum) : ordered_json(nullptr);
  j["every_line_c0"] = v.every_line_c0 ? ordered_json(*v.every_line_c0) : ordered_json(nullptr);
  ordered_json series = ordered_json::array();
  for (const SeriesRow& s : r.series) series.push_back({s.t, s.energy, s.functional, s.observed_cum});
  j["series"] = series;
  return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("report parse error: ") + e.what());
  }
  try {
    AnalysisReport r;
    r.region_dsl = j.at("region").get<std::string>();
    r.horizon = j.at("horizon").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    Verdict& v = r.verdict;
    const auto& res = j.at("resolution");
    v.res.n = res.at("n").get<int>();
    v.res.nt = res.at("nt").get<int>();
    v.res.dx = res.at("dx").get<double>();
    v.supersample = res.at("supersample").get<int>();
    const auto& vd = j.at("verdict");
    v.observable = tri_from(vd.at("observable").get<std::string>());
    v.ucp = tri_from(vd.at("ucp").get<std::string>());
    v.controllable = tri_from(vd.at("controllable").get<std::string>());
    v.reasons = vd.at("reasons").get<std::vector<std::string>>();
    const auto& g = j.at("gcc");
    v.gcc.holds = g.at("holds").get<bool>();
    v.gcc.c0_est = g.at("c0_est").get<double>();
    v.gcc.c0_line_est = g.at("c0_line_est").get<double>();
    v.gcc.gcc_floor = g.at("gcc_floor").get<double>();
    v.gcc.weak_holds = g.at("weak_holds").get<bool>();
    for (const auto& f : g.at("worst_fibers")) {
      v.gcc.worst_fibers.push_back(
          {family_from(f.at("family").get<std::string>()), f.at("bin").get<int>(), f.at("measure").get<double>()});
    }
    v.gcc.zero_xi = bins_from(g.at("zero_xi"));
    v.gcc.zero_eta = bins_from(g.at("zero_eta"));
    const auto& s = j.at("symmetry");
    v.symmetry.kind = kind_from(s.at("kind").get<std::string>());
    v.symmetry.components = s.at("components").get<int>();
    v.symmetry.a = bins_from(s.at("a"));
    v.symmetry.b = bins_from(s.at("b"));
    v.symmetry.symdiff = s.at("symdiff").get<double>();
    v.symmetry.reconciled = s.at("reconciled").get<bool>();
    v.symmetry.straddling_bins = s.at("straddling_bins").get<int>();
    for (const auto& c : s.at("decomposition")) {
      v.symmetry.decomposition.parts.push_back({bins_from(c.at("a")), bins_from(c.at("b"))});
    }
    if (!j.at("witness").is_null()) {
      const auto& w = j.at("witness");
      v.witness = WitnessSummary{w.at("kind").get<std::string>(),          w.at("levels").get<std::vector<double>>(),
                                 w.at("total_energy").get<double>(),       w.at("observed_energy").get<double>(),
                                 w.at("ratio").get<double>(),              w.at("i0").get<double>()};
    }
    if (!j.at("estimate").is_null()) {
      const auto& e = j.at("estimate");
      v.estimate = EstimateSummary{e.at("modes").get<int>(), e.at("lambda_min").get<double>(), trace_from(e.at("trace"))};
    }
    if (!j.at("product_sum").is_null()) v.product_sum = j.at("product_sum").get<double>();
    if (!j.at("every_line_c0").is_null()) v.every_line_c0 = j.at("every_line_c0").get<double>();
    for (const auto& row : j.at("series")) {
      r.series.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>(),
                          row.at(3).get<double>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("report schema error: ") + e.what());
  }
}

namespace {

std::string arcs_line(const BinSet& s) {
  if (s.size() == 0 || s.empty()) return "{}";
  std::ostringstream os;
  bool first = true;
  for (const Interval& i : s.arcs()) {
    os << (first ? "" : " ") << '[' << format_double(i.lo) << ", " << format_double(i.hi) << ']';
    first = false;
  }
  return os.str();
}

}  // namespace

std::string to_text(const AnalysisReport& r) {
  const Verdict& v = r.verdict;
  std::ostringstream os;
  os << "observable: " << tri_name(v.observable) << '\n';
  os << "ucp: " << tri_name(v.ucp) << '\n';
  os << "controllable: " << tri_name(v.controllable) << '\n';
  os << "resolution: n=" << v.res.n << " nt=" << v.res.nt << " dt=" << format_double(v.res.dt())
     << " t_eff=" << format_double(v.res.t_eff()) << " supersample=" << v.supersample << '\n';
  os << "horizon: " << format_double(r.horizon) << '\n';
  os << "seed: " << r.seed << '\n';
  os << "gcc.holds: " << (v.gcc.holds ? "true" : "false") << '\n';
  os << "gcc.c0_est: " << format_double(v.gcc.c0_est) << '\n';
  os << "gcc.c0_line_est: " << format_double(v.gcc.c0_line_est) << '\n';
  os << "gcc.floor: " << format_double(v.gcc.gcc_floor) << '\n';
  os << "gcc.weak_holds: " << (v.gcc.weak_holds ? "true" : "false") << '\n';
  os << "gcc.zero_xi: " << arcs_line(v.gcc.zero_xi) << '\n';
  os << "gcc.zero_eta: " << arcs_line(v.gcc.zero_eta) << '\n';
  os << "symmetry.kind: " << symmetry_kind_name(v.symmetry.kind) << '\n';
  os << "symmetry.components: " << v.symmetry.components << '\n';
  os << "symmetry.A: " << arcs_line(v.symmetry.a) << '\n';
  os << "symmetry.B: " << arcs_line(v.symmetry.b) << '\n';
  os << "symmetry.symdiff: " << format_double(v.symmetry.symdiff) << '\n';
  os << "symmetry.reconciled: " << (v.symmetry.reconciled ? "true" : "false") << '\n';
  if (v.witness) {
    os << "witness.kind: " << v.witness->kind << '\n';
    os << "witness.levels:";
    for (double l : v.witness->levels) os << ' ' << format_double(l);
    os << '\n';
    os << "witness.total_energy: " << format_double(v.witness->total_energy) << '\n';
    os << "witness.observed_energy: " << format_double(v.witness->observed_energy) << '\n';
    os << "witness.ratio: " << format_double(v.witness->ratio) << '\n';
    if (v.witness->kind == "osc_pair") os << "witness.i0: " << format_double(v.witness->i0) << '\n';
  }
  if (v.estimate) {
    os << "estimate.modes: " << v.estimate->modes << '\n';
    os << "estimate.lambda_min: " << format_double(v.estimate->lambda_min) << '\n';
    os << "estimate.trace:";
    for (const auto& [k, l] : v.estimate->trace) os << ' ' << k << '=' << format_double(l);
    os << '\n';
  }
  if (v.product_sum) os << "product.sum: " << format_double(*v.product_sum) << '\n';
  if (v.every_line_c0) os << "open.every_line_c0: " << format_double(*v.every_line_c0) << '\n';
  for (size_t k = 0; k < v.reasons.size(); ++k) os << "reason." << k << ": " << v.reasons[k] << '\n';
  os << "region:\n" << r.region_dsl;
  if (!r.region_dsl.empty() && r.region_dsl.back() != '\n') os << '\n';
  return os.str();
}

GrayImage render_diagram(const RasterMask& mask, const RenderOptions& opt) {
  if (opt.scale < 1) throw std::invalid_argument("scale must be at least 1");
  const int n = mask.n(), nt = mask.nt(), s = opt.scale;
  GrayImage img;
  img.width = n * s;
  img.height = nt * s;
  img.pixels.assign(static_cast<size_t>(img.width) * img.height, 255);
  FiberGraph graph;
  if (opt.components) graph = build_fiber_graph(fiber_profiles(mask));
  constexpr std::array<int, 4> palette = {64, 150, 105, 20};
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = mask.w(i, j);
      if (w <= 0.0) continue;
      int shade = 64;
      if (opt.components) {
        int best = 0;
        for (int a = 1; a < 4; ++a) {
          if (mask.atom(i, j, a) > mask.atom(i, j, best)) best = a;
        }
        const int label = graph.label[atom_xi_bin(i, j, best, n)];
        shade = palette[std::max(0, label) % palette.size()];
      }
      const auto v = static_cast<unsigned char>(std::lround(255.0 - (255.0 - shade) * w));
      for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) img.pixels[static_cast<size_t>(i * s + r) * img.width + j * s + c] = v;
      }
    }
  }
  // Lines x + t = c and x - t = c through pixel rows.
  for (int k = 0; k < opt.characteristics; ++k) {
    const double c = (k + 0.5) * img.width / opt.characteristics;
    for (int r = 0; r < img.height; ++r) {
      const double t = r + 0.5;
      for (double x : {c - t, c + t}) {
        const int col = wrap(static_cast<int>(std::floor(x)), img.width);
        img.pixels[static_cast<size_t>(r) * img.width + col] = 0;
      }
    }
  }
  return img;
}

std::string state_csv(const WaveState& s) {
  std::ostringstream os;
  os << "x,u0x,u1\n";
  const double dx = kTwoPi / s.n();
  for (int j = 0; j < s.n(); ++j) {
    os << format_double((j + 0.5) * dx) << ',' << format_double(s.u0x[j]) << ',' << format_double(s.u1[j]) << '\n';
  }
  return os.str();
}

WaveState state_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,u0x,u1", 0) != 0) throw std::runtime_error("data file needs header x,u0x,u1");
  WaveState s;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw std::runtime_error("data file row " + std::to_string(row) + ": expected 3 columns");
    }
    try {
      s.u0x.push_back(std::stod(b));
      s.u1.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw std::runtime_error("data file row " + std::to_string(row) + ": bad number");
    }
  }
  if (s.u0x.empty()) throw std::runtime_error("data file has no rows");
  return s;
}

}  // namespace wavesym
