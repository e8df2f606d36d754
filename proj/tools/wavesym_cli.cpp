#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wavesym/report.hpp"
#include "wavesym/symmetry.hpp"
#include "wavesym/verdict.hpp"
#include "wavesym/wave.hpp"

using namespace wavesym;

namespace {

struct Common {
  std::string region_file;
  int n = 256;
  int supersample = 4;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("region", c.region_file, "Region file (DSL)")->required();
  cmd->add_option("--n", c.n, "Spatial bins")->check(CLI::Range(8, 1 << 14));
  cmd->add_option("--supersample", c.supersample, "Samples per atom edge")->check(CLI::Range(1, 16));
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// "3", "pi", "2*pi/3".
double parse_scalar(const std::string& s) {
  double v = 1.0;
  char op = '*';
  size_t pos = 0;
  while (pos <= s.size()) {
    const size_t next = s.find_first_of("*/", pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    double x = 0.0;
    if (tok == "pi") {
      x = kPi;
    } else {
      size_t used = 0;
      x = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    }
    v = op == '*' ? v * x : v / x;
    if (next == std::string::npos) break;
    op = s[next];
    pos = next + 1;
  }
  return v;
}

// "lo:hi,lo:hi".
BinSet parse_arcs(const std::string& spec, int n) {
  std::vector<Interval> arcs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("arc '" + item + "' needs lo:hi");
    arcs.push_back({parse_scalar(item.substr(0, colon)), parse_scalar(item.substr(colon + 1))});
  }
  return BinSet::from_arcs(arcs, n);
}

Verdict run_classify(const SpacetimeRegion& region, const RasterMask& mask, bool open, int modes) {
  if (const auto* p = std::get_if<Product>(&region.root()->node); p && modes == 0 && !open) {
    return classify_product(p->t, p->x, region.horizon(), mask.n(), mask.supersample());
  }
  if (open) return classify_open_everywhere(mask, region);
  ClassifyOptions opt;
  opt.estimate_modes = modes;
  return classify(mask, opt);
}

int cmd_analyze(const Common& c, bool estimate, int modes, std::uint64_t seed, bool open, const std::string& out,
                const std::string& format) {
  const auto region = load_region(c.region_file);
  const auto mask = rasterize(region, c.n, c.supersample);
  const Verdict v = run_classify(region, mask, open, estimate ? modes : 0);
  const auto report = make_report(region, v, seed);
  write_text(out, format == "json" ? to_json(report) + "\n" : to_text(report));
  return exit_code(v);
}

int cmd_witness(const Common& c, const std::string& out) {
  const auto region = load_region(c.region_file);
  const auto mask = rasterize(region, c.n, c.supersample);
  const Verdict v = classify(mask);
  const auto w = witness_state(v);
  if (v.observable != Tri::kNo || !w || !v.witness) {
    std::cerr << "witness refused: observable=" << tri_name(v.observable)
              << "; a counterexample exists only for a 'no' verdict\n";
    return kExitWitnessRefused;
  }
  write_text(out.empty() ? "witness.csv" : out, state_csv(*w));
  const auto& s = *v.witness;
  std::cout << "kind: " << s.kind << '\n' << "levels:";
  for (double l : s.levels) std::cout << ' ' << format_double(l);
  std::cout << '\n'
            << "total_energy: " << format_double(s.total_energy) << '\n'
            << "observed_energy: " << format_double(s.observed_energy) << '\n'
            << "ratio: " << format_double(s.ratio) << '\n'
            << "dt: " << format_double(mask.resolution().dt()) << '\n';
  if (s.kind == "osc_pair") std::cout << "i0: " << format_double(s.i0) << '\n';
  return 0;
}

int cmd_render(const Common& c, const std::string& out, const RenderOptions& opt) {
  if (out.empty()) throw std::invalid_argument("--out is required");
  const auto region = load_region(c.region_file);
  write_pgm(out, render_diagram(rasterize(region, c.n, c.supersample), opt));
  return 0;
}

int cmd_simulate(const Common& c, const std::string& data_file, bool witness, int random_modes, std::uint64_t seed,
                 const std::string& a_spec, const std::string& b_spec, const std::string& export_file,
                 const std::string& dump_file) {
  const auto region = load_region(c.region_file);
  const auto mask = rasterize(region, c.n, c.supersample);
  const int n = mask.n();
  const int sources = (data_file.empty() ? 0 : 1) + (witness ? 1 : 0) + (random_modes > 0 ? 1 : 0);
  if (sources != 1) throw std::invalid_argument("give exactly one of --data, --witness, --random");
  std::optional<Verdict> verdict;
  auto get_verdict = [&]() -> const Verdict& {
    if (!verdict) verdict = classify(mask);
    return *verdict;
  };
  WaveState state;
  if (!data_file.empty()) {
    state = state_from_csv(read_text(data_file));
    if (state.n() != n) {
      throw std::invalid_argument("data has " + std::to_string(state.n()) + " rows, grid has n=" + std::to_string(n));
    }
  } else if (witness) {
    const auto w = witness_state(get_verdict());
    if (!w) {
      std::cerr << "witness refused: observable=" << tri_name(get_verdict().observable) << '\n';
      return kExitWitnessRefused;
    }
    state = *w;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    SpectralData d(random_modes);
    for (int k = 1; k <= random_modes; ++k) {
      d.a_at(k) = std::complex<double>(nd(rng), nd(rng)) / static_cast<double>(k);
      d.a_at(-k) = std::conj(d.a_at(k));
      d.b_at(k) = std::complex<double>(nd(rng), nd(rng));
      d.b_at(-k) = std::conj(d.b_at(k));
    }
    state = d.sample(n);
  }
  BinSet a(n), b(n);
  if (!a_spec.empty() || !b_spec.empty()) {
    if (!a_spec.empty()) a = parse_arcs(a_spec, n);
    if (!b_spec.empty()) b = parse_arcs(b_spec, n);
  } else if (get_verdict().symmetry.kind == SymmetryKind::kPair) {
    a = get_verdict().symmetry.a;
    b = get_verdict().symmetry.b;
  }
  const auto traj = solve_free_wave(state, mask.resolution());
  const auto rows = time_series(traj, mask, a, b);
  if (!dump_file.empty()) write_trajectory(dump_file, traj);
  if (export_file.empty()) {
    std::cout << series_csv(rows);
    return 0;
  }
  write_text(export_file, series_csv(rows));
  double drift = 0.0;
  for (const auto& r : rows) drift = std::max(drift, std::abs(r.functional - rows.front().functional));
  std::cout << "levels: " << rows.size() << '\n'
            << "energy: " << format_double(rows.front().energy) << '\n'
            << "functional_drift: " << format_double(drift) << '\n'
            << "observed_total: " << format_double(rows.back().observed_cum) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observability of the 1D periodic wave equation on spacetime regions"};
  app.require_subcommand(1);

  Common analyze_c, witness_c, render_c, simulate_c;
  bool estimate = false, open = false;
  int modes = 32;
  std::uint64_t seed = 0;
  std::string out, format = "text";
  auto* analyze = app.add_subcommand("analyze", "Decide observability, UCP and controllability");
  add_common(analyze, analyze_c);
  analyze->add_flag("--estimate", estimate, "Run the spectral estimator");
  analyze->add_option("--modes", modes, "Estimator order")->check(CLI::Range(1, 256));
  analyze->add_option("--seed", seed, "Seed recorded in the report");
  analyze->add_flag("--open", open, "Use the every-line check for open regions");
  analyze->add_option("--out", out, "Report file (default stdout)");
  analyze->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string witness_out;
  auto* witness = app.add_subcommand("witness", "Write initial data invisible to G");
  add_common(witness, witness_c);
  witness->add_option("--out", witness_out, "CSV file (default witness.csv)");

  std::string render_out;
  RenderOptions ropt;
  auto* render = app.add_subcommand("render", "Write a PGM diagram of G");
  add_common(render, render_c);
  render->add_option("--out", render_out, "PGM file")->required();
  render->add_flag("--components", ropt.components, "Shade by fiber-graph component");
  render->add_option("--lines", ropt.characteristics, "Characteristics drawn per family");
  render->add_option("--scale", ropt.scale, "Pixels per cell")->check(CLI::Range(1, 16));

  std::string data_file, a_spec, b_spec, export_file, dump_file;
  bool use_witness = false;
  int random_modes = 0;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Free wave time series E(t), I(t), observed energy");
  add_common(simulate, simulate_c);
  simulate->add_option("--data", data_file, "CSV x,u0x,u1");
  simulate->add_flag("--witness", use_witness, "Use the witness of a 'no' verdict");
  simulate->add_option("--random", random_modes, "Random band-limited data with this many modes");
  simulate->add_option("--seed", sim_seed, "Seed for --random");
  simulate->add_option("--A", a_spec, "xi arcs lo:hi,... for I(t)");
  simulate->add_option("--B", b_spec, "eta arcs lo:hi,... for I(t)");
  simulate->add_option("--export", export_file, "Series CSV (default stdout)");
  simulate->add_option("--dump", dump_file, "Binary trajectory dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_c, estimate, modes, seed, open, out, format);
    if (*witness) return cmd_witness(witness_c, witness_out);
    if (*render) return cmd_render(render_c, render_out, ropt);
    if (*simulate) {
      return cmd_simulate(simulate_c, data_file, use_witness, random_modes, sim_seed, a_spec, b_spec, export_file,
                          dump_file);
    }
  } catch (const RegionError& e) {
    const Common& c = *analyze ? analyze_c : *witness ? witness_c : *render ? render_c : simulate_c;
    std::cerr << c.region_file << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
