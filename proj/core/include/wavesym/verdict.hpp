#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavesym/estimator.hpp"
#include "wavesym/fibers.hpp"
#include "wavesym/raster.hpp"
#include "wavesym/region.hpp"
#include "wavesym/symmetry.hpp"

namespace wavesym {

enum class Tri { kYes, kNo, kIndeterminate };

const char* tri_name(Tri t);

struct WitnessSummary {
  std::string kind;  // "osc_pair" or "zero_fiber"
  std::vector<double> levels;
  double total_energy = 0.0;
  double observed_energy = 0.0;
  double ratio = 0.0;
  double i0 = 0.0;  // predicted conserved value, pair witnesses only
  bool operator==(const WitnessSummary&) const = default;
};

struct EstimateSummary {
  int modes = 0;
  double lambda_min = 0.0;
  std::vector<std::pair<int, double>> trace;
  bool operator==(const EstimateSummary&) const = default;
};

struct Verdict {
  Tri observable = Tri::kIndeterminate;
  Tri ucp = Tri::kIndeterminate;
  // Reported equal to observability by duality.
  Tri controllable = Tri::kIndeterminate;
  std::vector<std::string> reasons;
  Resolution res;
  int supersample = 0;
  GccReport gcc;
  SymmetryVerdict symmetry;
  std::optional<WitnessSummary> witness;
  std::optional<EstimateSummary> estimate;
  std::optional<double> product_sum;    // |E| + |F| for product fast paths
  std::optional<double> every_line_c0;  // open-set check, time measure

  bool operator==(const Verdict&) const = default;
};

struct ClassifyOptions {
  int estimate_modes = 0;  // 0 skips the estimator
  bool simulate_witness = true;
};

Verdict classify(const RasterMask& mask, const ClassifyOptions& options = {});

// Initial data defeating observability for a "no" verdict.
std::optional<WaveState> witness_state(const Verdict& v);

Verdict classify_product(const std::vector<Interval>& e, const std::vector<Interval>& f, double T, int n,
                         int supersample = 4);

Verdict classify_open_everywhere(const RasterMask& mask, const SpacetimeRegion& region);

struct NecessityProbe {
  CharFamily family = CharFamily::kXi;
  int bin = 0;
  double fiber_mass = 0.0;
  double ratio = 0.0;  // observed / total
  bool pass = false;
};

struct NecessityReport {
  std::vector<NecessityProbe> probes;
  double tolerance = 0.0;
  bool all_pass = false;
};

// Concentrated traveling data on the `trials` weakest fibers.
NecessityReport gcc_necessity_check(const RasterMask& mask, int trials);

}  // namespace wavesym
