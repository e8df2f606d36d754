#pragma once

#include <string>
#include <vector>

#include "wavesym/fibers.hpp"
#include "wavesym/state.hpp"

namespace wavesym {

// Bipartite graph: node p in [0, n) is xi-bin p, node n + q is eta-bin q.
struct FiberGraph {
  int n = 0;
  std::vector<int> label;  // component id per node, -1 without incident edges
  int components = 0;
  std::vector<double> xi_measure;   // per component, radians
  std::vector<double> eta_measure;
};

// Below this mu value a (xi, eta) pair carries no mass.
double edge_noise_floor(const Resolution& res);
FiberGraph build_fiber_graph(const FiberData& fibers, double edge_floor);
FiberGraph build_fiber_graph(const FiberData& fibers);

struct Component {
  BinSet a;  // xi-bins
  BinSet b;  // eta-bins
  bool operator==(const Component&) const = default;
};

struct DecompositionPair {
  std::vector<Component> parts;
  bool operator==(const DecompositionPair&) const = default;
};

enum class SymmetryKind { kNoPair, kPair, kWeakGccFailure };

const char* symmetry_kind_name(SymmetryKind k);

struct SymmetryVerdict {
  SymmetryKind kind = SymmetryKind::kNoPair;
  int components = 0;
  DecompositionPair decomposition;
  // Chosen pair for kPair; zero-fiber sets A0, B0 for kWeakGccFailure.
  BinSet a;
  BinSet b;
  double symdiff = 0.0;
  // Set when the split only appears after assigning bins cut by a set
  // boundary to their majority side.
  bool reconciled = false;
  int straddling_bins = 0;

  bool operator==(const SymmetryVerdict&) const = default;
};

// Relative cut used to separate majority and minority parts of a bin.
inline constexpr double kStrongEdgeFraction = 0.45;
// Straddle reconciliation needs enough bins for a boundary to be local.
inline constexpr int kReconcileMinBins = 64;

SymmetryVerdict detect_osc(const FiberData& fibers, const GccReport& gcc);

// Area of (G cap L_{xi in A}) symmetric-difference (G cap L_{eta in B}).
double osc_check_pair(const FiberData& fibers, const BinSet& a, const BinSet& b);

// Exhaustive search over xi-bin subsets, n <= 12.
SymmetryVerdict brute_force_osc(const FiberData& fibers);

struct Witness {
  WaveState state;
  BinSet a;
  BinSet b;
  double level = 0.0;       // value off A and off B
  double i0 = 0.0;          // I(0) with U = u_x + u_t, V = u_x - u_t
  double measure_sum = 0.0; // |A| + |B|
};

// u_xi = chi_A + a chi_{A^c}, u_eta = chi_B + a chi_{B^c} at t = 0.
Witness witness_from_pair(const BinSet& a, const BinSet& b);

// Data supported on zero fibers: alternating +-1 on an even number of bins of
// one family. A single zero bin needs the other family to carry the constant
// that removes the mean of u0x.
WaveState zero_fiber_witness(const BinSet& zero_xi, const BinSet& zero_eta);

struct LevelSet {
  double value = 0.0;
  BinSet set;
};

enum class PairClass { kFinite, kCountable, kNeither };

const char* pair_class_name(PairClass c);

struct SymmetricPairReport {
  PairClass cls = PairClass::kNeither;
  int levels_count = 0;
  std::vector<double> levels;
  double mean = 0.0;  // integral of f + g
  std::string violated;
};

// f and g as level lists. remainder_l2 > 0 marks a truncated countable family.
SymmetricPairReport classify_symmetric_pair(const std::vector<LevelSet>& f,
                                            const std::vector<LevelSet>& g,
                                            double remainder_l2 = 0.0);

}  // namespace wavesym
