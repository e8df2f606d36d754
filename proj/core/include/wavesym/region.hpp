#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wavesym/grid.hpp"
#include "wavesym/state.hpp"

namespace wavesym {

enum class CharFamily { kXi, kEta };

const char* family_name(CharFamily f);

struct Point {
  double t = 0.0;
  double x = 0.0;
  bool operator==(const Point&) const = default;
};

// 8-bit grayscale image, row 0 first.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> pixels;

  unsigned char at(int row, int col) const { return pixels[row * width + col]; }
  bool operator==(const GrayImage&) const = default;
};

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

struct RegionExpr;
using RegionPtr = std::shared_ptr<const RegionExpr>;

struct Cylinder {
  Interval t;
  std::vector<Interval> x;
};

struct Product {
  std::vector<Interval> t;
  std::vector<Interval> x;
};

// Vertices in (t, x). Membership is even-odd on the universal cover in x, so
// edges may cross the seam; the polygon is translated as a whole so that its
// smallest x lies in [0, 2pi).
struct Polygon {
  std::vector<Point> vertices;
};

struct CharBand {
  CharFamily family = CharFamily::kXi;
  std::vector<Interval> arcs;
};

struct RasterLiteral {
  std::string path;
  std::shared_ptr<const GrayImage> image;
};

enum class SetOp { kUnion, kIntersect, kDiff, kComplement };

struct Compound {
  SetOp op = SetOp::kUnion;
  std::vector<RegionPtr> children;
};

struct RegionExpr {
  std::variant<Cylinder, Product, Polygon, CharBand, RasterLiteral, Compound> node;
};

bool operator==(const RegionExpr& a, const RegionExpr& b);

class SpacetimeRegion {
 public:
  SpacetimeRegion() = default;
  // Validates and normalizes the tree (arcs reduced mod 2pi, polygons
  // translated). Throws RegionError on semantic problems.
  SpacetimeRegion(double T, RegionPtr root);

  double horizon() const { return T_; }
  const RegionPtr& root() const { return root_; }

  // Occupancy in [0, 1] at a point; outside [0, T] it is 0.
  double occupancy(double t, double x) const;
  // Interior test: the point and a small cross of neighbours are occupied.
  bool interior(double t, double x, double delta = 1e-7) const;
  // True when no raster literal appears in the tree.
  bool is_open() const;

  bool operator==(const SpacetimeRegion& other) const;

 private:
  double T_ = 0.0;
  RegionPtr root_;
};

class RegionError : public std::runtime_error {
 public:
  RegionError(const std::string& what, int line, int column)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column);
  int line_;
  int column_;
};

// Raster literal paths are resolved against base_dir when relative.
SpacetimeRegion parse_region(const std::string& text,
                             const std::filesystem::path& base_dir = {});
SpacetimeRegion load_region(const std::filesystem::path& file);
std::string to_dsl(const SpacetimeRegion& region);

// Helpers for building trees in code.
template <typename T>
RegionPtr make_node(T value) {
  return std::make_shared<const RegionExpr>(RegionExpr{std::move(value)});
}
RegionPtr make_compound(SetOp op, std::vector<RegionPtr> children);

// Outward offset of a convex polygon by eps (edges pushed along normals).
std::vector<Point> dilate_convex(const std::vector<Point>& vertices, double eps);

// Piecewise-constant function of one periodic variable.
struct StepFunction {
  std::vector<Interval> arcs;
  std::vector<double> values;

  double operator()(double y) const;
  double integral() const;
  double squared_norm() const;
  // Exact average over each of n bins.
  std::vector<double> bin_averages(int n) const;
};

// Closed-form free wave with u_xi = p0(x + t), u_eta = q0(x - t).
struct ReferenceSolution {
  StepFunction p0;
  StepFunction q0;

  double u_t(double t, double x) const;
  double energy() const;  // 2 (||p0||^2 + ||q0||^2)
  WaveState sample(int n) const;
};

struct FigureCase {
  SpacetimeRegion region;
  ReferenceSolution reference;
  std::vector<Interval> a_arcs;  // the OSC pair shown in the figure
  std::vector<Interval> b_arcs;
};

FigureCase figure1_region();
FigureCase figure2_region();
// Same sets described by characteristic bands instead of polygons.
SpacetimeRegion figure1_charband_region();
SpacetimeRegion figure2_charband_region();
// Each convex piece of figure 1 dilated by eps.
SpacetimeRegion figure1_dilated_region(double eps);

}  // namespace wavesym
