#include "wavesym/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wavesym {

const char* family_name(CharFamily f) { return f == CharFamily::kXi ? "xi" : "eta"; }

std::string RegionError::format(const std::string& what, int line, int column) {
  if (line <= 0) return what;
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << what;
  return os.str();
}

// ---------------------------------------------------------------------------
// PGM

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto next_token = [&in]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(c);
    }
    return tok;
  };
  if (next_token() != "P5") throw std::runtime_error(path.string() + ": not a binary PGM (P5)");
  GrayImage img;
  try {
    img.width = std::stoi(next_token());
    img.height = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (maxval != 255) throw std::runtime_error("maxval must be 255");
  } catch (const std::logic_error&) {
    throw std::runtime_error(path.string() + ": malformed PGM header");
  }
  if (img.width <= 0 || img.height <= 0) throw std::runtime_error(path.string() + ": empty PGM");
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), img.pixels.size());
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw std::runtime_error(path.string() + ": truncated PGM data");
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
}

// ---------------------------------------------------------------------------
// Equality

namespace {

bool equal_nodes(const Cylinder& a, const Cylinder& b) { return a.t == b.t && a.x == b.x; }
bool equal_nodes(const Product& a, const Product& b) { return a.t == b.t && a.x == b.x; }
bool equal_nodes(const Polygon& a, const Polygon& b) { return a.vertices == b.vertices; }
bool equal_nodes(const CharBand& a, const CharBand& b) {
  return a.family == b.family && a.arcs == b.arcs;
}
bool equal_nodes(const RasterLiteral& a, const RasterLiteral& b) {
  if (a.path != b.path) return false;
  if (!a.image || !b.image) return a.image == b.image;
  return *a.image == *b.image;
}
bool equal_nodes(const Compound& a, const Compound& b) {
  if (a.op != b.op || a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i) {
    if (!(*a.children[i] == *b.children[i])) return false;
  }
  return true;
}

}  // namespace

bool operator==(const RegionExpr& a, const RegionExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return equal_nodes(x, std::get<T>(b.node));
      },
      a.node);
}

bool SpacetimeRegion::operator==(const SpacetimeRegion& other) const {
  if (T_ != other.T_) return false;
  if (!root_ || !other.root_) return root_ == other.root_;
  return *root_ == *other.root_;
}

RegionPtr make_compound(SetOp op, std::vector<RegionPtr> children) {
  return make_node(Compound{op, std::move(children)});
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

std::vector<Interval> normalize_arcs(const std::vector<Interval>& arcs) {
  std::vector<Interval> out;
  for (const Interval& a : arcs) {
    if (a.hi < a.lo) throw RegionError("arc with upper end below lower end", 0, 0);
    for (const Interval& piece : normalize_arc(a)) out.push_back(piece);
  }
  return out;
}

Interval normalize_time(Interval t, double T) {
  const double tol = 1e-9 * std::max(1.0, T);
  if (t.hi < t.lo) throw RegionError("time interval with upper end below lower end", 0, 0);
  if (t.lo < -tol || t.hi > T + tol) throw RegionError("time interval outside [0,T]", 0, 0);
  return {std::clamp(t.lo, 0.0, T), std::clamp(t.hi, 0.0, T)};
}

double polygon_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    a += p.t * q.x - q.t * p.x;
  }
  return 0.5 * a;
}

RegionPtr normalize(const RegionPtr& e, double T) {
  if (!e) throw RegionError("empty region expression", 0, 0);
  return std::visit(
      [T](const auto& x) -> RegionPtr {
        using N = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<N, Cylinder>) {
          return make_node(Cylinder{normalize_time(x.t, T), normalize_arcs(x.x)});
        } else if constexpr (std::is_same_v<N, Product>) {
          Product p;
          for (const Interval& t : x.t) p.t.push_back(normalize_time(t, T));
          p.x = normalize_arcs(x.x);
          return make_node(p);
        } else if constexpr (std::is_same_v<N, Polygon>) {
          if (x.vertices.size() < 3) throw RegionError("polygon needs at least 3 vertices", 0, 0);
          const double tol = 1e-9 * std::max(1.0, T);
          double min_x = x.vertices.front().x;
          for (const Point& p : x.vertices) {
            if (p.t < -tol || p.t > T + tol) {
              throw RegionError("polygon vertex time outside [0,T]", 0, 0);
            }
            min_x = std::min(min_x, p.x);
          }
          if (std::abs(polygon_area(x.vertices)) <= 1e-14) {
            throw RegionError("empty polygon (zero area)", 0, 0);
          }
          const double shift = -kTwoPi * std::floor(min_x / kTwoPi);
          Polygon out;
          for (const Point& p : x.vertices) out.vertices.push_back({p.t, p.x + shift});
          return make_node(out);
        } else if constexpr (std::is_same_v<N, CharBand>) {
          return make_node(CharBand{x.family, normalize_arcs(x.arcs)});
        } else if constexpr (std::is_same_v<N, RasterLiteral>) {
          if (!x.image) throw RegionError("raster literal without image data", 0, 0);
          return make_node(x);
        } else {
          if (x.children.empty()) throw RegionError("set operation without operands", 0, 0);
          if (x.op == SetOp::kComplement && x.children.size() != 1) {
            throw RegionError("complement takes exactly one operand", 0, 0);
          }
          if (x.op == SetOp::kDiff && x.children.size() < 2) {
            throw RegionError("diff needs at least two operands", 0, 0);
          }
          Compound c{x.op, {}};
          for (const RegionPtr& child : x.children) c.children.push_back(normalize(child, T));
          return make_node(c);
        }
      },
      e->node);
}

bool in_arcs(const std::vector<Interval>& arcs, double y) {
  for (const Interval& a : arcs) {
    if (a.contains(y)) return true;
  }
  return false;
}

double mod2pi(double y) {
  double r = std::fmod(y, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

bool on_segment(const Point& a, const Point& b, double t, double x) {
  const double dt = b.t - a.t, dx = b.x - a.x;
  const double len2 = dt * dt + dx * dx;
  const double s = std::clamp(((t - a.t) * dt + (x - a.x) * dx) / len2, 0.0, 1.0);
  const double et = a.t + s * dt - t, ex = a.x + s * dx - x;
  return et * et + ex * ex <= 1e-24 * (1.0 + len2);
}

// Points on an edge count as outside, so mirrored samples agree.
bool in_polygon(const std::vector<Point>& v, double t, double x) {
  bool inside = false;
  const size_t m = v.size();
  for (size_t i = 0, k = m - 1; i < m; k = i++) {
    const Point& a = v[i];
    const Point& b = v[k];
    if (on_segment(a, b, t, x)) return false;
    if ((a.t > t) != (b.t > t)) {
      const double xc = a.x + (t - a.t) * (b.x - a.x) / (b.t - a.t);
      if (x < xc) inside = !inside;
    }
  }
  return inside;
}

double eval(const RegionExpr& e, double T, double t, double x) {
  return std::visit(
      [T, t, x](const auto& n) -> double {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Cylinder>) {
          return (n.t.contains(t) && in_arcs(n.x, x)) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<N, Product>) {
          if (!in_arcs(n.x, x)) return 0.0;
          return in_arcs(n.t, t) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<N, Polygon>) {
          double lo = n.vertices.front().x, hi = lo, tlo = n.vertices.front().t, thi = tlo;
          for (const Point& p : n.vertices) {
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
            tlo = std::min(tlo, p.t);
            thi = std::max(thi, p.t);
          }
          if (t < tlo || t > thi) return 0.0;
          for (double xs = x; xs <= hi; xs += kTwoPi) {
            if (xs >= lo && in_polygon(n.vertices, t, xs)) return 1.0;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<N, CharBand>) {
          const double y = n.family == CharFamily::kXi ? mod2pi(x + t) : mod2pi(x - t);
          return in_arcs(n.arcs, y) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<N, RasterLiteral>) {
          const GrayImage& img = *n.image;
          int row = static_cast<int>(std::floor(t / T * img.height));
          int col = static_cast<int>(std::floor(x / kTwoPi * img.width));
          row = std::clamp(row, 0, img.height - 1);
          col = std::clamp(col, 0, img.width - 1);
          return img.at(row, col) / 255.0;
        } else {
          switch (n.op) {
            case SetOp::kUnion: {
              double v = 0.0;
              for (const RegionPtr& c : n.children) v = std::max(v, eval(*c, T, t, x));
              return v;
            }
            case SetOp::kIntersect: {
              double v = 1.0;
              for (const RegionPtr& c : n.children) {
                v = std::min(v, eval(*c, T, t, x));
                if (v == 0.0) break;
              }
              return v;
            }
            case SetOp::kDiff: {
              double v = eval(*n.children.front(), T, t, x);
              for (size_t i = 1; i < n.children.size() && v > 0.0; ++i) {
                v = std::min(v, 1.0 - eval(*n.children[i], T, t, x));
              }
              return v;
            }
            case SetOp::kComplement:
              return 1.0 - eval(*n.children.front(), T, t, x);
          }
          return 0.0;
        }
      },
      e.node);
}

bool has_raster(const RegionExpr& e) {
  if (std::holds_alternative<RasterLiteral>(e.node)) return true;
  if (const auto* c = std::get_if<Compound>(&e.node)) {
    for (const RegionPtr& child : c->children) {
      if (has_raster(*child)) return true;
    }
  }
  return false;
}

}  // namespace

SpacetimeRegion::SpacetimeRegion(double T, RegionPtr root) : T_(T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw RegionError("T must be positive", 0, 0);
  root_ = normalize(root, T);
}

double SpacetimeRegion::occupancy(double t, double x) const {
  if (!root_ || t < 0.0 || t > T_) return 0.0;
  return eval(*root_, T_, t, mod2pi(x));
}

bool SpacetimeRegion::interior(double t, double x, double delta) const {
  if (occupancy(t, x) < 1.0) return false;
  return occupancy(t + delta, x) >= 1.0 && occupancy(t - delta, x) >= 1.0 &&
         occupancy(t, x + delta) >= 1.0 && occupancy(t, x - delta) >= 1.0;
}

bool SpacetimeRegion::is_open() const { return root_ && !has_raster(*root_); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { kIdent, kNumber, kString, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = col_;
      if (pos_ >= src_.size()) {
        tok.kind = Tok::kEnd;
        out.push_back(tok);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = Tok::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          tok.text.push_back(advance());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        tok.kind = Tok::kNumber;
        size_t used = 0;
        try {
          tok.number = std::stod(src_.substr(pos_), &used);
        } catch (const std::logic_error&) {
          throw RegionError("malformed number", tok.line, tok.column);
        }
        for (size_t i = 0; i < used; ++i) tok.text.push_back(advance());
      } else if (c == '"') {
        tok.kind = Tok::kString;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\n') throw RegionError("unterminated string", tok.line, tok.column);
          tok.text.push_back(advance());
        }
        if (pos_ >= src_.size()) throw RegionError("unterminated string", tok.line, tok.column);
        advance();
      } else if (std::string("{}[]()=,*/-").find(c) != std::string::npos) {
        tok.kind = Tok::kPunct;
        tok.text.push_back(advance());
      } else {
        throw RegionError(std::string("unexpected character '") + c + "'", tok.line, tok.column);
      }
      out.push_back(tok);
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::filesystem::path base)
      : toks_(std::move(toks)), base_(std::move(base)) {}

  SpacetimeRegion parse() {
    expect_ident("region");
    expect("{");
    expect_ident("T");
    expect("=");
    const Token& tv = peek();
    T_ = number();
    if (!(T_ > 0.0)) throw RegionError("T must be positive", tv.line, tv.column);
    RegionPtr root = expr();
    expect("}");
    if (peek().kind != Tok::kEnd) fail("trailing input after region");
    try {
      return SpacetimeRegion(T_, root);
    } catch (const RegionError& e) {
      throw RegionError(e.what(), root_line_, root_col_);
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw RegionError(msg, peek().line, peek().column);
  }

  bool is_punct(const char* p) const { return peek().kind == Tok::kPunct && peek().text == p; }

  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'" + found());
    take();
  }

  void expect_ident(const char* name) {
    if (peek().kind != Tok::kIdent || peek().text != name) {
      fail(std::string("expected '") + name + "'" + found());
    }
    take();
  }

  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::kEnd) return " but reached end of input";
    return " but found '" + t.text + "'";
  }

  double factor() {
    bool neg = false;
    while (is_punct("-")) {
      take();
      neg = !neg;
    }
    double v;
    if (peek().kind == Tok::kNumber) {
      v = take().number;
    } else if (peek().kind == Tok::kIdent && peek().text == "pi") {
      take();
      v = kPi;
    } else {
      fail("expected a number" + found());
    }
    return neg ? -v : v;
  }

  double number() {
    double v = factor();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = take().text == "*";
      const Token& at = peek();
      const double w = factor();
      if (!mul && w == 0.0) throw RegionError("division by zero", at.line, at.column);
      v = mul ? v * w : v / w;
    }
    if (!std::isfinite(v)) fail("non-finite number");
    return v;
  }

  Interval interval() {
    const Token& at = peek();
    expect("[");
    Interval iv;
    iv.lo = number();
    expect(",");
    iv.hi = number();
    expect("]");
    if (iv.hi < iv.lo) throw RegionError("interval upper end below lower end", at.line, at.column);
    return iv;
  }

  std::vector<Interval> interval_list() {
    std::vector<Interval> out{interval()};
    while (is_punct(",")) {
      take();
      out.push_back(interval());
    }
    return out;
  }

  std::vector<Interval> braced_interval_list() {
    expect("{");
    std::vector<Interval> out = interval_list();
    expect("}");
    return out;
  }

  Interval time_interval() {
    const Token& at = peek();
    Interval iv = interval();
    const double tol = 1e-9 * std::max(1.0, T_);
    if (iv.lo < -tol || iv.hi > T_ + tol) {
      throw RegionError("time interval outside [0,T]", at.line, at.column);
    }
    return iv;
  }

  std::string key() {
    if (peek().kind != Tok::kIdent) fail("expected a key" + found());
    return take().text;
  }

  RegionPtr expr() {
    const Token head = peek();
    if (head.kind != Tok::kIdent) fail("expected a region expression" + found());
    if (root_line_ == 0) {
      root_line_ = head.line;
      root_col_ = head.column;
    }
    take();
    const std::string& kw = head.text;
    if (kw == "cylinder") return cylinder();
    if (kw == "product") return product();
    if (kw == "polygon") return polygon(head);
    if (kw == "charband") return charband();
    if (kw == "raster") return raster(head);
    if (kw == "union") return compound(SetOp::kUnion, head);
    if (kw == "intersect") return compound(SetOp::kIntersect, head);
    if (kw == "diff") return compound(SetOp::kDiff, head);
    if (kw == "complement") return compound(SetOp::kComplement, head);
    throw RegionError("unknown region kind '" + kw + "'", head.line, head.column);
  }

  RegionPtr cylinder() {
    expect("{");
    Cylinder c;
    bool have_t = false, have_x = false;
    while (!is_punct("}")) {
      const Token at = peek();
      const std::string k = key();
      expect("=");
      if (k == "t" && !have_t) {
        c.t = time_interval();
        have_t = true;
      } else if (k == "x" && !have_x) {
        c.x = interval_list();
        have_x = true;
      } else {
        throw RegionError("unknown or repeated key '" + k + "' in cylinder", at.line, at.column);
      }
    }
    if (!have_t || !have_x) fail("cylinder needs keys t and x");
    expect("}");
    return make_node(c);
  }

  RegionPtr product() {
    expect("{");
    Product p;
    bool have_t = false, have_x = false;
    while (!is_punct("}")) {
      const Token at = peek();
      const std::string k = key();
      expect("=");
      if (k == "t" && !have_t) {
        const Token& open = peek();
        p.t = braced_interval_list();
        const double tol = 1e-9 * std::max(1.0, T_);
        for (const Interval& iv : p.t) {
          if (iv.lo < -tol || iv.hi > T_ + tol) {
            throw RegionError("time interval outside [0,T]", open.line, open.column);
          }
        }
        have_t = true;
      } else if (k == "x" && !have_x) {
        p.x = braced_interval_list();
        have_x = true;
      } else {
        throw RegionError("unknown or repeated key '" + k + "' in product", at.line, at.column);
      }
    }
    if (!have_t || !have_x) fail("product needs keys t and x");
    expect("}");
    return make_node(p);
  }

  RegionPtr polygon(const Token& head) {
    expect("{");
    Polygon poly;
    while (!is_punct("}")) {
      const Token at = peek();
      expect("(");
      Point p;
      p.t = number();
      expect(",");
      p.x = number();
      expect(")");
      const double tol = 1e-9 * std::max(1.0, T_);
      if (p.t < -tol || p.t > T_ + tol) {
        throw RegionError("polygon vertex time outside [0,T]", at.line, at.column);
      }
      poly.vertices.push_back(p);
      if (is_punct(",")) take();
    }
    if (poly.vertices.size() < 3) {
      throw RegionError("polygon needs at least 3 vertices", head.line, head.column);
    }
    if (std::abs(polygon_area(poly.vertices)) <= 1e-14) {
      throw RegionError("empty polygon (zero area)", head.line, head.column);
    }
    expect("}");
    return make_node(poly);
  }

  RegionPtr charband() {
    expect("{");
    const Token at = peek();
    const std::string k = key();
    CharBand b;
    if (k == "xi") {
      b.family = CharFamily::kXi;
    } else if (k == "eta") {
      b.family = CharFamily::kEta;
    } else {
      throw RegionError("unknown key '" + k + "' in charband (expected xi or eta)", at.line,
                        at.column);
    }
    expect("=");
    b.arcs = interval_list();
    expect("}");
    return make_node(b);
  }

  RegionPtr raster(const Token& head) {
    expect("{");
    const Token at = peek();
    const std::string k = key();
    if (k != "file") throw RegionError("unknown key '" + k + "' in raster", at.line, at.column);
    expect("=");
    if (peek().kind != Tok::kString) fail("expected a quoted file name" + found());
    RasterLiteral r;
    r.path = take().text;
    expect("}");
    std::filesystem::path p(r.path);
    if (p.is_relative() && !base_.empty()) p = base_ / p;
    try {
      r.image = std::make_shared<const GrayImage>(read_pgm(p));
    } catch (const std::runtime_error& e) {
      throw RegionError(e.what(), head.line, head.column);
    }
    return make_node(r);
  }

  RegionPtr compound(SetOp op, const Token& head) {
    expect("{");
    Compound c{op, {}};
    while (!is_punct("}")) {
      if (peek().kind == Tok::kEnd) fail("unterminated set operation");
      c.children.push_back(expr());
    }
    expect("}");
    if (c.children.empty()) throw RegionError("set operation without operands", head.line, head.column);
    if (op == SetOp::kComplement && c.children.size() != 1) {
      throw RegionError("complement takes exactly one operand", head.line, head.column);
    }
    if (op == SetOp::kDiff && c.children.size() < 2) {
      throw RegionError("diff needs at least two operands", head.line, head.column);
    }
    return make_node(c);
  }

  std::vector<Token> toks_;
  std::filesystem::path base_;
  size_t pos_ = 0;
  double T_ = 0.0;
  int root_line_ = 0;
  int root_col_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

void print_interval(std::ostream& os, const Interval& iv) {
  os << "[" << format_double(iv.lo) << "," << format_double(iv.hi) << "]";
}

void print_list(std::ostream& os, const std::vector<Interval>& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    print_interval(os, v[i]);
  }
}

void print_expr(std::ostream& os, const RegionExpr& e, int depth) {
  const std::string pad(2 * depth, ' ');
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        os << pad;
        if constexpr (std::is_same_v<N, Cylinder>) {
          os << "cylinder { t=";
          print_interval(os, n.t);
          os << " x=";
          print_list(os, n.x);
          os << " }\n";
        } else if constexpr (std::is_same_v<N, Product>) {
          os << "product { t={";
          print_list(os, n.t);
          os << "} x={";
          print_list(os, n.x);
          os << "} }\n";
        } else if constexpr (std::is_same_v<N, Polygon>) {
          os << "polygon {";
          for (const Point& p : n.vertices) {
            os << " (" << format_double(p.t) << "," << format_double(p.x) << ")";
          }
          os << " }\n";
        } else if constexpr (std::is_same_v<N, CharBand>) {
          os << "charband { " << family_name(n.family) << "=";
          print_list(os, n.arcs);
          os << " }\n";
        } else if constexpr (std::is_same_v<N, RasterLiteral>) {
          os << "raster { file=\"" << n.path << "\" }\n";
        } else {
          static const char* names[] = {"union", "intersect", "diff", "complement"};
          os << names[static_cast<int>(n.op)] << " {\n";
          for (const RegionPtr& c : n.children) print_expr(os, *c, depth + 1);
          os << pad << "}\n";
        }
      },
      e.node);
}

}  // namespace

SpacetimeRegion parse_region(const std::string& text, const std::filesystem::path& base_dir) {
  Lexer lex(text);
  Parser parser(lex.run(), base_dir);
  return parser.parse();
}

SpacetimeRegion load_region(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open region file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_region(ss.str(), file.parent_path());
}

std::string to_dsl(const SpacetimeRegion& region) {
  std::ostringstream os;
  os << "region {\n  T=" << format_double(region.horizon()) << "\n";
  if (region.root()) print_expr(os, *region.root(), 1);
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Geometry helpers

std::vector<Point> dilate_convex(const std::vector<Point>& v, double eps) {
  const size_t m = v.size();
  const double orient = polygon_area(v) > 0 ? 1.0 : -1.0;
  // Offset line i passes through v[i] + eps * n_i with direction d_i.
  std::vector<Point> out(m);
  for (size_t i = 0; i < m; ++i) {
    const Point& a0 = v[(i + m - 1) % m];
    const Point& a1 = v[i];
    const Point& b1 = v[(i + 1) % m];
    auto normal = [orient](const Point& p, const Point& q) {
      const double dt = q.t - p.t, dx = q.x - p.x;
      const double len = std::hypot(dt, dx);
      // Outward normal of a counter-clockwise (t, x) polygon is (dx, -dt).
      return Point{orient * dx / len, -orient * dt / len};
    };
    const Point n0 = normal(a0, a1);
    const Point n1 = normal(a1, b1);
    // Solve for the point at distance eps from both offset edges.
    const double c = n0.t * n1.t + n0.x * n1.x;
    const double s = eps / (1.0 + c);
    out[i] = {a1.t + s * (n0.t + n1.t), a1.x + s * (n0.x + n1.x)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step functions and reference solutions

double StepFunction::operator()(double y) const {
  const double r = mod2pi(y);
  for (size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].contains(r)) return values[i];
  }
  return 0.0;
}

double StepFunction::integral() const {
  double s = 0.0;
  for (size_t i = 0; i < arcs.size(); ++i) s += values[i] * arcs[i].length();
  return s;
}

double StepFunction::squared_norm() const {
  double s = 0.0;
  for (size_t i = 0; i < arcs.size(); ++i) s += values[i] * values[i] * arcs[i].length();
  return s;
}

std::vector<double> StepFunction::bin_averages(int n) const {
  std::vector<double> out(n, 0.0);
  const double dx = kTwoPi / n;
  for (int k = 0; k < n; ++k) {
    const double lo = k * dx, hi = (k + 1) * dx;
    double s = 0.0;
    for (size_t i = 0; i < arcs.size(); ++i) {
      const double a = std::max(lo, arcs[i].lo), b = std::min(hi, arcs[i].hi);
      if (b > a) s += values[i] * (b - a);
    }
    out[k] = s / dx;
  }
  return out;
}

double ReferenceSolution::u_t(double t, double x) const { return p0(x + t) - q0(x - t); }

double ReferenceSolution::energy() const {
  return 2.0 * (p0.squared_norm() + q0.squared_norm());
}

WaveState ReferenceSolution::sample(int n) const {
  return WaveState::from_characteristic(p0.bin_averages(n), q0.bin_averages(n));
}

namespace {

RegionPtr poly(std::initializer_list<Point> pts) { return make_node(Polygon{pts}); }

RegionPtr band(CharFamily f, std::vector<Interval> arcs) { return make_node(CharBand{f, arcs}); }

std::vector<std::vector<Point>> figure1_pieces() {
  const double p = kPi, h = kPi / 2, q = 3 * kPi / 2, w = kTwoPi;
  return {
      // blue: xi, eta in (0, pi)
      {{0, 0}, {0, p}, {h, h}},
      {{h, q}, {p, w}, {q, q}, {p, p}},
      {{w, 0}, {q, h}, {w, p}},
      // red: xi, eta in (pi, 2pi)
      {{0, p}, {0, w}, {h, q}},
      {{h, h}, {p, p}, {q, h}, {p, 0}},
      {{w, p}, {q, q}, {w, w}},
  };
}

}  // namespace

FigureCase figure1_region() {
  std::vector<RegionPtr> parts;
  for (const auto& piece : figure1_pieces()) parts.push_back(make_node(Polygon{piece}));
  FigureCase fc;
  fc.region = SpacetimeRegion(kTwoPi, make_compound(SetOp::kUnion, parts));
  const StepFunction s{{{0.0, kPi}, {kPi, kTwoPi}}, {-1.0, 1.0}};
  fc.reference = {s, s};
  fc.a_arcs = {{0.0, kPi}};
  fc.b_arcs = {{0.0, kPi}};
  return fc;
}

SpacetimeRegion figure1_charband_region() {
  const std::vector<Interval> lo{{0.0, kPi}}, hi{{kPi, kTwoPi}};
  return SpacetimeRegion(
      kTwoPi,
      make_compound(SetOp::kUnion,
                    {make_compound(SetOp::kIntersect,
                                   {band(CharFamily::kXi, lo), band(CharFamily::kEta, lo)}),
                     make_compound(SetOp::kIntersect,
                                   {band(CharFamily::kXi, hi), band(CharFamily::kEta, hi)})}));
}

SpacetimeRegion figure1_dilated_region(double eps) {
  std::vector<RegionPtr> parts;
  for (const auto& piece : figure1_pieces()) {
    std::vector<Point> grown = dilate_convex(piece, eps);
    for (Point& pt : grown) pt.t = std::clamp(pt.t, 0.0, kTwoPi);
    parts.push_back(make_node(Polygon{grown}));
  }
  return SpacetimeRegion(kTwoPi, make_compound(SetOp::kUnion, parts));
}

FigureCase figure2_region() {
  const double a = kTwoPi / 3, b = 2 * kTwoPi / 3, p = kPi, w = kTwoPi;
  const double s = kPi / 3, f = 5 * kPi / 3;
  std::vector<RegionPtr> parts = {
      // red: xi, eta in (-2pi/3, 2pi/3)
      poly({{0, 0}, {0, a}, {a, 0}}),
      poly({{0, b}, {0, w}, {a, w}}),
      poly({{p, s}, {s, p}, {p, f}, {f, p}}),
      poly({{b, 0}, {w, a}, {w, 0}}),
      poly({{w, b}, {b, w}, {w, w}}),
      // blue: xi, eta in (2pi/3, 4pi/3)
      poly({{0, a}, {0, b}, {s, p}}),
      poly({{a, 0}, {p, s}, {b, 0}}),
      poly({{p, f}, {a, w}, {b, w}}),
      poly({{w, a}, {f, p}, {w, b}}),
  };
  FigureCase fc;
  fc.region = SpacetimeRegion(kTwoPi, make_compound(SetOp::kUnion, parts));
  const StepFunction step{{{0.0, a}, {a, b}, {b, w}}, {1.0, -2.0, 1.0}};
  fc.reference = {step, step};
  fc.a_arcs = {{0.0, a}, {b, w}};
  fc.b_arcs = {{0.0, a}, {b, w}};
  return fc;
}

SpacetimeRegion figure2_charband_region() {
  const double a = kTwoPi / 3, b = 2 * kTwoPi / 3;
  const std::vector<Interval> red{{0.0, a}, {b, kTwoPi}}, blue{{a, b}};
  return SpacetimeRegion(
      kTwoPi,
      make_compound(SetOp::kUnion,
                    {make_compound(SetOp::kIntersect,
                                   {band(CharFamily::kXi, red), band(CharFamily::kEta, red)}),
                     make_compound(SetOp::kIntersect,
                                   {band(CharFamily::kXi, blue), band(CharFamily::kEta, blue)})}));
}

}  // namespace wavesym
