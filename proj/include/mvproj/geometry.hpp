#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvproj/rational.hpp"

namespace mvproj {

struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend std::strong_ordering operator<=>(const Point2& a, const Point2& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(const Rational& s, const Point2& p) { return {s * p.x, s * p.y}; }

  std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

/// Twice the signed area of triangle (o, a, b); positive when counter-clockwise.
inline Rational orient(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline Point2 lerp(const Point2& p, const Point2& q, const Rational& t) { return p + t * (q - p); }

/// The affine function a*x + b*y + c.
struct AffineForm2 {
  Rational a;
  Rational b;
  Rational c;

  static AffineForm2 constant(Rational v) { return {0, 0, std::move(v)}; }
  static AffineForm2 x() { return {1, 0, 0}; }
  static AffineForm2 y() { return {0, 1, 0}; }

  Rational operator()(const Point2& p) const { return a * p.x + b * p.y + c; }

  bool is_constant() const { return a.sign() == 0 && b.sign() == 0; }
  bool is_zero() const { return is_constant() && c.sign() == 0; }
  bool is_integral() const { return a.is_integer() && b.is_integer() && c.is_integer(); }

  friend bool operator==(const AffineForm2&, const AffineForm2&) = default;
  friend std::strong_ordering operator<=>(const AffineForm2& l, const AffineForm2& r) {
    if (auto o = l.a <=> r.a; o != 0) return o;
    if (auto o = l.b <=> r.b; o != 0) return o;
    return l.c <=> r.c;
  }
  friend AffineForm2 operator+(const AffineForm2& l, const AffineForm2& r) { return {l.a + r.a, l.b + r.b, l.c + r.c}; }
  friend AffineForm2 operator-(const AffineForm2& l, const AffineForm2& r) { return {l.a - r.a, l.b - r.b, l.c - r.c}; }
  friend AffineForm2 operator*(const Rational& s, const AffineForm2& f) { return {s * f.a, s * f.b, s * f.c}; }
  AffineForm2 operator-() const { return {-a, -b, -c}; }

  std::string str() const { return "[" + a.str() + ", " + b.str() + ", " + c.str() + "]"; }
};

/// Line through p and q as a form that is positive on the left of p->q.
inline AffineForm2 line_through(const Point2& p, const Point2& q) {
  Rational dx = q.x - p.x;
  Rational dy = q.y - p.y;
  return {-dy, dx, dy * p.x - dx * p.y};
}

/// Intersection of the lines f = 0 and g = 0, if they cross in a single point.
inline std::optional<Point2> intersect_lines(const AffineForm2& f, const AffineForm2& g) {
  Rational det = f.a * g.b - f.b * g.a;
  if (det.sign() == 0) return std::nullopt;
  return Point2{(f.b * g.c - f.c * g.b) / det, (f.c * g.a - f.a * g.c) / det};
}

struct BBox {
  Rational xmin, xmax, ymin, ymax;
  bool overlaps(const BBox& o) const {
    return !(xmax < o.xmin || o.xmax < xmin || ymax < o.ymin || o.ymax < ymin);
  }
};

enum class CellKind { point, segment, polygon };

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::point: return "point";
    case CellKind::segment: return "segment";
    case CellKind::polygon: return "polygon";
  }
  return "?";
}

/// Closed convex cell of dimension 0, 1 or 2. Always canonical: segments keep
/// their endpoints in lexicographic order; polygons are counter-clockwise, have
/// no three collinear consecutive vertices and start at the lexicographically
/// least vertex.
class ConvexCell {
 public:
  /// Convex hull of a nonempty point set, normalized downward when degenerate.
  static ConvexCell hull(std::vector<Point2> pts) {
    if (pts.empty()) throw std::invalid_argument("convex hull of an empty point set");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() == 1) return ConvexCell(CellKind::point, std::move(pts));
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
      h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && orient(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) return ConvexCell(CellKind::segment, {pts.front(), pts.back()});
    return ConvexCell(CellKind::polygon, std::move(h));
  }
  static ConvexCell point(Point2 p) { return ConvexCell(CellKind::point, {std::move(p)}); }
  static ConvexCell segment(Point2 p, Point2 q) { return hull({std::move(p), std::move(q)}); }
  static ConvexCell unit_square() { return hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

  CellKind kind() const { return kind_; }
  const std::vector<Point2>& vertices() const { return vertices_; }
  bool is_polygon() const { return kind_ == CellKind::polygon; }

  /// Halfplanes (form >= 0) whose intersection is exactly this cell.
  std::vector<AffineForm2> constraints() const {
    std::vector<AffineForm2> out;
    switch (kind_) {
      case CellKind::point: {
        const Point2& p = vertices_[0];
        out.push_back({1, 0, -p.x});
        out.push_back({-1, 0, p.x});
        out.push_back({0, 1, -p.y});
        out.push_back({0, -1, p.y});
        break;
      }
      case CellKind::segment: {
        const Point2& p = vertices_[0];
        const Point2& q = vertices_[1];
        AffineForm2 line = line_through(p, q);
        out.push_back(line);
        out.push_back(-line);
        Point2 d = q - p;
        out.push_back({d.x, d.y, -(d.x * p.x + d.y * p.y)});
        out.push_back({-d.x, -d.y, d.x * q.x + d.y * q.y});
        break;
      }
      case CellKind::polygon:
        for (std::size_t i = 0; i < vertices_.size(); ++i)
          out.push_back(line_through(vertices_[i], vertices_[(i + 1) % vertices_.size()]));
        break;
    }
    return out;
  }

  bool contains(const Point2& p) const {
    switch (kind_) {
      case CellKind::point: return p == vertices_[0];
      case CellKind::segment: {
        const Point2& a = vertices_[0];
        const Point2& b = vertices_[1];
        if (orient(a, b, p).sign() != 0) return false;
        return std::min(a, b) <= p && p <= std::max(a, b);
      }
      case CellKind::polygon:
        for (std::size_t i = 0; i < vertices_.size(); ++i)
          if (orient(vertices_[i], vertices_[(i + 1) % vertices_.size()], p).sign() < 0) return false;
        return true;
    }
    return false;
  }

  /// A point in the relative interior (vertex average).
  Point2 interior_point() const {
    Point2 s{0, 0};
    for (const auto& v : vertices_) s = s + v;
    return Rational(1, static_cast<long>(vertices_.size())) * s;
  }

  Rational area() const {
    if (kind_ != CellKind::polygon) return 0;
    Rational twice = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point2& p = vertices_[i];
      const Point2& q = vertices_[(i + 1) % vertices_.size()];
      twice += p.x * q.y - q.x * p.y;
    }
    return twice / Rational(2);
  }

  BBox bbox() const {
    BBox b{vertices_[0].x, vertices_[0].x, vertices_[0].y, vertices_[0].y};
    for (const auto& v : vertices_) {
      if (v.x < b.xmin) b.xmin = v.x;
      if (b.xmax < v.x) b.xmax = v.x;
      if (v.y < b.ymin) b.ymin = v.y;
      if (b.ymax < v.y) b.ymax = v.y;
    }
    return b;
  }

  friend bool operator==(const ConvexCell&, const ConvexCell&) = default;
  friend std::strong_ordering operator<=>(const ConvexCell& l, const ConvexCell& r) {
    if (l.kind_ != r.kind_) return static_cast<int>(l.kind_) <=> static_cast<int>(r.kind_);
    return std::lexicographical_compare_three_way(l.vertices_.begin(), l.vertices_.end(), r.vertices_.begin(),
                                                  r.vertices_.end());
  }

  std::string str() const {
    std::string s = std::string(to_string(kind_)) + "{";
    for (std::size_t i = 0; i < vertices_.size(); ++i) s += (i ? ", " : "") + vertices_[i].str();
    return s + "}";
  }

 private:
  ConvexCell(CellKind k, std::vector<Point2> v) : kind_(k), vertices_(std::move(v)) {}

  CellKind kind_ = CellKind::point;
  std::vector<Point2> vertices_;
};

/// cell ∩ {halfplane >= 0}, or nothing when empty.
inline std::optional<ConvexCell> cell_clip(const ConvexCell& cell, const AffineForm2& halfplane) {
  const auto& v = cell.vertices();
  std::vector<Rational> val;
  val.reserve(v.size());
  bool all_in = true;
  bool all_out = true;
  for (const auto& p : v) {
    val.push_back(halfplane(p));
    if (val.back().sign() < 0) all_in = false;
    if (val.back().sign() >= 0) all_out = false;
  }
  if (all_in) return cell;
  if (all_out) return std::nullopt;
  std::vector<Point2> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    if (val[i].sign() >= 0) out.push_back(v[i]);
    if ((val[i].sign() < 0 && val[j].sign() > 0) || (val[i].sign() > 0 && val[j].sign() < 0)) {
      out.push_back(lerp(v[i], v[j], val[i] / (val[i] - val[j])));
    }
  }
  if (out.empty()) return std::nullopt;
  return ConvexCell::hull(std::move(out));
}

inline std::optional<ConvexCell> cell_clip_all(ConvexCell cell, std::span<const AffineForm2> halfplanes) {
  for (const auto& h : halfplanes) {
    auto c = cell_clip(cell, h);
    if (!c) return std::nullopt;
    cell = std::move(*c);
  }
  return cell;
}

inline std::optional<ConvexCell> cell_intersect(const ConvexCell& a, const ConvexCell& b) {
  if (!a.bbox().overlaps(b.bbox())) return std::nullopt;
  auto cons = b.constraints();
  return cell_clip_all(a, cons);
}

/// Restriction to the line form = 0.
inline std::optional<ConvexCell> cell_on_line(const ConvexCell& cell, const AffineForm2& form) {
  auto c = cell_clip(cell, form);
  if (!c) return std::nullopt;
  return cell_clip(*c, -form);
}

/// Exact image of a cell under p -> (fx(p), fy(p)).
inline ConvexCell affine_image(const ConvexCell& cell, const AffineForm2& fx, const AffineForm2& fy) {
  std::vector<Point2> pts;
  pts.reserve(cell.vertices().size());
  for (const auto& v : cell.vertices()) pts.push_back({fx(v), fy(v)});
  return ConvexCell::hull(std::move(pts));
}

namespace detail {

/// Closed parameter interval of the segment p + t (q - p) covered by a cell.
inline std::optional<std::pair<Rational, Rational>> segment_cover(const Point2& p, const Point2& q,
                                                                  const ConvexCell& cell) {
  Rational lo = 0;
  Rational hi = 1;
  for (const auto& h : cell.constraints()) {
    // h(p + t d) = h(p) + t * slope >= 0
    Rational at_p = h(p);
    Rational slope = h(q) - at_p;
    if (slope.sign() == 0) {
      if (at_p.sign() < 0) return std::nullopt;
      continue;
    }
    Rational t = -at_p / slope;
    if (slope.sign() > 0) {
      if (lo < t) lo = t;
    } else {
      if (t < hi) hi = t;
    }
    if (hi < lo) return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

/// Gaps of [0,1] not covered by a union of closed intervals; returns a witness parameter.
inline std::optional<Rational> first_gap(std::vector<std::pair<Rational, Rational>> iv) {
  std::sort(iv.begin(), iv.end());
  Rational reach = 0;
  bool started = false;
  for (const auto& [lo, hi] : iv) {
    if (!started) {
      if (lo.sign() > 0) return Rational(0);
      started = true;
      reach = hi;
      continue;
    }
    if (reach < lo) return (reach + lo) / Rational(2);
    if (reach < hi) reach = hi;
  }
  if (!started) return Rational(0);
  if (reach < Rational(1)) return Rational(1);
  return std::nullopt;
}

/// Convex pieces covering cell minus the interior of a polygon (degenerate pieces dropped).
inline std::vector<ConvexCell> subtract_polygon(const ConvexCell& cell, const ConvexCell& poly) {
  auto common = cell_intersect(cell, poly);
  if (!common || !common->is_polygon()) return {cell};
  if (common->area() == cell.area()) return {};
  std::vector<ConvexCell> pieces;
  std::optional<ConvexCell> rest = cell;
  for (const auto& h : poly.constraints()) {
    if (!rest) break;
    if (auto out = cell_clip(*rest, -h); out && out->is_polygon()) pieces.push_back(std::move(*out));
    rest = cell_clip(*rest, h);
    if (rest && !rest->is_polygon()) rest.reset();
  }
  return pieces;
}

inline bool covered_by_any(const Point2& p, std::span<const ConvexCell> cells) {
  return std::any_of(cells.begin(), cells.end(), [&](const ConvexCell& c) { return c.contains(p); });
}

/// Candidate points of a polygon used as uncovered witnesses, in preference order.
inline std::vector<Point2> witness_candidates(const ConvexCell& poly) {
  std::vector<Point2> out;
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(Rational(1, 2) * (v[i] + v[(i + 1) % n]));
  out.push_back(poly.interior_point());
  for (long w = 2; w < 2 + 3 * static_cast<long>(n); ++w) {
    Point2 s{0, 0};
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long wi = 1 + static_cast<long>((w * (i + 1)) % (n + 2));
      s = s + Rational(wi) * v[i];
      total += wi;
    }
    out.push_back(Rational(1, total) * s);
  }
  return out;
}

inline std::optional<Point2> uncovered_polygon_point(const ConvexCell& piece, std::span<const ConvexCell> polys,
                                                     std::size_t from, std::span<const ConvexCell> all_outer) {
  if (from == polys.size()) {
    for (const auto& c : witness_candidates(piece))
      if (!covered_by_any(c, all_outer)) return c;
    // Lower-dimensional cells can only block finitely many lines; fall back to a
    // denser interior sampling of the piece.
    const auto& v = piece.vertices();
    for (long k = 3; k < 64; ++k) {
      for (long i = 1; i < k; ++i) {
        Point2 a = lerp(v[0], v[1], Rational(i, k));
        Point2 c = lerp(a, v[2], Rational(1, k + 1));
        if (!covered_by_any(c, all_outer)) return c;
      }
    }
    throw std::logic_error("could not isolate an uncovered witness point");
  }
  for (const auto& part : subtract_polygon(piece, polys[from])) {
    if (auto w = uncovered_polygon_point(part, polys, from + 1, all_outer)) return w;
  }
  return std::nullopt;
}

}  // namespace detail

/// Point not covered by the union of `outer`, if any point of `inner` is uncovered.
inline std::optional<Point2> uncovered_point(const ConvexCell& inner, std::span<const ConvexCell> outer) {
  switch (inner.kind()) {
    case CellKind::point:
      if (detail::covered_by_any(inner.vertices()[0], outer)) return std::nullopt;
      return inner.vertices()[0];
    case CellKind::segment: {
      const Point2& p = inner.vertices()[0];
      const Point2& q = inner.vertices()[1];
      std::vector<std::pair<Rational, Rational>> iv;
      BBox box = inner.bbox();
      for (const auto& c : outer) {
        if (!box.overlaps(c.bbox())) continue;
        if (auto r = detail::segment_cover(p, q, c)) iv.push_back(std::move(*r));
      }
      if (auto t = detail::first_gap(std::move(iv))) return lerp(p, q, *t);
      return std::nullopt;
    }
    case CellKind::polygon: {
      std::vector<ConvexCell> polys;
      BBox box = inner.bbox();
      for (const auto& c : outer)
        if (c.is_polygon() && box.overlaps(c.bbox())) polys.push_back(c);
      return detail::uncovered_polygon_point(inner, polys, 0, outer);
    }
  }
  return std::nullopt;
}

/// Finite union of closed convex cells kept in canonical form: collinear
/// overlapping segments merged, polygons merged whenever their union is convex,
/// lower-dimensional cells covered by other cells dropped, cells sorted.
class CellComplex {
 public:
  CellComplex() = default;
  explicit CellComplex(std::vector<ConvexCell> cells) : cells_(std::move(cells)) { canonicalize(); }
  static CellComplex single(ConvexCell c) { return CellComplex(std::vector<ConvexCell>{std::move(c)}); }
  static CellComplex unit_square() { return single(ConvexCell::unit_square()); }

  const std::vector<ConvexCell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }

  bool contains(const Point2& p) const { return detail::covered_by_any(p, cells_); }

  friend bool operator==(const CellComplex&, const CellComplex&) = default;

 private:
  void canonicalize();

  std::vector<ConvexCell> cells_;
};

namespace detail {

inline AffineForm2 normalized_line(const ConvexCell& seg) {
  AffineForm2 l = line_through(seg.vertices()[0], seg.vertices()[1]);
  Rational lead = l.a.sign() != 0 ? l.a : l.b;
  return Rational(1) / lead * l;
}

inline std::vector<ConvexCell> merge_segments(std::vector<ConvexCell> segs) {
  std::sort(segs.begin(), segs.end(),
            [](const ConvexCell& l, const ConvexCell& r) {
              auto ll = normalized_line(l);
              auto lr = normalized_line(r);
              if (auto c = ll <=> lr; c != 0) return c < 0;
              return l < r;
            });
  std::vector<ConvexCell> out;
  std::size_t i = 0;
  while (i < segs.size()) {
    AffineForm2 line = normalized_line(segs[i]);
    Point2 lo = segs[i].vertices()[0];
    Point2 hi = segs[i].vertices()[1];
    std::size_t j = i + 1;
    for (; j < segs.size() && normalized_line(segs[j]) == line; ++j) {
      const Point2& a = segs[j].vertices()[0];
      const Point2& b = segs[j].vertices()[1];
      if (a <= hi) {
        if (hi < b) hi = b;
      } else {
        out.push_back(ConvexCell::segment(lo, hi));
        lo = a;
        hi = b;
      }
    }
    out.push_back(ConvexCell::segment(lo, hi));
    i = j;
  }
  return out;
}

inline std::vector<ConvexCell> merge_polygons(std::vector<ConvexCell> polys) {
  std::sort(polys.begin(), polys.end());
  polys.erase(std::unique(polys.begin(), polys.end()), polys.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < polys.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < polys.size(); ++j) {
        auto common = cell_intersect(polys[i], polys[j]);
        if (!common) continue;
        std::vector<Point2> pts = polys[i].vertices();
        pts.insert(pts.end(), polys[j].vertices().begin(), polys[j].vertices().end());
        ConvexCell h = ConvexCell::hull(std::move(pts));
        if (h.area() == polys[i].area() + polys[j].area() - common->area()) {
          polys[i] = std::move(h);
          polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          break;
        }
      }
    }
  }
  return polys;
}

}  // namespace detail

inline void CellComplex::canonicalize() {
  std::vector<ConvexCell> points, segs, polys;
  for (auto& c : cells_) {
    switch (c.kind()) {
      case CellKind::point: points.push_back(std::move(c)); break;
      case CellKind::segment: segs.push_back(std::move(c)); break;
      case CellKind::polygon: polys.push_back(std::move(c)); break;
    }
  }
  polys = detail::merge_polygons(std::move(polys));
  segs = detail::merge_segments(std::move(segs));
  std::vector<ConvexCell> kept_segs;
  for (auto& s : segs)
    if (uncovered_point(s, polys)) kept_segs.push_back(std::move(s));
  std::vector<ConvexCell> higher = polys;
  higher.insert(higher.end(), kept_segs.begin(), kept_segs.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  cells_.clear();
  for (auto& p : points)
    if (!detail::covered_by_any(p.vertices()[0], higher)) cells_.push_back(std::move(p));
  for (auto& s : kept_segs) cells_.push_back(std::move(s));
  for (auto& p : polys) cells_.push_back(std::move(p));
  std::sort(cells_.begin(), cells_.end());
}

inline CellComplex complex_union(const CellComplex& a, const CellComplex& b) {
  std::vector<ConvexCell> all = a.cells();
  all.insert(all.end(), b.cells().begin(), b.cells().end());
  return CellComplex(std::move(all));
}

struct Containment {
  bool contained = true;
  std::optional<Point2> witness;  // a point of inner outside outer when not contained
};

inline Containment complex_contains(const CellComplex& outer, const CellComplex& inner) {
  for (const auto& c : inner.cells()) {
    if (auto w = uncovered_point(c, outer.cells())) return {false, std::move(w)};
  }
  return {};
}

inline bool same_point_set(const CellComplex& a, const CellComplex& b) {
  return complex_contains(a, b).contained && complex_contains(b, a).contained;
}

inline bool is_connected(const CellComplex& c) {
  const auto& cells = c.cells();
  if (cells.empty()) return true;
  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (find(i) != find(j) && cell_intersect(cells[i], cells[j])) parent[find(i)] = find(j);
  std::size_t root = find(0);
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (find(i) != root) return false;
  return true;
}

}  // namespace mvproj
