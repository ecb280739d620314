#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/rational.hpp"

namespace mvproj {

struct Piece2 {
  ConvexCell cell;
  AffineForm2 form;
  friend bool operator==(const Piece2&, const Piece2&) = default;
};

/// Piecewise-affine function on [0,1]² given as a triangulation with one
/// affine form per triangle.
class PwL2D {
 public:
  PwL2D() : PwL2D(constant(0)) {}

  /// Pieces taken verbatim; use validate() to check the McNaughton conditions.
  static PwL2D from_pieces(std::vector<Piece2> pieces) {
    if (pieces.empty()) throw std::invalid_argument("a 2-D function needs at least one piece");
    PwL2D f(0);
    f.pieces_ = std::move(pieces);
    return f;
  }
  static PwL2D constant(const Rational& v) { return with_form(AffineForm2::constant(v)); }
  static PwL2D projection(int index) {
    if (index == 1) return with_form(AffineForm2::x());
    if (index == 2) return with_form(AffineForm2::y());
    throw std::out_of_range("variable x" + std::to_string(index) + " exceeds arity 2");
  }
  /// A single affine form over the whole square.
  static PwL2D with_form(const AffineForm2& form) {
    PwL2D f(0);
    f.pieces_ = {{ConvexCell::hull({{0, 0}, {1, 0}, {1, 1}}), form}, {ConvexCell::hull({{0, 0}, {1, 1}, {0, 1}}), form}};
    return f;
  }

  const std::vector<Piece2>& pieces() const { return pieces_; }

  Rational operator()(const Point2& p) const {
    if (p.x < Rational(0) || Rational(1) < p.x || p.y < Rational(0) || Rational(1) < p.y)
      throw std::domain_error("point " + p.str() + " outside [0,1]^2");
    for (const auto& pc : pieces_)
      if (pc.cell.contains(p)) return pc.form(p);
    throw std::logic_error("point " + p.str() + " not covered by any triangle");
  }

  friend bool operator==(const PwL2D&, const PwL2D&) = default;

 private:
  explicit PwL2D(int) {}

  std::vector<Piece2> pieces_;
};

/// Convex face of a common refinement carrying one form per operand.
struct Face {
  ConvexCell cell;
  std::vector<AffineForm2> forms;
};

namespace detail {

inline std::vector<Face> overlay(const std::vector<const PwL2D*>& operands) {
  std::vector<Face> faces;
  for (const auto& pc : operands.at(0)->pieces()) faces.push_back({pc.cell, {pc.form}});
  for (std::size_t k = 1; k < operands.size(); ++k) {
    std::vector<std::pair<BBox, const Piece2*>> index;
    for (const auto& pc : operands[k]->pieces()) index.push_back({pc.cell.bbox(), &pc});
    std::sort(index.begin(), index.end(), [](const auto& l, const auto& r) { return l.first.xmin < r.first.xmin; });
    std::vector<Face> next;
    for (const auto& face : faces) {
      BBox fb = face.cell.bbox();
      for (const auto& [bb, pc] : index) {
        if (fb.xmax < bb.xmin) break;
        if (!fb.overlaps(bb)) continue;
        auto common = cell_clip_all(face.cell, pc->cell.constraints());
        if (!common || !common->is_polygon()) continue;
        Face f{std::move(*common), face.forms};
        f.forms.push_back(pc->form);
        next.push_back(std::move(f));
      }
    }
    faces = std::move(next);
  }
  return faces;
}

using KinkFn = std::function<std::vector<AffineForm2>(const std::vector<AffineForm2>&)>;

/// Splits every face along the zero lines of its kink forms so that each form keeps one sign per face.
inline std::vector<Face> split_faces(std::vector<Face> faces, const KinkFn& kinks) {
  std::vector<Face> out;
  for (auto& face : faces) {
    std::vector<ConvexCell> parts{face.cell};
    for (const auto& h : kinks(face.forms)) {
      if (h.is_constant()) continue;
      std::vector<ConvexCell> next;
      for (const auto& part : parts) {
        bool pos = false, neg = false;
        for (const auto& v : part.vertices()) {
          int s = h(v).sign();
          pos = pos || s > 0;
          neg = neg || s < 0;
        }
        if (!(pos && neg)) {
          next.push_back(part);
          continue;
        }
        if (auto a = cell_clip(part, h); a && a->is_polygon()) next.push_back(std::move(*a));
        if (auto b = cell_clip(part, -h); b && b->is_polygon()) next.push_back(std::move(*b));
      }
      parts = std::move(next);
    }
    for (auto& part : parts) out.push_back({std::move(part), face.forms});
  }
  return out;
}

/// Groups coplanar faces, merges them while the union stays convex and
/// fan-triangulates each merged face from its lexicographically least vertex.
inline PwL2D assemble(std::vector<std::pair<ConvexCell, AffineForm2>> faces) {
  std::map<AffineForm2, std::vector<ConvexCell>> groups;
  for (auto& [cell, form] : faces) groups[form].push_back(std::move(cell));
  std::vector<Piece2> pieces;
  for (auto& [form, cells] : groups) {
    for (const auto& poly : merge_polygons(std::move(cells))) {
      const auto& v = poly.vertices();
      for (std::size_t i = 1; i + 1 < v.size(); ++i) pieces.push_back({ConvexCell::hull({v[0], v[i], v[i + 1]}), form});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece2& l, const Piece2& r) {
    if (auto c = l.cell <=> r.cell; c != 0) return c < 0;
    return l.form < r.form;
  });
  return PwL2D::from_pieces(std::move(pieces));
}

using FaceRule = std::function<AffineForm2(const std::vector<AffineForm2>&, const Point2&)>;

inline PwL2D combine2(const std::vector<const PwL2D*>& operands, const KinkFn& kinks, const FaceRule& rule) {
  auto faces = split_faces(overlay(operands), kinks);
  std::vector<std::pair<ConvexCell, AffineForm2>> out;
  out.reserve(faces.size());
  for (auto& f : faces) {
    Point2 p = f.cell.interior_point();
    out.push_back({std::move(f.cell), rule(f.forms, p)});
  }
  return assemble(std::move(out));
}

}  // namespace detail

/// Canonical re-triangulation of F (coplanar neighbours merged).
inline PwL2D canonical(const PwL2D& f) {
  return detail::combine2({&f}, [](const auto&) { return std::vector<AffineForm2>{}; },
                          [](const auto& fs, const Point2&) { return fs[0]; });
}

inline PwL2D mv_neg(const PwL2D& f) {
  std::vector<Piece2> pieces;
  for (const auto& pc : f.pieces()) pieces.push_back({pc.cell, AffineForm2::constant(1) - pc.form});
  return PwL2D::from_pieces(std::move(pieces));
}

inline PwL2D mv_oplus(const PwL2D& f, const PwL2D& g) {
  return detail::combine2(
      {&f, &g}, [](const auto& fs) { return std::vector<AffineForm2>{fs[0] + fs[1] - AffineForm2::constant(1)}; },
      [](const auto& fs, const Point2& p) {
        AffineForm2 s = fs[0] + fs[1];
        return Rational(1) <= s(p) ? AffineForm2::constant(1) : s;
      });
}

inline PwL2D mv_odot(const PwL2D& f, const PwL2D& g) {
  return detail::combine2(
      {&f, &g}, [](const auto& fs) { return std::vector<AffineForm2>{fs[0] + fs[1] - AffineForm2::constant(1)}; },
      [](const auto& fs, const Point2& p) {
        AffineForm2 s = fs[0] + fs[1] - AffineForm2::constant(1);
        return s(p).sign() <= 0 ? AffineForm2::constant(0) : s;
      });
}

inline PwL2D mv_min(const PwL2D& f, const PwL2D& g) {
  return detail::combine2(
      {&f, &g}, [](const auto& fs) { return std::vector<AffineForm2>{fs[0] - fs[1]}; },
      [](const auto& fs, const Point2& p) { return fs[0](p) <= fs[1](p) ? fs[0] : fs[1]; });
}

inline PwL2D mv_max(const PwL2D& f, const PwL2D& g) {
  return detail::combine2(
      {&f, &g}, [](const auto& fs) { return std::vector<AffineForm2>{fs[0] - fs[1]}; },
      [](const auto& fs, const Point2& p) { return fs[1](p) <= fs[0](p) ? fs[0] : fs[1]; });
}

inline PwL2D chang_delta(const PwL2D& f, const PwL2D& g) {
  return detail::combine2(
      {&f, &g}, [](const auto& fs) { return std::vector<AffineForm2>{fs[0] - fs[1]}; },
      [](const auto& fs, const Point2& p) {
        AffineForm2 d = fs[0] - fs[1];
        return d(p).sign() >= 0 ? d : -d;
      });
}

inline PwL2D scalar_n(const PwL2D& f, long n) {
  if (n < 1) throw std::invalid_argument("scalar multiplier must be at least 1");
  Rational rn(n);
  return detail::combine2(
      {&f}, [&](const auto& fs) { return std::vector<AffineForm2>{rn * fs[0] - AffineForm2::constant(1)}; },
      [&](const auto& fs, const Point2& p) {
        AffineForm2 s = rn * fs[0];
        return Rational(1) <= s(p) ? AffineForm2::constant(1) : s;
      });
}

/// outer ∘ inner for a one-variable outer function.
inline PwL2D apply1_to_2(const PwL1D& outer, const PwL2D& inner) {
  const auto& ns = outer.nodes();
  auto faces = detail::split_faces(detail::overlay({&inner}), [&](const auto& fs) {
    std::vector<AffineForm2> ks;
    for (std::size_t i = 1; i + 1 < ns.size(); ++i) ks.push_back(fs[0] - AffineForm2::constant(ns[i].x));
    return ks;
  });
  std::vector<std::pair<ConvexCell, AffineForm2>> out;
  for (auto& f : faces) {
    Rational v = f.forms[0](f.cell.interior_point());
    auto it = std::upper_bound(ns.begin(), ns.end(), v, [](const Rational& x, const Node1& n) { return x < n.x; });
    std::size_t i = it == ns.begin() ? 0 : static_cast<std::size_t>(it - ns.begin()) - 1;
    if (i + 1 >= ns.size()) i = ns.size() - 2;
    Rational s = outer.slope(i);
    Rational t = ns[i].y - s * ns[i].x;
    out.push_back({std::move(f.cell), s * f.forms[0] + AffineForm2::constant(t)});
  }
  return detail::assemble(std::move(out));
}

/// f(x) seen as a function of (x, y).
inline PwL2D lift_x(const PwL1D& f) { return apply1_to_2(f, PwL2D::projection(1)); }
/// f(y) seen as a function of (x, y).
inline PwL2D lift_y(const PwL1D& f) { return apply1_to_2(f, PwL2D::projection(2)); }

/// Pointwise equality of two functions, decided on their common refinement.
inline bool equal_functions(const PwL2D& f, const PwL2D& g) {
  for (const auto& face : detail::overlay({&f, &g}))
    if (face.forms[0] != face.forms[1]) return false;
  return true;
}

inline Rational min_value(const PwL2D& f) {
  Rational m = f.pieces().front().form(f.pieces().front().cell.vertices()[0]);
  for (const auto& pc : f.pieces())
    for (const auto& v : pc.cell.vertices()) m = min(m, pc.form(v));
  return m;
}

inline Rational max_value(const PwL2D& f) {
  Rational m = f.pieces().front().form(f.pieces().front().cell.vertices()[0]);
  for (const auto& pc : f.pieces())
    for (const auto& v : pc.cell.vertices()) m = max(m, pc.form(v));
  return m;
}

inline CellComplex level_set(const PwL2D& f, const Rational& v) {
  std::vector<ConvexCell> cells;
  for (const auto& pc : f.pieces()) {
    AffineForm2 h = pc.form - AffineForm2::constant(v);
    if (h.is_zero()) {
      cells.push_back(pc.cell);
    } else if (!h.is_constant()) {
      if (auto c = cell_on_line(pc.cell, h)) cells.push_back(std::move(*c));
    }
  }
  return CellComplex(std::move(cells));
}

inline CellComplex zero_set(const PwL2D& f) { return level_set(f, 0); }

inline Rational lipschitz(const PwL2D& f) {
  Rational l = 0;
  for (const auto& pc : f.pieces()) l = max(l, abs(pc.form.a) + abs(pc.form.b));
  return l;
}

inline std::vector<std::string> validate(const PwL2D& f) {
  std::vector<std::string> out;
  const auto& ps = f.pieces();
  ConvexCell square = ConvexCell::unit_square();
  Rational area = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& pc = ps[i];
    std::string where = "triangle " + std::to_string(i) + " " + pc.cell.str();
    if (!pc.cell.is_polygon()) {
      out.push_back(where + " is degenerate");
      continue;
    }
    if (pc.cell.vertices().size() != 3) out.push_back(where + " is not a triangle");
    if (!pc.form.is_integral()) out.push_back(where + ": form " + pc.form.str() + " has non-integer coefficients");
    for (const auto& v : pc.cell.vertices()) {
      if (!square.contains(v)) out.push_back(where + ": vertex " + v.str() + " outside [0,1]^2");
      Rational val = pc.form(v);
      if (val < Rational(0) || Rational(1) < val)
        out.push_back(where + ": value " + val.str() + " at " + v.str() + " outside [0,1]");
    }
    area += pc.cell.area();
  }
  if (area != Rational(1)) out.push_back("triangles cover total area " + area.str() + " instead of 1");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps[i].cell.is_polygon()) continue;
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (!ps[j].cell.is_polygon()) continue;
      auto common = cell_intersect(ps[i].cell, ps[j].cell);
      if (!common) continue;
      std::string pair = "triangles " + std::to_string(i) + " and " + std::to_string(j);
      if (common->is_polygon()) {
        out.push_back(pair + " overlap in " + common->str());
        continue;
      }
      for (const auto& v : common->vertices()) {
        if (ps[i].form(v) != ps[j].form(v)) {
          out.push_back(pair + " disagree on shared " + std::string(to_string(common->kind())) + " " + common->str() +
                        " at " + v.str());
          break;
        }
      }
    }
  }
  return out;
}

/// Values D·F(i/D, j/D) for 0 ≤ i, j ≤ D, stored row-major by j; requires integer forms.
inline std::vector<std::int64_t> sample_grid(const PwL2D& f, long D) {
  const std::size_t n = static_cast<std::size_t>(D) + 1;
  std::vector<std::int64_t> out(n * n, INT64_MIN);
  Rational rd(D);
  for (const auto& pc : f.pieces()) {
    if (!pc.form.is_integral()) throw std::invalid_argument("grid sampling needs integer forms");
    const std::int64_t a = pc.form.a.num().get_si(), b = pc.form.b.num().get_si(), c = pc.form.c.num().get_si();
    const auto& v = pc.cell.vertices();
    BBox bb = pc.cell.bbox();
    long jlo = (bb.ymin * rd).ceil().get_si();
    long jhi = (bb.ymax * rd).floor().get_si();
    for (long j = jlo; j <= jhi; ++j) {
      Rational y(j, D);
      std::optional<Rational> lo, hi;
      for (std::size_t e = 0; e < v.size(); ++e) {
        const Point2& p = v[e];
        const Point2& q = v[(e + 1) % v.size()];
        std::vector<Rational> xs;
        if (p.y == q.y) {
          if (p.y == y) xs = {p.x, q.x};
        } else if (min(p.y, q.y) <= y && y <= max(p.y, q.y)) {
          xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
        }
        for (auto& x : xs) {
          if (!lo || x < *lo) lo = x;
          if (!hi || *hi < x) hi = x;
        }
      }
      if (!lo) continue;
      long ilo = (*lo * rd).ceil().get_si();
      long ihi = (*hi * rd).floor().get_si();
      for (long i = ilo; i <= ihi; ++i) out[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] = a * i + b * j + c * D;
    }
  }
  return out;
}

}  // namespace mvproj
