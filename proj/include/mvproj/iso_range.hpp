#pragma once

#include <stdexcept>
#include <vector>

#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"

namespace mvproj {

/// Nodes of the broken line traced by t -> (f(t), g(t)), in parameter order.
inline std::vector<Point2> extremals(const PwL1D& f, const PwL1D& g) {
  if (f(0).sign() != 0 || g(0).sign() != 0) throw std::invalid_argument("pair must vanish at 0");
  std::vector<Rational> xs = f.breakpoints();
  for (const auto& n : g.nodes()) xs.push_back(n.x);
  detail::sort_unique(xs);
  std::vector<Point2> pts;
  for (const auto& x : xs) {
    Point2 p{f(x), g(x)};
    if (!pts.empty() && pts.back() == p) continue;
    if (pts.size() >= 2) {
      const Point2& a = pts[pts.size() - 2];
      const Point2& b = pts.back();
      Point2 d1 = b - a, d2 = p - b;
      bool collinear = orient(a, b, p).sign() == 0;
      bool forward = (d1.x * d2.x + d1.y * d2.y).sign() > 0;
      if (collinear && forward) pts.pop_back();
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

inline CellComplex pair_range(const PwL1D& f, const PwL1D& g) {
  auto pts = extremals(f, g);
  std::vector<ConvexCell> cells;
  if (pts.size() == 1) cells.push_back(ConvexCell::point(pts[0]));
  for (std::size_t i = 1; i < pts.size(); ++i) cells.push_back(ConvexCell::segment(pts[i - 1], pts[i]));
  return CellComplex(std::move(cells));
}

/// Equal ranges imply the pairs generate isomorphic algebras; unequal ranges decide nothing.
inline bool iso_by_range(const PwL1D& f, const PwL1D& g, const PwL1D& f1, const PwL1D& g1) {
  return same_point_set(pair_range(f, g), pair_range(f1, g1));
}

}  // namespace mvproj
