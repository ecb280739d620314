#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvproj/geometry.hpp"
#include "mvproj/rational.hpp"

namespace mvproj {

struct Node1 {
  Rational x;
  Rational y;
  friend bool operator==(const Node1&, const Node1&) = default;
};

/// Continuous piecewise-linear function on [0,1] given by its nodes.
/// Collinear interior nodes are removed on construction, so two functions are
/// equal exactly when their node lists are equal.
class PwL1D {
 public:
  PwL1D() : PwL1D(identity()) {}

  static PwL1D from_nodes(std::vector<Node1> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("a 1-D function needs at least two nodes");
    if (nodes.front().x != Rational(0) || nodes.back().x != Rational(1))
      throw std::invalid_argument("nodes must start at x = 0 and end at x = 1");
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (!(nodes[i - 1].x < nodes[i].x))
        throw std::invalid_argument("node abscissae must be strictly increasing (at node " + std::to_string(i) + ")");
    PwL1D f;
    f.nodes_ = std::move(nodes);
    f.canonicalize();
    return f;
  }
  static PwL1D constant(const Rational& v) {
    PwL1D f(0);
    f.nodes_ = {{0, v}, {1, v}};
    return f;
  }
  static PwL1D identity() {
    PwL1D f(0);
    f.nodes_ = {{0, 0}, {1, 1}};
    return f;
  }
  static PwL1D projection(int index) {
    if (index != 1) throw std::out_of_range("variable x" + std::to_string(index) + " exceeds arity 1");
    return identity();
  }

  const std::vector<Node1>& nodes() const { return nodes_; }
  std::vector<Rational> breakpoints() const {
    std::vector<Rational> xs;
    for (const auto& n : nodes_) xs.push_back(n.x);
    return xs;
  }

  Rational operator()(const Rational& x) const {
    if (x < Rational(0) || Rational(1) < x) throw std::domain_error("argument " + x.str() + " outside [0,1]");
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x, [](const Node1& n, const Rational& v) { return n.x < v; });
    if (it->x == x) return it->y;
    const Node1& r = *it;
    const Node1& l = *(it - 1);
    return l.y + (x - l.x) * (r.y - l.y) / (r.x - l.x);
  }

  Rational slope(std::size_t piece) const {
    const Node1& l = nodes_[piece];
    const Node1& r = nodes_[piece + 1];
    return (r.y - l.y) / (r.x - l.x);
  }
  std::size_t piece_count() const { return nodes_.size() - 1; }

  friend bool operator==(const PwL1D&, const PwL1D&) = default;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      s += (i ? " " : "") + std::string("(") + nodes_[i].x.str() + ", " + nodes_[i].y.str() + ")";
    return s;
  }

 private:
  explicit PwL1D(int) {}

  void canonicalize() {
    std::vector<Node1> out;
    for (auto& n : nodes_) {
      while (out.size() >= 2) {
        const Node1& a = out[out.size() - 2];
        const Node1& b = out.back();
        if ((b.y - a.y) * (n.x - b.x) == (n.y - b.y) * (b.x - a.x))
          out.pop_back();
        else
          break;
      }
      out.push_back(std::move(n));
    }
    nodes_ = std::move(out);
  }

  std::vector<Node1> nodes_;
};

namespace detail {

/// Zero of the linear interpolation h0 -> h1 over (x0, x1) when the sign strictly changes.
inline void push_crossing(std::vector<Rational>& xs, const Rational& x0, const Rational& x1, const Rational& h0,
                          const Rational& h1) {
  if ((h0.sign() < 0 && h1.sign() > 0) || (h0.sign() > 0 && h1.sign() < 0))
    xs.push_back(x0 + (x1 - x0) * h0 / (h0 - h1));
}

inline void sort_unique(std::vector<Rational>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

/// Kink predicate: k(f value, g value) is affine in both; its sign change marks a new breakpoint.
using Kink = std::function<Rational(const Rational&, const Rational&)>;
using Pointwise = std::function<Rational(const Rational&, const Rational&)>;

inline PwL1D combine1(const PwL1D& f, const PwL1D& g, const Pointwise& op, const std::vector<Kink>& kinks) {
  std::vector<Rational> xs = f.breakpoints();
  for (const auto& n : g.nodes()) xs.push_back(n.x);
  sort_unique(xs);
  std::vector<Rational> all = xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Rational f0 = f(xs[i]), f1 = f(xs[i + 1]), g0 = g(xs[i]), g1 = g(xs[i + 1]);
    for (const auto& k : kinks) push_crossing(all, xs[i], xs[i + 1], k(f0, g0), k(f1, g1));
  }
  sort_unique(all);
  std::vector<Node1> nodes;
  nodes.reserve(all.size());
  for (const auto& x : all) nodes.push_back({x, op(f(x), g(x))});
  return PwL1D::from_nodes(std::move(nodes));
}

inline Rational clamp01(const Rational& v) {
  if (v.sign() < 0) return 0;
  if (Rational(1) < v) return 1;
  return v;
}

}  // namespace detail

inline PwL1D mv_neg(const PwL1D& f) {
  std::vector<Node1> nodes;
  for (const auto& n : f.nodes()) nodes.push_back({n.x, Rational(1) - n.y});
  return PwL1D::from_nodes(std::move(nodes));
}

inline PwL1D mv_oplus(const PwL1D& f, const PwL1D& g) {
  return detail::combine1(
      f, g, [](const Rational& a, const Rational& b) { return detail::clamp01(a + b); },
      {[](const Rational& a, const Rational& b) { return a + b - Rational(1); }});
}

inline PwL1D mv_odot(const PwL1D& f, const PwL1D& g) {
  return detail::combine1(
      f, g, [](const Rational& a, const Rational& b) { return detail::clamp01(a + b - Rational(1)); },
      {[](const Rational& a, const Rational& b) { return a + b - Rational(1); }});
}

inline PwL1D mv_min(const PwL1D& f, const PwL1D& g) {
  return detail::combine1(
      f, g, [](const Rational& a, const Rational& b) { return min(a, b); },
      {[](const Rational& a, const Rational& b) { return a - b; }});
}

inline PwL1D mv_max(const PwL1D& f, const PwL1D& g) {
  return detail::combine1(
      f, g, [](const Rational& a, const Rational& b) { return max(a, b); },
      {[](const Rational& a, const Rational& b) { return a - b; }});
}

inline PwL1D chang_delta(const PwL1D& f, const PwL1D& g) {
  return detail::combine1(
      f, g, [](const Rational& a, const Rational& b) { return abs(a - b); },
      {[](const Rational& a, const Rational& b) { return a - b; }});
}

/// n-fold truncated sum f ⊕ ... ⊕ f, i.e. min(1, n f).
inline PwL1D scalar_n(const PwL1D& f, long n) {
  if (n < 1) throw std::invalid_argument("scalar multiplier must be at least 1");
  Rational rn(n);
  return detail::combine1(
      f, f, [&](const Rational& a, const Rational&) { return detail::clamp01(rn * a); },
      {[&](const Rational& a, const Rational&) { return rn * a - Rational(1); }});
}

/// outer ∘ inner.
inline PwL1D compose1(const PwL1D& outer, const PwL1D& inner) {
  std::vector<Rational> xs = inner.breakpoints();
  std::vector<Rational> all = xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Rational v0 = inner(xs[i]), v1 = inner(xs[i + 1]);
    for (const auto& b : outer.nodes()) detail::push_crossing(all, xs[i], xs[i + 1], v0 - b.x, v1 - b.x);
  }
  detail::sort_unique(all);
  std::vector<Node1> nodes;
  for (const auto& x : all) nodes.push_back({x, outer(inner(x))});
  return PwL1D::from_nodes(std::move(nodes));
}

inline Rational min_value(const PwL1D& f) {
  Rational m = f.nodes().front().y;
  for (const auto& n : f.nodes()) m = min(m, n.y);
  return m;
}

inline Rational max_value(const PwL1D& f) {
  Rational m = f.nodes().front().y;
  for (const auto& n : f.nodes()) m = max(m, n.y);
  return m;
}

/// Minimum of f over [lo, hi].
inline Rational min_on(const PwL1D& f, const Rational& lo, const Rational& hi) {
  if (hi < lo) throw std::invalid_argument("empty interval");
  Rational m = min(f(lo), f(hi));
  for (const auto& n : f.nodes())
    if (lo <= n.x && n.x <= hi) m = min(m, n.y);
  return m;
}

/// {x : f(x) = v}, embedded on the line y = 0 of the plane.
inline CellComplex level_set(const PwL1D& f, const Rational& v) {
  std::vector<ConvexCell> cells;
  const auto& ns = f.nodes();
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    Rational h0 = ns[i].y - v, h1 = ns[i + 1].y - v;
    if (h0.sign() == 0 && h1.sign() == 0) {
      cells.push_back(ConvexCell::segment({ns[i].x, 0}, {ns[i + 1].x, 0}));
      continue;
    }
    if (h0.sign() == 0) cells.push_back(ConvexCell::point({ns[i].x, 0}));
    if (h1.sign() == 0) cells.push_back(ConvexCell::point({ns[i + 1].x, 0}));
    std::vector<Rational> root;
    detail::push_crossing(root, ns[i].x, ns[i + 1].x, h0, h1);
    for (auto& r : root) cells.push_back(ConvexCell::point({r, 0}));
  }
  return CellComplex(std::move(cells));
}

inline CellComplex zero_set(const PwL1D& f) { return level_set(f, 0); }

/// Largest absolute slope.
inline Rational lipschitz(const PwL1D& f) {
  Rational l = 0;
  for (std::size_t i = 0; i < f.piece_count(); ++i) l = max(l, abs(f.slope(i)));
  return l;
}

/// Violations of the McNaughton conditions; empty when f is a valid element of Free_1.
inline std::vector<std::string> validate(const PwL1D& f) {
  std::vector<std::string> out;
  const auto& ns = f.nodes();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i].y < Rational(0) || Rational(1) < ns[i].y)
      out.push_back("node " + std::to_string(i) + " (" + ns[i].x.str() + ", " + ns[i].y.str() + ") has value outside [0,1]");
  }
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    Rational s = f.slope(i);
    Rational c = ns[i].y - s * ns[i].x;
    std::string where = "piece " + std::to_string(i) + " on [" + ns[i].x.str() + ", " + ns[i + 1].x.str() + "]";
    if (!s.is_integer()) out.push_back(where + ": slope " + s.str() + " is not an integer");
    if (!c.is_integer()) out.push_back(where + ": intercept " + c.str() + " is not an integer");
  }
  return out;
}

}  // namespace mvproj
