#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvproj/chain.hpp"
#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"
#include "mvproj/term.hpp"

namespace mvproj {

/// The images d1 = φ(x), d2 = φ(y) of the free generators under a substitution.
struct SubstitutionPair {
  PwL2D d1;
  PwL2D d2;
};

inline std::vector<std::string> validate(const SubstitutionPair& pair) {
  std::vector<std::string> out;
  for (const auto& v : validate(pair.d1)) out.push_back("d1: " + v);
  for (const auto& v : validate(pair.d2)) out.push_back("d2: " + v);
  if (out.empty()) {
    if (pair.d1({0, 0}).sign() != 0) out.push_back("d1(0,0) must be 0");
    if (pair.d2({0, 0}).sign() != 0) out.push_back("d2(0,0) must be 0");
  }
  return out;
}

/// K = {p : d1(p) = x, d2(p) = y}.
inline CellComplex equalizer(const SubstitutionPair& pair) {
  std::vector<ConvexCell> cells;
  for (const auto& face : detail::overlay({&pair.d1, &pair.d2})) {
    std::optional<ConvexCell> cell = face.cell;
    for (const auto& h : {face.forms[0] - AffineForm2::x(), face.forms[1] - AffineForm2::y()}) {
      if (!cell) break;
      if (h.is_zero()) continue;
      if (h.is_constant()) {
        cell.reset();
        break;
      }
      cell = cell_on_line(*cell, h);
    }
    if (cell) cells.push_back(std::move(*cell));
  }
  return CellComplex(std::move(cells));
}

/// Image of the domain under p -> (d1(p), d2(p)).
inline CellComplex image_over(const SubstitutionPair& pair, const CellComplex& domain) {
  std::vector<ConvexCell> cells;
  for (const auto& face : detail::overlay({&pair.d1, &pair.d2})) {
    for (const auto& dc : domain.cells()) {
      if (auto c = cell_intersect(face.cell, dc)) cells.push_back(affine_image(*c, face.forms[0], face.forms[1]));
    }
  }
  return CellComplex(std::move(cells));
}

/// Lexicographically least u in the square with (d1(u), d2(u)) = q.
inline std::optional<Point2> preimage(const SubstitutionPair& pair, const Point2& q) {
  std::optional<Point2> best;
  for (const auto& face : detail::overlay({&pair.d1, &pair.d2})) {
    std::optional<ConvexCell> cell = face.cell;
    for (const auto& h : {face.forms[0] - AffineForm2::constant(q.x), face.forms[1] - AffineForm2::constant(q.y)}) {
      if (!cell) break;
      if (h.is_zero()) continue;
      if (h.is_constant()) {
        cell.reset();
        break;
      }
      cell = cell_on_line(*cell, h);
    }
    if (cell && (!best || cell->vertices()[0] < *best)) best = cell->vertices()[0];
  }
  return best;
}

struct ProjectivityVerdict {
  bool projective = false;
  CellComplex equalizer;
  CellComplex image_square;
  CellComplex image_equalizer;
  std::optional<Point2> witness;        // u whose image has no preimage in K
  std::optional<Point2> witness_image;  // d(u)
  bool origin_in_equalizer = false;
  bool equalizer_connected = false;
  std::optional<std::string> internal_error;
};

/// The pair generates a projective algebra iff every value d(u) is already taken on K.
inline ProjectivityVerdict check_projective(const SubstitutionPair& pair) {
  ProjectivityVerdict v;
  v.equalizer = equalizer(pair);
  v.image_square = image_over(pair, CellComplex::unit_square());
  v.image_equalizer = image_over(pair, v.equalizer);
  v.origin_in_equalizer = v.equalizer.contains({0, 0});
  v.equalizer_connected = is_connected(v.equalizer);
  auto c = complex_contains(v.image_equalizer, v.image_square);
  v.projective = c.contained;
  if (!c.contained) {
    v.witness_image = c.witness;
    v.witness = preimage(pair, *c.witness);
    if (!v.witness) v.internal_error = "uncovered image point " + c.witness->str() + " has no preimage";
  } else if (!v.origin_in_equalizer || !v.equalizer_connected) {
    v.internal_error = "projective verdict but the equalizer is " +
                       std::string(!v.origin_in_equalizer ? "missing the origin" : "disconnected");
  }
  return v;
}

/// Points of K where d differs from the identity (vertices and interior points of every cell).
inline std::vector<Point2> fixed_point_violations(const SubstitutionPair& pair, const CellComplex& k) {
  std::vector<Point2> bad;
  for (const auto& cell : k.cells()) {
    std::vector<Point2> probes = cell.vertices();
    probes.push_back(cell.interior_point());
    for (const auto& p : probes)
      if (pair.d1(p) != p.x || pair.d2(p) != p.y) bad.push_back(p);
  }
  return bad;
}

struct GridOracleResult {
  long denominator = 0;
  std::size_t checked = 0;
  std::vector<Point2> counterexamples;  // grid points u with d(u) outside K
};

/// Refutation search on the grid (i/D, j/D): u is a counterexample when d(u) is not in K.
inline GridOracleResult grid_oracle(const SubstitutionPair& pair, long D, std::size_t keep = 16) {
  if (D < 1) throw std::invalid_argument("grid denominator must be positive");
  auto v1 = sample_grid(pair.d1, D);
  auto v2 = sample_grid(pair.d2, D);
  const std::size_t n = static_cast<std::size_t>(D) + 1;
  GridOracleResult r;
  r.denominator = D;
  std::size_t found = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t a = v1[j * n + i], b = v2[j * n + i];
      if (a == INT64_MIN || b == INT64_MIN) throw std::invalid_argument("grid point not covered by the triangulation");
      if (a < 0 || b < 0 || a > D || b > D) throw std::invalid_argument("substitution value outside [0,1]");
      std::size_t q = static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a);
      ++r.checked;
      if (v1[q] != a || v2[q] != b) {
        if (found++ < keep) r.counterexamples.push_back({Rational(static_cast<long>(i), D), Rational(static_cast<long>(j), D)});
      }
    }
  }
  return r;
}

struct Projective1D {
  bool projective = false;
  bool substitution_condition = false;  // image of f over [0,1] inside image of f over its fixed points
  Rational max;
  PwL1D representative;  // generator of an isomorphic algebra tested with the substitution condition
};

/// Fixed points of f and whether f([0,1]) ⊆ f(Fix f).
inline bool substitution_condition_1d(const PwL1D& f) {
  CellComplex fix = zero_set(chang_delta(f, PwL1D::identity()));
  Rational top = max_value(f), bottom = min_value(f);
  CellComplex image_all = CellComplex::single(ConvexCell::segment({bottom, 0}, {top, 0}));
  if (top == bottom) image_all = CellComplex::single(ConvexCell::point({top, 0}));
  return complex_contains(fix, image_all).contained;
}

/// Tests the generator r(x) = max(0, min(x, m - (n-1)x)), max f = m/n, whose range [0, m/n]
/// equals the range of f.
inline Projective1D check_projective_1d(const PwL1D& f) {
  if (f(0).sign() != 0) throw std::invalid_argument("generator must vanish at 0");
  Projective1D out;
  out.max = max_value(f);
  Rational m = Rational(out.max.num());
  Rational n = Rational(out.max.den());
  PwL1D r;
  if (out.max == Rational(1)) {
    r = PwL1D::identity();
  } else if (out.max.sign() == 0) {
    r = PwL1D::constant(0);
  } else {
    Rational zero_at = m / (n - Rational(1));
    std::vector<Node1> nodes{{0, 0}, {out.max, out.max}};
    if (zero_at < Rational(1)) {
      nodes.push_back({zero_at, 0});
      nodes.push_back({1, 0});
    } else {
      nodes.push_back({1, m - (n - Rational(1))});
    }
    r = PwL1D::from_nodes(std::move(nodes));
  }
  out.representative = r;
  out.substitution_condition = substitution_condition_1d(f);
  bool same_range = min_value(r) == min_value(f) && max_value(r) == max_value(f);
  out.projective = validate(r).empty() && same_range && substitution_condition_1d(r);
  return out;
}

struct BridgePoint {
  Point2 q;
  bool in_equalizer = false;
  bool non_archimedean = false;
  bool in_image = false;
};

struct BridgeReport {
  long prime_bound = 0;
  std::vector<BridgePoint> points;
  std::vector<BridgePoint> violations;  // in_equalizer != non_archimedean
  bool holds() const { return violations.empty(); }
};

/// For rational q = (m1/p1, m2/p2) with primes p_i ≤ P: q ∈ K iff η_{m1,p1}(d1) ∨ η_{m2,p2}(d2) is not archimedean.
inline BridgeReport eta_bridge_check(const SubstitutionPair& pair, long P) {
  BridgeReport rep;
  rep.prime_bound = P;
  std::vector<std::pair<long, long>> targets;
  for (long p = 2; p <= P; ++p)
    if (is_prime(p))
      for (long m = 1; m < p; ++m) targets.push_back({m, p});
  std::map<std::pair<long, long>, PwL2D> eta1, eta2;
  for (const auto& t : targets) {
    PwL1D eta = compile1(eta_term(t.first, t.second));
    eta1.emplace(t, apply1_to_2(eta, pair.d1));
    eta2.emplace(t, apply1_to_2(eta, pair.d2));
  }
  CellComplex k = equalizer(pair);
  CellComplex image = image_over(pair, CellComplex::unit_square());
  for (const auto& t1 : targets) {
    for (const auto& t2 : targets) {
      BridgePoint bp;
      bp.q = {Rational(t1.first, t1.second), Rational(t2.first, t2.second)};
      bp.in_equalizer = k.contains(bp.q);
      bp.in_image = image.contains(bp.q);
      bp.non_archimedean = !is_archimedean(mv_max(eta1.at(t1), eta2.at(t2)));
      rep.points.push_back(bp);
      if (bp.in_equalizer != bp.non_archimedean) rep.violations.push_back(bp);
    }
  }
  return rep;
}

}  // namespace mvproj
