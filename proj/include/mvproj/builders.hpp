#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvproj/geometry.hpp"
#include "mvproj/projectivity.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"

namespace mvproj {

/// A convex region of the square with the forms of d1 and d2 on it.
struct LabeledRegion {
  std::string label;
  ConvexCell cell;
  AffineForm2 d1;
  AffineForm2 d2;
};

struct BuiltPair {
  SubstitutionPair pair;
  CellComplex target_equalizer;
  std::vector<LabeledRegion> regions;
  ProjectivityVerdict verdict;
};

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Region {
  std::string label;
  ConvexCell cell;
  AffineForm2 form;
};

/// Function equal to each region's form on the region and to `rest` elsewhere.
inline PwL2D piecewise_function(const std::vector<Region>& regions, const AffineForm2& rest) {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (!regions[i].cell.is_polygon()) throw BuildError("region " + regions[i].label + " is degenerate");
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      auto common = cell_intersect(regions[i].cell, regions[j].cell);
      if (common && common->is_polygon())
        throw BuildError("regions " + regions[i].label + " and " + regions[j].label + " overlap");
    }
  }
  std::vector<ConvexCell> remainder{ConvexCell::unit_square()};
  for (const auto& r : regions) {
    std::vector<ConvexCell> next;
    for (const auto& piece : remainder)
      for (auto& part : subtract_polygon(piece, r.cell)) next.push_back(std::move(part));
    remainder = std::move(next);
  }
  std::vector<std::pair<ConvexCell, AffineForm2>> faces;
  for (const auto& r : regions) faces.push_back({r.cell, r.form});
  for (auto& c : remainder) faces.push_back({std::move(c), rest});
  return assemble(std::move(faces));
}

inline BuiltPair finish(SubstitutionPair pair, CellComplex target, std::vector<LabeledRegion> regions) {
  auto problems = validate(pair);
  if (!problems.empty()) throw BuildError("built pair is not a valid McNaughton pair: " + problems.front());
  BuiltPair out{std::move(pair), std::move(target), std::move(regions), {}};
  out.verdict = check_projective(out.pair);
  if (!out.verdict.projective || out.verdict.internal_error)
    throw std::logic_error("builder produced a pair that fails the projectivity check");
  return out;
}

inline BuiltPair from_regions(std::vector<LabeledRegion> regions, CellComplex target) {
  std::vector<Region> r1, r2;
  for (const auto& r : regions) {
    r1.push_back({r.label, r.cell, r.d1});
    r2.push_back({r.label, r.cell, r.d2});
  }
  SubstitutionPair pair{piecewise_function(r1, AffineForm2::constant(0)), piecewise_function(r2, AffineForm2::constant(0))};
  return finish(std::move(pair), std::move(target), std::move(regions));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Case i: K = {g1(y) <= x <= g2(y), f1(x) <= y <= f2(x)}.

struct RectTypeSpec {
  PwL1D f1;
  PwL1D f2;
  PwL1D g1;
  PwL1D g2;
};

inline bool pwl_leq(const PwL1D& f, const PwL1D& g) { return mv_min(f, g) == f; }

inline std::vector<std::string> check_bullet_conditions(const RectTypeSpec& s) {
  std::vector<std::string> out;
  const PwL1D id = PwL1D::identity();
  if (!pwl_leq(s.f1, s.f2)) out.push_back("f1 <= f2 fails");
  if (!pwl_leq(s.g1, s.g2)) out.push_back("g1 <= g2 fails");
  if (!pwl_leq(compose1(s.f1, s.g1), id)) out.push_back("y >= f1(g1(y)) fails");
  if (!pwl_leq(id, compose1(s.f2, s.g1))) out.push_back("y <= f2(g1(y)) fails");
  if (!pwl_leq(id, compose1(s.f2, s.g2))) out.push_back("y <= f2(g2(y)) fails");
  if (!pwl_leq(compose1(s.f1, s.g2), id)) out.push_back("y >= f1(g2(y)) fails");
  return out;
}

/// d1 = g1(y) on C, g2(y) on D, x elsewhere; d2 = f1(x) on A, f2(x) on B, y elsewhere.
inline BuiltPair build_case_i(const RectTypeSpec& s) {
  auto bad = check_bullet_conditions(s);
  if (!bad.empty()) throw BuildError("conditions violated: " + bad.front());
  for (const auto* f : {&s.f1, &s.f2, &s.g1, &s.g2})
    if (auto v = validate(*f); !v.empty()) throw BuildError("boundary function is not a McNaughton function: " + v.front());
  PwL2D F1 = lift_x(s.f1), F2 = lift_x(s.f2), G1 = lift_y(s.g1), G2 = lift_y(s.g2);
  auto faces = detail::split_faces(detail::overlay({&F1, &F2, &G1, &G2}), [](const std::vector<AffineForm2>& fs) {
    return std::vector<AffineForm2>{AffineForm2::y() - fs[0], AffineForm2::y() - fs[1], AffineForm2::x() - fs[2],
                                    AffineForm2::x() - fs[3]};
  });
  std::vector<std::pair<ConvexCell, AffineForm2>> p1, p2;
  std::vector<ConvexCell> k;
  for (const auto& face : faces) {
    const auto& fs = face.forms;
    Point2 p = face.cell.interior_point();
    AffineForm2 d1 = AffineForm2::x();
    if (p.x <= fs[2](p)) d1 = fs[2];
    else if (fs[3](p) <= p.x) d1 = fs[3];
    AffineForm2 d2 = AffineForm2::y();
    if (p.y <= fs[0](p)) d2 = fs[0];
    else if (fs[1](p) <= p.y) d2 = fs[1];
    p1.push_back({face.cell, d1});
    p2.push_back({face.cell, d2});
    std::vector<AffineForm2> inside{AffineForm2::x() - fs[2], fs[3] - AffineForm2::x(), AffineForm2::y() - fs[0],
                                    fs[1] - AffineForm2::y()};
    if (auto c = cell_clip_all(face.cell, inside)) k.push_back(std::move(*c));
  }
  SubstitutionPair pair{detail::assemble(std::move(p1)), detail::assemble(std::move(p2))};
  if (auto v = validate(pair); !v.empty()) throw BuildError("case-i pair is not continuous: " + v.front());
  return detail::finish(std::move(pair), CellComplex(std::move(k)), {});
}

// ---------------------------------------------------------------------------
// Case ii: K is the region above f1 = (a/b) x ∧ c(1-x)/d.

enum class CaseIILayout { below, equal, above, degenerate };

inline const char* to_string(CaseIILayout c) {
  switch (c) {
    case CaseIILayout::below: return "below";
    case CaseIILayout::equal: return "equal";
    case CaseIILayout::above: return "above";
    case CaseIILayout::degenerate: return "degenerate";
  }
  return "?";
}

struct CaseIIConstants {
  long a, b, c, d;
  Point2 O{0, 0};
  Point2 P;
  Point2 Q{1, 0};
  Point2 R{Rational(1, 2), 0};
  std::optional<Rational> x_S;
  std::optional<Point2> S;
  std::optional<Point2> T;
  std::optional<Rational> x_U;
  std::optional<Point2> U;
  std::optional<Point2> V;
  CaseIILayout layout = CaseIILayout::below;  // x_S compared with 1/2
  std::vector<std::string> notes;
};

inline CaseIIConstants case_ii_constants(long a, long b, long c, long d) {
  if (a < 1 || b < a || c < 1 || d < c)
    throw std::invalid_argument("need integers a >= 1, b >= a, c >= 1, d >= c");
  CaseIIConstants k{a, b, c, d};
  const Rational A(a), B(b), C(c), D(d), one(1), half(1, 2);
  Rational den = A * D + B * C;
  k.P = {B * C / den, A * C / den};
  if (b > 1) {
    Rational ds = (B - one) * (A + C) + (D - B) * (A - one);
    k.x_S = C * (B - one) / ds;
    k.S = Point2{*k.x_S, (A - one) * *k.x_S / (B - one)};
    k.V = Point2{half, half * (A - one) / (B - one)};
  } else {
    k.notes.push_back("b = 1: S and V undefined");
  }
  if (d > 1) {
    k.T = Point2{half, half * (C - one) / (D - one)};
    Rational du = (D - one) * (A + C) - (D - B) * (C - one);
    k.x_U = (C * (B - one) + D - B) / du;
    k.U = Point2{*k.x_U, (C - one) * (one - *k.x_U) / (D - one)};
  } else {
    k.notes.push_back("d = 1: T and U undefined");
  }
  if (k.x_S && k.T) {
    auto cmp = *k.x_S <=> half;
    k.layout = cmp < 0 ? CaseIILayout::below : cmp == 0 ? CaseIILayout::equal : CaseIILayout::above;
  } else {
    k.layout = CaseIILayout::degenerate;
  }
  return k;
}

inline BuiltPair build_case_ii(long a, long b, long c, long d) {
  CaseIIConstants k = case_ii_constants(a, b, c, d);
  const AffineForm2 plane1{Rational(a), Rational(1 - b), 0};
  const AffineForm2 plane2{-Rational(c), Rational(1 - d), Rational(c)};
  const AffineForm2 x = AffineForm2::x(), y = AffineForm2::y(), one_minus_x{-1, 0, 1};
  const Point2 &O = k.O, &P = k.P, &Q = k.Q, &R = k.R;
  auto reg = [&](std::string label, std::vector<Point2> pts, const AffineForm2& f) {
    return LabeledRegion{std::move(label), ConvexCell::hull(std::move(pts)), x, f};
  };
  std::vector<LabeledRegion> regions;
  if (k.layout == CaseIILayout::below) {
    const Point2 &S = *k.S, &T = *k.T;
    regions = {reg("OSP", {O, S, P}, plane1), reg("PSTQ", {P, S, T, Q}, plane2), reg("OSTR", {O, S, T, R}, x),
               reg("QRT", {Q, R, T}, one_minus_x)};
  } else if (k.layout == CaseIILayout::equal) {
    const Point2& S = *k.S;
    regions = {reg("OSP", {O, S, P}, plane1), reg("PSQ", {P, S, Q}, plane2), reg("OSR", {O, S, R}, x),
               reg("QRS", {Q, R, S}, one_minus_x)};
  } else if (k.layout == CaseIILayout::above) {
    const Point2 &U = *k.U, &V = *k.V;
    regions = {reg("OVUP", {O, V, U, P}, plane1), reg("PUQ", {P, U, Q}, plane2), reg("OVR", {O, V, R}, x),
               reg("QUVR", {Q, U, V, R}, one_minus_x)};
  } else if (b == 1 && d > 1) {
    const Point2& S = *k.T;
    k.notes.push_back("b = 1: equal layout with S = T");
    regions = {reg("OSP", {O, S, P}, plane1), reg("PSQ", {P, S, Q}, plane2), reg("OSR", {O, S, R}, x),
               reg("QRS", {Q, R, S}, one_minus_x)};
  } else if (d == 1 && b > 1) {
    const Point2& V = *k.V;
    k.notes.push_back("d = 1: above layout with U = V");
    regions = {reg("OVP", {O, V, P}, plane1), reg("PVQ", {P, V, Q}, plane2), reg("OVR", {O, V, R}, x),
               reg("QVR", {Q, V, R}, one_minus_x)};
  } else {
    regions = {reg("OPR", {O, P, R}, x), reg("PRQ", {P, R, Q}, one_minus_x)};
  }
  std::erase_if(regions, [](const LabeledRegion& r) { return !r.cell.is_polygon(); });
  std::vector<detail::Region> r2;
  for (const auto& r : regions) r2.push_back({r.label, r.cell, r.d2});
  SubstitutionPair pair{PwL2D::projection(1), detail::piecewise_function(r2, y)};
  std::vector<ConvexCell> target;
  ConvexCell square = ConvexCell::unit_square();
  for (const auto& h : {line_through(O, P), line_through(P, Q)})
    if (auto c2 = cell_clip(square, h)) target.push_back(std::move(*c2));
  return detail::finish(std::move(pair), CellComplex(std::move(target)), std::move(regions));
}

// ---------------------------------------------------------------------------
// Case iii: K is a triangle OAB (or a fan of such triangles) with O at the origin.

struct ExtGcd {
  long g, x, y;  // a x + b y = g
};

inline ExtGcd ext_gcd(long a, long b) {
  if (b == 0) return {a, 1, 0};
  ExtGcd r = ext_gcd(b, a % b);
  return {r.g, r.y, r.x - (a / b) * r.y};
}

struct DiophantineSolution {
  long k0, h0;  // a k0 + b h0 = -1
  long a, b;
  std::pair<long, long> branch(long s) const { return {k0 - s * b, h0 + s * a}; }
};

/// Particular solution of a k + b h = -1 for a > 0 > b, gcd(a, b) = 1.
inline DiophantineSolution solve_diophantine(long a, long b) {
  if (a <= 0 || b >= 0) throw std::invalid_argument("need a > 0 and b < 0");
  ExtGcd e = ext_gcd(a, -b);
  if (e.g != 1) throw std::invalid_argument("gcd(" + std::to_string(a) + ", " + std::to_string(b) + ") != 1");
  return {-e.x, e.y, a, b};
}

/// Least-|s| branch with 0 < h/k < -a/b (ties resolved towards negative s).
inline std::optional<long> default_branch(const DiophantineSolution& sol, long bound = 64) {
  for (long i = 0; i <= 2 * bound; ++i) {
    long s = (i % 2 == 1) ? -(i + 1) / 2 : i / 2;
    auto [k, h] = sol.branch(s);
    if (k == 0) continue;
    Rational r(h, k);
    if (r.sign() > 0 && r < Rational(-sol.a, sol.b)) return s;
  }
  return std::nullopt;
}

struct TriangleSpec {
  long a = 0, b = 0;         // OA: a x + b y = 0
  long a1 = 0, b1 = 0;       // OB: a1 x + b1 y = 0
  long a2 = 0, b2 = 0, c = 0;  // AB: a2 x + b2 y + c = 0
  std::optional<long> s, s_prime, l, m, t, t_hat;
};

struct TriangleConstruction {
  TriangleSpec spec;
  Rational delta, delta1;
  Point2 A, B, P;
  long l = 0, m = 0;
  std::optional<long> s, s_prime, t, t_hat;
  std::optional<long> k, h, k_prime, h_prime;
  std::optional<long> hbar, kbar, hhat, khat;
  std::optional<AffineForm2> line3, line6, line7, line8;
  std::optional<Point2> Q, R;
};

struct FanConstruction {
  std::vector<TriangleConstruction> triangles;
  std::vector<Point2> junctions;  // S_i between triangle i and i+1
  BuiltPair built;
};

namespace detail {

inline long gcd3(long a, long b, long c) { return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)); }

inline TriangleSpec normalize_triangle(TriangleSpec t) {
  auto norm2 = [](long& a, long& b, const char* name) {
    long g = std::gcd(std::abs(a), std::abs(b));
    if (g == 0) throw std::invalid_argument(std::string("line ") + name + " has zero coefficients");
    a /= g;
    b /= g;
    if (a < 0) {
      a = -a;
      b = -b;
    }
    if (a <= 0 || b >= 0) throw std::invalid_argument(std::string("line ") + name + " must have a > 0 > b");
  };
  norm2(t.a, t.b, "OA");
  norm2(t.a1, t.b1, "OB");
  long g = gcd3(t.a2, t.b2, t.c);
  if (g == 0) throw std::invalid_argument("line AB has zero coefficients");
  t.a2 /= g;
  t.b2 /= g;
  t.c /= g;
  if (t.c < 0) {
    t.a2 = -t.a2;
    t.b2 = -t.b2;
    t.c = -t.c;
  }
  if (t.c <= 0) throw std::invalid_argument("line AB must not pass through the origin");
  if (t.a == t.a1 && t.b == t.b1) throw std::invalid_argument("OA and OB coincide: not a triangle");
  if (!(Rational(-t.a, t.b) < Rational(-t.a1, t.b1))) throw std::invalid_argument("OA must lie below OB");
  return t;
}

inline std::vector<long> scan(long bound) {
  std::vector<long> v{0};
  for (long i = 1; i <= bound; ++i) {
    v.push_back(-i);
    v.push_back(i);
  }
  return v;
}

inline std::vector<long> scan_or(const std::optional<long>& fixed, long bound) {
  if (fixed) return {*fixed};
  return scan(bound);
}

/// Line of the sheaf through P: h [l L - x] + k [m L - y] = 0 with L = a2 x + b2 y + c.
inline AffineForm2 sheaf_line(const TriangleSpec& t, long l, long m, long h, long k) {
  Rational w(h * l + k * m);
  return {Rational(t.a2) * w - Rational(h), Rational(t.b2) * w - Rational(k), Rational(t.c) * w};
}

struct Piece {
  std::string label;
  ConvexCell cell;
  AffineForm2 d1, d2;
};

inline bool in_square(const Point2& p) {
  return Rational(0) <= p.x && p.x <= Rational(1) && Rational(0) <= p.y && p.y <= Rational(1);
}

/// Local admissibility: proper triangles inside the square, values in [0,1], no overlaps.
inline bool pieces_fit(const std::vector<Piece>& fresh, const std::vector<Piece>& placed) {
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    const auto& pc = fresh[i];
    if (!pc.cell.is_polygon()) return false;
    for (const auto& v : pc.cell.vertices()) {
      if (!in_square(v)) return false;
      for (const auto* f : {&pc.d1, &pc.d2}) {
        Rational z = (*f)(v);
        if (z.sign() < 0 || Rational(1) < z) return false;
      }
    }
    auto overlaps = [&](const Piece& other) {
      auto common = cell_intersect(pc.cell, other.cell);
      return common && common->is_polygon();
    };
    for (const auto& o : placed)
      if (overlaps(o)) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (overlaps(fresh[j])) return false;
  }
  return true;
}

struct SideChoice {
  std::optional<long> s, t;
  long k = 0, h = 0, hb = 0, kb = 0;
  AffineForm2 axis, sheaf;
  Point2 corner;
  std::vector<Piece> pieces;
};

class FanSearch {
 public:
  FanSearch(std::vector<TriangleConstruction> tris, long bound) : tris_(std::move(tris)), bound_(bound) {
    for (auto& tc : tris_) {
      placed_.push_back({"K", ConvexCell::hull({{0, 0}, tc.A, tc.B}), AffineForm2::x(), AffineForm2::y()});
    }
    for (std::size_t i = 0; i + 1 < tris_.size(); ++i)
      if (tris_[i].B != tris_[i + 1].A)
        throw BuildError("fan triangles " + std::to_string(i) + " and " + std::to_string(i + 1) +
                         " must share their vertex on the common ray");
    junctions_.resize(tris_.size() > 0 ? tris_.size() - 1 : 0);
  }

  std::optional<FanConstruction> run() {
    if (dfs(0)) return std::move(result_);
    return std::nullopt;
  }

  std::string last_failure() const { return failure_; }

 private:
  static constexpr int kBranch = 6;
  static constexpr int kFinalBudget = 48;

  std::vector<std::pair<long, long>> lm_candidates(const TriangleConstruction& tc) const {
    std::vector<std::pair<long, long>> out;
    const auto& t = tc.spec;
    Rational lo(-t.a, t.b), hi(-t.a1, t.b1);
    for (long sum = 2; sum <= 2 * bound_ && static_cast<int>(out.size()) < 4 * kBranch; ++sum) {
      for (long li = 1; li < sum; ++li) {
        long l = -li, m = -(sum - li);
        if (t.l && *t.l != l) continue;
        if (t.m && *t.m != m) continue;
        Rational ratio(m, l);
        if (!(lo < ratio && ratio < hi)) continue;
        long den = 1 - l * t.a2 - m * t.b2;
        if (den >= 0) continue;
        Point2 P{Rational(l * t.c, den), Rational(m * t.c, den)};
        if (!in_square(P)) continue;
        out.push_back({l, m});
      }
    }
    return out;
  }

  /// Planes (9)/(10) or (11)/(12) through A', A'' (resp. B', B'') with axis through P.
  std::optional<SideChoice> plane_pair(const TriangleConstruction& tc, long a, long b, long t) const {
    ExtGcd e = ext_gcd(a, -b);
    long h1 = -e.y, k1 = -e.x;  // h1 b - k1 a = 1
    long hb = h1 + a * t, kb = k1 + b * t;
    if (hb * tc.l + kb * tc.m <= 0) return std::nullopt;
    SideChoice sc;
    sc.t = t;
    sc.hb = hb;
    sc.kb = kb;
    sc.sheaf = sheaf_line(tc.spec, tc.l, tc.m, hb, kb);
    return sc;
  }

  std::vector<SideChoice> outer_side(const TriangleConstruction& tc, bool oa_side) const {
    const auto& sp = tc.spec;
    long a = oa_side ? sp.a : sp.a1, b = oa_side ? sp.b : sp.b1;
    DiophantineSolution sol = solve_diophantine(a, b);
    Rational slope_k(-a, b);
    std::vector<SideChoice> out;
    for (long s : scan_or(oa_side ? sp.s : sp.s_prime, bound_)) {
      auto [k, h] = sol.branch(s);
      if (k == 0) continue;
      Rational r(h, k);
      if (oa_side ? !(r.sign() > 0 && r < slope_k) : !(slope_k < r)) continue;
      AffineForm2 axis{Rational(-h), Rational(k), 0};  // y = (h/k) x
      AffineForm2 p1{Rational(-h * b), Rational(k * b), 0};
      AffineForm2 p2{Rational(h * a), Rational(-k * a), 0};
      for (long t : scan_or(oa_side ? sp.t : sp.t_hat, bound_)) {
        auto sc = plane_pair(tc, a, b, t);
        if (!sc) continue;
        auto corner = intersect_lines(axis, sc->sheaf);
        if (!corner || !in_square(*corner)) continue;
        sc->s = s;
        sc->k = k;
        sc->h = h;
        sc->axis = axis;
        sc->corner = *corner;
        const Point2 O{0, 0};
        const Point2& V = oa_side ? tc.A : tc.B;
        AffineForm2 q1 = Rational(-b) * sc->sheaf, q2 = Rational(a) * sc->sheaf;
        if (oa_side) {
          sc->pieces = {{"OQA", ConvexCell::hull({O, *corner, V}), p1, p2},
                        {"QAP", ConvexCell::hull({*corner, V, tc.P}), q1, q2}};
        } else {
          sc->pieces = {{"PBR", ConvexCell::hull({tc.P, V, *corner}), q1, q2},
                        {"BRO", ConvexCell::hull({V, *corner, O}), p1, p2}};
        }
        if (!pieces_fit(sc->pieces, placed_)) continue;
        out.push_back(std::move(*sc));
        if (static_cast<int>(out.size()) >= kBranch) return out;
      }
    }
    return out;
  }

  struct JunctionChoice {
    SideChoice left, right;
    Point2 S;
    std::vector<Piece> pieces;
  };

  std::vector<JunctionChoice> junction(const TriangleConstruction& lt, const TriangleConstruction& rt) const {
    std::vector<std::pair<long, long>> pairs;
    for (long u : scan_or(lt.spec.t_hat, bound_))
      for (long v : scan_or(rt.spec.t, bound_)) pairs.push_back({u, v});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return std::abs(x.first) + std::abs(x.second) < std::abs(y.first) + std::abs(y.second); });
    std::vector<JunctionChoice> out;
    const Point2& V = lt.B;
    for (auto [u, v] : pairs) {
      auto l = plane_pair(lt, lt.spec.a1, lt.spec.b1, u);
      auto r = plane_pair(rt, rt.spec.a, rt.spec.b, v);
      if (!l || !r) continue;
      auto S = intersect_lines(l->sheaf, r->sheaf);
      if (!S || !in_square(*S)) continue;
      JunctionChoice jc{*l, *r, *S, {}};
      jc.pieces = {{"PVS", ConvexCell::hull({lt.P, V, *S}), Rational(-lt.spec.b1) * l->sheaf, Rational(lt.spec.a1) * l->sheaf},
                   {"VSP", ConvexCell::hull({V, *S, rt.P}), Rational(-rt.spec.b) * r->sheaf, Rational(rt.spec.a) * r->sheaf}};
      if (!pieces_fit(jc.pieces, placed_)) continue;
      out.push_back(std::move(jc));
      if (static_cast<int>(out.size()) >= kBranch) break;
    }
    return out;
  }

  void push(const std::vector<Piece>& ps) { placed_.insert(placed_.end(), ps.begin(), ps.end()); }
  void pop(std::size_t n) { placed_.erase(placed_.end() - static_cast<std::ptrdiff_t>(n), placed_.end()); }

  bool dfs(std::size_t i) {
    if (i == tris_.size()) return finish_attempt();
    auto& tc = tris_[i];
    for (auto [l, m] : lm_candidates(tc)) {
      const auto& t = tc.spec;
      long den = 1 - l * t.a2 - m * t.b2;
      tc.l = l;
      tc.m = m;
      tc.P = {Rational(l * t.c, den), Rational(m * t.c, den)};
      AffineForm2 p13{Rational(1 - l * t.a2), Rational(-l * t.b2), Rational(-l * t.c)};
      AffineForm2 p14{Rational(-m * t.a2), Rational(1 - m * t.b2), Rational(-m * t.c)};
      std::vector<Piece> apb{{"APB", ConvexCell::hull({tc.A, tc.P, tc.B}), p13, p14}};
      if (!pieces_fit(apb, placed_)) continue;
      push(apb);
      bool ok = i == 0 ? try_first_side(i) : try_junction(i);
      pop(apb.size());
      if (ok) return true;
      if (attempts_ >= kFinalBudget) return false;
    }
    return false;
  }

  bool try_first_side(std::size_t i) {
    auto& tc = tris_[i];
    for (auto& sc : outer_side(tc, true)) {
      tc.s = sc.s;
      tc.t = sc.t;
      tc.k = sc.k;
      tc.h = sc.h;
      tc.hbar = sc.hb;
      tc.kbar = sc.kb;
      tc.line3 = sc.axis;
      tc.line7 = sc.sheaf;
      tc.Q = sc.corner;
      push(sc.pieces);
      bool ok = after_inner(i);
      pop(sc.pieces.size());
      if (ok) return true;
      if (attempts_ >= kFinalBudget) return false;
    }
    return false;
  }

  bool try_junction(std::size_t i) {
    auto& lt = tris_[i - 1];
    auto& rt = tris_[i];
    for (auto& jc : junction(lt, rt)) {
      lt.t_hat = jc.left.t;
      lt.hhat = jc.left.hb;
      lt.khat = jc.left.kb;
      lt.line8 = jc.left.sheaf;
      rt.t = jc.right.t;
      rt.hbar = jc.right.hb;
      rt.kbar = jc.right.kb;
      rt.line7 = jc.right.sheaf;
      junctions_[i - 1] = jc.S;
      push(jc.pieces);
      bool ok = after_inner(i);
      pop(jc.pieces.size());
      if (ok) return true;
      if (attempts_ >= kFinalBudget) return false;
    }
    return false;
  }

  bool after_inner(std::size_t i) {
    if (i + 1 < tris_.size()) return dfs(i + 1);
    auto& tc = tris_[i];
    for (auto& sc : outer_side(tc, false)) {
      tc.s_prime = sc.s;
      tc.t_hat = sc.t;
      tc.k_prime = sc.k;
      tc.h_prime = sc.h;
      tc.hhat = sc.hb;
      tc.khat = sc.kb;
      tc.line6 = sc.axis;
      tc.line8 = sc.sheaf;
      tc.R = sc.corner;
      push(sc.pieces);
      bool ok = dfs(i + 1);
      pop(sc.pieces.size());
      if (ok) return true;
      if (attempts_ >= kFinalBudget) return false;
    }
    return false;
  }

  bool finish_attempt() {
    ++attempts_;
    std::vector<LabeledRegion> regions;
    std::vector<ConvexCell> k;
    for (const auto& pc : placed_) {
      regions.push_back({pc.label, pc.cell, pc.d1, pc.d2});
      if (pc.label == "K") k.push_back(pc.cell);
    }
    for (std::size_t i = 0, ki = 0, ji = 0; i < regions.size(); ++i) {
      if (regions[i].label == "K") regions[i].label = "K" + std::to_string(++ki);
      else if (regions[i].label == "PVS" || regions[i].label == "VSP") regions[i].label += std::to_string(ji++ / 2 + 1);
    }
    try {
      BuiltPair bp = from_regions(std::move(regions), CellComplex(std::move(k)));
      result_ = FanConstruction{tris_, junctions_, std::move(bp)};
      return true;
    } catch (const std::exception& e) {
      failure_ = e.what();
      return false;
    }
  }

  std::vector<TriangleConstruction> tris_;
  long bound_;
  std::vector<Piece> placed_;
  std::vector<Point2> junctions_;
  std::optional<FanConstruction> result_;
  int attempts_ = 0;
  std::string failure_ = "no admissible parameters within the search bound";
};

}  // namespace detail

inline TriangleConstruction triangle_vertices(const TriangleSpec& raw) {
  TriangleSpec t = detail::normalize_triangle(raw);
  TriangleConstruction tc;
  tc.spec = t;
  tc.delta = Rational(t.b * t.a2 - t.a * t.b2);
  tc.delta1 = Rational(t.b1 * t.a2 - t.a1 * t.b2);
  if (tc.delta.sign() <= 0 || tc.delta1.sign() <= 0) throw std::invalid_argument("need delta > 0 and delta1 > 0");
  Rational c(t.c);
  tc.A = {Rational(-t.b) * c / tc.delta, Rational(t.a) * c / tc.delta};
  tc.B = {Rational(-t.b1) * c / tc.delta1, Rational(t.a1) * c / tc.delta1};
  if (!detail::in_square(tc.A) || !detail::in_square(tc.B)) throw std::invalid_argument("triangle vertices must lie in [0,1]^2");
  return tc;
}

/// Fan of triangles O A_i B_i listed counter-clockwise with B_i = A_{i+1}; searches the free
/// parameters by increasing size (|l|+|m|, |s|, |t| up to `bound`).
inline FanConstruction build_case_iii(const std::vector<TriangleSpec>& fan, long bound = 12) {
  if (fan.empty()) throw std::invalid_argument("empty triangle list");
  std::vector<TriangleConstruction> tris;
  for (const auto& t : fan) tris.push_back(triangle_vertices(t));
  detail::FanSearch search(std::move(tris), bound);
  auto r = search.run();
  if (!r) throw BuildError("case iii: " + search.last_failure());
  return std::move(*r);
}

// ---------------------------------------------------------------------------
// Two transfer lemmas on affine functions.

/// t = b + s (c - b) / a.
inline Rational height_transfer(const Rational& a, const Rational& b, const Rational& c, const Rational& s) {
  if (a.sign() == 0) throw std::domain_error("a must be nonzero");
  return b + s * (c - b) / a;
}

/// s = a (t - b) / (c - b).
inline Rational height_transfer_inverse(const Rational& a, const Rational& b, const Rational& c, const Rational& t) {
  if (c == b) throw std::domain_error("b and c must differ");
  return a * (t - b) / (c - b);
}

struct TransferHeights {
  Rational t, u, u_prime, v, v_prime;
};

/// Heights at x = s on lines OP, KQ and at x = t on lines O'P', K'Q' of the plane Oxz.
inline TransferHeights transfer_heights(const Rational& a, const Rational& b, const Rational& c, const Rational& h,
                                         const Rational& k, const Rational& l, const Rational& s) {
  TransferHeights r;
  r.t = height_transfer(a, b, c, s);
  r.u = s * h / a;
  r.u_prime = k + s * (l - k) / a;
  r.v = (r.t - b) * h / (c - b);
  r.v_prime = k + (r.t - b) * (l - k) / (c - b);
  return r;
}

struct Triangle3 {
  Point2 p[3];
  Rational z[3];
  /// The affine function through the three points (x_i, y_i, z_i).
  AffineForm2 plane() const {
    Rational det = orient(p[0], p[1], p[2]);
    if (det.sign() == 0) throw std::domain_error("collinear base points");
    Rational dz1 = z[1] - z[0], dz2 = z[2] - z[0];
    Point2 e1 = p[1] - p[0], e2 = p[2] - p[0];
    Rational a = (dz1 * e2.y - dz2 * e1.y) / det;
    Rational b = (dz2 * e1.x - dz1 * e2.x) / det;
    return {a, b, z[0] - a * p[0].x - b * p[0].y};
  }
};

/// Given triangle C with heights a_i, b_i and triangle J, a point w of C with
/// f_A(w) = f_L(q) and f_B(w) = f_M(q), where L, M carry the heights a_{i_j}, b_{i_j} over J.
inline Point2 matching_point(const Point2 (&C)[3], const Point2 (&J)[3], const int (&idx)[3], const Point2& q) {
  if (orient(C[0], C[1], C[2]).sign() == 0) throw std::domain_error("C points are collinear");
  if (orient(J[0], J[1], J[2]).sign() == 0) throw std::domain_error("J points are collinear");
  for (int i : idx)
    if (i < 1 || i > 3) throw std::invalid_argument("index list entries must be 1, 2 or 3");
  if (!ConvexCell::hull({J[0], J[1], J[2]}).contains(q)) throw std::domain_error("query outside the triangle J");
  const Point2& c1 = C[idx[0] - 1];
  const Point2& c2 = C[idx[1] - 1];
  const Point2& c3 = C[idx[2] - 1];
  if (q == J[0]) return c1;
  // The line from J1 through q meets side J2J3 at J4 = J2 + sigma (J3 - J2); q = J1 + tau (J4 - J1).
  auto j4 = intersect_lines(line_through(J[0], q), line_through(J[1], J[2]));
  if (!j4) throw std::logic_error("line through J1 and q misses the opposite side");
  Point2 side = J[2] - J[1];
  Rational sigma = side.x.sign() != 0 ? (j4->x - J[1].x) / side.x : (j4->y - J[1].y) / side.y;
  Point2 ray = *j4 - J[0];
  Rational tau = ray.x.sign() != 0 ? (q.x - J[0].x) / ray.x : (q.y - J[0].y) / ray.y;
  // Both steps move along a segment by the same fraction, so heights carry over.
  Point2 c4 = lerp(c2, c3, height_transfer(1, 0, 1, sigma));
  return lerp(c1, c4, height_transfer(1, 0, 1, tau));
}

}  // namespace mvproj
