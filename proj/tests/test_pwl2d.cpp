#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mvproj;
using oracle::q;

namespace {

PwL2D random_free2(std::mt19937& rng, int depth = 2) { return compile2(oracle::random_term(rng, 2, depth)); }

std::vector<Point2> sample_points(std::mt19937& rng, int n) {
  std::vector<Point2> ps{{0, 0}, {1, 1}, {0, 1}, {1, 0}, {q("1/2"), q("1/2")}};
  for (int i = 0; i < n; ++i) ps.push_back({oracle::random_unit(rng, 30), oracle::random_unit(rng, 30)});
  return ps;
}

}  // namespace

TEST(Eval2, AnyContainingTriangleAgrees) {
  std::mt19937 rng(1);
  for (int it = 0; it < 20; ++it) {
    PwL2D f = random_free2(rng, 3);
    for (const auto& pc : f.pieces())
      for (const auto& v : pc.cell.vertices()) EXPECT_EQ(pc.form(v), f(v));
  }
  EXPECT_THROW(PwL2D::projection(1)({q("3/2"), 0}), std::domain_error);
}

TEST(PwL2DOps, AgreeWithPointwiseFormulas) {
  std::mt19937 rng(2);
  for (int it = 0; it < 25; ++it) {
    PwL2D f = random_free2(rng), g = random_free2(rng);
    long n = 1 + it % 3;
    PwL2D s = mv_oplus(f, g), p = mv_odot(f, g), lo = mv_min(f, g), hi = mv_max(f, g), nf = scalar_n(f, n), ng = mv_neg(f),
          dl = chang_delta(f, g);
    for (const auto& x : sample_points(rng, 30)) {
      Rational a = f(x), b = g(x);
      EXPECT_EQ(s(x), oracle::oplus(a, b));
      EXPECT_EQ(p(x), oracle::odot(a, b));
      EXPECT_EQ(lo(x), min(a, b));
      EXPECT_EQ(hi(x), max(a, b));
      EXPECT_EQ(nf(x), oracle::clamp01(Rational(n) * a));
      EXPECT_EQ(ng(x), oracle::neg(a));
      EXPECT_EQ(dl(x), abs(a - b));
    }
    for (const auto* h : {&s, &p, &lo, &hi, &nf, &ng, &dl}) EXPECT_TRUE(validate(*h).empty());
  }
}

TEST(PwL2DOps, MvAxioms) {
  std::mt19937 rng(12);
  for (int it = 0; it < 15; ++it) {
    PwL2D f = random_free2(rng), g = random_free2(rng);
    EXPECT_TRUE(equal_functions(mv_neg(mv_neg(f)), f));
    EXPECT_TRUE(equal_functions(mv_oplus(f, g), mv_oplus(g, f)));
    EXPECT_TRUE(equal_functions(mv_oplus(f, PwL2D::constant(1)), PwL2D::constant(1)));
    EXPECT_TRUE(equal_functions(mv_oplus(mv_neg(mv_oplus(mv_neg(f), g)), g), mv_oplus(mv_neg(mv_oplus(mv_neg(g), f)), f)));
  }
}

TEST(Apply1To2, Cases) {
  std::mt19937 rng(13);
  PwL2D f = random_free2(rng, 3);
  EXPECT_TRUE(equal_functions(apply1_to_2(PwL1D::constant(1), f), PwL2D::constant(1)));
  PwL1D eta = compile1(eta_term(3, 13));
  PwL2D lifted = apply1_to_2(eta, PwL2D::projection(2));
  for (long i = 0; i <= 13; ++i)
    for (long j = 0; j <= 13; ++j) {
      Point2 p{Rational(i, 13), Rational(j, 13)};
      EXPECT_EQ(lifted(p), eta(p.y));
      EXPECT_EQ(lifted(p), lifted({0, p.y}));
    }
  for (int it = 0; it < 10; ++it) {
    PwL1D o = oracle::random_free1(rng);
    PwL2D g = random_free2(rng);
    PwL2D c = apply1_to_2(o, g);
    for (const auto& x : sample_points(rng, 20)) EXPECT_EQ(c(x), o(g(x)));
  }
}

TEST(Extrema2, ZeroAndLevelSets) {
  PwL2D x = PwL2D::projection(1);
  EXPECT_EQ(min_value(x), Rational(0));
  EXPECT_EQ(max_value(x), Rational(1));
  EXPECT_TRUE(same_point_set(zero_set(x), CellComplex::single(ConvexCell::segment({0, 0}, {0, 1}))));
  EXPECT_TRUE(same_point_set(zero_set(PwL2D::constant(0)), CellComplex::unit_square()));
  PwL2D m = mv_min(x, PwL2D::projection(2));
  EXPECT_TRUE(same_point_set(level_set(m, 1), CellComplex::single(ConvexCell::point({1, 1}))));
}

TEST(Validate2D, ContinuityViolation) {
  std::vector<Piece2> pieces{{ConvexCell::hull({{0, 0}, {1, 0}, {1, 1}}), AffineForm2::x()},
                             {ConvexCell::hull({{0, 0}, {1, 1}, {0, 1}}), AffineForm2::constant(0)}};
  auto v = validate(PwL2D::from_pieces(pieces));
  ASSERT_FALSE(v.empty());
  bool names_edge = false;
  for (const auto& s : v)
    if (s.find("(1, 1)") != std::string::npos || s.find("(0, 0)") != std::string::npos) names_edge = true;
  EXPECT_TRUE(names_edge);
  EXPECT_TRUE(validate(PwL2D::projection(2)).empty());
}

TEST(Validate2D, NonIntegralForm) {
  std::vector<Piece2> pieces{{ConvexCell::hull({{0, 0}, {1, 0}, {1, 1}}), AffineForm2{q("1/2"), 0, 0}},
                             {ConvexCell::hull({{0, 0}, {1, 1}, {0, 1}}), AffineForm2{q("1/2"), 0, 0}}};
  EXPECT_FALSE(validate(PwL2D::from_pieces(pieces)).empty());
}

TEST(SampleGrid, MatchesEvaluation) {
  std::mt19937 rng(14);
  PwL2D f = random_free2(rng, 3);
  const long D = 12;
  auto v = sample_grid(f, D);
  for (long j = 0; j <= D; ++j)
    for (long i = 0; i <= D; ++i) EXPECT_EQ(Rational(v[j * (D + 1) + i], D), f({Rational(i, D), Rational(j, D)}));
}

TEST(Lipschitz2D, CompiledTermsRespectBound) {
  std::mt19937 rng(15);
  for (int it = 0; it < 60; ++it) {
    MvTerm t = oracle::random_term(rng, 2, 3);
    PwL2D f = compile2(t);
    Rational L = lipschitz(f);
    Point2 x{oracle::random_unit(rng), oracle::random_unit(rng)}, u{oracle::random_unit(rng), oracle::random_unit(rng)};
    EXPECT_LE(abs(evaluate(t, {x.x, x.y}) - evaluate(t, {u.x, u.y})), L * (abs(x.x - u.x) + abs(x.y - u.y)));
  }
}
