#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mvproj;
using oracle::nodes;
using oracle::q;

namespace {

const PwL1D& iso_f() {
  static const PwL1D f = nodes({{"0", "0"}, {"1/6", "1"}, {"1/4", "0"}, {"1/3", "1"}, {"1", "1"}});
  return f;
}

const PwL1D& iso_g() {
  static const PwL1D g = nodes({{"0", "0"}, {"1/6", "2/3"}, {"1/4", "0"}, {"3/8", "1"}, {"1", "1"}});
  return g;
}

std::vector<Rational> sample_points(std::mt19937& rng, int n) {
  std::vector<Rational> xs{0, 1, q("1/2")};
  for (int i = 0; i < n; ++i) xs.push_back(oracle::random_unit(rng, 60));
  return xs;
}

}  // namespace

TEST(Eval1, Values) {
  EXPECT_EQ(PwL1D::identity()(q("1/3")), q("1/3"));
  EXPECT_EQ(iso_f()(q("1/6")), Rational(1));
  EXPECT_EQ(iso_g()(q("1/4")), Rational(0));
  EXPECT_THROW(PwL1D::identity()(q("3/2")), std::domain_error);
}

TEST(PwL1DOps, Examples) {
  EXPECT_EQ(mv_neg(PwL1D::constant(0)), PwL1D::constant(1));
  PwL1D d = mv_oplus(PwL1D::identity(), PwL1D::identity());
  EXPECT_EQ(d(q("7/10")), Rational(1));
  EXPECT_EQ(d(q("1/4")), q("1/2"));
  PwL1D tent = mv_min(PwL1D::identity(), mv_neg(PwL1D::identity()));
  EXPECT_EQ(tent, nodes({{"0", "0"}, {"1/2", "1/2"}, {"1", "0"}}));
  EXPECT_EQ(chang_delta(PwL1D::identity(), mv_neg(PwL1D::identity())), nodes({{"0", "1"}, {"1/2", "0"}, {"1", "1"}}));
  EXPECT_EQ(chang_delta(iso_f(), iso_f()), PwL1D::constant(0));
  EXPECT_EQ(chang_delta(iso_f(), PwL1D::constant(0)), iso_f());
}

TEST(PwL1DOps, AgreeWithPointwiseFormulas) {
  std::mt19937 rng(3);
  for (int it = 0; it < 40; ++it) {
    PwL1D f = oracle::random_free1(rng), g = mv_neg(oracle::random_free1(rng));
    long n = 1 + it % 4;
    PwL1D s = mv_oplus(f, g), p = mv_odot(f, g), lo = mv_min(f, g), hi = mv_max(f, g), nf = scalar_n(f, n), ng = mv_neg(f),
          dl = chang_delta(f, g);
    for (const auto& x : sample_points(rng, 25)) {
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

TEST(PwL1DOps, MvAxioms) {
  std::mt19937 rng(8);
  for (int it = 0; it < 40; ++it) {
    PwL1D f = oracle::random_free1(rng), g = mv_neg(oracle::random_free1(rng));
    EXPECT_EQ(mv_neg(mv_neg(f)), f);
    EXPECT_EQ(mv_oplus(f, g), mv_oplus(g, f));
    EXPECT_EQ(mv_oplus(f, PwL1D::constant(1)), PwL1D::constant(1));
    EXPECT_EQ(mv_oplus(mv_neg(mv_oplus(mv_neg(f), g)), g), mv_oplus(mv_neg(mv_oplus(mv_neg(g), f)), f));
  }
}

TEST(Compose1, Cases) {
  EXPECT_EQ(compose1(PwL1D::identity(), iso_f()), iso_f());
  PwL1D l13 = compile1(lambda_term(13)), g313 = compile1(gamma_term(3, 13));
  EXPECT_EQ(compose1(l13, g313)(q("3/13")), Rational(0));
  std::mt19937 rng(4);
  for (int it = 0; it < 30; ++it) {
    PwL1D a = oracle::random_free1(rng), b = oracle::random_free1(rng);
    PwL1D c = compose1(a, b);
    for (const auto& x : sample_points(rng, 20)) EXPECT_EQ(c(x), a(b(x)));
    EXPECT_TRUE(validate(c).empty());
  }
}

TEST(Extrema, Values) {
  EXPECT_EQ(min_value(PwL1D::identity()), Rational(0));
  EXPECT_EQ(min_value(PwL1D::constant(q("1/2"))), q("1/2"));
  PwL1D f1 = nodes({{"0", "0"}, {"21/37", "6/37"}, {"1", "0"}});
  EXPECT_EQ(max_value(f1), q("6/37"));
  EXPECT_EQ(min_on(nodes({{"0", "1"}, {"1/2", "0"}, {"1", "1"}}), q("3/4"), 1), q("1/2"));
}

TEST(Extrema, GridNeverBeatsExactValue) {
  std::mt19937 rng(9);
  for (int it = 0; it < 30; ++it) {
    PwL1D f = oracle::random_free1(rng);
    Rational lo = min_value(f), hi = max_value(f);
    for (long i = 0; i <= 120; ++i) {
      Rational v = f(Rational(i, 120));
      EXPECT_LE(lo, v);
      EXPECT_LE(v, hi);
    }
  }
}

TEST(ZeroSet, Cases) {
  CellComplex z = zero_set(PwL1D::constant(0));
  EXPECT_TRUE(same_point_set(z, CellComplex::single(ConvexCell::segment({0, 0}, {1, 0}))));
  CellComplex zl = zero_set(compile1(lambda_term(13)));
  EXPECT_EQ(zl, CellComplex::single(ConvexCell::point({q("1/13"), 0})));
  CellComplex zt = zero_set(compile1(eta_term(3, 13)));
  EXPECT_EQ(zt, CellComplex::single(ConvexCell::point({q("3/13"), 0})));
}

TEST(Validate1D, Cases) {
  EXPECT_TRUE(validate(PwL1D::identity()).empty());
  auto v = validate(nodes({{"0", "0"}, {"1/2", "1/3"}, {"1", "1"}}));
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("slope"), std::string::npos);
  EXPECT_THROW(nodes({{"0", "0"}, {"1/2", "0"}, {"1/2", "1"}, {"1", "1"}}), std::invalid_argument);
}

TEST(Lipschitz1D, CompiledTermsRespectMaxSlope) {
  std::mt19937 rng(10);
  for (int it = 0; it < 100; ++it) {
    MvTerm t = oracle::random_term(rng, 1, 3);
    PwL1D f = compile1(t);
    Rational L = lipschitz(f);
    Rational x = oracle::random_unit(rng), u = oracle::random_unit(rng);
    EXPECT_LE(abs(evaluate(t, {x}) - evaluate(t, {u})), L * abs(x - u));
  }
}
