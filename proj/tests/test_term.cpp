#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mvproj;
using oracle::q;

TEST(GammaTerm, Shapes) {
  EXPECT_EQ(gamma_term(3, 13), MvTerm::neg(MvTerm::scalar(4, MvTerm::var(1))));
  EXPECT_EQ(gamma_term(5, 13), MvTerm::neg(MvTerm::scalar(4, MvTerm::neg(MvTerm::scalar(2, MvTerm::var(1))))));
  EXPECT_EQ(gamma_term(1, 7), MvTerm::var(1));
}

TEST(GammaTerm, CompiledValues) {
  PwL1D g3 = compile1(gamma_term(3, 13));
  EXPECT_EQ(g3, oracle::nodes({{"0", "1"}, {"1/4", "0"}, {"1", "0"}}));
  EXPECT_EQ(g3(q("3/13")), q("1/13"));
  PwL1D g5 = compile1(gamma_term(5, 13));
  ASSERT_EQ(g5.piece_count(), 3u);
  EXPECT_EQ(g5.slope(0), Rational(0));
  EXPECT_EQ(g5.slope(2), Rational(0));
  for (long p : oracle::primes_up_to(31))
    for (long m = 1; m < p; ++m) EXPECT_EQ(compile1(gamma_term(m, p))(Rational(m, p)), Rational(1, p)) << m << "/" << p;
}

TEST(LambdaTerm, Values) {
  PwL1D l13 = compile1(lambda_term(13));
  EXPECT_EQ(l13(q("1/13")), Rational(0));
  EXPECT_EQ(l13(0), Rational(1));
  for (long p : {2L, 3L, 5L, 13L})
    EXPECT_EQ(zero_set(compile1(lambda_term(p))), CellComplex::single(ConvexCell::point({Rational(1, p), 0})));
  EXPECT_THROW(lambda_term(12), std::invalid_argument);
}

TEST(EtaTerm, ZeroSetsAndSeparation) {
  EXPECT_EQ(zero_set(compile1(eta_term(3, 13))), CellComplex::single(ConvexCell::point({q("3/13"), 0})));
  EXPECT_EQ(compile1(eta_term(1, 2))(q("1/2")), Rational(0));
  PwL1D t = compile1(eta_term(5, 13));
  for (long L = 2; L <= 10; ++L) {
    Rational c(5, 13), r(1, L);
    if (Rational(0) <= c - r) EXPECT_GT(min_on(t, 0, c - r).sign(), 0);
    if (c + r <= Rational(1)) EXPECT_GT(min_on(t, c + r, 1).sign(), 0);
  }
}

TEST(Compile, Cases) {
  EXPECT_EQ(compile1(MvTerm::var(1)), PwL1D::identity());
  PwL2D lifted = compile2(substitute(eta_term(3, 13), {MvTerm::var(2)}));
  for (long i = 0; i <= 26; ++i)
    for (long j = 0; j <= 26; ++j) {
      Point2 p{Rational(i, 26), Rational(j, 26)};
      EXPECT_EQ(lifted(p), lifted({0, p.y}));
    }
  EXPECT_THROW(compile1(MvTerm::var(2)), std::out_of_range);
}

TEST(Compile, AgreesWithPointwiseEvaluation) {
  std::mt19937 rng(31);
  for (int it = 0; it < 60; ++it) {
    MvTerm t1 = oracle::random_term(rng, 1, 4);
    PwL1D f = compile1(t1);
    for (int k = 0; k < 15; ++k) {
      Rational x = oracle::random_unit(rng);
      EXPECT_EQ(f(x), evaluate(t1, {x}));
    }
    MvTerm t2 = oracle::random_term(rng, 2, 3);
    PwL2D g = compile2(t2);
    for (int k = 0; k < 15; ++k) {
      Rational x = oracle::random_unit(rng), y = oracle::random_unit(rng);
      EXPECT_EQ(g({x, y}), evaluate(t2, {x, y}));
    }
  }
}

TEST(Archimedean, Cases) {
  EXPECT_TRUE(is_archimedean(PwL1D::constant(0)));
  EXPECT_TRUE(is_archimedean(PwL1D::constant(q("1/2"))));
  EXPECT_FALSE(is_archimedean(PwL1D::identity()));
}

TEST(Archimedean, AgreesWithIdempotentMultipleSearch) {
  std::mt19937 rng(32);
  for (int it = 0; it < 60; ++it) {
    PwL1D f = compile1(oracle::random_term(rng, 1, 3));
    bool found = false;
    for (long n = 1; n <= 64 && !found; ++n) {
      PwL1D nf = scalar_n(f, n);
      found = mv_oplus(nf, nf) == nf;
    }
    if (min_value(f).sign() > 0 && min_value(f) < Rational(1, 64)) continue;
    EXPECT_EQ(is_archimedean(f), found) << f.str();
  }
}

TEST(JointEta, Cases) {
  std::vector<PwL2D> xy{PwL2D::projection(1), PwL2D::projection(2)};
  auto v = fails_archimedean_joint(xy, {{1, 2}, {1, 3}});
  EXPECT_TRUE(v.fails_archimedean);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(*v.witness, (Point2{q("1/2"), q("1/3")}));
  std::vector<PwL1D> xx{PwL1D::identity(), PwL1D::identity()};
  EXPECT_FALSE(fails_archimedean_joint(xx, {{1, 2}, {1, 3}}).fails_archimedean);
  std::vector<PwL1D> small{oracle::nodes({{"0", "0"}, {"1/3", "1/3"}, {"2/3", "0"}, {"1", "0"}})};
  EXPECT_FALSE(fails_archimedean_joint(small, {{1, 2}}).fails_archimedean);
}

TEST(JointEta, AgreesWithBruteForceSearch) {
  std::mt19937 rng(33);
  for (int it = 0; it < 12; ++it) {
    PwL1D a = oracle::random_free1(rng), b = oracle::random_free1(rng);
    long D = 1;
    for (const auto* f : {&a, &b})
      for (const auto& n : f->nodes()) D = std::lcm(D, n.x.den().get_si());
    for (auto [m1, p1, m2, p2] : std::vector<std::array<long, 4>>{{1, 2, 1, 3}, {1, 3, 2, 3}, {2, 5, 1, 2}}) {
      std::vector<PwL1D> fs{a, b};
      auto v = fails_archimedean_joint(fs, {{m1, p1}, {m2, p2}});
      long grid = D * p1 * p2;
      bool brute = false;
      for (long i = 0; i <= grid && !brute; ++i) {
        Rational x(i, grid);
        brute = a(x) == Rational(m1, p1) && b(x) == Rational(m2, p2);
      }
      EXPECT_EQ(v.fails_archimedean, brute);
    }
  }
}
