#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace mvproj;
using oracle::nodes;
using oracle::q;

namespace {

PwL1D iso_f() { return nodes({{"0", "0"}, {"1/6", "1"}, {"1/4", "0"}, {"1/3", "1"}, {"1", "1"}}); }
PwL1D iso_g() { return nodes({{"0", "0"}, {"1/6", "2/3"}, {"1/4", "0"}, {"3/8", "1"}, {"1", "1"}}); }
PwL1D iso_f1() { return nodes({{"0", "0"}, {"1/3", "1"}, {"1", "1"}}); }
PwL1D iso_g1() { return nodes({{"0", "0"}, {"1/2", "1"}, {"1", "1"}}); }
PwL1D diag_f() { return nodes({{"0", "0"}, {"1/3", "1"}, {"2/3", "0"}, {"1", "1"}}); }
PwL1D diag_g() { return nodes({{"0", "0"}, {"1/3", "1"}, {"1/2", "1/2"}, {"2/3", "1"}, {"1", "0"}}); }

std::vector<Point2> pts(const std::vector<std::pair<std::string, std::string>>& v) {
  std::vector<Point2> out;
  for (const auto& [x, y] : v) out.push_back({q(x), q(y)});
  return out;
}

}  // namespace

TEST(Extremals, Diagonals) {
  EXPECT_EQ(extremals(diag_f(), diag_g()), pts({{"0", "0"}, {"1", "1"}, {"1/2", "1/2"}, {"0", "1"}, {"1", "0"}}));
}

TEST(Extremals, Identity) { EXPECT_EQ(extremals(PwL1D::identity(), PwL1D::identity()), pts({{"0", "0"}, {"1", "1"}})); }

TEST(Extremals, Folded) {
  EXPECT_EQ(extremals(iso_f(), iso_g()), pts({{"0", "0"}, {"1", "2/3"}, {"0", "0"}, {"1", "2/3"}, {"1", "1"}}));
}

TEST(Extremals, RequiresNormalization) {
  EXPECT_THROW(extremals(PwL1D::constant(1), PwL1D::identity()), std::invalid_argument);
}

TEST(Extremals, ContainsEveryBreakpointImage) {
  std::mt19937 rng(41);
  for (int it = 0; it < 40; ++it) {
    PwL1D f = oracle::random_free1(rng), g = oracle::random_free1(rng);
    CellComplex range = pair_range(f, g);
    for (const auto* h : {&f, &g})
      for (const auto& n : h->nodes()) EXPECT_TRUE(range.contains({f(n.x), g(n.x)}));
    for (int k = 0; k < 10; ++k) {
      Rational x = oracle::random_unit(rng);
      EXPECT_TRUE(range.contains({f(x), g(x)}));
    }
  }
}

TEST(PairRange, Cases) {
  EXPECT_EQ(pair_range(PwL1D::identity(), PwL1D::identity()), CellComplex::single(ConvexCell::segment({0, 0}, {1, 1})));
  CellComplex both({ConvexCell::segment({0, 0}, {1, 1}), ConvexCell::segment({0, 1}, {1, 0})});
  EXPECT_TRUE(same_point_set(pair_range(diag_f(), diag_g()), both));
  EXPECT_TRUE(same_point_set(pair_range(iso_f(), iso_g()), pair_range(iso_f1(), iso_g1())));
}

TEST(PairRange, InvariantUnderReparameterization) {
  std::mt19937 rng(42);
  for (int it = 0; it < 30; ++it) {
    PwL1D f = oracle::random_free1(rng), g = oracle::random_free1(rng);
    // Monotone onto reparameterizations by integer pieces: min(1, kx) and x ⊙ x-type shapes.
    for (const PwL1D& phi : {nodes({{"0", "0"}, {"1/2", "1"}, {"1", "1"}}), nodes({{"0", "0"}, {"1/3", "1"}, {"1", "1"}})}) {
      EXPECT_TRUE(same_point_set(pair_range(f, g), pair_range(compose1(f, phi), compose1(g, phi))));
      EXPECT_TRUE(iso_by_range(f, g, compose1(f, phi), compose1(g, phi)));
    }
  }
}

TEST(IsoByRange, Cases) {
  EXPECT_TRUE(iso_by_range(iso_f(), iso_g(), iso_f1(), iso_g1()));
  EXPECT_TRUE(iso_by_range(iso_f(), iso_g(), iso_f(), iso_g()));
  PwL1D perturbed = nodes({{"0", "0"}, {"1/3", "1"}, {"1", "1"}});
  EXPECT_FALSE(iso_by_range(iso_f(), iso_g(), iso_f1(), perturbed));
}
