#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mvproj/mvproj.hpp"

namespace oracle {

using mvproj::MvTerm;
using mvproj::Point2;
using mvproj::PwL1D;
using mvproj::Rational;

inline Rational q(const std::string& s) { return Rational::parse(s); }

/// PwL1D from string nodes, e.g. nodes({{"0","0"},{"1/2","1"},{"1","0"}}).
inline PwL1D nodes(const std::vector<std::pair<std::string, std::string>>& v) {
  std::vector<mvproj::Node1> ns;
  for (const auto& [x, y] : v) ns.push_back({q(x), q(y)});
  return PwL1D::from_nodes(std::move(ns));
}

inline std::string data(const std::string& name) { return std::string(MVPROJ_DATA_DIR) + "/" + name; }

inline mvproj::RectTypeSpec zigzag_spec() {
  return {nodes({{"0", "0"}, {"1/3", "1/3"}, {"1/2", "0"}, {"2/3", "1/3"}, {"1", "0"}}),
          nodes({{"0", "1"}, {"1/2", "1/2"}, {"1", "1"}}),
          nodes({{"0", "0"}, {"1/4", "0"}, {"1/3", "1/3"}, {"1/2", "0"}, {"2/3", "1/3"}, {"1", "0"}}),
          nodes({{"0", "1"}, {"1/3", "1"}, {"2/5", "4/5"}, {"1/2", "1"}, {"2/3", "1"}, {"5/7", "6/7"}, {"3/4", "1"}, {"1", "1"}})};
}

inline mvproj::RectTypeSpec diagonals_spec() {
  PwL1D low = nodes({{"0", "0"}, {"1/2", "1/2"}, {"1", "0"}});
  PwL1D high = nodes({{"0", "1"}, {"1/2", "1/2"}, {"1", "1"}});
  return {low, high, low, high};
}

// ---------------------------------------------------------------------------
// Piecewise tables: every row whose condition holds must give the value;
// the fallback applies only when no row holds.

using Fn2 = std::function<Rational(const Rational&, const Rational&)>;
using Cond2 = std::function<bool(const Rational&, const Rational&)>;

struct TableRow {
  Fn2 value;
  Cond2 when;
};

struct Table {
  std::vector<TableRow> rows;
  Fn2 otherwise;

  /// First point of the D-grid where `built` disagrees with the table.
  std::optional<Point2> first_mismatch(const mvproj::PwL2D& built, long D) const {
    auto values = mvproj::sample_grid(built, D);
    for (long j = 0; j <= D; ++j) {
      for (long i = 0; i <= D; ++i) {
        Rational x(i, D), y(j, D);
        Rational got(values[static_cast<std::size_t>(j * (D + 1) + i)], D);
        bool matched = false;
        for (const auto& r : rows) {
          if (!r.when(x, y)) continue;
          matched = true;
          if (r.value(x, y) != got) return Point2{x, y};
        }
        if (!matched && otherwise(x, y) != got) return Point2{x, y};
      }
    }
    return std::nullopt;
  }
};

inline Rational R(long n, long d = 1) { return Rational(n, d); }

inline Table zigzag_d1_table() {
  using V = const Rational&;
  return {{
              {[](V, V y) { return R(4) * y - R(1); }, [](V x, V y) { return x <= R(4) * y - R(1) && y <= R(1, 3); }},
              {[](V, V y) { return R(1) - R(2) * y; }, [](V x, V y) { return x <= R(1) - R(2) * y && y >= R(1, 3); }},
              {[](V, V y) { return R(2) * y - R(1); }, [](V x, V y) { return x <= R(2) * y - R(1) && y <= R(2, 3); }},
              {[](V, V y) { return R(1) - y; }, [](V x, V y) { return x <= R(1) - y && y >= R(2, 3); }},
              {[](V, V y) { return R(2) - R(3) * y; }, [](V x, V y) { return x >= R(2) - R(3) * y && y <= R(2, 5); }},
              {[](V, V y) { return R(2) * y; }, [](V x, V y) { return x >= R(2) * y && y >= R(2, 5); }},
              {[](V, V y) { return R(3) - R(3) * y; }, [](V x, V y) { return x >= R(3) - R(3) * y && y <= R(5, 7); }},
              {[](V, V y) { return R(4) * y - R(2); }, [](V x, V y) { return x >= R(4) * y - R(2) && y >= R(5, 7); }},
          },
          [](V x, V) { return x; }};
}

inline Table zigzag_d2_table() {
  using V = const Rational&;
  return {{
              {[](V x, V) { return x; }, [](V x, V y) { return y <= x && x <= R(1, 3); }},
              {[](V x, V) { return R(1) - R(2) * x; }, [](V x, V y) { return y <= R(1) - R(2) * x && x >= R(1, 3); }},
              {[](V x, V) { return R(2) * x - R(1); }, [](V x, V y) { return y <= R(2) * x - R(1) && x <= R(2, 3); }},
              {[](V x, V) { return R(1) - x; }, [](V x, V y) { return y <= R(1) - x && x >= R(2, 3); }},
              {[](V x, V) { return R(1) - x; }, [](V x, V y) { return y >= R(1) - x && x <= R(1, 2); }},
              {[](V x, V) { return x; }, [](V x, V y) { return y >= x && x >= R(1, 2); }},
          },
          [](V, V y) { return y; }};
}

/// d2 of the case-ii construction with (a, b, c, d) = (2, 7, 3, 8).
inline Table case_ii_2738_d2_table() {
  using V = const Rational&;
  return {{
              {[](V x, V y) { return R(2) * (x - R(3) * y); },
               [](V x, V y) {
                 return y <= R(2, 7) * x && y <= R(3) - R(5) * x && y >= x / R(6) && y >= (R(3) * x - R(1)) / R(6);
               }},
              {[](V x, V y) { return R(3) * (R(1) - x) - R(7) * y; },
               [](V x, V y) {
                 return y >= R(3) - R(5) * x && y <= R(3) * (R(1) - x) / R(8) && y >= R(2) * (R(1) - x) / R(7);
               }},
              {[](V x, V) { return x; }, [](V x, V y) { return y <= x / R(6) && x <= R(1, 2); }},
              {[](V x, V) { return R(1) - x; },
               [](V x, V y) { return x >= R(1, 2) && y <= (R(3) * x - R(1)) / R(6) && y <= R(2) * (R(1) - x) / R(7); }},
              {[](V, V y) { return y; }, [](V x, V y) { return y >= R(2, 7) * x || y >= R(3) * (R(1) - x) / R(8); }},
          },
          [](V, V) { return R(-1); }};
}

// ---------------------------------------------------------------------------
// Pointwise MV operations on rationals.

inline Rational clamp01(const Rational& v) { return v < R(0) ? R(0) : (R(1) < v ? R(1) : v); }
inline Rational oplus(const Rational& a, const Rational& b) { return clamp01(a + b); }
inline Rational odot(const Rational& a, const Rational& b) { return clamp01(a + b - R(1)); }
inline Rational neg(const Rational& a) { return R(1) - a; }

/// Extended Euclid by the textbook recursion, independent of the library.
inline std::pair<long, long> bezout(long a, long b) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long qq = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - qq * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - qq * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - qq * t);
  }
  return {old_s, old_t};
}

// ---------------------------------------------------------------------------
// Random generators (fixed seeds in callers).

/// Random valid element of Free_1 vanishing at 0: a chain of integer lines crossing inside [0,1].
inline PwL1D random_free1(std::mt19937& rng) {
  std::uniform_int_distribution<int> slope0(0, 3), coef(-4, 4), steps(0, 5);
  for (;;) {
    long s = slope0(rng), c = 0;
    Rational x = 0;
    std::vector<mvproj::Node1> ns{{0, 0}};
    int n = steps(rng);
    bool ok = true;
    for (int k = 0; k < n; ++k) {
      std::vector<std::tuple<long, long, Rational>> cand;
      for (long s2 = -4; s2 <= 4; ++s2) {
        if (s2 == s) continue;
        for (long c2 = -4; c2 <= 4; ++c2) {
          Rational xs(c2 - c, s - s2);
          if (!(x < xs && xs < R(1))) continue;
          Rational ys = R(s) * xs + R(c);
          if (ys < R(0) || R(1) < ys) continue;
          cand.emplace_back(s2, c2, xs);
        }
      }
      if (cand.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
      auto [s2, c2, xs] = cand[pick(rng)];
      ns.push_back({xs, R(s) * xs + R(c)});
      s = s2;
      c = c2;
      x = xs;
    }
    Rational end = R(s) + R(c);
    if (end < R(0) || R(1) < end) ok = false;
    if (!ok) continue;
    ns.push_back({1, end});
    return PwL1D::from_nodes(std::move(ns));
  }
}

inline MvTerm random_term(std::mt19937& rng, int arity, int depth) {
  std::uniform_int_distribution<int> leaf(0, 9);
  if (depth == 0) {
    int r = leaf(rng);
    if (r == 0) return MvTerm::zero();
    if (r == 1) return MvTerm::one();
    return MvTerm::var(1 + (arity == 2 ? r % 2 : 0));
  }
  std::uniform_int_distribution<int> op(0, 7);
  switch (op(rng)) {
    case 0: return MvTerm::neg(random_term(rng, arity, depth - 1));
    case 1: {
      std::uniform_int_distribution<long> n(1, 4);
      return MvTerm::scalar(n(rng), random_term(rng, arity, depth - 1));
    }
    case 2: return MvTerm::oplus(random_term(rng, arity, depth - 1), random_term(rng, arity, depth - 1));
    case 3: return MvTerm::otimes(random_term(rng, arity, depth - 1), random_term(rng, arity, depth - 1));
    case 4: return MvTerm::min(random_term(rng, arity, depth - 1), random_term(rng, arity, depth - 1));
    case 5: return MvTerm::max(random_term(rng, arity, depth - 1), random_term(rng, arity, depth - 1));
    default: return random_term(rng, arity, 0);
  }
}

inline Rational random_unit(std::mt19937& rng, long max_den = 40) {
  std::uniform_int_distribution<long> den(1, max_den);
  long d = den(rng);
  std::uniform_int_distribution<long> num(0, d);
  return Rational(num(rng), d);
}

inline std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  for (long p = 2; p <= n; ++p) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

}  // namespace oracle
