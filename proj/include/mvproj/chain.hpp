#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvproj {

/// The element i/n of the finite Łukasiewicz chain with n+1 elements.
struct ChainElement {
  long i;
  long n;

  ChainElement(long i_, long n_) : i(i_), n(n_) {
    if (n < 1) throw std::invalid_argument("chain modulus must be positive");
    if (i < 0 || i > n) throw std::invalid_argument("chain element " + std::to_string(i) + "/" + std::to_string(n) + " out of range");
  }
  friend bool operator==(const ChainElement&, const ChainElement&) = default;
  std::string str() const { return std::to_string(i) + "/" + std::to_string(n); }
};

struct TStep {
  ChainElement next;
  long multiplier;
};

/// t(a) = (r a)' with r the largest integer such that r a < 1; undefined at 0 and 1.
inline std::optional<TStep> t_step(const ChainElement& a) {
  if (a.i == 0 || a.i == a.n) return std::nullopt;
  long r = (a.n + a.i - 1) / a.i - 1;
  return TStep{ChainElement(a.n - r * a.i, a.n), r};
}

struct Orbit {
  std::vector<ChainElement> elements;  // a, t(a), t²(a), ...
  std::vector<long> multipliers;
  std::optional<long> k;  // steps to reach 1/n, if ever
};

inline Orbit orbit(const ChainElement& a) {
  Orbit o;
  std::set<long> seen;
  ChainElement cur = a;
  for (;;) {
    o.elements.push_back(cur);
    if (cur.i == 1) {
      o.k = static_cast<long>(o.multipliers.size());
      return o;
    }
    if (!seen.insert(cur.i).second) return o;
    auto s = t_step(cur);
    if (!s) return o;
    o.multipliers.push_back(s->multiplier);
    cur = s->next;
  }
}

/// Smallest k with t^k(a) = 1/n, if any.
inline std::optional<long> is_cyclic_generator(const ChainElement& a) { return orbit(a).k; }

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Multipliers of the t-orbit of m/p down to 1/p.
inline std::vector<long> multipliers(long m, long p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (m <= 0 || m >= p) throw std::invalid_argument("need 0 < m < p, got m = " + std::to_string(m) + ", p = " + std::to_string(p));
  Orbit o = orbit(ChainElement(m, p));
  if (!o.k) throw std::logic_error(std::to_string(m) + "/" + std::to_string(p) + " is not a cyclic generator");
  return o.multipliers;
}

}  // namespace mvproj
