#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvproj {

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. Serializes as "p/q" (or "p" when q = 1).
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpz_class& z) : q_(z) {}
  static Rational from_mpq(mpq_class q) {
    Rational r;
    r.q_ = std::move(q);
    r.q_.canonicalize();
    return r;
  }

  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    auto integer = [&](std::string_view s, bool allow_sign) -> mpz_class {
      s = trim(s);
      std::string digits(s);
      std::size_t start = 0;
      if (allow_sign && !digits.empty() && (digits[0] == '-' || digits[0] == '+')) start = 1;
      if (start == digits.size()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      for (std::size_t i = start; i < digits.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])))
          throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      }
      if (digits[0] == '+') digits.erase(0, 1);
      return mpz_class(digits, 10);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(integer(text, true));
    mpz_class num = integer(text.substr(0, slash), true);
    mpz_class den = integer(text.substr(slash + 1), false);
    if (den == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
    return from_mpq(mpq_class(num, den));
  }

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& mpq() const { return q_; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  mpz_class floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }
  mpz_class ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }

  Rational operator-() const { return raw(-q_); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return raw(a.q_ + b.q_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return raw(a.q_ - b.q_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return raw(a.q_ * b.q_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw std::domain_error("rational division by zero");
    return raw(a.q_ / b.q_);
  }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  template <class Expr>
  static Rational raw(Expr&& e) {
    Rational r;
    r.q_ = std::forward<Expr>(e);
    return r;
  }

  mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace mvproj
