#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "mvproj/chain.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"

namespace mvproj {

enum class TermOp { var, zero, one, neg, oplus, otimes, min, max, scalar };

struct TermNode;

/// Immutable MV-term; subterms are shared.
class MvTerm {
 public:
  static MvTerm var(int index) {
    if (index < 1) throw std::invalid_argument("variable index must be at least 1");
    return make(TermOp::var, index, 0, {}, {});
  }
  static MvTerm zero() { return make(TermOp::zero, 0, 0, {}, {}); }
  static MvTerm one() { return make(TermOp::one, 0, 0, {}, {}); }
  static MvTerm neg(MvTerm t) { return make(TermOp::neg, 0, 0, std::move(t), {}); }
  static MvTerm oplus(MvTerm l, MvTerm r) { return make(TermOp::oplus, 0, 0, std::move(l), std::move(r)); }
  static MvTerm otimes(MvTerm l, MvTerm r) { return make(TermOp::otimes, 0, 0, std::move(l), std::move(r)); }
  static MvTerm min(MvTerm l, MvTerm r) { return make(TermOp::min, 0, 0, std::move(l), std::move(r)); }
  static MvTerm max(MvTerm l, MvTerm r) { return make(TermOp::max, 0, 0, std::move(l), std::move(r)); }
  static MvTerm scalar(long n, MvTerm t) {
    if (n < 1) throw std::invalid_argument("scalar multiplier must be at least 1");
    return make(TermOp::scalar, 0, n, std::move(t), {});
  }

  TermOp op() const;
  int index() const;
  long multiplier() const;
  const MvTerm& left() const;
  const MvTerm& right() const;
  const TermNode* id() const { return node_.get(); }

  /// Largest variable index occurring in the term (0 for closed terms).
  int arity() const;

  friend bool operator==(const MvTerm& a, const MvTerm& b);

 private:
  static MvTerm make(TermOp op, int index, long n, std::optional<MvTerm> l, std::optional<MvTerm> r);

  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermOp op;
  int index;
  long n;
  std::optional<MvTerm> left;
  std::optional<MvTerm> right;
};

inline MvTerm MvTerm::make(TermOp op, int index, long n, std::optional<MvTerm> l, std::optional<MvTerm> r) {
  MvTerm t;
  t.node_ = std::make_shared<const TermNode>(TermNode{op, index, n, std::move(l), std::move(r)});
  return t;
}
inline TermOp MvTerm::op() const { return node_->op; }
inline int MvTerm::index() const { return node_->index; }
inline long MvTerm::multiplier() const { return node_->n; }
inline const MvTerm& MvTerm::left() const { return *node_->left; }
inline const MvTerm& MvTerm::right() const { return *node_->right; }

inline int MvTerm::arity() const {
  switch (op()) {
    case TermOp::var: return index();
    case TermOp::zero:
    case TermOp::one: return 0;
    case TermOp::neg:
    case TermOp::scalar: return left().arity();
    default: return std::max(left().arity(), right().arity());
  }
}

inline bool operator==(const MvTerm& a, const MvTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.index() != b.index() || a.multiplier() != b.multiplier()) return false;
  switch (a.op()) {
    case TermOp::var:
    case TermOp::zero:
    case TermOp::one: return true;
    case TermOp::neg:
    case TermOp::scalar: return a.left() == b.left();
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

/// Replaces every variable x_i by subs[i-1].
inline MvTerm substitute(const MvTerm& t, const std::vector<MvTerm>& subs) {
  switch (t.op()) {
    case TermOp::var:
      if (static_cast<std::size_t>(t.index()) > subs.size()) return t;
      return subs[static_cast<std::size_t>(t.index()) - 1];
    case TermOp::zero:
    case TermOp::one: return t;
    case TermOp::neg: return MvTerm::neg(substitute(t.left(), subs));
    case TermOp::scalar: return MvTerm::scalar(t.multiplier(), substitute(t.left(), subs));
    case TermOp::oplus: return MvTerm::oplus(substitute(t.left(), subs), substitute(t.right(), subs));
    case TermOp::otimes: return MvTerm::otimes(substitute(t.left(), subs), substitute(t.right(), subs));
    case TermOp::min: return MvTerm::min(substitute(t.left(), subs), substitute(t.right(), subs));
    case TermOp::max: return MvTerm::max(substitute(t.left(), subs), substitute(t.right(), subs));
  }
  return t;
}

/// (n_k (... (n_2 (n_1 x)')' ...)')' built from the multipliers of m/p; x itself when m = 1.
inline MvTerm gamma_term(long m, long p) {
  MvTerm t = MvTerm::var(1);
  for (long r : multipliers(m, p)) t = MvTerm::neg(MvTerm::scalar(r, t));
  return t;
}

/// (p x ∧ p((p-1) x)')'.
inline MvTerm lambda_term(long p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  MvTerm x = MvTerm::var(1);
  MvTerm inner = p == 2 ? x : MvTerm::scalar(p - 1, x);
  return MvTerm::neg(MvTerm::min(MvTerm::scalar(p, x), MvTerm::scalar(p, MvTerm::neg(inner))));
}

inline MvTerm eta_term(long m, long p) { return substitute(lambda_term(p), {gamma_term(m, p)}); }

/// Exact value of the term at a point.
inline Rational evaluate(const MvTerm& t, const std::vector<Rational>& args) {
  auto clamp = [](const Rational& v) { return v.sign() < 0 ? Rational(0) : (Rational(1) < v ? Rational(1) : v); };
  switch (t.op()) {
    case TermOp::var:
      if (static_cast<std::size_t>(t.index()) > args.size()) throw std::out_of_range("missing argument for variable");
      return args[static_cast<std::size_t>(t.index()) - 1];
    case TermOp::zero: return 0;
    case TermOp::one: return 1;
    case TermOp::neg: return Rational(1) - evaluate(t.left(), args);
    case TermOp::scalar: return clamp(Rational(t.multiplier()) * evaluate(t.left(), args));
    case TermOp::oplus: return clamp(evaluate(t.left(), args) + evaluate(t.right(), args));
    case TermOp::otimes: return clamp(evaluate(t.left(), args) + evaluate(t.right(), args) - Rational(1));
    case TermOp::min: return min(evaluate(t.left(), args), evaluate(t.right(), args));
    case TermOp::max: return max(evaluate(t.left(), args), evaluate(t.right(), args));
  }
  return 0;
}

namespace detail {

template <class Fn>
Fn compile_rec(const MvTerm& t, std::map<const TermNode*, Fn>& memo, const std::vector<Fn>* args = nullptr) {
  if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
  Fn out = [&]() -> Fn {
    switch (t.op()) {
      case TermOp::var:
        if (args) return args->at(static_cast<std::size_t>(t.index()) - 1);
        return Fn::projection(t.index());
      case TermOp::zero: return Fn::constant(0);
      case TermOp::one: return Fn::constant(1);
      case TermOp::neg: return mv_neg(compile_rec(t.left(), memo, args));
      case TermOp::scalar: return scalar_n(compile_rec(t.left(), memo, args), t.multiplier());
      case TermOp::oplus: return mv_oplus(compile_rec(t.left(), memo, args), compile_rec(t.right(), memo, args));
      case TermOp::otimes: return mv_odot(compile_rec(t.left(), memo, args), compile_rec(t.right(), memo, args));
      case TermOp::min: return mv_min(compile_rec(t.left(), memo, args), compile_rec(t.right(), memo, args));
      case TermOp::max: return mv_max(compile_rec(t.left(), memo, args), compile_rec(t.right(), memo, args));
    }
    throw std::logic_error("unknown term constructor");
  }();
  memo.emplace(t.id(), out);
  return out;
}

}  // namespace detail

/// McNaughton function of the term, as PwL1D or PwL2D.
template <class Fn>
Fn compile(const MvTerm& t) {
  int dim = std::is_same_v<Fn, PwL1D> ? 1 : 2;
  if (t.arity() > dim)
    throw std::out_of_range("term uses x" + std::to_string(t.arity()) + " but the domain has dimension " + std::to_string(dim));
  std::map<const TermNode*, Fn> memo;
  return detail::compile_rec<Fn>(t, memo);
}

/// The function t(a_1, ..., a_k).
template <class Fn>
Fn compile_at(const MvTerm& t, const std::vector<Fn>& args) {
  if (static_cast<std::size_t>(t.arity()) > args.size())
    throw std::out_of_range("term uses x" + std::to_string(t.arity()) + " but only " + std::to_string(args.size()) + " arguments were given");
  std::map<const TermNode*, Fn> memo;
  return detail::compile_rec<Fn>(t, memo, &args);
}

inline PwL1D compile1(const MvTerm& t) { return compile<PwL1D>(t); }
inline PwL2D compile2(const MvTerm& t) { return compile<PwL2D>(t); }

inline bool is_zero_function(const PwL1D& f) { return f == PwL1D::constant(0); }
inline bool is_zero_function(const PwL2D& f) { return min_value(f).sign() == 0 && max_value(f).sign() == 0; }

/// Some n f is idempotent; for continuous f this means f ≡ 0 or min f > 0.
template <class Fn>
bool is_archimedean(const Fn& f) {
  return is_zero_function(f) || min_value(f).sign() > 0;
}

struct EtaTarget {
  long m;
  long p;
};

inline PwL1D apply_eta(const PwL1D& eta, const PwL1D& a) { return compose1(eta, a); }
inline PwL2D apply_eta(const PwL1D& eta, const PwL2D& a) { return apply1_to_2(eta, a); }

/// ⋁_i η_{m_i,p_i}(a_i).
template <class Fn>
Fn joint_eta_element(const std::vector<Fn>& a, const std::vector<EtaTarget>& targets) {
  if (a.empty() || a.size() != targets.size()) throw std::invalid_argument("need one target per function");
  std::optional<Fn> join;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Fn term = apply_eta(compile1(eta_term(targets[i].m, targets[i].p)), a[i]);
    join = join ? mv_max(*join, term) : term;
  }
  return *join;
}

struct JointVerdict {
  bool fails_archimedean = false;
  std::optional<Point2> witness;  // common solution of a_i = m_i/p_i; 1-D witnesses have y = 0
};

inline CellComplex complex_intersection(const CellComplex& a, const CellComplex& b) {
  std::vector<ConvexCell> cells;
  for (const auto& ca : a.cells())
    for (const auto& cb : b.cells())
      if (auto c = cell_intersect(ca, cb)) cells.push_back(std::move(*c));
  return CellComplex(std::move(cells));
}

inline std::optional<Point2> lex_least_point(const CellComplex& c) {
  std::optional<Point2> best;
  for (const auto& cell : c.cells())
    for (const auto& v : cell.vertices())
      if (!best || v < *best) best = v;
  return best;
}

/// Lexicographically least x̄ with a_i(x̄) = m_i/p_i for all i.
template <class Fn>
std::optional<Point2> common_level_point(const std::vector<Fn>& a, const std::vector<EtaTarget>& targets) {
  std::optional<CellComplex> acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CellComplex ls = level_set(a[i], Rational(targets[i].m, targets[i].p));
    acc = acc ? complex_intersection(*acc, ls) : ls;
    if (acc->empty()) return std::nullopt;
  }
  return lex_least_point(*acc);
}

/// Whether the η-join fails to be archimedean, cross-checked against exact level-set intersection.
template <class Fn>
JointVerdict fails_archimedean_joint(const std::vector<Fn>& a, const std::vector<EtaTarget>& targets) {
  Fn join = joint_eta_element(a, targets);
  JointVerdict v;
  v.fails_archimedean = !is_archimedean(join);
  v.witness = common_level_point(a, targets);
  if (v.fails_archimedean != v.witness.has_value())
    throw std::logic_error("archimedean test and level-set intersection disagree");
  return v;
}

}  // namespace mvproj
