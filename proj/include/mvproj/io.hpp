#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvproj/builders.hpp"
#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"
#include "mvproj/term.hpp"

namespace mvproj {

using json = nlohmann::ordered_json;

/// Malformed or invalid input (exit code 2 in the CLI).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Values

inline json to_json(const Rational& r) { return r.str(); }
inline json to_json(const Point2& p) { return json::array({p.x.str(), p.y.str()}); }

inline Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::exception& e) {
    throw InputError(std::string("bad rational: ") + e.what());
  }
  throw InputError("expected a rational (string \"p/q\" or integer), got " + j.dump());
}

inline Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("expected a point [x, y], got " + j.dump());
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline json to_json(const AffineForm2& f) {
  json out = json::array();
  for (const auto* c : {&f.a, &f.b, &f.c}) {
    if (c->is_integer() && c->num().fits_slong_p()) out.push_back(c->num().get_si());
    else out.push_back(c->str());
  }
  return out;
}

inline AffineForm2 form_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("expected a form [a, b, c], got " + j.dump());
  return {rational_from_json(j[0]), rational_from_json(j[1]), rational_from_json(j[2])};
}

inline json to_json(const ConvexCell& c) {
  json v = json::array();
  for (const auto& p : c.vertices()) v.push_back(to_json(p));
  return {{"kind", to_string(c.kind())}, {"vertices", v}};
}

inline json to_json(const CellComplex& k) {
  json out = json::array();
  for (const auto& c : k.cells()) out.push_back(to_json(c));
  return out;
}

inline json to_json(const PwL1D& f) {
  json out = json::array();
  for (const auto& n : f.nodes()) out.push_back(json::array({n.x.str(), n.y.str()}));
  return out;
}

inline json to_json(const PwL2D& f) {
  json out = json::array();
  for (const auto& pc : f.pieces()) {
    json tri = json::array();
    for (const auto& v : pc.cell.vertices()) tri.push_back(to_json(v));
    out.push_back({{"triangle", tri}, {"form", to_json(pc.form)}});
  }
  return out;
}

inline json to_json(const SubstitutionPair& p) { return {{"d1", to_json(p.d1)}, {"d2", to_json(p.d2)}}; }

inline PwL1D pwl1d_from_json(const json& j, bool check = true) {
  if (!j.is_array() || j.empty()) throw InputError("1-D function must be a non-empty list of [x, y] nodes");
  std::vector<Node1> nodes;
  for (const auto& n : j) {
    Point2 p = point_from_json(n);
    nodes.push_back({p.x, p.y});
  }
  PwL1D f;
  try {
    f = PwL1D::from_nodes(std::move(nodes));
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (check)
    if (auto v = validate(f); !v.empty()) throw InputError("not a McNaughton function: " + v.front());
  return f;
}

inline PwL2D pwl2d_from_json(const json& j, bool check = true) {
  if (!j.is_array() || j.empty()) throw InputError("2-D function must be a non-empty list of {triangle, form} pieces");
  std::vector<Piece2> pieces;
  for (const auto& pc : j) {
    if (!pc.is_object() || !pc.contains("triangle") || !pc.contains("form"))
      throw InputError("piece must have \"triangle\" and \"form\": " + pc.dump());
    const json& t = pc["triangle"];
    if (!t.is_array() || t.size() != 3) throw InputError("triangle must list 3 points: " + t.dump());
    pieces.push_back({ConvexCell::hull({point_from_json(t[0]), point_from_json(t[1]), point_from_json(t[2])}),
                      form_from_json(pc["form"])});
  }
  PwL2D f = PwL2D::from_pieces(std::move(pieces));
  if (check)
    if (auto v = validate(f); !v.empty()) throw InputError("not a McNaughton function: " + v.front());
  return f;
}

inline SubstitutionPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d1") || !j.contains("d2")) throw InputError("pair must have \"d1\" and \"d2\"");
  SubstitutionPair p{pwl2d_from_json(j["d1"]), pwl2d_from_json(j["d2"])};
  if (auto v = validate(p); !v.empty()) throw InputError(v.front());
  return p;
}

inline json to_json(const RectTypeSpec& s) {
  return {{"f1", to_json(s.f1)}, {"f2", to_json(s.f2)}, {"g1", to_json(s.g1)}, {"g2", to_json(s.g2)}};
}

inline RectTypeSpec rect_spec_from_json(const json& j) {
  for (const char* k : {"f1", "f2", "g1", "g2"})
    if (!j.is_object() || !j.contains(k)) throw InputError(std::string("case-i spec is missing \"") + k + "\"");
  return {pwl1d_from_json(j["f1"]), pwl1d_from_json(j["f2"]), pwl1d_from_json(j["g1"]), pwl1d_from_json(j["g2"])};
}

inline std::vector<TriangleSpec> fan_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("triangles") ? j["triangles"] : j;
  if (!list.is_array() || list.empty()) throw InputError("fan must be a non-empty list of triangles");
  auto ints = [](const json& v, std::size_t n, const char* name) {
    if (!v.is_array() || v.size() != n) throw InputError(std::string(name) + " must list " + std::to_string(n) + " integers");
    std::vector<long> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw InputError(std::string(name) + " must contain integers");
      out.push_back(x.get<long>());
    }
    return out;
  };
  std::vector<TriangleSpec> out;
  for (const auto& t : list) {
    for (const char* k : {"OA", "OB", "AB"})
      if (!t.is_object() || !t.contains(k)) throw InputError(std::string("triangle is missing \"") + k + "\"");
    auto oa = ints(t["OA"], 2, "OA"), ob = ints(t["OB"], 2, "OB"), ab = ints(t["AB"], 3, "AB");
    TriangleSpec s{oa[0], oa[1], ob[0], ob[1], ab[0], ab[1], ab[2]};
    auto opt = [&](const char* k, std::optional<long>& dst) {
      if (t.contains(k)) {
        if (!t[k].is_number_integer()) throw InputError(std::string(k) + " must be an integer");
        dst = t[k].get<long>();
      }
    };
    opt("s", s.s);
    opt("s_prime", s.s_prime);
    opt("l", s.l);
    opt("m", s.m);
    opt("t", s.t);
    opt("t_hat", s.t_hat);
    out.push_back(s);
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Term syntax: x1 x2 0 1, postfix ', prefix n*, infix (.) (+) /\ \/ from tightest to loosest.

class TermSyntaxError : public InputError {
 public:
  TermSyntaxError(const std::string& msg, int line, int column)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

namespace detail {

class TermParser {
 public:
  TermParser(const std::string& src, int arity) : src_(src), arity_(arity) {}

  MvTerm parse() {
    MvTerm t = join();
    skip();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw TermSyntaxError(msg, line, col);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip();
    if (src_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  bool peek_operator(const std::string& tok) {
    skip();
    return src_.compare(pos_, tok.size(), tok) == 0;
  }

  long number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    std::string digits = src_.substr(start, pos_ - start);
    if (digits.size() > 9) {
      pos_ = start;
      fail("number too large");
    }
    return std::stol(digits);
  }

  MvTerm join() {
    MvTerm t = meet();
    while (accept("\\/")) t = MvTerm::max(t, meet());
    return t;
  }

  MvTerm meet() {
    MvTerm t = sum();
    while (accept("/\\")) t = MvTerm::min(t, sum());
    return t;
  }

  MvTerm sum() {
    MvTerm t = product();
    while (accept("(+)")) t = MvTerm::oplus(t, product());
    return t;
  }

  MvTerm product() {
    MvTerm t = unary();
    while (accept("(.)")) t = MvTerm::otimes(t, unary());
    return t;
  }

  MvTerm unary() {
    skip();
    if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      std::size_t save = pos_;
      long n = number();
      if (accept("*")) {
        if (n < 1) {
          pos_ = save;
          fail("scalar multiplier must be at least 1");
        }
        return MvTerm::scalar(n, unary());
      }
      pos_ = save;
    }
    MvTerm t = atom();
    while (accept("'")) t = MvTerm::neg(t);
    return t;
  }

  MvTerm atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (peek_operator("(+)") || peek_operator("(.)")) fail("operator without left operand");
    if (accept("(")) {
      MvTerm t = join();
      if (!accept(")")) fail("expected ')'");
      return t;
    }
    std::size_t var_at = pos_;
    if (accept("x")) {
      long i = number();
      if (i < 1 || i > arity_) {
        pos_ = var_at;
        fail("variable x" + std::to_string(i) + " exceeds arity " + std::to_string(arity_));
      }
      return MvTerm::var(static_cast<int>(i));
    }
    std::size_t at = pos_;
    if (std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      long v = number();
      if (v == 0) return MvTerm::zero();
      if (v == 1) return MvTerm::one();
      pos_ = at;
      fail("constant must be 0 or 1");
    }
    fail("unexpected '" + std::string(1, src_[pos_]) + "'");
  }

  const std::string& src_;
  int arity_;
  std::size_t pos_ = 0;
};

inline bool binary_op(TermOp op) {
  return op == TermOp::oplus || op == TermOp::otimes || op == TermOp::min || op == TermOp::max;
}

}  // namespace detail

inline MvTerm parse_term(const std::string& src, int arity) {
  if (arity < 1 || arity > 2) throw std::invalid_argument("arity must be 1 or 2");
  return detail::TermParser(src, arity).parse();
}

inline std::string print_term(const MvTerm& t) {
  auto wrap_binary = [](const MvTerm& u) {
    std::string s = print_term(u);
    return detail::binary_op(u.op()) ? "(" + s + ")" : s;
  };
  switch (t.op()) {
    case TermOp::var: return "x" + std::to_string(t.index());
    case TermOp::zero: return "0";
    case TermOp::one: return "1";
    case TermOp::neg: {
      TermOp c = t.left().op();
      bool bare = c == TermOp::var || c == TermOp::zero || c == TermOp::one || c == TermOp::neg;
      return (bare ? print_term(t.left()) : "(" + print_term(t.left()) + ")") + "'";
    }
    case TermOp::scalar: {
      std::string s = wrap_binary(t.left());
      return std::to_string(t.multiplier()) + "*" + s;
    }
    case TermOp::oplus: return wrap_binary(t.left()) + " (+) " + wrap_binary(t.right());
    case TermOp::otimes: return wrap_binary(t.left()) + " (.) " + wrap_binary(t.right());
    case TermOp::min: return wrap_binary(t.left()) + " /\\ " + wrap_binary(t.right());
    case TermOp::max: return wrap_binary(t.left()) + " \\/ " + wrap_binary(t.right());
  }
  return "?";
}

}  // namespace mvproj
