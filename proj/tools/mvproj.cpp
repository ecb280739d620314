#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "mvproj/mvproj.hpp"

using namespace mvproj;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInputError = 2 };

struct Output {
  bool as_json = false;
  bool color = false;

  std::string verdict(bool good, const std::string& text) const {
    if (!color) return text;
    return std::string(good ? "\033[32m" : "\033[31m") + text + "\033[0m";
  }
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string point_list(const std::vector<Point2>& pts) {
  std::vector<std::string> s;
  for (const auto& p : pts) s.push_back(p.str());
  return join(s, ", ");
}

std::string complex_lines(const CellComplex& k) {
  std::string out;
  for (const auto& c : k.cells()) out += "  " + c.str() + "\n";
  return out;
}

using AnyFunction = std::variant<PwL1D, PwL2D>;

AnyFunction load_function(const std::string& path) {
  json j = read_json_file(path);
  if (j.is_array() && !j.empty() && j[0].is_object()) return pwl2d_from_json(j);
  return pwl1d_from_json(j);
}

PwL1D load_1d(const std::string& path) { return pwl1d_from_json(read_json_file(path)); }

std::pair<long, long> parse_fraction(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw InputError("expected m/p, got " + s);
  try {
    std::size_t used = 0;
    long m = std::stol(s.substr(0, slash), &used);
    if (used != slash) throw InputError("expected m/p, got " + s);
    std::string rest = s.substr(slash + 1);
    long p = std::stol(rest, &used);
    if (used != rest.size()) throw InputError("expected m/p, got " + s);
    return {m, p};
  } catch (const std::logic_error&) {
    throw InputError("expected m/p, got " + s);
  }
}

std::vector<Rational> parse_point(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(Rational::parse(part));
    } catch (const std::exception& e) {
      throw InputError("bad coordinate '" + part + "': " + e.what());
    }
  }
  if (out.empty() || out.size() > 2) throw InputError("point must be x or x,y");
  return out;
}

void emit(const Output& out, const json& j, const std::string& text) {
  if (out.as_json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

json verdict_json(const ProjectivityVerdict& v) {
  json j{{"projective", v.projective},
         {"equalizer_cells", v.equalizer.size()},
         {"equalizer", to_json(v.equalizer)},
         {"origin_in_equalizer", v.origin_in_equalizer},
         {"equalizer_connected", v.equalizer_connected}};
  j["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  j["witness_image"] = v.witness_image ? to_json(*v.witness_image) : json(nullptr);
  j["internal_error"] = v.internal_error ? json(*v.internal_error) : json(nullptr);
  return j;
}

std::string verdict_text(const Output& out, const ProjectivityVerdict& v) {
  std::string s = out.verdict(v.projective, std::string("projective: ") + (v.projective ? "true" : "false")) + "\n";
  s += "equalizer cells: " + std::to_string(v.equalizer.size()) + "\n";
  if (v.witness) s += "witness: " + v.witness->str() + "\n";
  if (v.witness_image) s += "image point outside d(K): " + v.witness_image->str() + "\n";
  if (v.internal_error) s += "internal error: " + *v.internal_error + "\n";
  return s;
}

json regions_json(const std::vector<LabeledRegion>& regions) {
  json arr = json::array();
  for (const auto& r : regions)
    arr.push_back({{"label", r.label}, {"cell", to_json(r.cell)}, {"d1", to_json(r.d1)}, {"d2", to_json(r.d2)}});
  return arr;
}

std::string regions_text(const std::vector<LabeledRegion>& regions) {
  std::string s;
  for (const auto& r : regions) s += "  " + r.label + " " + r.cell.str() + "  d1 = " + r.d1.str() + "  d2 = " + r.d2.str() + "\n";
  return s;
}

json optional_point(const std::optional<Point2>& p) { return p ? to_json(*p) : json(nullptr); }
json optional_rational(const std::optional<Rational>& r) { return r ? to_json(*r) : json(nullptr); }
json optional_long(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }

struct BuildOptions {
  std::string out_path;
  std::string svg_path;
};

int finish_build(const Output& out, const BuildOptions& opt, const BuiltPair& b, json j, std::string text, const std::string& title) {
  j["regions"] = regions_json(b.regions);
  j["target_equalizer"] = to_json(b.target_equalizer);
  j["verdict"] = verdict_json(b.verdict);
  text += "regions:\n" + regions_text(b.regions);
  text += "equalizer:\n" + complex_lines(b.verdict.equalizer);
  text += verdict_text(out, b.verdict);
  if (!opt.out_path.empty()) write_text_file(opt.out_path, to_json(b.pair).dump(2) + "\n");
  if (!opt.svg_path.empty()) write_text_file(opt.svg_path, svg_construction(title, b));
  emit(out, j, text);
  return b.verdict.projective ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact McNaughton functions and projective generators"};
  app.fallthrough();
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.as_json, "Machine-readable output");
  const char* env = std::getenv("MVPROJ_COLOR");
  out.color = isatty(STDOUT_FILENO) && !(env && std::string(env) == "0");

  int code = kOk;

  // chain orbit m/p
  auto* chain = app.add_subcommand("chain", "Finite chains");
  chain->require_subcommand(1);
  std::string element;
  auto* orbit_cmd = chain->add_subcommand("orbit", "Orbit of m/p under t");
  orbit_cmd->add_option("element", element, "m/p")->required();
  orbit_cmd->callback([&] {
    auto [m, p] = parse_fraction(element);
    Orbit o;
    try {
      o = orbit(ChainElement(m, p));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    std::vector<std::string> els;
    json jel = json::array();
    for (const auto& e : o.elements) {
      els.push_back(e.str());
      jel.push_back(e.str());
    }
    std::vector<std::string> ms;
    for (long r : o.multipliers) ms.push_back(std::to_string(r));
    std::string text = join(els, " → ");
    if (o.k) text += " [k = " + std::to_string(*o.k) + ", multipliers = (" + join(ms, ", ") + ")]\n";
    else text += " [" + out.verdict(false, "not a cyclic generator") + "]\n";
    json j{{"element", ChainElement(m, p).str()}, {"orbit", jel}, {"k", optional_long(o.k)}, {"multipliers", o.multipliers},
           {"cyclic_generator", o.k.has_value()}};
    emit(out, j, text);
    code = o.k ? kOk : kNegative;
  });

  // eta build m p
  auto* eta = app.add_subcommand("eta", "Terms vanishing exactly at m/p");
  eta->require_subcommand(1);
  long em = 0, ep = 0;
  bool do_compile = false;
  std::string eta_svg;
  auto* eta_build = eta->add_subcommand("build", "Print gamma, lambda and eta terms");
  eta_build->add_option("m", em)->required();
  eta_build->add_option("p", ep)->required();
  eta_build->add_flag("--compile", do_compile, "Compile the terms to McNaughton functions");
  eta_build->add_option("--svg", eta_svg, "Plot the compiled functions");
  eta_build->callback([&] {
    MvTerm g, l, t;
    try {
      g = gamma_term(em, ep);
      l = lambda_term(ep);
      t = eta_term(em, ep);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    json j{{"m", em}, {"p", ep}, {"gamma", print_term(g)}, {"lambda", print_term(l)}, {"eta", print_term(t)}};
    std::string text = "gamma = " + print_term(g) + "\nlambda = " + print_term(l) + "\neta = " + print_term(t) + "\n";
    if (do_compile || !eta_svg.empty()) {
      PwL1D fg = compile1(g), fl = compile1(l), ft = compile1(t);
      if (do_compile) {
        j["gamma_nodes"] = to_json(fg);
        j["lambda_nodes"] = to_json(fl);
        j["eta_nodes"] = to_json(ft);
        j["eta_zero_set"] = to_json(zero_set(ft));
        text += "g nodes: " + fg.str() + "\nl nodes: " + fl.str() + "\nt nodes: " + ft.str() + "\n";
        text += "zero set of t:\n" + complex_lines(zero_set(ft));
      }
      if (!eta_svg.empty()) {
        std::string tag = std::to_string(em) + "," + std::to_string(ep);
        write_text_file(eta_svg, svg_graphs("g, l, t for " + tag, {{"gamma", fg}, {"lambda", fl}, {"eta", ft}}));
      }
    }
    emit(out, j, text);
  });

  // fn eval / fn validate
  auto* fn = app.add_subcommand("fn", "McNaughton function files");
  fn->require_subcommand(1);
  std::vector<std::string> eval_args;
  auto* fn_eval = fn->add_subcommand("eval", "Evaluate: fn eval file.json at x[,y]");
  fn_eval->add_option("args", eval_args, "file [at] point")->required()->expected(2, 3);
  fn_eval->callback([&] {
    if (eval_args.size() == 3 && eval_args[1] != "at") throw InputError("usage: fn eval file.json at x[,y]");
    auto pt = parse_point(eval_args.back());
    json raw = read_json_file(eval_args[0]);
    if (raw.is_object()) {
      SubstitutionPair pair = pair_from_json(raw);
      if (pt.size() != 2) throw InputError("a pair needs a point x,y");
      Point2 q{pt[0], pt[1]};
      Rational v1, v2;
      try {
        v1 = pair.d1(q);
        v2 = pair.d2(q);
      } catch (const std::domain_error& e) {
        throw InputError(e.what());
      }
      emit(out, json{{"value", to_json(Point2{v1, v2})}}, Point2{v1, v2}.str() + "\n");
      return;
    }
    AnyFunction f = load_function(eval_args[0]);
    Rational v;
    try {
      if (auto* f1 = std::get_if<PwL1D>(&f)) {
        if (pt.size() != 1) throw InputError("1-D function needs a point x");
        v = (*f1)(pt[0]);
      } else {
        if (pt.size() != 2) throw InputError("2-D function needs a point x,y");
        v = std::get<PwL2D>(f)({pt[0], pt[1]});
      }
    } catch (const std::domain_error& e) {
      throw InputError(e.what());
    }
    emit(out, json{{"value", v.str()}}, v.str() + "\n");
  });
  std::string validate_path;
  auto* fn_validate = fn->add_subcommand("validate", "Check the McNaughton conditions");
  fn_validate->add_option("file", validate_path)->required();
  fn_validate->callback([&] {
    json j = read_json_file(validate_path);
    std::vector<std::string> problems;
    if (j.is_array() && !j.empty() && j[0].is_object()) problems = validate(pwl2d_from_json(j, false));
    else problems = validate(pwl1d_from_json(j, false));
    std::string text = problems.empty() ? out.verdict(true, "valid") + "\n" : out.verdict(false, "invalid") + "\n";
    for (const auto& p : problems) text += "  " + p + "\n";
    emit(out, json{{"valid", problems.empty()}, {"violations", problems}}, text);
    code = problems.empty() ? kOk : kNegative;
  });

  // archimedean
  std::string arch_path;
  auto* arch = app.add_subcommand("archimedean", "Whether some multiple of f is idempotent");
  arch->add_option("file", arch_path)->required();
  arch->callback([&] {
    AnyFunction f = load_function(arch_path);
    bool a;
    Rational lo, hi;
    std::visit(
        [&](const auto& g) {
          a = is_archimedean(g);
          lo = min_value(g);
          hi = max_value(g);
        },
        f);
    json j{{"archimedean", a}, {"min", lo.str()}, {"max", hi.str()}};
    std::string text = out.verdict(a, std::string("archimedean: ") + (a ? "true" : "false")) + "\nmin = " + lo.str() + ", max = " + hi.str() + "\n";
    emit(out, j, text);
    code = a ? kOk : kNegative;
  });

  // extremals / iso
  std::string ef, eg, ext_svg;
  auto* ext = app.add_subcommand("extremals", "Nodes of the range of (f, g)");
  ext->add_option("f", ef)->required();
  ext->add_option("g", eg)->required();
  ext->add_option("--svg", ext_svg, "Plot the broken line");
  ext->callback([&] {
    std::vector<Point2> pts;
    try {
      pts = extremals(load_1d(ef), load_1d(eg));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(to_json(p));
    if (!ext_svg.empty()) write_text_file(ext_svg, svg_broken_line("range of (f, g)", pts));
    emit(out, json{{"extremals", arr}}, point_list(pts) + "\n");
  });
  std::vector<std::string> iso_files;
  auto* iso = app.add_subcommand("iso", "Compare the ranges of (f, g) and (f1, g1)");
  iso->add_option("files", iso_files, "f g f1 g1")->required()->expected(4);
  iso->callback([&] {
    bool same;
    try {
      same = iso_by_range(load_1d(iso_files[0]), load_1d(iso_files[1]), load_1d(iso_files[2]), load_1d(iso_files[3]));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    std::string verdict = same ? "isomorphic (by range equality)" : "ranges differ (no conclusion)";
    emit(out, json{{"same_range", same}, {"verdict", verdict}}, out.verdict(same, verdict) + "\n");
    code = same ? kOk : kNegative;
  });

  // equalizer / check-projective
  std::string eq_path, eq_svg;
  auto* eq = app.add_subcommand("equalizer", "K = {d1 = x, d2 = y}");
  eq->add_option("pair", eq_path)->required();
  eq->add_option("--svg", eq_svg, "Draw K");
  eq->callback([&] {
    SubstitutionPair pair = pair_from_json(read_json_file(eq_path));
    CellComplex k = equalizer(pair);
    if (!eq_svg.empty()) write_text_file(eq_svg, svg_complexes("equalizer", {{"equalizer", k, "#2ca02c"}}));
    emit(out, json{{"cells", k.size()}, {"equalizer", to_json(k)}},
         "equalizer cells: " + std::to_string(k.size()) + "\n" + complex_lines(k));
  });
  std::string cp_path, cp_svg;
  auto* cp = app.add_subcommand("check-projective", "Decide whether the pair generates a projective algebra");
  cp->add_option("pair", cp_path)->required();
  cp->add_option("--svg", cp_svg, "Draw K, d(square) and d(K)");
  cp->callback([&] {
    SubstitutionPair pair = pair_from_json(read_json_file(cp_path));
    ProjectivityVerdict v = check_projective(pair);
    if (!cp_svg.empty())
      write_text_file(cp_svg, svg_complexes("projectivity", {{"image-square", v.image_square, "#1f77b4"},
                                                             {"image-equalizer", v.image_equalizer, "#d62728"},
                                                             {"equalizer", v.equalizer, "#2ca02c"}}));
    emit(out, verdict_json(v), verdict_text(out, v));
    code = v.projective ? kOk : kNegative;
  });

  // build case-i / case-ii / case-iii
  auto* build = app.add_subcommand("build", "Construct projective generators for a given equalizer");
  build->require_subcommand(1);
  BuildOptions bopt;
  std::string spec_path;
  auto* case_i = build->add_subcommand("case-i", "K between two pairs of boundary functions");
  case_i->add_option("--spec", spec_path, "JSON with f1, f2, g1, g2")->required();
  long ca = 0, cb = 0, cc = 0, cd = 0;
  auto* case_ii = build->add_subcommand("case-ii", "K above (a/b)x and c(1-x)/d");
  case_ii->add_option("-a", ca)->required();
  case_ii->add_option("-b", cb)->required();
  case_ii->add_option("-c", cc)->required();
  case_ii->add_option("-d", cd)->required();
  std::string fan_path;
  long bound = 12;
  auto* case_iii = build->add_subcommand("case-iii", "K a fan of triangles at the origin");
  case_iii->add_option("--fan", fan_path, "JSON with the triangles")->required();
  case_iii->add_option("--bound", bound, "Parameter search bound");
  for (auto* sub : {case_i, case_ii, case_iii}) {
    sub->add_option("--out", bopt.out_path, "Write the pair");
    sub->add_option("--svg", bopt.svg_path, "Draw the construction");
  }
  case_i->callback([&] {
    RectTypeSpec spec = rect_spec_from_json(read_json_file(spec_path));
    auto bad = check_bullet_conditions(spec);
    if (!bad.empty()) throw InputError("conditions violated: " + join(bad, "; "));
    BuiltPair b = build_case_i(spec);
    code = finish_build(out, bopt, b, json{{"case", "i"}}, "case i\n", "case i");
  });
  case_ii->callback([&] {
    CaseIIConstants k;
    try {
      k = case_ii_constants(ca, cb, cc, cd);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    BuiltPair b = build_case_ii(ca, cb, cc, cd);
    json j{{"case", "ii"},      {"a", ca},   {"b", cb}, {"c", cc},
           {"d", cd},           {"P", to_json(k.P)},     {"Q", to_json(k.Q)},
           {"R", to_json(k.R)}, {"x_S", optional_rational(k.x_S)}, {"S", optional_point(k.S)},
           {"T", optional_point(k.T)}, {"x_U", optional_rational(k.x_U)}, {"U", optional_point(k.U)},
           {"V", optional_point(k.V)}, {"layout", to_string(k.layout)}, {"notes", k.notes}};
    std::string text = "case ii (a, b, c, d) = (" + std::to_string(ca) + ", " + std::to_string(cb) + ", " + std::to_string(cc) + ", " +
                       std::to_string(cd) + ")\nP = " + k.P.str() + "\n";
    if (k.x_S) text += "x_S = " + k.x_S->str() + "\n";
    if (k.x_U) text += "x_U = " + k.x_U->str() + "\n";
    if (k.T) text += "T = " + k.T->str() + "\n";
    if (k.V) text += "V = " + k.V->str() + "\n";
    text += std::string("layout: ") + to_string(k.layout) + "\n";
    for (const auto& n : k.notes) text += "note: " + n + "\n";
    code = finish_build(out, bopt, b, j, text, "case ii");
  });
  case_iii->callback([&] {
    std::vector<TriangleSpec> fan = fan_from_json(read_json_file(fan_path));
    FanConstruction fc;
    try {
      fc = build_case_iii(fan, bound);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    json tris = json::array();
    std::string text = "case iii, " + std::to_string(fc.triangles.size()) + " triangle(s)\n";
    for (const auto& t : fc.triangles) {
      tris.push_back({{"A", to_json(t.A)}, {"B", to_json(t.B)}, {"P", to_json(t.P)}, {"l", t.l}, {"m", t.m},
                      {"s", optional_long(t.s)}, {"t", optional_long(t.t)}, {"s_prime", optional_long(t.s_prime)},
                      {"t_hat", optional_long(t.t_hat)}, {"Q", optional_point(t.Q)}, {"R", optional_point(t.R)}});
      text += "  A = " + t.A.str() + ", B = " + t.B.str() + ", P = " + t.P.str() + ", (l, m) = (" + std::to_string(t.l) + ", " +
              std::to_string(t.m) + ")\n";
    }
    code = finish_build(out, bopt, fc.built, json{{"case", "iii"}, {"triangles", tris}, {"junctions", [&] {
                                                    json a = json::array();
                                                    for (const auto& s : fc.junctions) a.push_back(to_json(s));
                                                    return a;
                                                  }()}},
                        text, "case iii");
  });

  // oracle grid
  auto* oracle = app.add_subcommand("oracle", "Independent refutation search");
  oracle->require_subcommand(1);
  std::string og_path;
  long og_d = 16;
  auto* og = oracle->add_subcommand("grid", "Check d(u) in K on the grid of denominator D");
  og->add_option("pair", og_path)->required();
  og->add_option("-D", og_d, "Grid denominator")->required();
  og->callback([&] {
    SubstitutionPair pair = pair_from_json(read_json_file(og_path));
    GridOracleResult r;
    try {
      r = grid_oracle(pair, og_d);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    json arr = json::array();
    for (const auto& p : r.counterexamples) arr.push_back(to_json(p));
    bool clean = r.counterexamples.empty();
    std::string text = "checked " + std::to_string(r.checked) + " grid points at D = " + std::to_string(r.denominator) + "\n";
    text += clean ? out.verdict(true, "no counterexample") + "\n"
                  : out.verdict(false, "counterexamples: ") + point_list(r.counterexamples) + "\n";
    emit(out, json{{"denominator", r.denominator}, {"checked", r.checked}, {"counterexamples", arr}}, text);
    code = clean ? kOk : kNegative;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const BuildError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
