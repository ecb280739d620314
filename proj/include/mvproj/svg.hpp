#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "mvproj/builders.hpp"
#include "mvproj/geometry.hpp"
#include "mvproj/pwl1d.hpp"
#include "mvproj/pwl2d.hpp"

namespace mvproj {

/// SVG document over the unit square. Output depends only on the drawn data.
class SvgDoc {
 public:
  static constexpr long kMargin = 30;
  static constexpr long kSide = 400;

  explicit SvgDoc(std::string title) : title_(std::move(title)) {}

  void begin_layer(const std::string& id) { body_ += "  <g id=\"" + escape(id) + "\">\n"; }
  void end_layer() { body_ += "  </g>\n"; }

  void grid(long divisions = 10) {
    begin_layer("grid");
    for (long i = 0; i <= divisions; ++i) {
      Rational t(i, divisions);
      line({t, 0}, {t, 1}, "#dddddd", "0.5");
      line({0, t}, {1, t}, "#dddddd", "0.5");
    }
    polygon(ConvexCell::unit_square().vertices(), "none", "#000000", "1");
    end_layer();
  }

  void polygon(const std::vector<Point2>& pts, const std::string& fill, const std::string& stroke,
               const std::string& width, const std::string& opacity = "1") {
    body_ += "    <polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + px(pts[i].x) + "," + py(pts[i].y);
    body_ += "\" fill=\"" + fill + "\" fill-opacity=\"" + opacity + "\" stroke=\"" + stroke + "\" stroke-width=\"" + width + "\"/>\n";
  }

  void line(const Point2& p, const Point2& q, const std::string& stroke, const std::string& width) {
    body_ += "    <line x1=\"" + px(p.x) + "\" y1=\"" + py(p.y) + "\" x2=\"" + px(q.x) + "\" y2=\"" + py(q.y) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + width + "\"/>\n";
  }

  void polyline(const std::vector<Point2>& pts, const std::string& stroke, const std::string& width) {
    body_ += "    <polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + px(pts[i].x) + "," + py(pts[i].y);
    body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + width + "\"/>\n";
  }

  void dot(const Point2& p, const std::string& fill) {
    body_ += "    <circle cx=\"" + px(p.x) + "\" cy=\"" + py(p.y) + "\" r=\"3\" fill=\"" + fill + "\"/>\n";
  }

  void text(const Point2& p, const std::string& s, const std::string& size = "10") {
    body_ += "    <text x=\"" + px(p.x) + "\" y=\"" + py(p.y) + "\" font-family=\"monospace\" font-size=\"" + size +
             "\" text-anchor=\"middle\">" + escape(s) + "</text>\n";
  }

  void cell(const ConvexCell& c, const std::string& color, const std::string& opacity = "0.5") {
    switch (c.kind()) {
      case CellKind::point: dot(c.vertices()[0], color); break;
      case CellKind::segment: line(c.vertices()[0], c.vertices()[1], color, "2"); break;
      case CellKind::polygon: polygon(c.vertices(), color, color, "1", opacity); break;
    }
  }

  void complex(const std::string& id, const CellComplex& k, const std::string& color, const std::string& opacity = "0.5") {
    begin_layer(id);
    for (const auto& c : k.cells()) cell(c, color, opacity);
    end_layer();
  }

  std::string str() const {
    const long full = kSide + 2 * kMargin;
    std::string w = std::to_string(full);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w +
           "\" height=\"" + w + "\" viewBox=\"0 0 " + w + " " + w + "\">\n  <title>" + escape(title_) + "</title>\n" + body_ +
           "</svg>\n";
  }

  /// Fixed three-decimal rendering, rounded half up.
  static std::string fixed3(const Rational& v) {
    mpz_class scaled = (v * Rational(1000) + Rational(1, 2)).floor();
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    mpz_class whole = scaled / 1000, frac = scaled % 1000;
    std::string f = frac.get_str();
    while (f.size() < 3) f = "0" + f;
    return (negative ? "-" : "") + whole.get_str() + "." + f;
  }

 private:
  static std::string px(const Rational& x) { return fixed3(Rational(kMargin) + Rational(kSide) * x); }
  static std::string py(const Rational& y) { return fixed3(Rational(kMargin) + Rational(kSide) * (Rational(1) - y)); }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  }

  std::string title_;
  std::string body_;
};

inline const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> p{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return p;
}

/// Graphs of one-variable functions, one layer each.
inline std::string svg_graphs(const std::string& title, const std::vector<std::pair<std::string, PwL1D>>& fs) {
  SvgDoc doc(title);
  doc.grid();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<Point2> pts;
    for (const auto& n : fs[i].second.nodes()) pts.push_back({n.x, n.y});
    doc.begin_layer("graph-" + fs[i].first);
    doc.polyline(pts, svg_palette()[i % svg_palette().size()], "2");
    doc.end_layer();
  }
  return doc.str();
}

struct SvgLayer {
  std::string id;
  CellComplex cells;
  std::string color;
};

inline std::string svg_complexes(const std::string& title, const std::vector<SvgLayer>& layers) {
  SvgDoc doc(title);
  doc.grid();
  for (const auto& l : layers) doc.complex(l.id, l.cells, l.color);
  return doc.str();
}

/// Broken line through the extremals, with its nodes marked.
inline std::string svg_broken_line(const std::string& title, const std::vector<Point2>& pts) {
  SvgDoc doc(title);
  doc.grid();
  doc.begin_layer("range");
  doc.polyline(pts, svg_palette()[0], "2");
  for (const auto& p : pts) doc.dot(p, svg_palette()[1]);
  doc.end_layer();
  return doc.str();
}

/// Per-triangle grey level by the value at the barycenter.
inline void svg_colormap(SvgDoc& doc, const std::string& id, const PwL2D& f) {
  doc.begin_layer(id);
  for (const auto& pc : f.pieces()) {
    Rational v = pc.form(pc.cell.interior_point());
    long level = (Rational(255) * (Rational(1) - v) + Rational(1, 2)).floor().get_si();
    char hex[8];
    std::snprintf(hex, sizeof hex, "#%02x%02x%02x", static_cast<unsigned>(level), static_cast<unsigned>(level), static_cast<unsigned>(level));
    doc.polygon(pc.cell.vertices(), hex, "#888888", "0.3");
  }
  doc.end_layer();
}

/// K, the labeled region decomposition with d2's forms, and d2 as a colormap.
inline std::string svg_construction(const std::string& title, const BuiltPair& b) {
  SvgDoc doc(title);
  doc.grid();
  svg_colormap(doc, "d2-values", b.pair.d2);
  doc.begin_layer("regions");
  for (std::size_t i = 0; i < b.regions.size(); ++i)
    doc.cell(b.regions[i].cell, svg_palette()[i % svg_palette().size()], "0.25");
  doc.end_layer();
  doc.complex("equalizer", b.verdict.equalizer, "#2ca02c", "0.6");
  doc.begin_layer("labels");
  for (const auto& r : b.regions) doc.text(r.cell.interior_point(), r.label + ": " + r.d2.str(), "8");
  doc.end_layer();
  return doc.str();
}

}  // namespace mvproj
