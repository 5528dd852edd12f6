#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simvec/core/color.hpp"
#include "simvec/core/format.hpp"
#include "simvec/core/types.hpp"
#include "simvec/svg/affine.hpp"
#include "simvec/svg/primitive.hpp"
#include "simvec/xml/dom.hpp"

namespace simvec::chart {

using svg::AffineMatrix;
using svg::Box;
using svg::TextAnchor;
using svg::Vec2;

/// Grid every scene coordinate is snapped to, in normalized units. Values on
/// this grid never sit on a rounding boundary, in either frame.
inline constexpr double kSnap = 0.2;

inline double snap(double v) { return std::round(v / kSnap) * kSnap; }

/// How a rectangle is written out; all three ingest to the same RectElement.
enum class RectEncoding { rect, path, polygon };

struct TransformOp {
  enum class Kind { translate, rotate } kind = Kind::translate;
  double a = 0;  // tx or degrees
  double b = 0;  // ty
};

/// One node of a rendered chart, in normalized units (1000 across the larger
/// side). The SVG writer rescales to source units.
struct SceneNode {
  enum class Kind { group, rect, path, line, text };
  Kind kind = Kind::group;
  std::vector<TransformOp> transform;
  std::vector<std::pair<std::string, std::string>> decor;  // styling/ARIA only

  std::optional<HslQ> fill;
  std::optional<HslQ> stroke;
  double stroke_width = 1;  // normalized

  Box box;                          // rect
  RectEncoding encoding = RectEncoding::rect;
  std::vector<Vec2> points;         // path, line (2 points)
  bool closed = false;              // path
  double font_size = 12;            // text
  TextAnchor anchor = TextAnchor::start;
  Vec2 at;                          // text baseline origin
  std::string text;
  std::string tooltip;  // written as a <title> child

  int tag = -1;  // caller id; the emitter reports the SimVec index per tag
  std::vector<SceneNode> children;

  SceneNode& add(SceneNode n) {
    children.push_back(std::move(n));
    return children.back();
  }
};

inline SceneNode make_group(std::vector<std::pair<std::string, std::string>> decor = {}) {
  SceneNode g;
  g.decor = std::move(decor);
  return g;
}

inline SceneNode make_rect(Box b, HslQ fill) {
  SceneNode n;
  n.kind = SceneNode::Kind::rect;
  n.box = {snap(b.x), snap(b.y), snap(b.x + b.w) - snap(b.x), snap(b.y + b.h) - snap(b.y)};
  n.fill = fill;
  return n;
}

inline SceneNode make_line(Vec2 a, Vec2 b, HslQ stroke, double width = 1) {
  SceneNode n;
  n.kind = SceneNode::Kind::line;
  n.points = {{snap(a.x), snap(a.y)}, {snap(b.x), snap(b.y)}};
  n.stroke = stroke;
  n.stroke_width = width;
  return n;
}

inline SceneNode make_path(std::vector<Vec2> pts, bool closed, std::optional<HslQ> fill, std::optional<HslQ> stroke) {
  SceneNode n;
  n.kind = SceneNode::Kind::path;
  for (auto& p : pts) p = {snap(p.x), snap(p.y)};
  n.points = std::move(pts);
  n.closed = closed;
  n.fill = fill;
  n.stroke = stroke;
  return n;
}

inline SceneNode make_text(std::string text, Vec2 at, double font_size, TextAnchor anchor, HslQ fill) {
  SceneNode n;
  n.kind = SceneNode::Kind::text;
  n.text = std::move(text);
  n.at = {snap(at.x), snap(at.y)};
  n.font_size = font_size;
  n.anchor = anchor;
  n.fill = fill;
  return n;
}

inline AffineMatrix local_matrix(const std::vector<TransformOp>& ops) {
  AffineMatrix m;
  for (const auto& op : ops)
    m = m * (op.kind == TransformOp::Kind::translate ? AffineMatrix::translate(op.a, op.b) : AffineMatrix::rotate(op.a));
  return m;
}

// ---------------------------------------------------------------------------
// Direct SimVec emission

struct Emission {
  SimVecDoc doc;
  std::vector<std::pair<int, std::size_t>> tagged;  // (tag, element index)
};

namespace detail {

inline NPoint round_point(Vec2 p) { return {round_to_int(p.x), round_to_int(p.y)}; }

inline NBBox round_box(const Box& b) {
  const NPoint tl = round_point({b.x, b.y});
  const NPoint br = round_point({b.x + b.w, b.y + b.h});
  return {tl.x, tl.y, br.x - tl.x, br.y - tl.y};
}

inline void emit_node(const SceneNode& n, const AffineMatrix& parent, Emission& out) {
  const AffineMatrix m = parent * local_matrix(n.transform);
  const std::size_t before = out.doc.elements.size();
  switch (n.kind) {
    case SceneNode::Kind::group:
      for (const auto& c : n.children) emit_node(c, m, out);
      return;
    case SceneNode::Kind::rect: {
      const auto color = n.fill ? n.fill : n.stroke;
      if (!color || !(n.box.w > 0 && n.box.h > 0)) break;
      out.doc.elements.emplace_back(RectElement{round_box(svg::transform_box(m, n.box)), *color});
      break;
    }
    case SceneNode::Kind::line: {
      if (!n.stroke) break;
      out.doc.elements.emplace_back(LineElement{{round_point(m.apply(n.points[0])), round_point(m.apply(n.points[1]))}, *n.stroke});
      break;
    }
    case SceneNode::Kind::path: {
      const auto color = n.fill ? n.fill : n.stroke;
      if (!color) break;
      std::vector<NPoint> pts;
      for (const Vec2& p : n.points) pts.push_back(round_point(m.apply(p)));
      if (n.closed)
        out.doc.elements.emplace_back(PolygonElement{std::move(pts), *color});
      else
        out.doc.elements.emplace_back(LineElement{std::move(pts), *color});
      break;
    }
    case SceneNode::Kind::text: {
      if (!n.fill || n.text.empty()) break;
      const Box b = svg::estimate_text_box(n.at.x, n.at.y, n.font_size, n.anchor, n.text);
      out.doc.elements.emplace_back(TextElement{n.text, round_box(svg::transform_box(m, b)), *n.fill});
      break;
    }
  }
  if (n.tag >= 0 && out.doc.elements.size() > before) out.tagged.emplace_back(n.tag, before);
}

}  // namespace detail

/// SimVec straight from the scene, in paint order. Invisible nodes (no
/// paint) are skipped, as ingest does.
inline Emission emit_simvec(const SceneNode& root) {
  Emission out;
  detail::emit_node(root, AffineMatrix::identity(), out);
  return out;
}

// ---------------------------------------------------------------------------
// SVG writer

namespace detail {

inline std::string hex_of(HslQ c) { return to_hex(hsl_to_rgb8(dequantize_color(c))); }

struct SvgWriter {
  double k;  // normalized → source

  [[nodiscard]] std::string num(double v) const { return format_decimal(v * k, 3); }

  [[nodiscard]] std::string transform_attr(const std::vector<TransformOp>& ops) const {
    std::string s;
    for (const auto& op : ops) {
      if (!s.empty()) s += ' ';
      if (op.kind == TransformOp::Kind::translate)
        s += "translate(" + num(op.a) + "," + num(op.b) + ")";
      else
        s += "rotate(" + format_number(op.a) + ")";
    }
    return s;
  }

  static xml::Element title_of(const SceneNode& n) {
    xml::Element t;
    t.name = "title";
    t.children.emplace_back(xml::Text{n.tooltip});
    return t;
  }

  void paint(xml::Element& el, const SceneNode& n) const {
    el.set("fill", n.fill ? hex_of(*n.fill) : "none");
    if (n.stroke) {
      el.set("stroke", hex_of(*n.stroke));
      el.set("stroke-width", num(n.stroke_width));
    } else {
      el.set("stroke", "none");
    }
  }

  [[nodiscard]] xml::Element write(const SceneNode& n) const {
    xml::Element el;
    auto add_transform = [&] {
      if (!n.transform.empty()) el.set("transform", transform_attr(n.transform));
    };
    switch (n.kind) {
      case SceneNode::Kind::group:
        el.name = "g";
        for (const auto& [key, value] : n.decor) el.set(key, value);
        add_transform();
        if (!n.tooltip.empty()) el.children.emplace_back(title_of(n));
        for (const auto& c : n.children) el.children.emplace_back(write(c));
        return el;
      case SceneNode::Kind::rect: {
        const Box& b = n.box;
        if (n.encoding == RectEncoding::rect) {
          el.name = "rect";
          for (const auto& [key, value] : n.decor) el.set(key, value);
          add_transform();
          el.set("x", num(b.x));
          el.set("y", num(b.y));
          el.set("width", num(b.w));
          el.set("height", num(b.h));
        } else if (n.encoding == RectEncoding::path) {
          el.name = "path";
          for (const auto& [key, value] : n.decor) el.set(key, value);
          add_transform();
          el.set("d", "M" + num(b.x) + "," + num(b.y) + "H" + num(b.x + b.w) + "V" + num(b.y + b.h) + "H" + num(b.x) + "Z");
        } else {
          el.name = "polygon";
          for (const auto& [key, value] : n.decor) el.set(key, value);
          add_transform();
          el.set("points", num(b.x) + "," + num(b.y) + " " + num(b.x + b.w) + "," + num(b.y) + " " + num(b.x + b.w) +
                               "," + num(b.y + b.h) + " " + num(b.x) + "," + num(b.y + b.h));
        }
        break;
      }
      case SceneNode::Kind::line:
        el.name = "line";
        for (const auto& [key, value] : n.decor) el.set(key, value);
        add_transform();
        el.set("x1", num(n.points[0].x));
        el.set("y1", num(n.points[0].y));
        el.set("x2", num(n.points[1].x));
        el.set("y2", num(n.points[1].y));
        break;
      case SceneNode::Kind::path: {
        el.name = "path";
        for (const auto& [key, value] : n.decor) el.set(key, value);
        add_transform();
        std::string d;
        for (std::size_t i = 0; i < n.points.size(); ++i)
          d += (i == 0 ? "M" : "L") + num(n.points[i].x) + "," + num(n.points[i].y);
        if (n.closed) d += "Z";
        el.set("d", d);
        break;
      }
      case SceneNode::Kind::text:
        el.name = "text";
        for (const auto& [key, value] : n.decor) el.set(key, value);
        add_transform();
        el.set("x", num(n.at.x));
        el.set("y", num(n.at.y));
        el.set("font-size", num(n.font_size) + "px");
        el.set("text-anchor", n.anchor == TextAnchor::middle ? "middle" : n.anchor == TextAnchor::end ? "end" : "start");
        el.children.emplace_back(xml::Text{n.text});
        break;
    }
    paint(el, n);
    if (!n.tooltip.empty()) el.children.emplace_back(title_of(n));
    return el;
  }
};

}  // namespace detail

/// Serializes the scene as an SVG document `width`×`height` source units
/// wide; the scene's normalized frame is scaled by max(width, height)/1000.
inline std::string write_svg(const SceneNode& root, double width, double height,
                             const std::vector<std::pair<std::string, std::string>>& root_decor = {},
                             std::vector<xml::Element> defs = {}) {
  const double k = std::max(width, height) / kCanvasSize;
  detail::SvgWriter w{k};
  xml::Element svg;
  svg.name = "svg";
  svg.set("xmlns", "http://www.w3.org/2000/svg");
  svg.set("version", "1.1");
  svg.set("width", format_number(width));
  svg.set("height", format_number(height));
  svg.set("viewBox", "0 0 " + format_number(width) + " " + format_number(height));
  for (const auto& [key, value] : root_decor) svg.set(key, value);
  if (!defs.empty()) {
    xml::Element d;
    d.name = "defs";
    for (auto& e : defs) d.children.emplace_back(std::move(e));
    svg.children.emplace_back(std::move(d));
  }
  for (const auto& c : root.children) svg.children.emplace_back(w.write(c));
  return xml::write(xml::Document{std::move(svg)});
}

}  // namespace simvec::chart
