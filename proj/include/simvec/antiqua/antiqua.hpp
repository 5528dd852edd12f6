#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simvec/chart/random.hpp"
#include "simvec/core/color.hpp"
#include "simvec/core/format.hpp"
#include "simvec/svg/affine.hpp"
#include "simvec/svg/ingest.hpp"
#include "simvec/svg/paint.hpp"
#include "simvec/svg/path.hpp"
#include "simvec/xml/dom.hpp"

namespace simvec::antiqua {

using svg::AffineMatrix;
using svg::Vec2;

class AntiquaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lengths are normalized units (1000 across the larger canvas side).
struct AntiquaParams {
  double jitter_amplitude = 0;
  double segment_length = 20;
  double thickness_variation = 0;  // fraction of the stroke width
  double tint_strength = 0;        // [0, 1]
  double speckle_density = 0;      // dots per 10^6 square units
  std::string font_name;           // empty keeps fonts
  std::uint64_t seed = 0;

  friend bool operator==(const AntiquaParams&, const AntiquaParams&) = default;
};

inline void check_params(const AntiquaParams& p) {
  if (!(p.jitter_amplitude >= 0)) throw AntiquaError("jitter amplitude must be >= 0");
  if (!(p.segment_length > 0)) throw AntiquaError("segment length must be > 0");
  if (!(p.thickness_variation >= 0 && p.thickness_variation < 1)) throw AntiquaError("thickness variation must be in [0, 1)");
  if (!(p.tint_strength >= 0 && p.tint_strength <= 1)) throw AntiquaError("tint strength must be in [0, 1]");
  if (!(p.speckle_density >= 0)) throw AntiquaError("speckle density must be >= 0");
}

/// Named parameter sets: "none" and "paper".
inline AntiquaParams preset(std::string_view name, std::uint64_t seed = 0) {
  AntiquaParams p;
  p.seed = seed;
  if (name == "none") return p;
  if (name == "paper") {
    p.jitter_amplitude = 1.2;
    p.segment_length = 18;
    p.thickness_variation = 0.25;
    p.tint_strength = 0.45;
    p.speckle_density = 320;
    p.font_name = "'Homemade Apple', 'Segoe Print', cursive";
    return p;
  }
  throw AntiquaError("unknown preset: " + std::string(name));
}

/// Parchment color the background is tinted toward.
inline constexpr Rgb8 kParchment{240, 225, 190};
/// Speckle ink.
inline constexpr Rgb8 kSpeckle{92, 70, 48};

/// Subdivides each straight edge into pieces of about `segment` length and
/// pushes interior vertices sideways by a Gaussian of std `amplitude`,
/// truncated at 2 std. Original vertices are kept exactly.
inline std::vector<Vec2> jitter_polyline(const std::vector<Vec2>& pts, bool closed, double amplitude, double segment,
                                         chart::Rng& rng) {
  std::vector<Vec2> out;
  if (pts.empty()) return out;
  const std::size_t edges = closed ? pts.size() : pts.size() - 1;
  out.push_back(pts[0]);
  for (std::size_t i = 0; i < edges; ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % pts.size()];
    const Vec2 d = b - a;
    const double len = svg::length(d);
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(len / segment)));
    const Vec2 normal = len > 0 ? Vec2{-d.y / len, d.x / len} : Vec2{0, 0};
    for (std::size_t k = 1; k < n; ++k) {
      const double off = amplitude > 0 ? rng.truncated_gaussian(amplitude, 2.0) : 0.0;
      out.push_back(a + d * (static_cast<double>(k) / static_cast<double>(n)) + normal * off);
    }
    if (!closed || i + 1 < edges) out.push_back(b);
  }
  return out;
}

namespace detail {

using svg::detail::StyleState;

inline bool is_container(std::string_view name) { return name == "g" || name == "a" || name == "svg" || name == "switch"; }

inline bool is_hidden_subtree(std::string_view name) {
  return name == "defs" || name == "clipPath" || name == "mask" || name == "pattern" || name == "marker" ||
         name == "symbol" || name == "linearGradient" || name == "radialGradient" || name == "filter" ||
         name == "title" || name == "desc" || name == "metadata" || name == "style" || name == "script";
}

inline bool paints(std::string_view value, double opacity) {
  if (opacity <= 0) return false;
  const auto p = svg::parse_paint(value);
  return p && p->kind != svg::Paint::Kind::none;
}

inline std::string coord(double v) { return format_decimal(v, 4); }

inline std::string path_d(const std::vector<Vec2>& pts, bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L" : "M") + coord(pts[i].x) + "," + coord(pts[i].y);
  if (closed) d += " Z";
  return d;
}

inline double number_attr(const xml::Element& el, std::string_view key, double fallback = 0) {
  const auto* v = el.attr(key);
  if (!v) return fallback;
  const auto n = svg::detail::parse_length(*v);
  return n ? *n : fallback;
}

inline void erase_attr(xml::Element& el, std::string_view key) {
  std::erase_if(el.attributes, [&](const auto& kv) { return kv.first == key; });
}

/// Drops `names` declarations from an inline style attribute.
inline void strip_style(xml::Element& el, std::initializer_list<std::string_view> names) {
  const auto* style = el.attr("style");
  if (!style) return;
  std::string kept;
  std::string_view rest = *style;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const std::string_view decl = rest.substr(0, semi);
    const auto colon = decl.find(':');
    const std::string_view key = svg::detail::trim(decl.substr(0, std::min(colon, decl.size())));
    if (!key.empty() && std::find(names.begin(), names.end(), key) == names.end()) {
      if (!kept.empty()) kept += "; ";
      kept += svg::detail::trim(decl);
    }
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
  }
  if (kept.empty())
    erase_attr(el, "style");
  else
    el.set("style", kept);
}

/// Straight-edge outline of a stroked shape in its local coordinates, or
/// nothing when the shape has curves.
inline std::vector<svg::Polyline> outline(const xml::Element& el) {
  std::vector<svg::Polyline> out;
  const std::string& n = el.name;
  if (n == "line") {
    out.push_back({{{number_attr(el, "x1"), number_attr(el, "y1")}, {number_attr(el, "x2"), number_attr(el, "y2")}}, false});
  } else if (n == "rect") {
    const double x = number_attr(el, "x"), y = number_attr(el, "y");
    const double w = number_attr(el, "width"), h = number_attr(el, "height");
    if (w > 0 && h > 0 && number_attr(el, "rx") == 0 && number_attr(el, "ry") == 0)
      out.push_back({{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}, true});
  } else if (n == "polygon" || n == "polyline") {
    const auto nums = svg::detail::parse_number_list(el.get("points").value_or(""));
    svg::Polyline p;
    p.closed = n == "polygon";
    for (std::size_t i = 0; i + 1 < nums.size(); i += 2) p.points.push_back({nums[i], nums[i + 1]});
    if (p.points.size() >= 2) out.push_back(std::move(p));
  } else if (n == "path") {
    try {
      const svg::PathData pd = svg::parse_path_data(el.get("d").value_or(""));
      if (pd.has_curves()) return {};
      for (const auto& sp : pd.subpaths) {
        svg::Polyline p;
        p.closed = sp.closed;
        p.points.push_back(sp.start);
        for (const auto& seg : sp.segments) p.points.push_back(seg.end);
        if (p.closed && p.points.size() > 1 && p.points.back() == p.points.front()) p.points.pop_back();
        if (p.points.size() >= 2) out.push_back(std::move(p));
      }
    } catch (const std::exception&) {
      return {};
    }
  }
  return out;
}

struct Jitterer {
  const AntiquaParams& params;
  double canvas_scale;  // normalized units per root unit
  chart::Rng rng;
  bool changed = false;

  void walk(xml::Element& parent, const AffineMatrix& m, const StyleState& st) {
    std::vector<xml::Node> out;
    out.reserve(parent.children.size());
    for (auto& node : parent.children) {
      if (!node.is_element()) {
        out.push_back(std::move(node));
        continue;
      }
      xml::Element& el = node.element();
      if (is_hidden_subtree(el.name)) {
        out.push_back(std::move(node));
        continue;
      }
      const StyleState s = svg::detail::derive_style(st, el);
      AffineMatrix local = m;
      if (const auto* t = el.attr("transform")) {
        try {
          local = m * svg::parse_transform(*t);
        } catch (const std::exception&) {
        }
      }
      if (is_container(el.name)) {
        walk(el, local, s);
        out.push_back(std::move(node));
        continue;
      }
      const bool stroked = s.displayed && s.visible && paints(s.stroke, s.opacity * s.stroke_opacity);
      const auto lines = stroked ? outline(el) : std::vector<svg::Polyline>{};
      if (lines.empty()) {
        out.push_back(std::move(node));
        continue;
      }
      const double unit = local.mean_scale() * canvas_scale;  // normalized per local unit
      if (!(unit > 0)) {
        out.push_back(std::move(node));
        continue;
      }
      std::string d;
      for (const auto& pl : lines) {
        if (!d.empty()) d += " ";
        d += path_d(jitter_polyline(pl.points, pl.closed, params.jitter_amplitude / unit, params.segment_length / unit, rng),
                    pl.closed);
      }
      const double width = number_attr(el, "stroke-width", 1.0);
      const double w = width * (1 + (params.thickness_variation > 0
                                         ? rng.uniform(-params.thickness_variation, params.thickness_variation)
                                         : 0.0));
      const bool filled = el.name != "line" && el.name != "polyline" && paints(s.fill, s.opacity * s.fill_opacity);

      xml::Element stroke;
      stroke.name = "path";
      if (filled) {
        // fill stays on the original shape; the border becomes an overlay
        el.set("stroke", "none");
        strip_style(el, {"stroke"});
        stroke.attributes = {{"class", "antiqua-stroke"}, {"fill", "none"}, {"stroke", s.stroke}};
        if (const auto* t = el.attr("transform")) stroke.set("transform", *t);
        if (s.opacity * s.stroke_opacity < 1) stroke.set("stroke-opacity", format_number(s.opacity * s.stroke_opacity));
        out.push_back(std::move(node));
      } else {
        stroke.attributes = el.attributes;
        for (const char* k : {"x", "y", "width", "height", "rx", "ry", "x1", "y1", "x2", "y2", "points", "d"}) erase_attr(stroke, k);
        stroke.set("fill", "none");
        strip_style(stroke, {"fill"});
      }
      stroke.set("stroke-width", format_decimal(w, 4));
      stroke.set("stroke-linejoin", "round");
      stroke.set("d", d);
      out.push_back(xml::Node{std::move(stroke)});
      changed = true;
    }
    parent.children = std::move(out);
  }
};

inline double canvas_scale(const xml::Element& root, AffineMatrix& root_tf) {
  svg::Viewport vp;
  root_tf = svg::detail::viewport_transform(root, vp);
  return vp.scale();
}

}  // namespace detail

/// Hand-drawn look for every straight stroke; fills are untouched. Filled
/// and stroked shapes keep their fill and get a jittered border overlay.
inline std::string jitter_strokes(std::string_view svg_text, const AntiquaParams& params) {
  check_params(params);
  if (params.jitter_amplitude == 0 && params.thickness_variation == 0) return std::string(svg_text);
  xml::Document doc = xml::parse(svg_text);
  AffineMatrix root_tf;
  const double scale = detail::canvas_scale(doc.root, root_tf);
  detail::Jitterer j{params, scale, chart::Rng(chart::splitmix64(params.seed ^ 0x717e5ULL))};
  j.walk(doc.root, root_tf, svg::detail::derive_style({}, doc.root));
  return j.changed ? xml::write(doc) : std::string(svg_text);
}

namespace detail {

inline Rgb8 blend(Rgb8 a, Rgb8 b, double t) {
  auto mix = [t](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * t));
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// First painted element, if it is a rect covering the whole viewport.
inline xml::Element* find_background(xml::Element& root, const AffineMatrix& root_tf, const svg::Viewport& vp) {
  for (auto& node : root.children) {
    if (!node.is_element()) continue;
    xml::Element& el = node.element();
    if (is_hidden_subtree(el.name)) continue;
    if (el.name != "rect") return nullptr;
    if (el.attr("transform")) return nullptr;
    const double x = number_attr(el, "x"), y = number_attr(el, "y");
    const Vec2 a = root_tf.apply({x, y});
    const Vec2 b = root_tf.apply({x + number_attr(el, "width"), y + number_attr(el, "height")});
    const bool covers = a.x <= 0 && a.y <= 0 && b.x >= vp.width && b.y >= vp.height;
    const auto fill = svg::parse_paint(el.get("fill").value_or("black"));
    return covers && fill && fill->kind == svg::Paint::Kind::color ? &el : nullptr;
  }
  return nullptr;
}

}  // namespace detail

/// Tints the page background toward parchment and scatters low-opacity
/// speckles right above it, beneath every other element.
inline std::string apply_paper_texture(std::string_view svg_text, const AntiquaParams& params) {
  check_params(params);
  if (params.tint_strength == 0 && params.speckle_density == 0) return std::string(svg_text);
  xml::Document doc = xml::parse(svg_text);
  svg::Viewport vp;
  const AffineMatrix root_tf = svg::detail::viewport_transform(doc.root, vp);
  const AffineMatrix to_user = [&] {
    // inverse of the (scale + translate) viewport transform
    const double sx = root_tf.a, sy = root_tf.d;
    return AffineMatrix{1 / sx, 0, 0, 1 / sy, -root_tf.e / sx, -root_tf.f / sy};
  }();

  std::size_t insert_at = 0;
  xml::Element* bg = detail::find_background(doc.root, root_tf, vp);
  Rgb8 base{255, 255, 255};
  if (bg) {
    base = hsl_to_rgb8(svg::parse_paint(*bg->attr("fill"))->color);
    for (std::size_t i = 0; i < doc.root.children.size(); ++i)
      if (doc.root.children[i].is_element() && &doc.root.children[i].element() == bg) insert_at = i + 1;
  }
  const std::string tinted = to_hex(detail::blend(base, kParchment, params.tint_strength));

  xml::Element texture;
  texture.name = "g";
  texture.attributes = {{"class", "antiqua-texture"}, {"aria-hidden", "true"}, {"pointer-events", "none"}};
  if (bg) {
    bg->set("fill", tinted);
    detail::strip_style(*bg, {"fill"});
  } else {
    xml::Element rect;
    rect.name = "rect";
    const Vec2 o = to_user.apply({0, 0});
    const Vec2 e = to_user.apply({vp.width, vp.height});
    rect.attributes = {{"class", "antiqua-paper"}, {"x", detail::coord(o.x)}, {"y", detail::coord(o.y)},
                       {"width", detail::coord(e.x - o.x)}, {"height", detail::coord(e.y - o.y)}, {"fill", tinted},
                       {"stroke", "none"}};
    texture.children.emplace_back(std::move(rect));
  }

  const double k = vp.scale();  // normalized per source pixel
  const double area = vp.width * k * vp.height * k;
  const auto count = static_cast<std::size_t>(std::llround(params.speckle_density * area / 1e6));
  chart::Rng rng(chart::splitmix64(params.seed ^ 0x5bec1eULL));
  const std::string ink = to_hex(kSpeckle);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec2 p = to_user.apply({rng.uniform(0, vp.width), rng.uniform(0, vp.height)});
    const double r = rng.uniform(0.4, 1.4) / k * std::abs(to_user.a);
    xml::Element dot;
    dot.name = "circle";
    dot.attributes = {{"cx", detail::coord(p.x)},
                      {"cy", detail::coord(p.y)},
                      {"r", detail::coord(r)},
                      {"fill", ink},
                      {"fill-opacity", format_decimal(rng.uniform(0.08, 0.25), 3)},
                      {"stroke", "none"}};
    texture.children.emplace_back(std::move(dot));
  }
  if (!texture.children.empty())
    doc.root.children.insert(doc.root.children.begin() + static_cast<std::ptrdiff_t>(insert_at), xml::Node{std::move(texture)});
  return xml::write(doc);
}

/// Sets `font_name` on every text element; content, position and size stay.
inline std::string substitute_fonts(std::string_view svg_text, std::string_view font_name) {
  if (font_name.empty()) throw AntiquaError("font name must be non-empty");
  xml::Document doc = xml::parse(svg_text);
  bool changed = false;
  auto visit = [&](auto& self, xml::Element& el) -> void {
    if (el.name == "text" || el.name == "tspan") {
      const auto* current = el.attr("font-family");
      const auto* style = el.attr("style");
      const bool styled = style && style->find("font-family") != std::string::npos;
      if (!current || *current != font_name || styled) {
        el.set("font-family", std::string(font_name));
        if (styled) detail::strip_style(el, {"font-family"});
        changed = true;
      }
    }
    for (auto& n : el.children)
      if (n.is_element()) self(self, n.element());
  };
  visit(visit, doc.root);
  return changed ? xml::write(doc) : std::string(svg_text);
}

/// texture ∘ fonts ∘ jitter.
inline std::string oldify(std::string_view svg_text, const AntiquaParams& params) {
  check_params(params);
  std::string out = jitter_strokes(svg_text, params);
  if (!params.font_name.empty()) out = substitute_fonts(out, params.font_name);
  return apply_paper_texture(out, params);
}

}  // namespace simvec::antiqua
