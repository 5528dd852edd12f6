#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simvec/core/color.hpp"
#include "simvec/core/types.hpp"
#include "simvec/svg/affine.hpp"
#include "simvec/svg/paint.hpp"
#include "simvec/svg/path.hpp"

namespace simvec::svg {

/// Number of vertices used to approximate circles and ellipses.
inline constexpr int kEllipseVertices = 24;

/// Default curve flattening tolerance, in normalized units.
inline constexpr double kDefaultCurveTolerance = 2.0;

enum class PrimitiveKind { rect, path, polygon, polyline, line, circle, ellipse, text };

inline std::string_view primitive_name(PrimitiveKind k) noexcept {
  switch (k) {
    case PrimitiveKind::rect: return "rect";
    case PrimitiveKind::path: return "path";
    case PrimitiveKind::polygon: return "polygon";
    case PrimitiveKind::polyline: return "polyline";
    case PrimitiveKind::line: return "line";
    case PrimitiveKind::circle: return "circle";
    case PrimitiveKind::ellipse: return "ellipse";
    case PrimitiveKind::text: return "text";
  }
  return "?";
}

/// Axis-aligned box: rect geometry or a text layout box.
struct Box {
  double x = 0, y = 0, w = 0, h = 0;
};

struct EllipseGeom {
  double cx = 0, cy = 0, rx = 0, ry = 0;
};

/// One drawable SVG primitive with its geometry in some coordinate frame.
struct RawPrimitive {
  PrimitiveKind kind = PrimitiveKind::rect;
  std::variant<Box, PathData, EllipseGeom> geometry;
  Paint fill;
  Paint stroke;
  std::string text;
  std::size_t source_index = 0;

  [[nodiscard]] const Box& box() const { return std::get<Box>(geometry); }
  [[nodiscard]] const PathData& path() const { return std::get<PathData>(geometry); }
  [[nodiscard]] const EllipseGeom& ellipse() const { return std::get<EllipseGeom>(geometry); }
};

/// Source viewport; its larger side maps to the 1000-unit canvas.
struct Viewport {
  double width = 0;
  double height = 0;

  [[nodiscard]] bool valid() const noexcept { return width > 0 && height > 0; }
  [[nodiscard]] double scale() const noexcept { return kCanvasSize / std::max(width, height); }
};

class DegenerateTransform : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::size_t utf8_length(std::string_view s) noexcept {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

enum class TextAnchor { start, middle, end };

/// Layout box estimate for a text run whose baseline starts at (x, y):
/// width 0.6 em per character (or `text_length` when given), height 1.2 em,
/// top one em above the baseline.
inline Box estimate_text_box(double x, double y, double font_size, TextAnchor anchor, std::string_view text,
                             double text_length = -1) {
  const double w = text_length >= 0 ? text_length : 0.6 * font_size * static_cast<double>(utf8_length(text));
  double left = x;
  if (anchor == TextAnchor::middle) left -= w / 2;
  if (anchor == TextAnchor::end) left -= w;
  return {left, y - font_size, w, 1.2 * font_size};
}

/// Axis-aligned bounding box of the transformed corners of `b`.
inline Box transform_box(const AffineMatrix& m, const Box& b) {
  const std::array<Vec2, 4> corners = {m.apply({b.x, b.y}), m.apply({b.x + b.w, b.y}), m.apply({b.x + b.w, b.y + b.h}),
                                       m.apply({b.x, b.y + b.h})};
  double x0 = corners[0].x, x1 = x0, y0 = corners[0].y, y1 = y0;
  for (const Vec2& p : corners) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

inline PathData box_outline(const Box& b) {
  Subpath sp{{b.x, b.y}, {}, true};
  sp.segments.push_back({false, {}, {}, {b.x + b.w, b.y}});
  sp.segments.push_back({false, {}, {}, {b.x + b.w, b.y + b.h}});
  sp.segments.push_back({false, {}, {}, {b.x, b.y + b.h}});
  return PathData{{sp}};
}

inline PathData ellipse_outline(const EllipseGeom& e) {
  Subpath sp{{e.cx + e.rx, e.cy}, {}, true};
  for (int k = 1; k < kEllipseVertices; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kEllipseVertices;
    sp.segments.push_back({false, {}, {}, {e.cx + e.rx * std::cos(t), e.cy + e.ry * std::sin(t)}});
  }
  return PathData{{sp}};
}

/// Maps a primitive into the frame defined by `m`. Rects survive only
/// axis-aligned transforms and otherwise become 4-point polygons; text boxes
/// are re-boxed around their transformed corners.
inline RawPrimitive apply_transform(const AffineMatrix& m, const RawPrimitive& prim) {
  if (m.is_degenerate()) throw DegenerateTransform("transform is not invertible");
  RawPrimitive out = prim;
  switch (prim.kind) {
    case PrimitiveKind::rect:
      if (m.is_axis_aligned()) {
        out.geometry = transform_box(m, prim.box());
      } else {
        out.kind = PrimitiveKind::polygon;
        out.geometry = transform_path(box_outline(prim.box()), m);
      }
      break;
    case PrimitiveKind::text:
      out.geometry = transform_box(m, prim.box());
      break;
    case PrimitiveKind::circle:
    case PrimitiveKind::ellipse:
      if (m.is_axis_aligned()) {
        const auto& e = prim.ellipse();
        const Vec2 c = m.apply({e.cx, e.cy});
        out.geometry = EllipseGeom{c.x, c.y, e.rx * std::abs(m.a), e.ry * std::abs(m.d)};
      } else {
        out.kind = PrimitiveKind::polygon;
        out.geometry = transform_path(ellipse_outline(prim.ellipse()), m);
      }
      break;
    default:
      out.geometry = transform_path(prim.path(), m);
      break;
  }
  return out;
}

inline NPoint normalize_point(Vec2 p, const Viewport& vp) {
  const double s = vp.scale();
  return {round_to_int(p.x * s), round_to_int(p.y * s)};
}

/// Uniform scaling by 1000 / max(width, height), rounded to integers.
inline std::vector<NPoint> normalize_coords(std::span<const Vec2> points, const Viewport& vp) {
  std::vector<NPoint> out;
  out.reserve(points.size());
  for (const Vec2& p : points) out.push_back(normalize_point(p, vp));
  return out;
}

/// Box normalization rounds the corners, so right = left + width exactly.
inline NBBox normalize_box(const Box& b, const Viewport& vp) {
  const NPoint tl = normalize_point({b.x, b.y}, vp);
  const NPoint br = normalize_point({b.x + b.w, b.y + b.h}, vp);
  return {tl.x, tl.y, br.x - tl.x, br.y - tl.y};
}

struct CanonicalOptions {
  double curve_tolerance = kDefaultCurveTolerance;  // normalized units
  bool clamp = true;
};

/// Result of canonicalizing one primitive: zero or more elements (a path
/// with several subpaths yields several) and the reasons anything was skipped.
struct Canonical {
  std::vector<Element> elements;
  std::vector<std::string> notes;
};

namespace detail {

inline void collapse_duplicates(std::vector<NPoint>& pts, bool closed) {
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (closed) {
    while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
  }
}

inline bool clamp_point(NPoint& p) {
  const NPoint before = p;
  p.x = std::clamp(p.x, 0, kCanvasSize);
  p.y = std::clamp(p.y, 0, kCanvasSize);
  return !(p == before);
}

inline bool clamp_box(NBBox& b) {
  NPoint tl{b.left, b.top};
  NPoint br{b.left + b.width, b.top + b.height};
  const bool changed = clamp_point(tl) | clamp_point(br);
  b = {tl.x, tl.y, std::max(0, br.x - tl.x), std::max(0, br.y - tl.y)};
  return changed;
}

// A closed quad whose edges alternate horizontal and vertical.
inline bool axis_aligned_quad(const std::vector<NPoint>& p) {
  if (p.size() != 4) return false;
  auto horizontal = [&](int i) { return p[i].y == p[(i + 1) % 4].y && p[i].x != p[(i + 1) % 4].x; };
  auto vertical = [&](int i) { return p[i].x == p[(i + 1) % 4].x && p[i].y != p[(i + 1) % 4].y; };
  return (horizontal(0) && vertical(1) && horizontal(2) && vertical(3)) ||
         (vertical(0) && horizontal(1) && vertical(2) && horizontal(3));
}

inline NBBox bounds(const std::vector<NPoint>& p) {
  int x0 = p[0].x, x1 = x0, y0 = p[0].y, y1 = y0;
  for (const NPoint& q : p) {
    x0 = std::min(x0, q.x);
    x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y);
    y1 = std::max(y1, q.y);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

inline double shoelace(const std::vector<Vec2>& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return a / 2;
}

}  // namespace detail

/// Maps a primitive already in root coordinates onto the SimVec kinds:
/// rect and axis-aligned closed quads become rects, open outlines lines,
/// closed outlines polygons, circles and ellipses 24-gons, text keeps its
/// layout box. Fill wins over stroke; `line` primitives use their stroke.
inline Canonical canonicalize_primitive(const RawPrimitive& prim, const Viewport& vp, const CanonicalOptions& opt = {}) {
  Canonical out;
  const bool stroke_only = prim.kind == PrimitiveKind::line;
  const Paint* paint = nullptr;
  bool from_fill = false;
  if (!stroke_only && prim.fill.kind == Paint::Kind::color) {
    paint = &prim.fill;
    from_fill = true;
  } else if (prim.stroke.kind == Paint::Kind::color) {
    paint = &prim.stroke;
  }
  if (!paint) {
    out.notes.emplace_back("invisible: no fill or stroke");
    return out;
  }
  const HslQ color = quantize_color(paint->color);
  bool clamped = false;

  auto emit_outline = [&](const std::vector<Vec2>& src, bool closed) {
    if (closed && from_fill && prim.stroke.kind != Paint::Kind::color && std::abs(detail::shoelace(src)) < 1e-12) {
      out.notes.emplace_back("invisible: zero-area shape");
      return;
    }
    std::vector<NPoint> pts = normalize_coords(src, vp);
    if (opt.clamp)
      for (NPoint& p : pts) clamped |= detail::clamp_point(p);
    detail::collapse_duplicates(pts, closed);
    if (closed && detail::axis_aligned_quad(pts)) {
      out.elements.emplace_back(RectElement{detail::bounds(pts), color});
    } else if (closed && pts.size() >= 3) {
      out.elements.emplace_back(PolygonElement{std::move(pts), color});
    } else if (pts.size() >= 2) {
      out.elements.emplace_back(LineElement{std::move(pts), color});
    } else {
      out.notes.emplace_back("degenerate: fewer than 2 distinct points");
    }
  };

  switch (prim.kind) {
    case PrimitiveKind::rect: {
      const Box& b = prim.box();
      if (!(b.w > 0 && b.h > 0)) {
        out.notes.emplace_back("invisible: zero-area rect");
        break;
      }
      NBBox nb = normalize_box(b, vp);
      if (opt.clamp) clamped |= detail::clamp_box(nb);
      out.elements.emplace_back(RectElement{nb, color});
      break;
    }
    case PrimitiveKind::text: {
      if (prim.text.empty()) {
        out.notes.emplace_back("empty text");
        break;
      }
      NBBox nb = normalize_box(prim.box(), vp);
      if (opt.clamp) clamped |= detail::clamp_box(nb);
      out.elements.emplace_back(TextElement{prim.text, nb, color});
      break;
    }
    case PrimitiveKind::circle:
    case PrimitiveKind::ellipse: {
      const EllipseGeom& e = prim.ellipse();
      if (!(e.rx > 0 && e.ry > 0)) {
        out.notes.emplace_back("invisible: zero radius");
        break;
      }
      emit_outline(flatten_path(ellipse_outline(e), 1.0).front().points, true);
      break;
    }
    default: {
      const double tol = opt.curve_tolerance / vp.scale();
      for (const Polyline& pl : flatten_path(prim.path(), tol)) emit_outline(pl.points, pl.closed);
      break;
    }
  }
  if (clamped) out.notes.emplace_back("clamped to canvas");
  return out;
}

}  // namespace simvec::svg
