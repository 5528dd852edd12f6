#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "simvec/core/types.hpp"

namespace simvec {

/// One canonical-range or arity violation. `value` holds the observed number
/// (a coordinate, a channel, or a point count).
struct Violation {
  std::size_t index = 0;
  std::string field;
  long long value = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline void check_range(std::vector<Violation>& out, std::size_t index, std::string field, long long v,
                        long long lo, long long hi) {
  if (v < lo || v > hi) out.push_back({index, std::move(field), v});
}

inline void check_color(std::vector<Violation>& out, std::size_t index, const HslQ& c) {
  check_range(out, index, "color.h", c.h, 0, kColorLevels);
  check_range(out, index, "color.s", c.s, 0, kColorLevels);
  check_range(out, index, "color.l", c.l, 0, kColorLevels);
}

inline void check_bbox(std::vector<Violation>& out, std::size_t index, const NBBox& b) {
  check_range(out, index, "bbox.left", b.left, 0, kCanvasSize);
  check_range(out, index, "bbox.top", b.top, 0, kCanvasSize);
  check_range(out, index, "bbox.width", b.width, 0, kCanvasSize);
  check_range(out, index, "bbox.height", b.height, 0, kCanvasSize);
  const long long right = static_cast<long long>(b.left) + b.width;
  const long long bottom = static_cast<long long>(b.top) + b.height;
  if (b.width >= 0 && b.left >= 0 && b.left <= kCanvasSize) check_range(out, index, "bbox.right", right, 0, kCanvasSize);
  if (b.height >= 0 && b.top >= 0 && b.top <= kCanvasSize) check_range(out, index, "bbox.bottom", bottom, 0, kCanvasSize);
}

inline void check_points(std::vector<Violation>& out, std::size_t index, const std::vector<NPoint>& pts,
                         std::size_t min_count) {
  if (pts.size() < min_count) out.push_back({index, "points", static_cast<long long>(pts.size())});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string prefix = "points[" + std::to_string(i) + "]";
    check_range(out, index, prefix + ".x", pts[i].x, 0, kCanvasSize);
    check_range(out, index, prefix + ".y", pts[i].y, 0, kCanvasSize);
  }
}

}  // namespace detail

/// Canonical-range and arity check. Violations are data; the list is empty iff
/// the document is canonical.
inline std::vector<Violation> validate(const SimVecDoc& doc) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    const Element& e = doc.elements[i];
    if (const auto* t = std::get_if<TextElement>(&e)) {
      if (t->text.empty()) out.push_back({i, "text", 0});
      detail::check_bbox(out, i, t->bbox);
      detail::check_color(out, i, t->color);
    } else if (const auto* r = std::get_if<RectElement>(&e)) {
      detail::check_bbox(out, i, r->bbox);
      detail::check_color(out, i, r->color);
    } else if (const auto* l = std::get_if<LineElement>(&e)) {
      detail::check_points(out, i, l->points, 2);
      detail::check_color(out, i, l->color);
    } else if (const auto* p = std::get_if<PolygonElement>(&e)) {
      detail::check_points(out, i, p->points, 3);
      detail::check_color(out, i, p->color);
    }
  }
  return out;
}

inline std::string describe(const Violation& v) {
  return "element " + std::to_string(v.index) + ": " + v.field + " = " + std::to_string(v.value);
}

}  // namespace simvec
