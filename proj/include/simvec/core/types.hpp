#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace simvec {

/// Normalized canvas extent: every SimVec coordinate is expressed in 1/1000 of
/// the larger image dimension.
inline constexpr int kCanvasSize = 1000;

/// Upper bound of each quantized HSL channel.
inline constexpr int kColorLevels = 20;

/// Quantized HSL color, each channel in [0, 20].
struct HslQ {
  int h = 0;
  int s = 0;
  int l = 0;

  friend bool operator==(const HslQ&, const HslQ&) = default;
};

struct NPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const NPoint&, const NPoint&) = default;
};

struct NBBox {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const NBBox&, const NBBox&) = default;
};

struct TextElement {
  std::string text;
  NBBox bbox;
  HslQ color;

  friend bool operator==(const TextElement&, const TextElement&) = default;
};

struct RectElement {
  NBBox bbox;
  HslQ color;

  friend bool operator==(const RectElement&, const RectElement&) = default;
};

struct LineElement {
  std::vector<NPoint> points;
  HslQ color;

  friend bool operator==(const LineElement&, const LineElement&) = default;
};

/// Implicitly closed: the first point is never repeated at the end.
struct PolygonElement {
  std::vector<NPoint> points;
  HslQ color;

  friend bool operator==(const PolygonElement&, const PolygonElement&) = default;
};

using Element = std::variant<TextElement, RectElement, LineElement, PolygonElement>;

enum class ElementKind { text, rect, line, polygon };

inline constexpr ElementKind kind_of(const Element& e) noexcept {
  return static_cast<ElementKind>(e.index());
}

inline constexpr std::string_view kind_name(ElementKind k) noexcept {
  switch (k) {
    case ElementKind::text: return "text";
    case ElementKind::rect: return "rect";
    case ElementKind::line: return "line";
    case ElementKind::polygon: return "polygon";
  }
  return "?";
}

inline const HslQ& color_of(const Element& e) noexcept {
  return std::visit([](const auto& el) -> const HslQ& { return el.color; }, e);
}

/// Ordered element list; order is paint order (later elements draw on top).
struct SimVecDoc {
  std::vector<Element> elements;

  [[nodiscard]] bool empty() const noexcept { return elements.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return elements.size(); }

  friend bool operator==(const SimVecDoc&, const SimVecDoc&) = default;
};

}  // namespace simvec
