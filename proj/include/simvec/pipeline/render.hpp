#pragma once

#include <string>

#include "simvec/core/color.hpp"
#include "simvec/core/format.hpp"
#include "simvec/core/grammar.hpp"
#include "simvec/core/types.hpp"
#include "simvec/core/validate.hpp"
#include "simvec/xml/dom.hpp"

namespace simvec::pipeline {

/// hsl() at the center of a quantized level.
inline std::string css_color(const HslQ& q) {
  const Hsl c = dequantize_color(q);
  return "hsl(" + format_number(c.h) + "," + format_number(c.s) + "%," + format_number(c.l) + "%)";
}

namespace detail {

inline std::string points_attr(const std::vector<NPoint>& pts) {
  std::string out;
  for (const auto& p : pts) {
    if (!out.empty()) out += ' ';
    out += std::to_string(p.x) + "," + std::to_string(p.y);
  }
  return out;
}

}  // namespace detail

/// Draws a SimVec document on a 1000×1000 canvas, one node per element in
/// paint order. Text boxes are reproduced through font-size and textLength.
inline std::string render_simvec(const SimVecDoc& doc) {
  if (const auto v = validate(doc); !v.empty()) throw ValidationError(v);
  const std::string size = std::to_string(kCanvasSize);
  xml::Element root;
  root.name = "svg";
  root.attributes = {{"xmlns", "http://www.w3.org/2000/svg"},
                     {"width", size},
                     {"height", size},
                     {"viewBox", "0 0 " + size + " " + size}};
  for (const Element& e : doc.elements) {
    xml::Element el;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, TextElement>) {
            const double fs = x.bbox.height / 1.2;
            el.name = "text";
            el.attributes = {{"x", std::to_string(x.bbox.left)},
                             {"y", format_number(x.bbox.top + fs)},
                             {"font-size", format_number(fs)},
                             {"textLength", std::to_string(x.bbox.width)},
                             {"fill", css_color(x.color)},
                             {"xml:space", "preserve"}};
            el.children.emplace_back(xml::Text{x.text});
          } else if constexpr (std::is_same_v<T, RectElement>) {
            el.name = "rect";
            el.attributes = {{"x", std::to_string(x.bbox.left)},
                             {"y", std::to_string(x.bbox.top)},
                             {"width", std::to_string(x.bbox.width)},
                             {"height", std::to_string(x.bbox.height)},
                             {"fill", css_color(x.color)}};
          } else if constexpr (std::is_same_v<T, LineElement>) {
            el.name = "polyline";
            el.attributes = {{"points", detail::points_attr(x.points)}, {"fill", "none"}, {"stroke", css_color(x.color)}};
          } else {
            el.name = "polygon";
            el.attributes = {{"points", detail::points_attr(x.points)}, {"fill", css_color(x.color)}};
          }
        },
        e);
    root.children.emplace_back(std::move(el));
  }
  return xml::write(xml::Document{std::move(root)});
}

}  // namespace simvec::pipeline
