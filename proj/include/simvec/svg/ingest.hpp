#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simvec/core/types.hpp"
#include "simvec/svg/affine.hpp"
#include "simvec/svg/paint.hpp"
#include "simvec/svg/path.hpp"
#include "simvec/svg/primitive.hpp"
#include "simvec/xml/dom.hpp"

namespace simvec::svg {

struct IngestOptions {
  bool strict = false;
  double curve_tolerance = kDefaultCurveTolerance;  // normalized units
};

/// Structured record for anything dropped or approximated.
struct IngestWarning {
  std::string element;
  std::size_t source_index = 0;
  std::string reason;

  [[nodiscard]] std::string to_line() const { return element + '\t' + std::to_string(source_index) + '\t' + reason; }
};

struct IngestResult {
  SimVecDoc doc;
  std::vector<IngestWarning> warnings;
  Viewport viewport;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Parses "12", "12px", "12.5pt"; percentages resolve against `reference`
/// when it is positive. Returns nullopt on anything else.
inline std::optional<double> parse_length(std::string_view s, double reference = -1) {
  s = trim(s);
  std::size_t i = 0;
  double v = 0;
  if (!read_number(s, i, v)) return std::nullopt;
  const std::string_view unit = trim(s.substr(i));
  if (unit.empty() || unit == "px") return v;
  if (unit == "pt") return v * 4.0 / 3.0;
  if (unit == "pc") return v * 16.0;
  if (unit == "in") return v * 96.0;
  if (unit == "cm") return v * 96.0 / 2.54;
  if (unit == "mm") return v * 96.0 / 25.4;
  if (unit == "%" && reference > 0) return v * reference / 100.0;
  return std::nullopt;
}

inline std::vector<double> parse_number_list(std::string_view s) {
  std::vector<double> out;
  std::size_t i = 0;
  double v = 0;
  while (read_number(s, i, v)) out.push_back(v);
  return out;
}

struct StyleState {
  std::string fill = "black";
  std::string stroke = "none";
  std::string color = "black";
  std::string font_size = "16";
  TextAnchor anchor = TextAnchor::start;
  bool visible = true;
  double opacity = 1.0;
  double fill_opacity = 1.0;
  double stroke_opacity = 1.0;
  bool displayed = true;
};

inline double parse_opacity(std::string_view s) {
  s = trim(s);
  std::size_t i = 0;
  double v = 1;
  if (!read_number(s, i, v)) return 1.0;
  if (i < s.size() && s[i] == '%') v /= 100.0;
  return std::clamp(v, 0.0, 1.0);
}

inline void apply_property(StyleState& st, std::string_view name, std::string_view value) {
  value = trim(value);
  if (value == "inherit") return;
  if (name == "fill") {
    st.fill = value;
  } else if (name == "stroke") {
    st.stroke = value;
  } else if (name == "color") {
    st.color = value;
  } else if (name == "font-size") {
    st.font_size = value;
  } else if (name == "text-anchor") {
    st.anchor = value == "middle" ? TextAnchor::middle : value == "end" ? TextAnchor::end : TextAnchor::start;
  } else if (name == "visibility") {
    st.visible = value == "visible";
  } else if (name == "display") {
    if (value == "none") st.displayed = false;
  } else if (name == "opacity") {
    st.opacity *= parse_opacity(value);
  } else if (name == "fill-opacity") {
    st.fill_opacity = parse_opacity(value);
  } else if (name == "stroke-opacity") {
    st.stroke_opacity = parse_opacity(value);
  }
}

// Presentation attributes first, then the inline style declarations.
inline StyleState derive_style(const StyleState& parent, const xml::Element& el) {
  StyleState st = parent;
  st.displayed = true;
  for (const auto& [k, v] : el.attributes) apply_property(st, k, v);
  if (const auto* style = el.attr("style")) {
    std::string_view rest = *style;
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const std::string_view decl = rest.substr(0, semi);
      const auto colon = decl.find(':');
      if (colon != std::string_view::npos) apply_property(st, trim(decl.substr(0, colon)), decl.substr(colon + 1));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  return st;
}

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

/// xml:space="preserve": line breaks and tabs become spaces, nothing is trimmed.
inline std::string preserve_whitespace(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

/// Root user-space → source-pixel transform from width/height/viewBox and
/// preserveAspectRatio; `out` receives the viewport size.
inline AffineMatrix viewport_transform(const xml::Element& root, Viewport& out) {
  std::optional<double> w;
  std::optional<double> h;
  if (const auto* a = root.attr("width")) w = parse_length(*a);
  if (const auto* a = root.attr("height")) h = parse_length(*a);
  std::vector<double> vb;
  if (const auto* a = root.attr("viewBox")) vb = parse_number_list(*a);
  const bool has_vb = vb.size() == 4 && vb[2] > 0 && vb[3] > 0;
  if (!w && has_vb) w = h ? *h * vb[2] / vb[3] : vb[2];
  if (!h && has_vb) h = *w * vb[3] / vb[2];
  if (!w || !h || !(*w > 0) || !(*h > 0)) throw IngestError("missing viewport: need width/height or viewBox");
  out = {*w, *h};
  if (!has_vb) return AffineMatrix::identity();
  double sx = *w / vb[2];
  double sy = *h / vb[3];
  double tx = 0;
  double ty = 0;
  const std::string par = root.get("preserveAspectRatio").value_or("xMidYMid meet");
  if (par.rfind("none", 0) != 0) {
    const double s = par.find("slice") != std::string::npos ? std::max(sx, sy) : std::min(sx, sy);
    const double fx = par.find("xMin") != std::string::npos ? 0.0 : par.find("xMax") != std::string::npos ? 1.0 : 0.5;
    const double fy = par.find("YMin") != std::string::npos ? 0.0 : par.find("YMax") != std::string::npos ? 1.0 : 0.5;
    tx = (*w - vb[2] * s) * fx;
    ty = (*h - vb[3] * s) * fy;
    sx = sy = s;
  }
  return AffineMatrix::translate(tx, ty) * AffineMatrix::scale(sx, sy) * AffineMatrix::translate(-vb[0], -vb[1]);
}

class Ingestor {
 public:
  Ingestor(const xml::Document& doc, const IngestOptions& opt) : doc_(doc), opt_(opt) { index_ids(doc_.root); }

  IngestResult run() {
    const xml::Element& root = doc_.root;
    if (root.name != "svg") throw IngestError("root element is <" + root.name + ">, expected <svg>");
    AffineMatrix root_tf = resolve_viewport(root);
    StyleState st = derive_style(StyleState{}, root);
    counter_ = 1;
    walk_children(root, root_tf, st, 0);
    return std::move(result_);
  }

 private:
  AffineMatrix resolve_viewport(const xml::Element& root) { return viewport_transform(root, result_.viewport); }

  void index_ids(const xml::Element& el) {
    if (const auto* id = el.attr("id")) ids_.emplace(*id, &el);
    for (const auto& n : el.children)
      if (n.is_element()) index_ids(n.element());
  }

  void warn(const xml::Element& el, std::size_t index, std::string reason) {
    result_.warnings.push_back({el.name, index, std::move(reason)});
  }

  [[noreturn]] void fail(const xml::Element& el, std::size_t index, const std::string& reason) {
    throw IngestError("<" + el.name + "> #" + std::to_string(index) + ": " + reason);
  }

  void unsupported(const xml::Element& el, std::size_t index, const std::string& reason) {
    if (opt_.strict) fail(el, index, reason);
    warn(el, index, reason);
  }

  std::optional<AffineMatrix> local_transform(const xml::Element& el, std::size_t index) {
    const auto* t = el.attr("transform");
    if (!t) return AffineMatrix::identity();
    try {
      return parse_transform(*t);
    } catch (const TransformSyntaxError& e) {
      unsupported(el, index, e.what());
      return std::nullopt;
    }
  }

  void skip_subtree(const xml::Element& el) {
    for (const auto& n : el.children)
      if (n.is_element()) {
        ++counter_;
        skip_subtree(n.element());
      }
  }

  void walk_children(const xml::Element& el, const AffineMatrix& ctm, const StyleState& st, int use_depth) {
    for (const auto& n : el.children)
      if (n.is_element()) walk(n.element(), ctm, st, use_depth);
  }

  void walk(const xml::Element& el, const AffineMatrix& parent_ctm, const StyleState& parent_style, int use_depth) {
    const std::size_t index = counter_++;
    const std::string& name = el.name;
    static constexpr std::string_view kNonRendering[] = {
        "defs",   "symbol", "clipPath", "mask",  "pattern", "marker", "linearGradient", "radialGradient",
        "filter", "title",  "desc",     "metadata", "style", "script", "stop"};
    for (std::string_view nr : kNonRendering) {
      if (name == nr) {
        skip_subtree(el);
        return;
      }
    }
    StyleState st = derive_style(parent_style, el);
    if (!st.displayed) {
      skip_subtree(el);
      return;
    }
    const auto local = local_transform(el, index);
    if (!local) {
      skip_subtree(el);
      return;
    }
    AffineMatrix ctm = parent_ctm * *local;

    if (name == "g" || name == "a" || name == "switch") {
      walk_children(el, ctm, st, use_depth);
      return;
    }
    if (name == "svg") {
      const double x = parse_length(el.get("x").value_or("0")).value_or(0);
      const double y = parse_length(el.get("y").value_or("0")).value_or(0);
      walk_children(el, ctm * AffineMatrix::translate(x, y), st, use_depth);
      return;
    }
    if (name == "use") {
      expand_use(el, index, ctm, st, use_depth);
      return;
    }

    RawPrimitive prim;
    prim.source_index = index;
    const bool built = build_primitive(el, index, st, prim);
    skip_subtree(el);
    if (!built) return;
    if (!st.visible) {
      warn(el, index, "invisible: visibility hidden");
      return;
    }
    emit(el, index, prim, ctm);
  }

  void expand_use(const xml::Element& el, std::size_t index, const AffineMatrix& ctm, const StyleState& st, int use_depth) {
    if (use_depth > 0) {
      unsupported(el, index, "nested <use> expansion beyond one level");
      return;
    }
    const auto* href = el.attr("href");
    if (!href) href = el.attr("xlink:href");
    if (!href || href->empty() || (*href)[0] != '#') {
      unsupported(el, index, "<use> without a local reference");
      return;
    }
    const auto it = ids_.find(href->substr(1));
    if (it == ids_.end()) {
      unsupported(el, index, "<use> reference not found: " + *href);
      return;
    }
    const double x = parse_length(el.get("x").value_or("0")).value_or(0);
    const double y = parse_length(el.get("y").value_or("0")).value_or(0);
    const AffineMatrix inner = ctm * AffineMatrix::translate(x, y);
    const xml::Element& target = *it->second;
    const std::size_t saved = counter_;
    if (target.name == "symbol") {
      walk_children(target, inner, derive_style(st, target), use_depth + 1);
    } else {
      walk(target, inner, st, use_depth + 1);
    }
    counter_ = saved;
  }

  Paint resolve_paint(const xml::Element& el, std::size_t index, const std::string& raw, const StyleState& st,
                      double opacity) {
    std::optional<Paint> p = parse_paint(raw);
    if (!p) {
      warn(el, index, "unrecognized paint '" + raw + "'");
      return Paint::none();
    }
    if (p->kind == Paint::Kind::current_color) {
      p = parse_paint(st.color);
      if (!p || p->kind != Paint::Kind::color) return Paint::none();
    }
    if (p->kind == Paint::Kind::url) {
      p = first_stop_color(p->ref, 0);
      if (!p) {
        warn(el, index, "paint server without a usable stop color: " + raw);
        return Paint::none();
      }
    }
    if (opacity <= 0) return Paint::none();
    return *p;
  }

  std::optional<Paint> first_stop_color(const std::string& id, int depth) {
    const auto it = ids_.find(id);
    if (it == ids_.end() || depth > 1) return std::nullopt;
    const xml::Element& grad = *it->second;
    if (grad.name != "linearGradient" && grad.name != "radialGradient") return std::nullopt;
    for (const auto& n : grad.children) {
      if (!n.is_element() || n.element().name != "stop") continue;
      std::string color = n.element().get("stop-color").value_or("black");
      if (const auto* style = n.element().attr("style")) {
        const auto pos = style->find("stop-color");
        if (pos != std::string::npos) {
          const auto colon = style->find(':', pos);
          const auto semi = style->find(';', pos);
          color = std::string(trim(std::string_view(*style).substr(colon + 1, semi == std::string::npos ? std::string::npos : semi - colon - 1)));
        }
      }
      auto p = parse_paint(color);
      if (p && p->kind == Paint::Kind::color) return p;
      return std::nullopt;
    }
    const auto* href = grad.attr("href");
    if (!href) href = grad.attr("xlink:href");
    if (href && !href->empty() && (*href)[0] == '#') return first_stop_color(href->substr(1), depth + 1);
    return std::nullopt;
  }

  double attr_length(const xml::Element& el, std::string_view key, double reference = -1) {
    const auto* v = el.attr(key);
    if (!v) return 0;
    return parse_length(*v, reference).value_or(0);
  }

  bool build_primitive(const xml::Element& el, std::size_t index, const StyleState& st, RawPrimitive& prim) {
    const double vw = result_.viewport.width;
    const double vh = result_.viewport.height;
    const std::string& name = el.name;
    if (name == "rect") {
      prim.kind = PrimitiveKind::rect;
      prim.geometry = Box{attr_length(el, "x", vw), attr_length(el, "y", vh), attr_length(el, "width", vw),
                          attr_length(el, "height", vh)};
    } else if (name == "circle") {
      prim.kind = PrimitiveKind::circle;
      const double r = attr_length(el, "r");
      prim.geometry = EllipseGeom{attr_length(el, "cx", vw), attr_length(el, "cy", vh), r, r};
    } else if (name == "ellipse") {
      prim.kind = PrimitiveKind::ellipse;
      prim.geometry = EllipseGeom{attr_length(el, "cx", vw), attr_length(el, "cy", vh), attr_length(el, "rx", vw),
                                  attr_length(el, "ry", vh)};
    } else if (name == "line") {
      prim.kind = PrimitiveKind::line;
      Subpath sp{{attr_length(el, "x1", vw), attr_length(el, "y1", vh)}, {}, false};
      sp.segments.push_back({false, {}, {}, {attr_length(el, "x2", vw), attr_length(el, "y2", vh)}});
      prim.geometry = PathData{{sp}};
    } else if (name == "polyline" || name == "polygon") {
      prim.kind = name == "polygon" ? PrimitiveKind::polygon : PrimitiveKind::polyline;
      const auto nums = parse_number_list(el.get("points").value_or(""));
      if (nums.size() < 2) {
        warn(el, index, "degenerate: no points");
        return false;
      }
      Subpath sp{{nums[0], nums[1]}, {}, name == "polygon"};
      for (std::size_t k = 2; k + 1 < nums.size(); k += 2) sp.segments.push_back({false, {}, {}, {nums[k], nums[k + 1]}});
      prim.geometry = PathData{{sp}};
    } else if (name == "path") {
      prim.kind = PrimitiveKind::path;
      std::vector<std::string> notes;
      try {
        prim.geometry = parse_path_data(el.get("d").value_or(""), opt_.strict, &notes);
      } catch (const UnsupportedFeature& e) {
        fail(el, index, e.what());
      } catch (const PathSyntaxError& e) {
        unsupported(el, index, e.what());
        return false;
      }
      for (auto& n : notes) warn(el, index, std::move(n));
    } else if (name == "text") {
      prim.kind = PrimitiveKind::text;
      const auto* space = el.attr("xml:space");
      prim.text = space && *space == "preserve" ? preserve_whitespace(el.text_content()) : collapse_whitespace(el.text_content());
      std::vector<double> xs = parse_number_list(el.get("x").value_or(""));
      std::vector<double> ys = parse_number_list(el.get("y").value_or(""));
      for (const auto& n : el.children) {
        if (!n.is_element() || n.element().name != "tspan") continue;
        if (xs.empty()) xs = parse_number_list(n.element().get("x").value_or(""));
        if (ys.empty()) ys = parse_number_list(n.element().get("y").value_or(""));
        break;
      }
      const double font_size = parse_length(st.font_size).value_or(16.0);
      double text_length = -1;
      if (const auto* tl = el.attr("textLength")) text_length = parse_length(*tl).value_or(-1);
      prim.geometry = estimate_text_box(xs.empty() ? 0 : xs[0], ys.empty() ? 0 : ys[0], font_size, st.anchor, prim.text,
                                        text_length);
    } else {
      unsupported(el, index, "unsupported element <" + name + ">");
      return false;
    }
    prim.fill = resolve_paint(el, index, st.fill, st, st.opacity * st.fill_opacity);
    prim.stroke = resolve_paint(el, index, st.stroke, st, st.opacity * st.stroke_opacity);
    return true;
  }

  void emit(const xml::Element& el, std::size_t index, const RawPrimitive& prim, const AffineMatrix& ctm) {
    RawPrimitive root_prim;
    try {
      root_prim = apply_transform(ctm, prim);
    } catch (const DegenerateTransform&) {
      warn(el, index, "invisible: degenerate transform");
      return;
    }
    Canonical c = canonicalize_primitive(root_prim, result_.viewport, {opt_.curve_tolerance, true});
    for (auto& e : c.elements) result_.doc.elements.push_back(std::move(e));
    for (auto& n : c.notes) warn(el, index, std::move(n));
  }

  const xml::Document& doc_;
  IngestOptions opt_;
  IngestResult result_;
  std::unordered_map<std::string, const xml::Element*> ids_;
  std::size_t counter_ = 0;
};

}  // namespace detail

/// Compiles SVG text into SimVec: flattens groups and transforms, maps every
/// primitive onto the four SimVec kinds in paint order, normalizes
/// coordinates, quantizes colors and drops styling.
inline IngestResult ingest_svg_detailed(std::string_view svg, const IngestOptions& opt = {}) {
  const xml::Document doc = xml::parse(svg);
  return detail::Ingestor(doc, opt).run();
}

inline SimVecDoc ingest_svg(std::string_view svg, const IngestOptions& opt = {}) {
  return ingest_svg_detailed(svg, opt).doc;
}

}  // namespace simvec::svg
