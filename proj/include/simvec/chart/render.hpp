#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "simvec/chart/data.hpp"
#include "simvec/chart/meta.hpp"
#include "simvec/chart/random.hpp"
#include "simvec/chart/scale.hpp"
#include "simvec/chart/scene.hpp"
#include "simvec/core/format.hpp"

namespace simvec::chart {

class ChartError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Categorical palette; every entry survives hex → HSL → quantize unchanged.
inline constexpr std::array<HslQ, 12> kPalette = {{{12, 10, 10}, {2, 18, 11}, {0, 14, 11}, {9, 8, 10},
                                                   {6, 12, 9},   {3, 16, 11}, {16, 6, 12}, {19, 14, 13},
                                                   {1, 6, 8},    {14, 12, 13}, {7, 10, 13}, {17, 10, 8}}};

inline constexpr HslQ kBackground{0, 0, 20};
inline constexpr HslQ kInk{0, 0, 2};
inline constexpr HslQ kAxis{0, 0, 6};
inline constexpr HslQ kGrid{0, 0, 18};

struct RenderedChart {
  std::string svg;
  ChartMeta meta;
  SimVecDoc simvec;
};

namespace detail {

using Decor = std::vector<std::pair<std::string, std::string>>;

inline std::string axis_label(const QuantAttr& q) {
  std::string name = capitalize(q.name);
  return q.unit.empty() ? name : name + " (" + q.unit + ")";
}

inline Decor text_decor(const char* role, bool bold = false) {
  Decor d = {{"class", std::string("role-") + role},
             {"font-family", "Helvetica Neue, Helvetica, Arial, sans-serif"},
             {"font-weight", bold ? "bold" : "normal"},
             {"font-style", "normal"},
             {"fill-opacity", "1"},
             {"opacity", "1"},
             {"style", "user-select: none; pointer-events: none; white-space: pre;"}};
  return d;
}

inline Decor rule_decor(const char* role) {
  return {{"class", std::string("role-") + role},
          {"stroke-opacity", "1"},
          {"stroke-linecap", "square"},
          {"shape-rendering", "crispEdges"},
          {"opacity", "1"},
          {"pointer-events", "none"}};
}

inline Decor group_decor(const char* mark, const char* role) {
  return {{"class", std::string("mark-") + mark + " role-" + role},
          {"role", "graphics-object"},
          {"aria-roledescription", std::string(mark) + " mark container"}};
}

/// Vega-style scope: the returned content group sits between an empty
/// background and a hidden foreground path.
inline SceneNode& add_scope(SceneNode& parent, Decor decor, std::vector<TransformOp> at = {{TransformOp::Kind::translate, 0, 0}}) {
  SceneNode& outer = parent.add(make_group(std::move(decor)));
  SceneNode& cell = outer.add(make_group());
  cell.transform = std::move(at);
  cell.children.reserve(3);
  cell.add(make_path({{0, 0}, {0, 0}, {0, 0}, {0, 0}}, true, std::nullopt, std::nullopt)).decor = {
      {"class", "background"}, {"aria-hidden", "true"}, {"pointer-events", "none"}};
  SceneNode& content = cell.add(make_group());
  cell.add(make_path({{0, 0}, {0, 0}}, false, std::nullopt, std::nullopt)).decor = {
      {"class", "foreground"}, {"aria-hidden", "true"}, {"pointer-events", "none"}, {"display", "none"}};
  return content;
}

/// Per-role mark collection, e.g. all tick labels of one axis.
inline SceneNode collection(const char* mark, const char* role) {
  return make_group({{"class", std::string("mark-") + mark + " role-" + role}, {"pointer-events", "none"}});
}

/// One series of a line/area chart inside its own facet scope.
inline void add_series(SceneNode& scope, SceneNode mark, const char* mark_kind) {
  SceneNode inner = make_group(group_decor(mark_kind, "mark"));
  inner.decor[0].second += " pathgroup_marks";
  inner.add(std::move(mark));
  add_scope(scope, {}).add(std::move(inner));
}

inline xml::Element clip_def(double w, double h) {
  xml::Element rect;
  rect.name = "rect";
  rect.attributes = {{"x", "0"}, {"y", "0"}, {"width", format_decimal(w, 3)}, {"height", format_decimal(h, 3)}};
  xml::Element clip;
  clip.name = "clipPath";
  clip.attributes = {{"id", "clip1"}};
  clip.children.emplace_back(std::move(rect));
  return clip;
}

}  // namespace detail

/// Renders `table` as a chart of `type`. The SimVec is emitted from the
/// scene directly; `meta` binds every datum to its element and geometry.
inline RenderedChart render_chart(const DataSpec& spec, const DataTable& table, ChartType type, std::uint64_t style_seed) {
  const std::size_t nc = table.categories.size();
  const std::size_t nt = table.times.size();
  if (nc < 1 || nt < 2) throw ChartError("table too small to chart");
  if (type == ChartType::area_stacked && table.mode != ValueMode::percent_stacked)
    throw ChartError("area-stacked charts need a percent-stacked table");
  if (nc > kPalette.size()) throw ChartError("more series than palette colors");

  Rng rng(splitmix64(style_seed ^ 0xc0105ULL));
  std::vector<HslQ> palette(kPalette.begin(), kPalette.end());
  rng.shuffle(std::span(palette));
  palette.resize(nc);
  const RectEncoding encoding = static_cast<RectEncoding>(rng.integer(0, 2));

  ChartMeta meta;
  meta.type = type;
  meta.spec = spec;
  meta.table = table;
  meta.palette = palette;
  meta.seed = style_seed;
  const Layout& L = meta.layout;
  const double plot_w = L.plot_right - L.plot_left;
  const bool stacked = type == ChartType::bar_stacked || type == ChartType::area_stacked;
  const bool percent = table.mode == ValueMode::percent_stacked;

  // y domain
  double ymax = 100;
  if (!percent) {
    double top = 0;
    for (std::size_t t = 0; t < nt; ++t) {
      double col = 0;
      for (std::size_t c = 0; c < nc; ++c) {
        col = stacked ? col + table.at(c, t) : std::max(col, table.at(c, t));
      }
      top = std::max(top, col);
    }
    ymax = nice_max(top);
  }
  meta.y_scale = make_scale(0, ymax, L.plot_top, L.plot_bottom, Orientation::y, true);
  const AxisScale& ys = meta.y_scale;

  const bool banded = type == ChartType::bar_grouped || type == ChartType::bar_stacked;
  const double band = plot_w / static_cast<double>(nt);
  if (banded)
    meta.x_scale = make_scale(-0.5, static_cast<double>(nt) - 0.5, L.plot_left, L.plot_right, Orientation::x, false);
  else
    meta.x_scale = make_scale(0, static_cast<double>(nt - 1), L.plot_left + 20, L.plot_right - 20, Orientation::x, false);
  const AxisScale& xs = meta.x_scale;

  const std::string quant_label = detail::axis_label(spec.quantitative);
  auto aria = [&](std::size_t c, std::size_t t) {
    return spec.temporal.name + ": " + table.times[t] + "; " + spec.categorical.name + ": " + table.categories[c] +
           "; " + quant_label + ": " + format_decimal(table.at(c, t), 2);
  };

  auto series_tooltip = [&](std::size_t c) {
    std::string s = spec.categorical.name + ": " + table.categories[c] + "\n";
    for (std::size_t t = 0; t < nt; ++t)
      s += spec.temporal.name + " " + table.times[t] + ", " + quant_label + ": " + format_decimal(table.at(c, t), 2) + "\n";
    return s;
  };

  SceneNode root;
  SceneNode& bg = root.add(make_rect({0, 0, 1000, 625}, kBackground));
  bg.decor = {{"class", "background"}, {"aria-hidden", "true"}};

  SceneNode& frame = root.add(make_group({{"class", "mark-group role-frame root"},
                                          {"role", "graphics-object"},
                                          {"aria-roledescription", "group mark container"},
                                          {"fill", "none"},
                                          {"stroke-miterlimit", "10"}}));
  frame.transform = {{TransformOp::Kind::translate, L.plot_left, L.plot_top}};
  const double ox = L.plot_left;
  const double oy = L.plot_top;
  // Frame-local coordinates from here on.
  auto fx = [&](double x) { return x - ox; };
  auto fy = [&](double y) { return y - oy; };

  SceneNode& plot_bg = frame.add(make_path({{0, 0}, {plot_w, 0}, {plot_w, L.plot_bottom - L.plot_top}, {0, L.plot_bottom - L.plot_top}},
                                           true, std::nullopt, std::nullopt));
  plot_bg.decor = {{"class", "background"}, {"aria-hidden", "true"}};

  // grid
  std::vector<double> tick_values;
  for (int i = 0; i < L.y_ticks; ++i) tick_values.push_back(ymax * i / (L.y_ticks - 1));
  {
    SceneNode lines = detail::collection("rule", "axis-grid");
    for (double v : tick_values) {
      SceneNode& g = lines.add(make_line({0, 0}, {plot_w, 0}, kGrid));
      g.transform = {{TransformOp::Kind::translate, 0, snap(fy(ys.apply(v)))}};
      g.decor = detail::rule_decor("axis-grid");
    }
    detail::add_scope(frame, {{"class", "mark-group role-axis"}, {"aria-hidden", "true"}}).add(std::move(lines));
  }
  // marks
  const char* mark_kind = banded ? "rect" : type == ChartType::line ? "line" : "area";
  SceneNode& marks = frame.add(make_group(banded ? detail::group_decor(mark_kind, "mark")
                                                 : detail::group_decor("group", "scope pathgroup")));
  marks.decor.emplace_back("clip-path", "url(#clip1)");
  int next_tag = 0;
  struct Pending {
    int tag;
    MarkBinding binding;
  };
  std::vector<Pending> pending;

  // cumulative stack positions per time slice, in data units
  std::vector<std::vector<double>> cum(nc + 1, std::vector<double>(nt, 0.0));
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t c = 0; c < nc; ++c) cum[c + 1][t] = cum[c][t] + table.at(c, t);
  auto base_y = [&](double v) { return ys.apply(v); };

  if (banded) {
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t t = 0; t < nt; ++t) {
        const double v = table.at(c, t);
        MarkGeometry g;
        double x0, w, ytop, ybot;
        if (type == ChartType::bar_grouped) {
          const double inner = band * 0.7;
          w = inner / static_cast<double>(nc);
          x0 = L.plot_left + band * static_cast<double>(t) + band * 0.15 + w * static_cast<double>(c);
          ytop = base_y(v);
          ybot = L.plot_bottom;
          g.position = ys.extent(v);
        } else {
          w = band * 0.6;
          x0 = L.plot_left + band * static_cast<double>(t) + band * 0.2;
          ytop = base_y(cum[c + 1][t]);
          ybot = base_y(cum[c][t]);
          g.position = ys.extent(cum[c + 1][t]);
        }
        g.x = x0;
        g.y = ytop;
        g.width = w;
        g.extent = ys.extent(v);
        SceneNode r = make_rect({fx(x0), fy(ytop), w, 0}, palette[c]);
        // snap both edges independently so stacked segments share boundaries
        r.box.y = snap(fy(ytop));
        r.box.h = snap(fy(ybot)) - r.box.y;
        r.encoding = encoding;
        r.decor = {{"role", "graphics-symbol"}, {"aria-roledescription", "bar"}, {"aria-label", aria(c, t)}};
        r.tooltip = aria(c, t);
        r.tag = next_tag++;
        pending.push_back({r.tag, {"bar-" + std::to_string(c) + "-" + std::to_string(t), 0, table.categories[c],
                                   table.times[t], v, g}});
        marks.add(std::move(r));
      }
    }
  } else if (type == ChartType::line) {
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<Vec2> pts;
      for (std::size_t t = 0; t < nt; ++t) pts.push_back({fx(xs.apply(static_cast<double>(t))), fy(base_y(table.at(c, t)))});
      SceneNode p = make_path(pts, false, std::nullopt, palette[c]);
      p.stroke_width = 2.5;
      p.decor = {{"role", "graphics-symbol"},
                 {"aria-roledescription", "line mark"},
                 {"aria-label", spec.categorical.name + ": " + table.categories[c]},
                 {"stroke-linejoin", "round"},
                 {"stroke-linecap", "round"}};
      p.tooltip = series_tooltip(c);
      p.tag = next_tag++;
      for (std::size_t t = 0; t < nt; ++t) {
        const double v = table.at(c, t);
        MarkGeometry g{xs.apply(static_cast<double>(t)), base_y(v), 0, ys.extent(v), ys.extent(v)};
        pending.push_back({p.tag, {"line-" + std::to_string(c), 0, table.categories[c], table.times[t], v, g}});
      }
      detail::add_series(marks, std::move(p), mark_kind);
    }
  } else {
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<Vec2> pts;
      for (std::size_t t = 0; t < nt; ++t) pts.push_back({fx(xs.apply(static_cast<double>(t))), fy(base_y(cum[c + 1][t]))});
      for (std::size_t t = nt; t-- > 0;) pts.push_back({fx(xs.apply(static_cast<double>(t))), fy(base_y(cum[c][t]))});
      SceneNode p = make_path(pts, true, palette[c], std::nullopt);
      p.decor = {{"role", "graphics-symbol"},
                 {"aria-roledescription", "area mark"},
                 {"aria-label", spec.categorical.name + ": " + table.categories[c]},
                 {"fill-opacity", "1"}};
      p.tooltip = series_tooltip(c);
      p.tooltip = series_tooltip(c);
      p.tag = next_tag++;
      for (std::size_t t = 0; t < nt; ++t) {
        const double v = table.at(c, t);
        MarkGeometry g{xs.apply(static_cast<double>(t)), base_y(cum[c + 1][t]), 0, ys.extent(v), ys.extent(cum[c + 1][t])};
        pending.push_back({p.tag, {"area-" + std::to_string(c), 0, table.categories[c], table.times[t], v, g}});
      }
      detail::add_series(marks, std::move(p), mark_kind);
    }
  }

  // axes
  {
    SceneNode domain = detail::collection("rule", "axis-domain");
    domain.add(make_line({0, 0}, {0, L.plot_bottom - L.plot_top}, kAxis)).decor = detail::rule_decor("axis-domain");
    SceneNode ticks = detail::collection("rule", "axis-tick");
    SceneNode labels = detail::collection("text", "axis-label");
    for (double v : tick_values) {
      const double y = snap(fy(ys.apply(v)));
      SceneNode& tick = ticks.add(make_line({-6, 0}, {0, 0}, kAxis));
      tick.transform = {{TransformOp::Kind::translate, 0, y}};
      tick.decor = detail::rule_decor("axis-tick");
      std::string label = format_number(round_to(v, 6));
      if (percent) label += "%";
      SceneNode& lab = labels.add(make_text(label, {0, 0}, L.tick_font, TextAnchor::end, kInk));
      lab.transform = {{TransformOp::Kind::translate, -10, snap(y + 4)}};
      lab.decor = detail::text_decor("axis-label");
    }
    SceneNode title = detail::collection("text", "axis-title");
    SceneNode& t = title.add(make_text(quant_label, {0, 0}, L.axis_title_font, TextAnchor::middle, kInk));
    t.transform = {{TransformOp::Kind::translate, -80, snap((L.plot_bottom - L.plot_top) / 2)},
                   {TransformOp::Kind::rotate, -90, 0}};
    t.decor = detail::text_decor("axis-title", true);

    SceneNode& yaxis = detail::add_scope(frame, {{"class", "mark-group role-axis"}, {"role", "graphics-symbol"},
                                                 {"aria-roledescription", "axis"},
                                                 {"aria-label", "Y-axis titled '" + quant_label + "' for a linear scale"}});
    for (SceneNode* part : {&domain, &ticks, &labels, &title}) yaxis.add(std::move(*part));
  }
  {
    const double axis_y = L.plot_bottom - L.plot_top;
    SceneNode domain = detail::collection("rule", "axis-domain");
    domain.add(make_line({0, 0}, {plot_w, 0}, kAxis)).decor = detail::rule_decor("axis-domain");
    SceneNode ticks = detail::collection("rule", "axis-tick");
    SceneNode labels = detail::collection("text", "axis-label");
    for (std::size_t t = 0; t < nt; ++t) {
      const double x = snap(fx(xs.apply(static_cast<double>(t))));
      SceneNode& tick = ticks.add(make_line({0, 0}, {0, 6}, kAxis));
      tick.transform = {{TransformOp::Kind::translate, x, 0}};
      tick.decor = detail::rule_decor("axis-tick");
      SceneNode& lab = labels.add(make_text(table.times[t], {0, 0}, L.tick_font, TextAnchor::middle, kInk));
      lab.transform = {{TransformOp::Kind::translate, x, 22}};
      lab.decor = detail::text_decor("axis-label");
    }
    SceneNode title = detail::collection("text", "axis-title");
    title.add(make_text(detail::capitalize(spec.temporal.name), {snap(plot_w / 2), 52}, L.axis_title_font,
                        TextAnchor::middle, kInk))
        .decor = detail::text_decor("axis-title", true);

    SceneNode& xaxis = detail::add_scope(frame,
                                         {{"class", "mark-group role-axis"}, {"role", "graphics-symbol"},
                                          {"aria-roledescription", "axis"},
                                          {"aria-label", "X-axis titled '" + detail::capitalize(spec.temporal.name) +
                                                             "' for a discrete scale with " + std::to_string(nt) + " values"}},
                                         {{TransformOp::Kind::translate, 0, axis_y}});
    for (SceneNode* part : {&domain, &ticks, &labels, &title}) xaxis.add(std::move(*part));
  }

  // legend
  {
    SceneNode title = detail::collection("text", "legend-title");
    title.add(make_text(detail::capitalize(spec.categorical.name), {0, 14}, L.axis_title_font, TextAnchor::start, kInk))
        .decor = detail::text_decor("legend-title", true);
    SceneNode entries = make_group({{"class", "mark-group role-legend-entry"}});
    for (std::size_t c = 0; c < nc; ++c) {
      SceneNode symbol = detail::collection("symbol", "legend-symbol");
      SceneNode& sw = symbol.add(type == ChartType::line ? make_rect({0, 5, 14, 4}, palette[c])
                                                          : make_rect({0, 0, 14, 14}, palette[c]));
      sw.decor = {{"shape-rendering", "crispEdges"}, {"opacity", "1"}};
      SceneNode label = detail::collection("text", "legend-label");
      label.add(make_text(table.categories[c], {20, 11.6}, L.legend_font, TextAnchor::start, kInk)).decor =
          detail::text_decor("legend-label");
      SceneNode& entry = detail::add_scope(entries, detail::group_decor("group", "scope"),
                                           {{TransformOp::Kind::translate, 0, 28 + 24 * static_cast<double>(c)}});
      entry.add(std::move(symbol));
      entry.add(std::move(label));
    }
    SceneNode& legend = detail::add_scope(root,
                                          {{"class", "mark-group role-legend"}, {"role", "graphics-symbol"},
                                           {"aria-roledescription", "legend"},
                                           {"aria-label", "Symbol legend titled '" + detail::capitalize(spec.categorical.name) +
                                                              "' for fill color with " + std::to_string(nc) + " values"}},
                                          {{TransformOp::Kind::translate, L.legend_x, 56}});
    legend.add(std::move(title));
    legend.add(std::move(entries));
  }
  // title
  {
    std::string text = detail::capitalize(spec.topic) + " by " + spec.categorical.name;
    SceneNode title = make_text(std::move(text), {snap((L.plot_left + L.plot_right) / 2), 30}, L.title_font,
                                TextAnchor::middle, kInk);
    title.decor = detail::text_decor("title-text", true);
    root.add(std::move(title));
  }

  Emission em = emit_simvec(root);
  for (auto& p : pending) {
    const auto it = std::find_if(em.tagged.begin(), em.tagged.end(), [&](const auto& tg) { return tg.first == p.tag; });
    if (it == em.tagged.end()) throw ChartError("mark " + p.binding.mark_id + " produced no element");
    p.binding.element = it->second;
    meta.bindings.push_back(std::move(p.binding));
  }

  const double k = std::max(meta.width, meta.height) / kCanvasSize;
  RenderedChart out;
  out.svg = write_svg(root, meta.width, meta.height,
                      {{"xmlns:xlink", "http://www.w3.org/1999/xlink"},
                       {"class", "marks"},
                       {"role", "graphics-document"},
                       {"aria-roledescription", std::string(chart_type_name(type)) + " chart"},
                       {"style", "font-family: Helvetica Neue, Helvetica, Arial, sans-serif; background-color: white;"}},
                      {detail::clip_def(plot_w * k, (L.plot_bottom - L.plot_top) * k)});
  out.meta = std::move(meta);
  out.simvec = std::move(em.doc);
  return out;
}

}  // namespace simvec::chart
