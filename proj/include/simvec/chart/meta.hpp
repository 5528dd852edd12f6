#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "simvec/chart/data.hpp"
#include "simvec/chart/scale.hpp"
#include "simvec/core/types.hpp"

namespace simvec::chart {

enum class ChartType { bar_grouped, bar_stacked, line, area_stacked };

inline std::string_view chart_type_name(ChartType t) {
  switch (t) {
    case ChartType::bar_grouped: return "bar-grouped";
    case ChartType::bar_stacked: return "bar-stacked";
    case ChartType::line: return "line";
    case ChartType::area_stacked: return "area-stacked";
  }
  return "?";
}

inline ChartType parse_chart_type(std::string_view s) {
  if (s == "bar-grouped") return ChartType::bar_grouped;
  if (s == "bar-stacked") return ChartType::bar_stacked;
  if (s == "line") return ChartType::line;
  if (s == "area-stacked") return ChartType::area_stacked;
  throw std::invalid_argument("unknown chart type: " + std::string(s));
}

/// Corpus-level family: "bar", "line" or "area".
inline std::string_view chart_family(ChartType t) {
  switch (t) {
    case ChartType::bar_grouped:
    case ChartType::bar_stacked: return "bar";
    case ChartType::line: return "line";
    case ChartType::area_stacked: return "area";
  }
  return "?";
}

/// Mark geometry in normalized units. `y` is the top of a bar segment or
/// band, or the line vertex; `extent` is the segment height (for lines, the
/// distance above the baseline); `position` is baseline − y.
struct MarkGeometry {
  double x = 0;
  double y = 0;
  double width = 0;
  double extent = 0;
  double position = 0;
  friend bool operator==(const MarkGeometry&, const MarkGeometry&) = default;
};

struct MarkBinding {
  std::string mark_id;
  std::size_t element = 0;  // index into the chart's SimVecDoc
  std::string category;
  std::string time;
  double value = 0;
  MarkGeometry geometry;
  friend bool operator==(const MarkBinding&, const MarkBinding&) = default;
};

/// Fixed template constants, normalized units.
struct Layout {
  double plot_left = 110;
  double plot_right = 760;
  double plot_top = 50;
  double plot_bottom = 450;
  double title_font = 20;
  double axis_title_font = 14;
  double tick_font = 12;
  double legend_font = 12;
  double legend_x = 780;
  int y_ticks = 5;
  friend bool operator==(const Layout&, const Layout&) = default;
};

struct ChartMeta {
  ChartType type = ChartType::bar_grouped;
  double width = 800;  // source units
  double height = 500;
  AxisScale x_scale;
  AxisScale y_scale;
  std::vector<MarkBinding> bindings;
  DataSpec spec;
  DataTable table;
  std::vector<HslQ> palette;  // one per category, in category order
  std::uint64_t seed = 0;
  Layout layout;

  [[nodiscard]] const MarkBinding* find(std::string_view category, std::string_view time) const {
    for (const auto& b : bindings)
      if (b.category == category && b.time == time) return &b;
    return nullptr;
  }
  friend bool operator==(const ChartMeta&, const ChartMeta&) = default;
};

inline void to_json(nlohmann::json& j, const MarkGeometry& g) {
  j = {{"x", g.x}, {"y", g.y}, {"width", g.width}, {"extent", g.extent}, {"position", g.position}};
}
inline void from_json(const nlohmann::json& j, MarkGeometry& g) {
  g.x = j.at("x").get<double>();
  g.y = j.at("y").get<double>();
  g.width = j.at("width").get<double>();
  g.extent = j.at("extent").get<double>();
  g.position = j.at("position").get<double>();
}

inline void to_json(nlohmann::json& j, const MarkBinding& b) {
  j = {{"markId", b.mark_id}, {"element", b.element}, {"category", b.category},
       {"time", b.time},      {"value", b.value},     {"geometry", b.geometry}};
}
inline void from_json(const nlohmann::json& j, MarkBinding& b) {
  b.mark_id = j.at("markId").get<std::string>();
  b.element = j.at("element").get<std::size_t>();
  b.category = j.at("category").get<std::string>();
  b.time = j.at("time").get<std::string>();
  b.value = j.at("value").get<double>();
  b.geometry = j.at("geometry").get<MarkGeometry>();
}

inline void to_json(nlohmann::json& j, const Layout& l) {
  j = {{"plotLeft", l.plot_left},         {"plotRight", l.plot_right},   {"plotTop", l.plot_top},
       {"plotBottom", l.plot_bottom},     {"titleFont", l.title_font},   {"axisTitleFont", l.axis_title_font},
       {"tickFont", l.tick_font},         {"legendFont", l.legend_font}, {"legendX", l.legend_x},
       {"yTicks", l.y_ticks}};
}
inline void from_json(const nlohmann::json& j, Layout& l) {
  l.plot_left = j.at("plotLeft").get<double>();
  l.plot_right = j.at("plotRight").get<double>();
  l.plot_top = j.at("plotTop").get<double>();
  l.plot_bottom = j.at("plotBottom").get<double>();
  l.title_font = j.at("titleFont").get<double>();
  l.axis_title_font = j.at("axisTitleFont").get<double>();
  l.tick_font = j.at("tickFont").get<double>();
  l.legend_font = j.at("legendFont").get<double>();
  l.legend_x = j.at("legendX").get<double>();
  l.y_ticks = j.at("yTicks").get<int>();
}

inline void to_json(nlohmann::json& j, const ChartMeta& m) {
  nlohmann::json palette = nlohmann::json::array();
  for (const auto& c : m.palette) palette.push_back({c.h, c.s, c.l});
  j = {{"chartType", chart_type_name(m.type)},
       {"viewport", {{"width", m.width}, {"height", m.height}}},
       {"xScale", m.x_scale},
       {"yScale", m.y_scale},
       {"bindings", m.bindings},
       {"spec", m.spec},
       {"table", m.table},
       {"palette", palette},
       {"seed", m.seed},
       {"layout", m.layout}};
}

inline void from_json(const nlohmann::json& j, ChartMeta& m) {
  m.type = parse_chart_type(j.at("chartType").get<std::string>());
  m.width = j.at("viewport").at("width").get<double>();
  m.height = j.at("viewport").at("height").get<double>();
  m.x_scale = j.at("xScale").get<AxisScale>();
  m.y_scale = j.at("yScale").get<AxisScale>();
  m.bindings = j.at("bindings").get<std::vector<MarkBinding>>();
  m.spec = j.at("spec").get<DataSpec>();
  m.table = j.at("table").get<DataTable>();
  m.palette.clear();
  for (const auto& c : j.at("palette")) m.palette.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()});
  m.seed = j.at("seed").get<std::uint64_t>();
  m.layout = j.at("layout").get<Layout>();
}

}  // namespace simvec::chart
