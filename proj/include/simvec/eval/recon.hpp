#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "simvec/core/color.hpp"
#include "simvec/core/format.hpp"
#include "simvec/eval/match.hpp"

namespace simvec::eval {

/// Similarity above which a matched text counts as recovered.
inline constexpr double kHitThreshold = 0.5;

struct TextMetrics {
  std::optional<double> hit_rate;
  std::optional<double> similarity;
  std::optional<double> center_distance;
};

struct ElementMetrics {
  std::optional<double> color_distance;
  std::optional<double> position_distance;
};

struct MetricOptions {
  double hit_threshold = kHitThreshold;
  bool circular_hue = false;
};

/// Absent when gt has no text at all; similarity and distance need a match.
inline TextMetrics text_metrics(const ElementAssignment& a, const SimVecDoc& pred, const SimVecDoc& gt,
                                const MetricOptions& opt = {}) {
  TextMetrics out;
  std::size_t gt_texts = 0;
  for (const auto& e : gt.elements) gt_texts += std::holds_alternative<TextElement>(e);
  if (gt_texts == 0) return out;
  std::size_t hits = 0, matched = 0;
  double sim = 0, dist = 0;
  for (const auto& p : a.pairs) {
    const auto* g = std::get_if<TextElement>(&gt.elements[p.gt]);
    if (!g) continue;
    const auto& q = std::get<TextElement>(pred.elements[p.pred]);
    const double s = text_similarity(q.text, g->text);
    hits += s > opt.hit_threshold;
    sim += s;
    dist += distance(center(q.bbox), center(g->bbox));
    ++matched;
  }
  out.hit_rate = static_cast<double>(hits) / static_cast<double>(gt_texts);
  if (matched > 0) {
    out.similarity = sim / static_cast<double>(matched);
    out.center_distance = dist / static_cast<double>(matched);
  }
  return out;
}

/// `n` points spread evenly by arc length; closed rings include the
/// closing edge and start at vertex 0.
inline std::vector<PointD> resample(const std::vector<NPoint>& pts, std::size_t n, bool closed) {
  std::vector<PointD> src;
  for (const auto& p : pts) src.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  if (src.empty() || n == 0) return {};
  if (closed) src.push_back(src.front());
  std::vector<double> cum{0};
  for (std::size_t i = 1; i < src.size(); ++i) cum.push_back(cum.back() + distance(src[i - 1], src[i]));
  const double total = cum.back();
  std::vector<PointD> out;
  out.reserve(n);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double denom = closed ? static_cast<double>(n) : static_cast<double>(std::max<std::size_t>(n - 1, 1));
    const double s = total * static_cast<double>(k) / denom;
    while (seg + 1 < src.size() && cum[seg] < s) ++seg;
    if (src.size() == 1 || total == 0) {
      out.push_back(src.front());
      continue;
    }
    const double len = cum[seg] - cum[seg - 1];
    const double t = len > 0 ? std::clamp((s - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back({src[seg - 1].x + (src[seg].x - src[seg - 1].x) * t, src[seg - 1].y + (src[seg].y - src[seg - 1].y) * t});
  }
  return out;
}

/// Mean distance between corresponding vertices of two same-kind elements.
inline double vertex_distance(const Element& pred, const Element& gt) {
  if (const auto* a = std::get_if<RectElement>(&pred)) {
    const auto& b = std::get<RectElement>(gt).bbox;
    const NBBox& r = a->bbox;
    auto corners = [](const NBBox& x) {
      return std::array<PointD, 4>{{{1.0 * x.left, 1.0 * x.top},
                                    {1.0 * x.left + x.width, 1.0 * x.top},
                                    {1.0 * x.left + x.width, 1.0 * x.top + x.height},
                                    {1.0 * x.left, 1.0 * x.top + x.height}}};
    };
    const auto p = corners(r), q = corners(b);
    double sum = 0;
    for (std::size_t i = 0; i < 4; ++i) sum += distance(p[i], q[i]);
    return sum / 4;
  }
  const bool closed = std::holds_alternative<PolygonElement>(pred);
  const auto& x = closed ? std::get<PolygonElement>(pred).points : std::get<LineElement>(pred).points;
  const auto& y = closed ? std::get<PolygonElement>(gt).points : std::get<LineElement>(gt).points;
  const std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return 0;
  const auto p = resample(x, n, closed);
  const auto q = resample(y, n, closed);
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += distance(p[i], q[i]);
  return sum / static_cast<double>(n);
}

/// Over matched rect/line/polygon pairs.
inline ElementMetrics element_metrics(const ElementAssignment& a, const SimVecDoc& pred, const SimVecDoc& gt,
                                      const MetricOptions& opt = {}) {
  ElementMetrics out;
  double color = 0, pos = 0;
  std::size_t n = 0;
  for (const auto& p : a.pairs) {
    const Element& g = gt.elements[p.gt];
    if (std::holds_alternative<TextElement>(g)) continue;
    const Element& q = pred.elements[p.pred];
    color += color_distance(color_of(q), color_of(g), opt.circular_hue);
    pos += vertex_distance(q, g);
    ++n;
  }
  if (n > 0) {
    out.color_distance = color / static_cast<double>(n);
    out.position_distance = pos / static_cast<double>(n);
  }
  return out;
}

struct KindBreakdown {
  std::size_t matched = 0;
  std::size_t unmatched_pred = 0;
  std::size_t unmatched_gt = 0;
  std::optional<double> color_distance;
  std::optional<double> position_distance;
};

struct ReconReport {
  std::optional<double> text_hit_rate;
  std::optional<double> text_similarity;
  std::optional<double> text_center_distance;
  std::optional<double> element_color_distance;
  std::optional<double> element_position_distance;
  std::size_t spurious_texts = 0;  // predicted texts left unmatched
  std::map<std::string, KindBreakdown> by_kind;
};

inline ReconReport evaluate_reconstruction(const SimVecDoc& pred, const SimVecDoc& gt, const MetricOptions& opt = {}) {
  const ElementAssignment a = match_elements(pred, gt);
  ReconReport r;
  const TextMetrics t = text_metrics(a, pred, gt, opt);
  const ElementMetrics e = element_metrics(a, pred, gt, opt);
  r.text_hit_rate = t.hit_rate;
  r.text_similarity = t.similarity;
  r.text_center_distance = t.center_distance;
  r.element_color_distance = e.color_distance;
  r.element_position_distance = e.position_distance;
  for (const ElementKind k : {ElementKind::text, ElementKind::rect, ElementKind::line, ElementKind::polygon})
    r.by_kind[std::string(kind_name(k))];
  std::map<std::string, std::pair<double, double>> sums;
  for (const auto& p : a.pairs) {
    const Element& g = gt.elements[p.gt];
    const std::string k(kind_name(kind_of(g)));
    ++r.by_kind[k].matched;
    if (!std::holds_alternative<TextElement>(g)) {
      sums[k].first += color_distance(color_of(pred.elements[p.pred]), color_of(g), opt.circular_hue);
      sums[k].second += vertex_distance(pred.elements[p.pred], g);
    }
  }
  for (auto& [k, s] : sums) {
    auto& b = r.by_kind[k];
    b.color_distance = s.first / static_cast<double>(b.matched);
    b.position_distance = s.second / static_cast<double>(b.matched);
  }
  for (const auto i : a.unmatched_pred) {
    const ElementKind k = kind_of(pred.elements[i]);
    ++r.by_kind[std::string(kind_name(k))].unmatched_pred;
    r.spurious_texts += k == ElementKind::text;
  }
  for (const auto i : a.unmatched_gt) ++r.by_kind[std::string(kind_name(kind_of(gt.elements[i])))].unmatched_gt;
  return r;
}

inline constexpr std::array<const char*, 5> kReconMetrics = {"textHitRate", "textSimilarity", "textCenterDistance",
                                                             "elementColorDistance", "elementPositionDistance"};

inline std::array<std::optional<double>, 5> metric_values(const ReconReport& r) {
  return {r.text_hit_rate, r.text_similarity, r.text_center_distance, r.element_color_distance, r.element_position_distance};
}

/// Unweighted means over charts, per group; a chart without a metric is
/// left out of that metric's mean.
struct ReconAggregate {
  struct Group {
    std::size_t charts = 0;
    std::array<std::optional<double>, 5> means;
  };
  std::map<std::string, Group> groups;  // chart type, plus "overall"
};

inline ReconAggregate aggregate_recon(const std::vector<std::pair<std::string, ReconReport>>& reports) {
  std::map<std::string, std::pair<std::size_t, std::array<std::pair<double, std::size_t>, 5>>> acc;
  for (const auto& [type, r] : reports) {
    const auto v = metric_values(r);
    for (const std::string& key : {type, std::string("overall")}) {
      auto& a = acc[key];
      ++a.first;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) {
          a.second[i].first += *v[i];
          ++a.second[i].second;
        }
    }
  }
  ReconAggregate out;
  for (const auto& [key, a] : acc) {
    auto& g = out.groups[key];
    g.charts = a.first;
    for (std::size_t i = 0; i < 5; ++i)
      if (a.second[i].second > 0) g.means[i] = a.second[i].first / static_cast<double>(a.second[i].second);
  }
  return out;
}

namespace detail {

inline nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace detail

inline void to_json(nlohmann::json& j, const ReconReport& r) {
  j = nlohmann::json::object();
  const auto v = metric_values(r);
  for (std::size_t i = 0; i < v.size(); ++i) j[kReconMetrics[i]] = detail::opt_json(v[i]);
  j["spuriousTexts"] = r.spurious_texts;
  auto& kinds = j["byKind"] = nlohmann::json::object();
  for (const auto& [k, b] : r.by_kind)
    kinds[k] = {{"matched", b.matched},
                {"unmatchedPred", b.unmatched_pred},
                {"unmatchedGt", b.unmatched_gt},
                {"colorDistance", detail::opt_json(b.color_distance)},
                {"positionDistance", detail::opt_json(b.position_distance)}};
}

inline void to_json(nlohmann::json& j, const ReconAggregate& a) {
  j = nlohmann::json::object();
  for (const auto& [k, g] : a.groups) {
    auto& o = j[k] = {{"charts", g.charts}};
    for (std::size_t i = 0; i < 5; ++i) o[kReconMetrics[i]] = detail::opt_json(g.means[i]);
  }
}

/// Metrics as rows, chart types as columns; rates in percent.
inline std::string recon_table(const ReconAggregate& a) {
  std::vector<std::string> cols;
  for (const auto& [k, g] : a.groups)
    if (k != "overall") cols.push_back(k);
  if (a.groups.count("overall")) cols.push_back("overall");
  static constexpr std::array<const char*, 5> names = {"Text Hit Rate (%)", "Text Similarity (%)", "Text Center Distance",
                                                        "Element Color Distance", "Element Position Distance"};
  std::vector<std::vector<std::string>> rows{{"Metric"}};
  for (const auto& c : cols) rows[0].push_back(c);
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<std::string> row{names[i]};
    for (const auto& c : cols) {
      const auto& v = a.groups.at(c).means[i];
      row.push_back(v ? format_decimal(i < 2 ? *v * 100 : *v, 2) : "-");
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i == 0) {
        out += r[i] + std::string(width[i] - r[i].size(), ' ');
      } else {
        out += "  " + std::string(width[i] - r[i].size(), ' ') + r[i];
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace simvec::eval
