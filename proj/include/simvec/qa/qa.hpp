#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "simvec/chart/meta.hpp"
#include "simvec/chart/random.hpp"
#include "simvec/core/format.hpp"
#include "simvec/qa/answer.hpp"
#include "simvec/qa/arith.hpp"

namespace simvec::qa {

using chart::ChartMeta;
using chart::ChartType;
using chart::MarkBinding;

class QaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TaskKind { retrieve_value, extreme_which, extreme_value };

inline std::string_view task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::retrieve_value: return "retrieve-value";
    case TaskKind::extreme_which: return "extreme-which";
    case TaskKind::extreme_value: return "extreme-value";
  }
  return "?";
}

inline TaskKind parse_task_kind(std::string_view s) {
  if (s == "retrieve-value") return TaskKind::retrieve_value;
  if (s == "extreme-which") return TaskKind::extreme_which;
  if (s == "extreme-value") return TaskKind::extreme_value;
  throw std::invalid_argument("unknown task kind: " + std::string(s));
}

enum class Extreme { max, min };

/// Points compared by an extreme question: one time slice across categories,
/// or one series across times.
struct Scope {
  enum class Kind { slice, series } kind = Kind::slice;
  std::string key;  // the time (slice) or category (series)
  friend bool operator==(const Scope&, const Scope&) = default;
};

struct CotTrace {
  std::string axis;
  std::string geometry;
  std::string arithmetic;
  std::string conclusion;

  [[nodiscard]] std::string text() const { return axis + " " + geometry + " " + arithmetic + " " + conclusion; }
  friend bool operator==(const CotTrace&, const CotTrace&) = default;
};

struct QaItem {
  std::string question;
  TaskKind kind = TaskKind::retrieve_value;
  std::string category;  // target key (retrieve-value) or winning mark
  std::string time;
  std::optional<Scope> scope;  // extreme tasks
  CotTrace cot;
  Answer answer;
  double value = 0;  // datum behind the answer, also for label answers
  std::vector<std::string> labels;  // candidate labels for extreme-which
  friend bool operator==(const QaItem&, const QaItem&) = default;
};

namespace detail {

inline std::string num(double v) { return format_decimal(v, 8); }

/// Quantity a CoT reads off a mark: segment height for bars/areas, height
/// above the baseline for line vertices.
inline double measurement(const ChartMeta& m, const MarkBinding& b) {
  return m.type == ChartType::line ? b.geometry.position : b.geometry.extent;
}

inline const char* measure_noun(ChartType t) {
  switch (t) {
    case ChartType::bar_grouped:
    case ChartType::bar_stacked: return "height";
    case ChartType::line: return "position";
    case ChartType::area_stacked: return "thickness";
  }
  return "size";
}

inline bool percent(const ChartMeta& m) { return m.spec.quantitative.unit == "%"; }

inline std::string with_unit(const ChartMeta& m, double v) {
  const std::string n = format_decimal(v, 8);
  const std::string& unit = m.spec.quantitative.unit;
  if (unit.empty()) return n;
  return unit == "%" ? n + "%" : n + " " + unit;
}

inline std::string axis_sentence(const ChartMeta& m) {
  const auto& s = m.y_scale;
  std::string range = percent(m) ? "a percentage range of " : "a range of ";
  range += with_unit(m, s.data_min) + " to " + with_unit(m, s.data_max);
  return "The Y-axis of the chart maps from " + num(s.pixel_min) + " pixels to " + num(s.pixel_max) +
         " pixels, corresponding to " + range + ".";
}

/// "(140/(450 − 50))×100", plus " + min" for a non-zero data minimum.
inline std::string formula(const ChartMeta& m, const std::string& measure) {
  const auto& s = m.y_scale;
  std::string f = "(" + measure + "/(" + num(s.pixel_max) + " − " + num(s.pixel_min) + "))×" + num(s.data_span());
  if (s.data_min != 0) f += s.data_min > 0 ? " + " + num(s.data_min) : " − " + num(-s.data_min);
  return f;
}

inline std::string formula_sentence(const ChartMeta& m) {
  const char* noun = measure_noun(m.type);
  const std::string sym = m.type == ChartType::line ? "p" : m.type == ChartType::area_stacked ? "t" : "h";
  std::string s = "A " + std::string(noun) + " " + sym + " in pixels maps to the value " + formula(m, sym);
  if (m.type == ChartType::line) s += ", with " + sym + " measured up from the baseline at " + num(m.y_scale.pixel_max) + " pixels";
  return s + ".";
}

inline std::string mark_sentence(const ChartMeta& m, const MarkBinding& b) {
  const std::string v = num(measurement(m, b));
  switch (m.type) {
    case ChartType::bar_grouped:
      return "The height of the bar representing " + b.category + " in " + b.time + " is " + v + " pixels.";
    case ChartType::bar_stacked:
      return "The height of the " + b.category + " segment of the " + b.time + " bar is " + v + " pixels.";
    case ChartType::line:
      return "The " + b.category + " line at " + b.time + " lies " + v + " pixels above the baseline at " +
             num(m.y_scale.pixel_max) + " pixels.";
    case ChartType::area_stacked:
      return "The thickness of the " + b.category + " band at " + b.time + " is " + v + " pixels.";
  }
  return {};
}

inline std::string quantity(const ChartMeta& m) { return m.spec.quantitative.name; }

inline Answer number_answer(const ChartMeta& m, double v) { return Answer::of_number(v, m.spec.quantitative.unit); }

inline const MarkBinding& binding(const ChartMeta& m, std::string_view category, std::string_view time) {
  const MarkBinding* b = m.find(category, time);
  if (!b) throw QaError("no mark for (" + std::string(category) + ", " + std::string(time) + ")");
  return *b;
}

}  // namespace detail

/// "What is the <quantity> of <category> in <time>?" answered from the
/// mark's measurement through the y axis.
inline QaItem gen_retrieve_value(const ChartMeta& meta, std::string_view category, std::string_view time) {
  const MarkBinding& b = detail::binding(meta, category, time);
  QaItem item;
  item.kind = TaskKind::retrieve_value;
  item.category = b.category;
  item.time = b.time;
  item.value = round_to(b.value, 2);
  item.answer = detail::number_answer(meta, b.value);
  item.question = "What is the " + detail::quantity(meta) + " of " + b.category + " in " + b.time + "?";
  item.cot.axis = detail::axis_sentence(meta);
  item.cot.geometry = detail::mark_sentence(meta, b);
  item.cot.arithmetic = detail::formula_sentence(meta);
  const std::string calc = detail::formula(meta, detail::num(detail::measurement(meta, b))) + " = " + item.answer.text();
  item.cot.conclusion = detail::percent(meta) ? "Thus, " + b.category + " in " + b.time + " accounts for " + calc + "."
                                              : "Thus, the " + detail::quantity(meta) + " of " + b.category + " in " +
                                                    b.time + " is " + calc + ".";
  return item;
}

/// Scope members in list order: categories for a slice, times for a series.
inline std::vector<const MarkBinding*> scope_marks(const ChartMeta& meta, const Scope& scope) {
  std::vector<const MarkBinding*> out;
  if (scope.kind == Scope::Kind::slice) {
    for (const auto& c : meta.table.categories)
      if (const auto* b = meta.find(c, scope.key)) out.push_back(b);
  } else {
    for (const auto& t : meta.table.times)
      if (const auto* b = meta.find(scope.key, t)) out.push_back(b);
  }
  return out;
}

inline QaItem gen_extreme(const ChartMeta& meta, const Scope& scope, Extreme kind, AnswerKind form) {
  const auto marks = scope_marks(meta, scope);
  if (marks.size() < 2) throw QaError("extreme scope needs at least 2 points");
  const bool slice = scope.kind == Scope::Kind::slice;
  const bool hi = kind == Extreme::max;

  std::size_t win = 0;
  for (std::size_t i = 1; i < marks.size(); ++i)
    if (hi ? marks[i]->value > marks[win]->value : marks[i]->value < marks[win]->value) win = i;
  const MarkBinding& w = *marks[win];
  auto member = [&](const MarkBinding& b) -> const std::string& { return slice ? b.category : b.time; };

  QaItem item;
  item.kind = form == AnswerKind::label ? TaskKind::extreme_which : TaskKind::extreme_value;
  item.scope = scope;
  item.category = w.category;
  item.time = w.time;
  item.value = round_to(w.value, 2);
  for (const auto* b : marks) item.labels.push_back(member(*b));
  item.answer = form == AnswerKind::label ? Answer::of_label(member(w)) : detail::number_answer(meta, w.value);

  const std::string q = detail::quantity(meta);
  const std::string where = slice ? " in " + scope.key : " for " + scope.key;
  const std::string extreme = hi ? "highest" : "lowest";
  if (form == AnswerKind::label) {
    item.question = slice ? "Which " + meta.spec.categorical.name + " has the " + extreme + " " + q + " in " + scope.key + "?"
                          : "In which " + meta.spec.temporal.name + " does " + scope.key + " have its " + extreme + " " + q + "?";
  } else {
    item.question = "What is the " + extreme + " " + q + (slice ? " among all " + meta.spec.categorical.name + " values in " + scope.key
                                                                : " of " + scope.key + " across all " + meta.spec.temporal.name + " values") +
                    "?";
  }

  const char* noun = detail::measure_noun(meta.type);
  std::string listing = "The " + std::string(noun) + (meta.type == ChartType::area_stacked ? "es" : "s") + where + " are: ";
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (i) listing += ", ";
    listing += member(*marks[i]) + " " + detail::num(detail::measurement(meta, *marks[i])) + " pixels";
  }
  listing += ". The " + std::string(hi ? "largest" : "smallest") + " " + noun + " is " + member(w) + " at " +
             detail::num(detail::measurement(meta, w)) + " pixels (ties go to the first listed).";

  item.cot.axis = detail::axis_sentence(meta);
  item.cot.geometry = listing;
  item.cot.arithmetic = detail::formula_sentence(meta);
  const std::string calc = detail::formula(meta, detail::num(detail::measurement(meta, w))) + " = " +
                           detail::number_answer(meta, w.value).text();
  if (form == AnswerKind::label)
    item.cot.conclusion = "Its value is " + calc + ", so the answer is " + member(w) + ".";
  else
    item.cot.conclusion = "Thus, the " + extreme + " " + q + where + " is " + calc + ".";
  return item;
}

/// One retrieve-value item and up to two extreme items (max and min over one
/// seeded scope) per chart.
inline std::vector<QaItem> gen_qa_suite(const ChartMeta& meta, std::uint64_t seed) {
  std::vector<QaItem> out;
  if (meta.bindings.empty()) return out;
  chart::Rng rng(chart::splitmix64(seed ^ 0x9a5eedULL));
  const MarkBinding& key = meta.bindings[rng.index(meta.bindings.size())];
  out.push_back(gen_retrieve_value(meta, key.category, key.time));

  Scope scope;
  scope.kind = rng.chance(0.5) ? Scope::Kind::slice : Scope::Kind::series;
  const auto& pool = scope.kind == Scope::Kind::slice ? meta.table.times : meta.table.categories;
  scope.key = pool[rng.index(pool.size())];
  const AnswerKind forms[2] = {rng.chance(0.5) ? AnswerKind::label : AnswerKind::number,
                               rng.chance(0.5) ? AnswerKind::label : AnswerKind::number};
  if (scope_marks(meta, scope).size() >= 2) {
    out.push_back(gen_extreme(meta, scope, Extreme::max, forms[0]));
    out.push_back(gen_extreme(meta, scope, Extreme::min, forms[1]));
  }
  return out;
}

inline void to_json(nlohmann::json& j, const CotTrace& c) {
  j = {{"axis", c.axis}, {"geometry", c.geometry}, {"arithmetic", c.arithmetic}, {"conclusion", c.conclusion}};
}
inline void from_json(const nlohmann::json& j, CotTrace& c) {
  c.axis = j.at("axis").get<std::string>();
  c.geometry = j.at("geometry").get<std::string>();
  c.arithmetic = j.at("arithmetic").get<std::string>();
  c.conclusion = j.at("conclusion").get<std::string>();
}

inline void to_json(nlohmann::json& j, const QaItem& q) {
  j = {{"question", q.question}, {"task", task_kind_name(q.kind)}, {"category", q.category}, {"time", q.time},
       {"cot", q.cot},           {"cotText", q.cot.text()},        {"answer", q.answer},     {"value", q.value},
       {"labels", q.labels}};
  if (q.scope) j["scope"] = {{"kind", q.scope->kind == Scope::Kind::slice ? "slice" : "series"}, {"key", q.scope->key}};
}

inline void from_json(const nlohmann::json& j, QaItem& q) {
  q.question = j.at("question").get<std::string>();
  q.kind = parse_task_kind(j.at("task").get<std::string>());
  q.category = j.at("category").get<std::string>();
  q.time = j.at("time").get<std::string>();
  q.cot = j.at("cot").get<CotTrace>();
  q.answer = j.at("answer").get<Answer>();
  q.value = j.at("value").get<double>();
  q.labels = j.value("labels", std::vector<std::string>{});
  q.scope.reset();
  if (j.contains("scope")) {
    const auto& s = j.at("scope");
    q.scope = Scope{s.at("kind").get<std::string>() == "slice" ? Scope::Kind::slice : Scope::Kind::series,
                    s.at("key").get<std::string>()};
  }
}

}  // namespace simvec::qa
