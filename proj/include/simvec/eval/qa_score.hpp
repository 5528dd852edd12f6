#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "simvec/core/format.hpp"
#include "simvec/qa/answer.hpp"
#include "simvec/qa/qa.hpp"

namespace simvec::eval {

class EvalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::array<double, 3> kQaThresholds = {0.05, 0.10, 0.20};

/// Ground-truth question with the context needed to score it.
struct QaTruth {
  std::string id;
  std::string chart_type;
  qa::QaItem item;
  double data_span = 0;  // y-axis span, used when the true value is 0
};

struct QaPrediction {
  std::string id;
  std::string raw_text;
};

struct QaItemResult {
  std::string id;
  bool answered = false;
  std::optional<double> deviation;  // numeric items only
  std::array<bool, 3> correct{};
};

struct QaTally {
  std::size_t total = 0;
  std::array<std::size_t, 3> correct{};

  [[nodiscard]] double accuracy(std::size_t i) const {
    return total == 0 ? 0.0 : static_cast<double>(correct[i]) / static_cast<double>(total);
  }
};

struct QaScore {
  std::map<std::string, QaTally> groups;  // chart type, plus "overall"
  std::vector<QaItemResult> items;        // in ground-truth order
};

/// Relative deviation; an exact zero falls back to the axis span.
inline double relative_deviation(double pred, double truth, double data_span) {
  const double diff = std::abs(pred - truth);
  if (std::abs(truth) >= 1e-9) return diff / std::abs(truth);
  if (data_span > 0) return diff / data_span;
  return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

inline QaItemResult score_item(const QaTruth& t, const std::string* raw) {
  QaItemResult r;
  r.id = t.id;
  if (!raw) return r;
  const qa::Answer& gt = t.item.answer;
  const qa::Extracted e = qa::extract_final_answer(*raw, gt.kind, t.item.labels);
  r.answered = e.answerable;
  if (!e.answerable) return r;
  if (gt.kind == qa::AnswerKind::number) {
    r.deviation = relative_deviation(e.number, gt.number, t.data_span);
    for (std::size_t i = 0; i < kQaThresholds.size(); ++i) r.correct[i] = *r.deviation < kQaThresholds[i];
  } else {
    const bool ok = qa::detail::lower(e.label) == qa::detail::lower(gt.label);
    r.correct = {ok, ok, ok};
  }
  return r;
}

/// Missing predictions count as wrong; unknown or repeated ids throw.
inline QaScore score_qa(const std::vector<QaPrediction>& predictions, const std::vector<QaTruth>& truths) {
  std::unordered_map<std::string, const std::string*> by_id;
  for (const auto& t : truths)
    if (!by_id.emplace(t.id, nullptr).second) throw EvalError("duplicate ground-truth id: " + t.id);
  for (const auto& p : predictions) {
    const auto it = by_id.find(p.id);
    if (it == by_id.end()) throw EvalError("prediction for unknown item: " + p.id);
    if (it->second) throw EvalError("duplicate prediction for item: " + p.id);
    it->second = &p.raw_text;
  }
  QaScore out;
  for (const auto& t : truths) {
    QaItemResult r = score_item(t, by_id.at(t.id));
    for (const std::string& key : {t.chart_type, std::string("overall")}) {
      auto& g = out.groups[key];
      ++g.total;
      for (std::size_t i = 0; i < 3; ++i) g.correct[i] += r.correct[i];
    }
    out.items.push_back(std::move(r));
  }
  return out;
}

inline void to_json(nlohmann::json& j, const QaScore& s) {
  j = nlohmann::json::object();
  auto& groups = j["groups"] = nlohmann::json::object();
  for (const auto& [k, g] : s.groups)
    groups[k] = {{"total", g.total},
                 {"correct", g.correct},
                 {"accuracy", {{"lt5", g.accuracy(0)}, {"lt10", g.accuracy(1)}, {"lt20", g.accuracy(2)}}}};
  auto& items = j["items"] = nlohmann::json::array();
  for (const auto& r : s.items)
    items.push_back({{"itemId", r.id},
                     {"answered", r.answered},
                     {"deviation", r.deviation ? nlohmann::json(*r.deviation) : nlohmann::json(nullptr)},
                     {"correct", r.correct}});
}

/// One row per chart type, accuracy in percent per threshold.
inline std::string qa_table(const QaScore& s) {
  std::vector<std::vector<std::string>> rows{{"Chart type", "<5%", "<10%", "<20%", "n"}};
  auto add = [&](const std::string& k, const QaTally& g) {
    rows.push_back({k, format_decimal(g.accuracy(0) * 100, 2), format_decimal(g.accuracy(1) * 100, 2),
                    format_decimal(g.accuracy(2) * 100, 2), std::to_string(g.total)});
  };
  for (const auto& [k, g] : s.groups)
    if (k != "overall") add(k, g);
  if (const auto it = s.groups.find("overall"); it != s.groups.end()) add(it->first, it->second);
  std::array<std::size_t, 5> width{};
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::string out;
  for (const auto& r : rows) {
    out += r[0] + std::string(width[0] - r[0].size(), ' ');
    for (std::size_t i = 1; i < r.size(); ++i) out += "  " + std::string(width[i] - r[i].size(), ' ') + r[i];
    out += "\n";
  }
  return out;
}

}  // namespace simvec::eval
