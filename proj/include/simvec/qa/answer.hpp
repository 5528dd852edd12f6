#pragma once

#include <algorithm>
#include <cctype>
#include <regex>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "simvec/core/format.hpp"

namespace simvec::qa {

enum class AnswerKind { number, label };

/// Canonical answer: a number (rounded to 2 decimals) with its unit, or a
/// category/time label.
struct Answer {
  AnswerKind kind = AnswerKind::number;
  double number = 0;
  std::string unit;  // "%" or a unit name; may be empty
  std::string label;

  static Answer of_number(double v, std::string unit) { return {AnswerKind::number, round_to(v, 2), std::move(unit), {}}; }
  static Answer of_label(std::string label) { return {AnswerKind::label, 0, {}, std::move(label)}; }

  /// "35%", "123.45 TWh", "Gas".
  [[nodiscard]] std::string text() const {
    if (kind == AnswerKind::label) return label;
    const std::string n = format_decimal(number, 2);
    if (unit.empty()) return n;
    return unit == "%" ? n + "%" : n + " " + unit;
  }

  friend bool operator==(const Answer&, const Answer&) = default;
};

/// What could be read back from free-form text.
struct Extracted {
  bool answerable = false;
  AnswerKind kind = AnswerKind::number;
  double number = 0;
  std::string label;
  friend bool operator==(const Extracted&, const Extracted&) = default;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_';
}

}  // namespace detail

/// Last numeric literal in `text` ("1,234.5", "35%", "-2"), or the last
/// whole-word case-insensitive occurrence of one of `labels` (by end
/// position, longer label first).
inline Extracted extract_final_answer(std::string_view text, AnswerKind expected,
                                      std::span<const std::string> labels = {}) {
  Extracted out;
  out.kind = expected;
  if (expected == AnswerKind::number) {
    static const std::regex number(R"((\d{1,3}(?:,\d{3})+|\d+)(\.\d+)?)");
    const std::string s(text);
    std::smatch last;
    bool found = false;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
      const auto pos = static_cast<std::size_t>(it->position(0));
      // skip digits glued to letters ("Q1", "CO2") and fraction tails
      if (pos > 0 && (detail::word_byte(s[pos - 1]) || s[pos - 1] == '.')) continue;
      last = *it;
      found = true;
    }
    if (!found) return out;
    std::string digits = last.str(0);
    std::erase(digits, ',');
    double v = std::stod(digits);
    const auto pos = static_cast<std::size_t>(last.position(0));
    if (pos > 0 && s[pos - 1] == '-' && (pos < 2 || !(std::isdigit(static_cast<unsigned char>(s[pos - 2])) || s[pos - 2] == ')')))
      v = -v;
    out.answerable = true;
    out.number = v;
    return out;
  }

  const std::string hay = detail::lower(text);
  std::size_t best_end = 0;
  std::size_t best_len = 0;
  for (const auto& label : labels) {
    if (label.empty()) continue;
    const std::string needle = detail::lower(label);
    for (std::size_t p = hay.rfind(needle); p != std::string::npos; p = p == 0 ? std::string::npos : hay.rfind(needle, p - 1)) {
      const bool left = p == 0 || !detail::word_byte(hay[p - 1]);
      const bool right = p + needle.size() >= hay.size() || !detail::word_byte(hay[p + needle.size()]);
      if (!left || !right) continue;
      const std::size_t end = p + needle.size();
      if (!out.answerable || end > best_end || (end == best_end && needle.size() > best_len)) {
        out.answerable = true;
        out.label = label;
        best_end = end;
        best_len = needle.size();
      }
      break;
    }
  }
  return out;
}

inline std::string_view answer_kind_name(AnswerKind k) { return k == AnswerKind::number ? "number" : "label"; }

inline void to_json(nlohmann::json& j, const Answer& a) {
  j = {{"kind", answer_kind_name(a.kind)}, {"text", a.text()}};
  if (a.kind == AnswerKind::number) {
    j["number"] = a.number;
    j["unit"] = a.unit;
  } else {
    j["label"] = a.label;
  }
}

inline void from_json(const nlohmann::json& j, Answer& a) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "number") {
    a = Answer::of_number(j.at("number").get<double>(), j.value("unit", std::string()));
  } else if (kind == "label") {
    a = Answer::of_label(j.at("label").get<std::string>());
  } else {
    throw std::invalid_argument("unknown answer kind: " + kind);
  }
}

}  // namespace simvec::qa
