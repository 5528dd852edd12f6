#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace simvec {

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0 || !std::isfinite(v)) v = std::isfinite(v) ? 0.0 : v;  // folds -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Fixed-point text with at most `decimals` digits after the point and no
/// trailing zeros ("35", "37.2", "59.568").
inline std::string format_decimal(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

/// Rounds to a fixed number of decimals, half away from zero.
inline double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace simvec
