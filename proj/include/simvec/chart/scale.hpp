#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace simvec::chart {

enum class Orientation { x, y };

class ScaleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear data → pixel map. When `inverted`, data_min lands on pixel_max
/// (y axes: larger values sit higher on the canvas).
struct AxisScale {
  double pixel_min = 0;
  double pixel_max = 1;
  double data_min = 0;
  double data_max = 1;
  Orientation orientation = Orientation::y;
  bool inverted = false;

  [[nodiscard]] double pixel_span() const noexcept { return pixel_max - pixel_min; }
  [[nodiscard]] double data_span() const noexcept { return data_max - data_min; }

  [[nodiscard]] double apply(double v) const noexcept {
    const double offset = (v - data_min) / data_span() * pixel_span();
    return inverted ? pixel_max - offset : pixel_min + offset;
  }

  [[nodiscard]] double invert(double p) const noexcept {
    const double offset = inverted ? pixel_max - p : p - pixel_min;
    return data_min + offset / pixel_span() * data_span();
  }

  /// Pixel length covered by a data interval of size `dv`.
  [[nodiscard]] double extent(double dv) const noexcept { return dv / data_span() * pixel_span(); }

  friend bool operator==(const AxisScale&, const AxisScale&) = default;
};

inline AxisScale make_scale(double data_min, double data_max, double pixel_min, double pixel_max, Orientation o,
                            bool inverted) {
  if (!(pixel_min < pixel_max)) throw ScaleError("degenerate pixel range");
  if (!(data_min < data_max)) throw ScaleError("degenerate data range");
  return {pixel_min, pixel_max, data_min, data_max, o, inverted};
}

/// Smallest {1, 2, 2.5, 4, 5, 8}·10^k that is ≥ v. These keep 400/max a
/// terminating decimal.
inline double nice_max(double v) {
  if (!(v > 0)) return 1;
  static constexpr std::array<double, 6> kSteps = {1, 2, 2.5, 4, 5, 8};
  int k = static_cast<int>(std::floor(std::log10(v))) - 1;
  for (;; ++k) {
    const double p = std::pow(10.0, k);
    for (double c : kSteps) {
      // multiply/divide keeps e.g. 0.25 exact where c·10^-1 would not be
      const double cand = k >= 0 ? c * p : c / std::pow(10.0, -k);
      if (cand >= v) return cand;
    }
  }
}

inline void to_json(nlohmann::json& j, const AxisScale& s) {
  j = {{"pixelMin", s.pixel_min}, {"pixelMax", s.pixel_max},
       {"dataMin", s.data_min},   {"dataMax", s.data_max},
       {"orientation", s.orientation == Orientation::x ? "x" : "y"},
       {"inverted", s.inverted}};
}

inline void from_json(const nlohmann::json& j, AxisScale& s) {
  s.pixel_min = j.at("pixelMin").get<double>();
  s.pixel_max = j.at("pixelMax").get<double>();
  s.data_min = j.at("dataMin").get<double>();
  s.data_max = j.at("dataMax").get<double>();
  s.orientation = j.at("orientation").get<std::string>() == "x" ? Orientation::x : Orientation::y;
  s.inverted = j.at("inverted").get<bool>();
}

}  // namespace simvec::chart
