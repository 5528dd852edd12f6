#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "simvec/core/types.hpp"

namespace simvec {

/// Continuous HSL: hue in degrees [0, 360), saturation and lightness in percent.
struct Hsl {
  double h = 0.0;
  double s = 0.0;
  double l = 0.0;
};

/// 8-bit sRGB triple.
struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// Round half away from zero; used for every quantization step.
inline double round_half_away(double v) noexcept { return std::round(v); }

inline int round_to_int(double v) noexcept { return static_cast<int>(std::lround(v)); }

/// Maps continuous HSL to the 21-level grid. Hue 360 is identified with 0
/// before rounding; a hue that rounds up to level 20 stays 20.
inline HslQ quantize_color(double h, double s, double l) {
  if (!(h >= 0.0 && h <= 360.0)) throw std::out_of_range("hue out of range [0, 360): " + std::to_string(h));
  if (!(s >= 0.0 && s <= 100.0)) throw std::out_of_range("saturation out of range [0, 100]: " + std::to_string(s));
  if (!(l >= 0.0 && l <= 100.0)) throw std::out_of_range("lightness out of range [0, 100]: " + std::to_string(l));
  if (h == 360.0) h = 0.0;
  return {round_to_int(h / 360.0 * kColorLevels), round_to_int(s / 100.0 * kColorLevels),
          round_to_int(l / 100.0 * kColorLevels)};
}

inline HslQ quantize_color(const Hsl& c) { return quantize_color(c.h, c.s, c.l); }

/// Representative continuous color of a quantized level. Hue level 20 maps to
/// 355.5 degrees, the middle of the hue interval [351, 360) that quantizes to
/// it, since 360 itself is identified with level 0.
inline Hsl dequantize_color(const HslQ& q) {
  const double h = q.h >= kColorLevels ? 355.5 : q.h * 360.0 / kColorLevels;
  return {h, q.s * 100.0 / kColorLevels, q.l * 100.0 / kColorLevels};
}

inline Hsl rgb_to_hsl(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double l = (mx + mn) / 2.0;
  double h = 0.0;
  double s = 0.0;
  const double d = mx - mn;
  if (d > 1e-12) {
    s = l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
    if (mx == r) {
      h = (g - b) / d + (g < b ? 6.0 : 0.0);
    } else if (mx == g) {
      h = (b - r) / d + 2.0;
    } else {
      h = (r - g) / d + 4.0;
    }
    h *= 60.0;
    if (h >= 360.0) h -= 360.0;
  }
  return {h, std::clamp(s * 100.0, 0.0, 100.0), std::clamp(l * 100.0, 0.0, 100.0)};
}

inline Hsl rgb_to_hsl(const Rgb8& c) { return rgb_to_hsl(c.r / 255.0, c.g / 255.0, c.b / 255.0); }

namespace detail {
inline double hue_channel(double p, double q, double t) {
  if (t < 0) t += 1;
  if (t > 1) t -= 1;
  if (t < 1.0 / 6) return p + (q - p) * 6 * t;
  if (t < 1.0 / 2) return q;
  if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
  return p;
}
}  // namespace detail

inline Rgb8 hsl_to_rgb8(const Hsl& c) {
  const double h = std::fmod(c.h, 360.0) / 360.0;
  const double s = c.s / 100.0;
  const double l = c.l / 100.0;
  double r = l;
  double g = l;
  double b = l;
  if (s > 0) {
    const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
    const double p = 2 * l - q;
    r = detail::hue_channel(p, q, h + 1.0 / 3);
    g = detail::hue_channel(p, q, h);
    b = detail::hue_channel(p, q, h - 1.0 / 3);
  }
  auto to8 = [](double v) { return static_cast<std::uint8_t>(std::clamp(round_to_int(v * 255.0), 0, 255)); };
  return {to8(r), to8(g), to8(b)};
}

inline std::string to_hex(const Rgb8& c) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "#";
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    out += digits[v >> 4];
    out += digits[v & 15];
  }
  return out;
}

/// Euclidean distance on quantized channels. With `circular_hue` the hue
/// difference wraps on the 20-level circle.
inline double color_distance(const HslQ& a, const HslQ& b, bool circular_hue = false) {
  double dh = std::abs(a.h - b.h);
  if (circular_hue) dh = std::min(dh, kColorLevels - dh);
  const double ds = a.s - b.s;
  const double dl = a.l - b.l;
  return std::sqrt(dh * dh + ds * ds + dl * dl);
}

}  // namespace simvec
