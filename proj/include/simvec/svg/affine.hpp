#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simvec::svg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double k) noexcept { return {a.x * k, a.y * k}; }
  friend Vec2 operator*(double k, Vec2 a) noexcept { return {a.x * k, a.y * k}; }
};

inline double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return length(a - b); }

/// 2x3 affine matrix: x' = a*x + c*y + e, y' = b*x + d*y + f.
struct AffineMatrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  static AffineMatrix identity() noexcept { return {}; }
  static AffineMatrix translate(double tx, double ty) noexcept { return {1, 0, 0, 1, tx, ty}; }
  static AffineMatrix scale(double sx, double sy) noexcept { return {sx, 0, 0, sy, 0, 0}; }
  static AffineMatrix scale(double s) noexcept { return scale(s, s); }

  static AffineMatrix rotate(double degrees) noexcept {
    // Exact values at quarter turns keep axis-aligned shapes axis-aligned.
    double r = std::fmod(degrees, 360.0);
    if (r < 0) r += 360.0;
    double cs = 0;
    double sn = 0;
    if (r == 0) {
      cs = 1;
    } else if (r == 90) {
      sn = 1;
    } else if (r == 180) {
      cs = -1;
    } else if (r == 270) {
      sn = -1;
    } else {
      const double rad = degrees * std::numbers::pi / 180.0;
      cs = std::cos(rad);
      sn = std::sin(rad);
    }
    return {cs, sn, -sn, cs, 0, 0};
  }

  static AffineMatrix rotate(double degrees, double cx, double cy) noexcept {
    return translate(cx, cy) * rotate(degrees) * translate(-cx, -cy);
  }

  static AffineMatrix skew_x(double degrees) noexcept {
    return {1, 0, std::tan(degrees * std::numbers::pi / 180.0), 1, 0, 0};
  }
  static AffineMatrix skew_y(double degrees) noexcept {
    return {1, std::tan(degrees * std::numbers::pi / 180.0), 0, 1, 0, 0};
  }

  /// (this * o) applies `o` first, then `this`.
  friend AffineMatrix operator*(const AffineMatrix& m, const AffineMatrix& o) noexcept {
    return {m.a * o.a + m.c * o.b,       m.b * o.a + m.d * o.b,       m.a * o.c + m.c * o.d,
            m.b * o.c + m.d * o.d,       m.a * o.e + m.c * o.f + m.e, m.b * o.e + m.d * o.f + m.f};
  }

  [[nodiscard]] Vec2 apply(Vec2 p) const noexcept { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }

  [[nodiscard]] double determinant() const noexcept { return a * d - b * c; }
  [[nodiscard]] bool is_degenerate() const noexcept { return std::abs(determinant()) < 1e-12; }

  /// Maps horizontal and vertical lines to horizontal and vertical lines.
  [[nodiscard]] bool is_axis_aligned() const noexcept { return b == 0 && c == 0; }

  /// Square root of the absolute area scale.
  [[nodiscard]] double mean_scale() const noexcept { return std::sqrt(std::abs(determinant())); }

  friend bool operator==(const AffineMatrix&, const AffineMatrix&) = default;
};

/// Composes a group stack, outermost group first. The result maps innermost
/// local coordinates to root coordinates.
inline AffineMatrix compose_transforms(std::span<const AffineMatrix> stack) noexcept {
  AffineMatrix m;
  for (const AffineMatrix& t : stack) m = m * t;
  return m;
}

class TransformSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void skip_sep(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

/// Reads one SVG number at `i`; returns false when none is present.
inline bool read_number(std::string_view s, std::size_t& i, double& out) {
  skip_sep(s, i);
  std::size_t j = i;
  if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
  bool digits = false;
  while (j < s.size() && s[j] >= '0' && s[j] <= '9') {
    ++j;
    digits = true;
  }
  if (j < s.size() && s[j] == '.') {
    ++j;
    while (j < s.size() && s[j] >= '0' && s[j] <= '9') {
      ++j;
      digits = true;
    }
  }
  if (!digits) return false;
  if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
    std::size_t k = j + 1;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
    if (k < s.size() && s[k] >= '0' && s[k] <= '9') {
      while (k < s.size() && s[k] >= '0' && s[k] <= '9') ++k;
      j = k;
    }
  }
  const std::size_t start = s[i] == '+' ? i + 1 : i;
  std::from_chars(s.data() + start, s.data() + j, out);
  i = j;
  return true;
}

}  // namespace detail

/// Parses an SVG transform list such as "translate(10,20) rotate(-90)".
inline AffineMatrix parse_transform(std::string_view s) {
  AffineMatrix m;
  std::size_t i = 0;
  for (;;) {
    detail::skip_sep(s, i);
    if (i >= s.size()) break;
    const std::size_t name_start = i;
    while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= 'A' && s[i] <= 'Z'))) ++i;
    const std::string_view name = s.substr(name_start, i - name_start);
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (name.empty() || i >= s.size() || s[i] != '(')
      throw TransformSyntaxError("bad transform list: '" + std::string(s) + "'");
    ++i;
    std::vector<double> args;
    double v = 0;
    while (detail::read_number(s, i, v)) args.push_back(v);
    detail::skip_sep(s, i);
    if (i >= s.size() || s[i] != ')') throw TransformSyntaxError("unterminated transform: '" + std::string(s) + "'");
    ++i;

    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi)
        throw TransformSyntaxError("wrong argument count for " + std::string(name));
    };
    AffineMatrix t;
    if (name == "matrix") {
      need(6, 6);
      t = {args[0], args[1], args[2], args[3], args[4], args[5]};
    } else if (name == "translate") {
      need(1, 2);
      t = AffineMatrix::translate(args[0], args.size() > 1 ? args[1] : 0.0);
    } else if (name == "scale") {
      need(1, 2);
      t = AffineMatrix::scale(args[0], args.size() > 1 ? args[1] : args[0]);
    } else if (name == "rotate") {
      if (args.size() != 1 && args.size() != 3) throw TransformSyntaxError("wrong argument count for rotate");
      t = args.size() == 1 ? AffineMatrix::rotate(args[0]) : AffineMatrix::rotate(args[0], args[1], args[2]);
    } else if (name == "skewX") {
      need(1, 1);
      t = AffineMatrix::skew_x(args[0]);
    } else if (name == "skewY") {
      need(1, 1);
      t = AffineMatrix::skew_y(args[0]);
    } else {
      throw TransformSyntaxError("unknown transform '" + std::string(name) + "'");
    }
    m = m * t;
  }
  return m;
}

}  // namespace simvec::svg
