#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simvec/svg/affine.hpp"

namespace simvec::svg {

/// One path segment starting at the previous segment's end. Lines ignore the
/// control points; quadratic curves are stored as their exact cubic elevation.
struct Segment {
  bool curve = false;
  Vec2 c1;
  Vec2 c2;
  Vec2 end;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Subpath {
  Vec2 start;
  std::vector<Segment> segments;
  bool closed = false;

  friend bool operator==(const Subpath&, const Subpath&) = default;
};

/// Absolute-coordinate path geometry.
struct PathData {
  std::vector<Subpath> subpaths;

  [[nodiscard]] bool has_curves() const noexcept {
    for (const auto& sp : subpaths)
      for (const auto& seg : sp.segments)
        if (seg.curve) return true;
    return false;
  }

  friend bool operator==(const PathData&, const PathData&) = default;
};

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

class PathSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedFeature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses SVG path data (M, L, H, V, C, S, Q, T, Z; absolute and relative).
/// Arcs raise UnsupportedFeature when `strict`, otherwise they are replaced by
/// their endpoint chord and a note is appended to `warnings`.
inline PathData parse_path_data(std::string_view d, bool strict = false, std::vector<std::string>* warnings = nullptr) {
  PathData out;
  std::size_t i = 0;
  Vec2 cur;
  Vec2 start;
  Vec2 last_ctrl;  // reflected by S/T
  char prev_cmd = 0;
  char cmd = 0;
  Subpath* sp = nullptr;

  auto ensure_subpath = [&]() {
    if (!sp || sp->closed) {
      out.subpaths.push_back(Subpath{cur, {}, false});
      sp = &out.subpaths.back();
      start = cur;
    }
  };
  auto num = [&](double& v) {
    if (!detail::read_number(d, i, v))
      throw PathSyntaxError("expected number in path data at offset " + std::to_string(i));
  };
  auto flag = [&](double& v) {
    detail::skip_sep(d, i);
    if (i < d.size() && (d[i] == '0' || d[i] == '1')) {
      v = d[i] - '0';
      ++i;
      return;
    }
    throw PathSyntaxError("expected arc flag at offset " + std::to_string(i));
  };

  for (;;) {
    detail::skip_sep(d, i);
    if (i >= d.size()) break;
    const char c = d[i];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cmd = c;
      ++i;
    } else if (cmd == 0) {
      throw PathSyntaxError("path data must start with a command");
    } else if (cmd == 'M') {
      cmd = 'L';  // implicit lineto after moveto
    } else if (cmd == 'm') {
      cmd = 'l';
    } else if (cmd == 'Z' || cmd == 'z') {
      throw PathSyntaxError("unexpected number after closepath");
    }
    const bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
    const Vec2 base = rel ? cur : Vec2{};
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    switch (up) {
      case 'M': {
        Vec2 p;
        num(p.x);
        num(p.y);
        cur = base + p;
        out.subpaths.push_back(Subpath{cur, {}, false});
        sp = &out.subpaths.back();
        start = cur;
        last_ctrl = cur;
        break;
      }
      case 'L': {
        Vec2 p;
        num(p.x);
        num(p.y);
        ensure_subpath();
        cur = base + p;
        sp->segments.push_back({false, {}, {}, cur});
        last_ctrl = cur;
        break;
      }
      case 'H': {
        double x = 0;
        num(x);
        ensure_subpath();
        cur = {rel ? cur.x + x : x, cur.y};
        sp->segments.push_back({false, {}, {}, cur});
        last_ctrl = cur;
        break;
      }
      case 'V': {
        double y = 0;
        num(y);
        ensure_subpath();
        cur = {cur.x, rel ? cur.y + y : y};
        sp->segments.push_back({false, {}, {}, cur});
        last_ctrl = cur;
        break;
      }
      case 'C': {
        Vec2 a, b, p;
        num(a.x), num(a.y), num(b.x), num(b.y), num(p.x), num(p.y);
        ensure_subpath();
        sp->segments.push_back({true, base + a, base + b, base + p});
        last_ctrl = base + b;
        cur = base + p;
        break;
      }
      case 'S': {
        Vec2 b, p;
        num(b.x), num(b.y), num(p.x), num(p.y);
        ensure_subpath();
        const char pu = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
        const Vec2 a = (pu == 'C' || pu == 'S') ? cur * 2.0 - last_ctrl : cur;
        sp->segments.push_back({true, a, base + b, base + p});
        last_ctrl = base + b;
        cur = base + p;
        break;
      }
      case 'Q':
      case 'T': {
        Vec2 q, p;
        if (up == 'Q') {
          num(q.x), num(q.y);
          q = base + q;
        } else {
          const char pu = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
          q = (pu == 'Q' || pu == 'T') ? cur * 2.0 - last_ctrl : cur;
        }
        num(p.x), num(p.y);
        p = base + p;
        ensure_subpath();
        sp->segments.push_back({true, cur + (q - cur) * (2.0 / 3.0), p + (q - p) * (2.0 / 3.0), p});
        last_ctrl = q;
        cur = p;
        break;
      }
      case 'A': {
        double rx = 0, ry = 0, rot = 0, large = 0, sweep = 0;
        Vec2 p;
        num(rx), num(ry), num(rot);
        flag(large);
        flag(sweep);
        num(p.x), num(p.y);
        if (strict) throw UnsupportedFeature("elliptical arc commands are not supported");
        if (warnings) warnings->push_back("arc approximated by its endpoint chord");
        ensure_subpath();
        cur = base + p;
        sp->segments.push_back({false, {}, {}, cur});
        last_ctrl = cur;
        break;
      }
      case 'Z': {
        if (sp && !sp->closed) sp->closed = true;
        cur = start;
        last_ctrl = cur;
        break;
      }
      default:
        throw PathSyntaxError(std::string("unknown path command '") + cmd + "'");
    }
    prev_cmd = cmd;
  }
  return out;
}

inline PathData transform_path(const PathData& path, const AffineMatrix& m) {
  PathData out = path;
  for (auto& sp : out.subpaths) {
    sp.start = m.apply(sp.start);
    for (auto& seg : sp.segments) {
      seg.c1 = m.apply(seg.c1);
      seg.c2 = m.apply(seg.c2);
      seg.end = m.apply(seg.end);
    }
  }
  return out;
}

namespace detail {

inline double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) noexcept {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  return distance(p, a + ab * t);
}

// The curve stays inside the hull of its control points, so the control
// point distance to the chord bounds the chord's deviation from the curve.
inline void flatten_cubic(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double tolerance, int depth, std::vector<Vec2>& out) {
  const double dev = std::max(distance_to_segment(p1, p0, p3), distance_to_segment(p2, p0, p3));
  if (dev <= tolerance || depth >= 24) {
    out.push_back(p3);
    return;
  }
  const Vec2 p01 = (p0 + p1) * 0.5;
  const Vec2 p12 = (p1 + p2) * 0.5;
  const Vec2 p23 = (p2 + p3) * 0.5;
  const Vec2 p012 = (p01 + p12) * 0.5;
  const Vec2 p123 = (p12 + p23) * 0.5;
  const Vec2 mid = (p012 + p123) * 0.5;
  flatten_cubic(p0, p01, p012, mid, tolerance, depth + 1, out);
  flatten_cubic(mid, p123, p23, p3, tolerance, depth + 1, out);
}

}  // namespace detail

/// One polyline per subpath; curves subdivided until every chord is within
/// `tolerance` of the curve it replaces. Closed subpaths are tagged, and the
/// start point is not repeated.
inline std::vector<Polyline> flatten_path(const PathData& path, double tolerance) {
  if (!(tolerance > 0)) throw std::invalid_argument("flattening tolerance must be positive");
  std::vector<Polyline> out;
  for (const Subpath& sp : path.subpaths) {
    Polyline pl;
    pl.closed = sp.closed;
    pl.points.push_back(sp.start);
    Vec2 cur = sp.start;
    for (const Segment& seg : sp.segments) {
      if (seg.curve) {
        detail::flatten_cubic(cur, seg.c1, seg.c2, seg.end, tolerance, 0, pl.points);
      } else {
        pl.points.push_back(seg.end);
      }
      cur = seg.end;
    }
    if (pl.closed && pl.points.size() > 1 && pl.points.back() == pl.points.front()) pl.points.pop_back();
    out.push_back(std::move(pl));
  }
  return out;
}

inline std::vector<Polyline> flatten_path(std::string_view d, double tolerance, bool strict = false,
                                          std::vector<std::string>* warnings = nullptr) {
  return flatten_path(parse_path_data(d, strict, warnings), tolerance);
}

}  // namespace simvec::svg
