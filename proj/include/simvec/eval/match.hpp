#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "simvec/core/color.hpp"
#include "simvec/core/types.hpp"

namespace simvec::eval {

/// Unicode code points of a UTF-8 string; stray bytes count as one each.
inline std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t n = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xe ? 3 : (b >> 3) == 0x1e ? 4 : 0;
    if (n == 0 || i + n > s.size()) {
      out.push_back(b);
      ++i;
      continue;
    }
    char32_t cp = n == 1 ? b : b & (0x7f >> n);
    bool ok = true;
    for (std::size_t k = 1; k < n; ++k) {
      const auto c = static_cast<unsigned char>(s[i + k]);
      ok = ok && (c & 0xc0) == 0x80;
      cp = (cp << 6) | (c & 0x3f);
    }
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

/// Edit distance (insert, delete, substitute) over code points.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  const auto x = code_points(a);
  const auto y = code_points(b);
  std::vector<std::size_t> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

/// 1 − lev/max(len); two empty strings are identical.
inline double text_similarity(std::string_view a, std::string_view b) {
  const std::size_t n = std::max(code_points(a).size(), code_points(b).size());
  if (n == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(n);
}

/// Minimum-cost assignment on a rows×cols matrix (row-major). Returns, per
/// row, the assigned column or -1; min(rows, cols) pairs are formed.
inline std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  if (rows > cols) {
    std::vector<double> t(cost.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = cost[r * cols + c];
    const auto col_of = solve_assignment(t, cols, rows);
    std::vector<int> out(rows, -1);
    for (std::size_t c = 0; c < cols; ++c)
      if (col_of[c] >= 0) out[static_cast<std::size_t>(col_of[c])] = static_cast<int>(c);
    return out;
  }
  // potentials method, 1-based with a virtual column 0
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = rows, m = cols;
  std::vector<double> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) out[p[j] - 1] = static_cast<int>(j - 1);
  return out;
}

/// Matched pairs and leftovers; indices point into the documents' element lists.
struct ElementAssignment {
  struct Pair {
    std::size_t pred = 0;
    std::size_t gt = 0;
    friend bool operator==(const Pair&, const Pair&) = default;
  };
  std::vector<Pair> pairs;  // sorted by gt index
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;
};

struct PointD {
  double x = 0;
  double y = 0;
};

inline double distance(PointD a, PointD b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline PointD center(const NBBox& b) { return {b.left + b.width / 2.0, b.top + b.height / 2.0}; }

/// Rect center or vertex centroid.
inline PointD representative_point(const Element& e) {
  if (const auto* t = std::get_if<TextElement>(&e)) return center(t->bbox);
  if (const auto* r = std::get_if<RectElement>(&e)) return center(r->bbox);
  const auto& pts = std::holds_alternative<LineElement>(e) ? std::get<LineElement>(e).points : std::get<PolygonElement>(e).points;
  PointD c;
  for (const auto& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  if (!pts.empty()) {
    c.x /= static_cast<double>(pts.size());
    c.y /= static_cast<double>(pts.size());
  }
  return c;
}

inline double match_cost(const Element& pred, const Element& gt) {
  if (const auto* a = std::get_if<TextElement>(&pred)) {
    const auto& b = std::get<TextElement>(gt);
    return (1.0 - text_similarity(a->text, b.text)) + distance(center(a->bbox), center(b.bbox)) / kCanvasSize;
  }
  return distance(representative_point(pred), representative_point(gt)) / kCanvasSize +
         color_distance(color_of(pred), color_of(gt)) / (kColorLevels * std::numbers::sqrt3);
}

/// Optimal one-to-one matching within each element kind.
inline ElementAssignment match_elements(const SimVecDoc& pred, const SimVecDoc& gt) {
  ElementAssignment out;
  for (const ElementKind kind : {ElementKind::text, ElementKind::rect, ElementKind::line, ElementKind::polygon}) {
    std::vector<std::size_t> ps, gs;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (kind_of(pred.elements[i]) == kind) ps.push_back(i);
    for (std::size_t i = 0; i < gt.size(); ++i)
      if (kind_of(gt.elements[i]) == kind) gs.push_back(i);
    std::vector<double> cost(ps.size() * gs.size());
    for (std::size_t r = 0; r < ps.size(); ++r)
      for (std::size_t c = 0; c < gs.size(); ++c) cost[r * gs.size() + c] = match_cost(pred.elements[ps[r]], gt.elements[gs[c]]);
    const auto col = solve_assignment(cost, ps.size(), gs.size());
    std::vector<char> gt_used(gs.size(), 0);
    for (std::size_t r = 0; r < ps.size(); ++r) {
      if (col[r] < 0) {
        out.unmatched_pred.push_back(ps[r]);
        continue;
      }
      const auto c = static_cast<std::size_t>(col[r]);
      gt_used[c] = 1;
      out.pairs.push_back({ps[r], gs[c]});
    }
    for (std::size_t c = 0; c < gs.size(); ++c)
      if (!gt_used[c]) out.unmatched_gt.push_back(gs[c]);
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) { return a.gt < b.gt; });
  std::sort(out.unmatched_pred.begin(), out.unmatched_pred.end());
  std::sort(out.unmatched_gt.begin(), out.unmatched_gt.end());
  return out;
}

inline double assignment_cost(const ElementAssignment& a, const SimVecDoc& pred, const SimVecDoc& gt) {
  double total = 0;
  for (const auto& p : a.pairs) total += match_cost(pred.elements[p.pred], gt.elements[p.gt]);
  return total;
}

}  // namespace simvec::eval
