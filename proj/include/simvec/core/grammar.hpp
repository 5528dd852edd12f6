#pragma once

// Canonical SimVec text form:
//
//   doc      := (element NL)* ;
//   element  := "{" kindbody "}" ;
//   kindbody := "text" SP string SP bbox SP color
//             | "rect" SP bbox SP color
//             | "line" SP points SP color
//             | "polygon" SP points SP color ;
//   bbox     := "[" int ", " int ", " int ", " int "]" ;
//   points   := "[" point (", " point)* "]" ;
//   point    := "(" int ", " int ")" ;
//   color    := "hsl (" int ", " int ", " int ")" ;
//   string   := '"' chars with \" and \\ escapes '"' ;
//
// The parser accepts any whitespace between tokens; the serializer emits the
// literal spacing above, one element per line.

#include <charconv>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simvec/core/types.hpp"
#include "simvec/core/validate.hpp"

namespace simvec {

enum class ParseErrorKind { syntax, arity, unknown_element };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line, std::size_t column, std::string expected,
             const std::string& message)
      : std::runtime_error(message),
        kind_(kind),
        offset_(offset),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }
  [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(make_message(violations)), violations_(std::move(violations)) {}

  [[nodiscard]] const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string make_message(const std::vector<Violation>& vs) {
    std::string msg = "invalid SimVec document";
    if (!vs.empty()) msg += ": " + describe(vs.front());
    if (vs.size() > 1) msg += " (+" + std::to_string(vs.size() - 1) + " more)";
    return msg;
  }

  std::vector<Violation> violations_;
};

namespace detail {

class SimVecParser {
 public:
  explicit SimVecParser(std::string_view src) : src_(src) {}

  SimVecDoc parse() {
    SimVecDoc doc;
    skip_ws();
    while (pos_ < src_.size()) {
      doc.elements.push_back(parse_element());
      skip_ws();
    }
    return doc;
  }

 private:
  static bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
  static bool is_ident(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

  void skip_ws() {
    while (pos_ < src_.size() && is_ws(src_[pos_])) ++pos_;
  }

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t at, const std::string& expected, const std::string& what) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(kind, at, line, col, expected,
                     "SimVec parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }

  [[noreturn]] void expected(const std::string& what) const {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    fail(ParseErrorKind::syntax, pos_, what, "expected " + what + ", found " + found);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c) expected(std::string("'") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  std::string_view word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident(src_[pos_])) ++pos_;
    return src_.substr(start, pos_ - start);
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    if (p < src_.size() && (src_[p] == '-' || src_[p] == '+')) ++p;
    const std::size_t digits = p;
    while (p < src_.size() && src_[p] >= '0' && src_[p] <= '9') ++p;
    if (p == digits) expected("integer");
    const char* first = src_.data() + digits;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(first, src_.data() + p, v);
    if (ec != std::errc() || v > std::numeric_limits<int>::max() || v < std::numeric_limits<int>::min())
      fail(ParseErrorKind::syntax, start, "integer", "integer out of range");
    if (src_[start] == '-') v = -v;
    pos_ = p;
    return static_cast<int>(v);
  }

  // "[" int ("," int)* "]" with the count checked by the caller.
  std::vector<int> int_list(char open, char close) {
    std::vector<int> out;
    expect(open);
    if (peek(close)) {
      ++pos_;
      return out;
    }
    out.push_back(integer());
    while (peek(',')) {
      ++pos_;
      out.push_back(integer());
    }
    expect(close);
    return out;
  }

  NBBox bbox() {
    skip_ws();
    const std::size_t at = pos_;
    const auto v = int_list('[', ']');
    if (v.size() != 4)
      fail(ParseErrorKind::arity, at, "4 numbers",
           "bbox needs 4 numbers [left, top, width, height], got " + std::to_string(v.size()));
    return {v[0], v[1], v[2], v[3]};
  }

  HslQ color() {
    skip_ws();
    const std::size_t at = pos_;
    if (word() != "hsl") {
      pos_ = at;
      expected("'hsl'");
    }
    skip_ws();
    const std::size_t list_at = pos_;
    const auto v = int_list('(', ')');
    if (v.size() != 3)
      fail(ParseErrorKind::arity, list_at, "3 numbers", "color needs 3 numbers (h, s, l), got " + std::to_string(v.size()));
    return {v[0], v[1], v[2]};
  }

  std::vector<NPoint> points(std::size_t min_count, std::string_view kind) {
    skip_ws();
    const std::size_t at = pos_;
    std::vector<NPoint> pts;
    expect('[');
    if (!peek(']')) {
      for (;;) {
        skip_ws();
        const std::size_t pt_at = pos_;
        const auto v = int_list('(', ')');
        if (v.size() != 2)
          fail(ParseErrorKind::arity, pt_at, "2 numbers", "point needs 2 numbers (x, y), got " + std::to_string(v.size()));
        pts.push_back({v[0], v[1]});
        if (!peek(',')) break;
        ++pos_;
      }
    }
    expect(']');
    if (pts.size() < min_count)
      fail(ParseErrorKind::arity, at, "at least " + std::to_string(min_count) + " points",
           std::string(kind) + " needs at least " + std::to_string(min_count) + " points, got " +
               std::to_string(pts.size()));
    return pts;
  }

  std::string string_literal() {
    expect('"');
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) fail(ParseErrorKind::syntax, pos_, "'\"'", "unterminated string");
      const char c = src_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= src_.size()) fail(ParseErrorKind::syntax, pos_, "escape", "unterminated escape");
        const char e = src_[pos_];
        if (e != '"' && e != '\\') fail(ParseErrorKind::syntax, pos_, "'\"' or '\\\\'", "unsupported escape");
        out.push_back(e);
        ++pos_;
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  Element parse_element() {
    expect('{');
    skip_ws();
    const std::size_t kw_at = pos_;
    const std::string_view kw = word();
    Element el;
    if (kw == "text") {
      TextElement t;
      t.text = string_literal();
      t.bbox = bbox();
      t.color = color();
      el = std::move(t);
    } else if (kw == "rect") {
      RectElement r;
      r.bbox = bbox();
      r.color = color();
      el = r;
    } else if (kw == "line") {
      LineElement l;
      l.points = points(2, "line");
      l.color = color();
      el = std::move(l);
    } else if (kw == "polygon") {
      PolygonElement p;
      p.points = points(3, "polygon");
      p.color = color();
      el = std::move(p);
    } else if (kw.empty()) {
      expected("element keyword");
    } else {
      fail(ParseErrorKind::unknown_element, kw_at, "text, rect, line or polygon",
           "unknown element keyword '" + std::string(kw) + "'");
    }
    expect('}');
    return el;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline void append_int(std::string& out, int v) {
  char buf[16];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

inline void append_color(std::string& out, const HslQ& c) {
  out += "hsl (";
  append_int(out, c.h);
  out += ", ";
  append_int(out, c.s);
  out += ", ";
  append_int(out, c.l);
  out += ')';
}

inline void append_bbox(std::string& out, const NBBox& b) {
  out += '[';
  append_int(out, b.left);
  out += ", ";
  append_int(out, b.top);
  out += ", ";
  append_int(out, b.width);
  out += ", ";
  append_int(out, b.height);
  out += ']';
}

inline void append_points(std::string& out, const std::vector<NPoint>& pts) {
  out += '[';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += '(';
    append_int(out, pts[i].x);
    out += ", ";
    append_int(out, pts[i].y);
    out += ')';
  }
  out += ']';
}

inline void append_string(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

}  // namespace detail

inline SimVecDoc parse_simvec(std::string_view source) { return detail::SimVecParser(source).parse(); }

/// Writes one element in canonical form, without the trailing newline and
/// without range checks.
inline std::string format_element(const Element& e) {
  std::string out = "{";
  std::visit(
      [&](const auto& el) {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, TextElement>) {
          out += "text ";
          detail::append_string(out, el.text);
          out += ' ';
          detail::append_bbox(out, el.bbox);
        } else if constexpr (std::is_same_v<T, RectElement>) {
          out += "rect ";
          detail::append_bbox(out, el.bbox);
        } else if constexpr (std::is_same_v<T, LineElement>) {
          out += "line ";
          detail::append_points(out, el.points);
        } else {
          out += "polygon ";
          detail::append_points(out, el.points);
        }
        out += ' ';
        detail::append_color(out, el.color);
      },
      e);
  out += '}';
  return out;
}

/// Canonical printer. Throws ValidationError when the document is outside
/// the canonical ranges.
inline std::string serialize_simvec(const SimVecDoc& doc) {
  if (auto v = validate(doc); !v.empty()) throw ValidationError(std::move(v));
  std::string out;
  for (const Element& e : doc.elements) {
    out += format_element(e);
    out += '\n';
  }
  return out;
}

}  // namespace simvec
