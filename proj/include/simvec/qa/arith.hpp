#pragma once

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace simvec::qa {

class ArithmeticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Recursive descent over + - * / and parentheses. Accepts the typographic
// minus (U+2212), times (U+00D7) and division (U+00F7) signs.
class ArithParser {
 public:
  explicit ArithParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected input");
    return v;
  }

 private:
  enum class Op { none, plus, minus, times, divide, lparen, rparen };

  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ArithmeticError(what + " at byte " + std::to_string(i_) + " of '" + std::string(s_) + "'");
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  // Operator at the cursor and its byte length, without consuming it.
  std::pair<Op, std::size_t> peek() {
    skip();
    const std::string_view rest = s_.substr(i_);
    if (rest.empty()) return {Op::none, 0};
    switch (rest[0]) {
      case '+': return {Op::plus, 1};
      case '-': return {Op::minus, 1};
      case '*': return {Op::times, 1};
      case '/': return {Op::divide, 1};
      case '(': return {Op::lparen, 1};
      case ')': return {Op::rparen, 1};
      default: break;
    }
    if (rest.starts_with("\xE2\x88\x92")) return {Op::minus, 3};
    if (rest.starts_with("\xC3\x97")) return {Op::times, 2};
    if (rest.starts_with("\xC3\xB7")) return {Op::divide, 2};
    return {Op::none, 0};
  }

  double expr() {
    double v = term();
    for (;;) {
      const auto [op, len] = peek();
      if (op != Op::plus && op != Op::minus) return v;
      i_ += len;
      const double rhs = term();
      v = op == Op::plus ? v + rhs : v - rhs;
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      const auto [op, len] = peek();
      if (op != Op::times && op != Op::divide) return v;
      i_ += len;
      const double rhs = unary();
      if (op == Op::divide && rhs == 0) fail("division by zero");
      v = op == Op::times ? v * rhs : v / rhs;
    }
  }

  double unary() {
    const auto [op, len] = peek();
    if (op == Op::minus || op == Op::plus) {
      i_ += len;
      const double v = unary();
      return op == Op::minus ? -v : v;
    }
    return primary();
  }

  double primary() {
    const auto [op, len] = peek();
    if (op == Op::lparen) {
      i_ += len;
      const double v = expr();
      if (peek().first != Op::rparen) fail("expected ')'");
      ++i_;
      return v;
    }
    double v = 0;
    const char* begin = s_.data() + i_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v, std::chars_format::fixed);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    i_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }
};

inline bool is_expression_byte(unsigned char c) {
  return std::isdigit(c) || c == '.' || c == ' ' || c == '(' || c == ')' || c == '+' || c == '-' || c == '*' ||
         c == '/';
}

}  // namespace detail

/// Evaluates an arithmetic expression such as "(140/(450 − 50))×100".
inline double eval_arithmetic(std::string_view expression) { return detail::ArithParser(expression).parse(); }

/// The expression left of the last '=' in `text`: the longest run of
/// numbers, operators, parentheses and spaces ending there.
inline std::string expression_before_equals(std::string_view text) {
  const std::size_t eq = text.rfind('=');
  if (eq == std::string_view::npos) throw ArithmeticError("no '=' in text");
  std::size_t b = eq;
  while (b > 0) {
    const auto c = static_cast<unsigned char>(text[b - 1]);
    if (c >= 0x80) {
      // only the three operator glyphs count as expression bytes
      std::size_t k = b - 1;
      while (k > 0 && (static_cast<unsigned char>(text[k]) & 0xC0) == 0x80) --k;
      const std::string_view glyph = text.substr(k, b - k);
      if (glyph != "\xE2\x88\x92" && glyph != "\xC3\x97" && glyph != "\xC3\xB7") break;
      b = k;
      continue;
    }
    if (!detail::is_expression_byte(c)) break;
    --b;
  }
  std::string_view e = text.substr(b, eq - b);
  while (!e.empty() && e.front() == ' ') e.remove_prefix(1);
  while (!e.empty() && e.back() == ' ') e.remove_suffix(1);
  if (e.empty()) throw ArithmeticError("no expression before '='");
  return std::string(e);
}

}  // namespace simvec::qa
