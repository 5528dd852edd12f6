#pragma once

#include <cstddef>
#include <string_view>

namespace simvec {

// Token rule used for compactness measurements: a token is a maximal run of
// word characters (ASCII alphanumerics, '_', and any non-ASCII byte), where a
// run may open with '+' or '-' directly followed by a digit; every other
// non-whitespace byte is a token of its own.
inline std::size_t count_tokens(std::string_view source) noexcept {
  auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  auto is_digit = [](unsigned char c) { return c >= '0' && c <= '9'; };
  auto is_word = [&](unsigned char c) {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
  };

  std::size_t count = 0;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(source[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    ++count;
    const bool signed_run = (c == '-' || c == '+') && i + 1 < n && is_digit(static_cast<unsigned char>(source[i + 1]));
    if (signed_run || is_word(c)) {
      ++i;
      while (i < n && is_word(static_cast<unsigned char>(source[i]))) ++i;
    } else {
      ++i;
    }
  }
  return count;
}

}  // namespace simvec
