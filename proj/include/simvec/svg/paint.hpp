#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "simvec/core/color.hpp"
#include "simvec/svg/affine.hpp"

namespace simvec::svg {

/// A resolved `fill`/`stroke` value.
struct Paint {
  enum class Kind { none, color, url, current_color };
  Kind kind = Kind::none;
  Hsl color;
  std::string ref;  // gradient/pattern id for url(#id)

  static Paint none() { return {}; }
  static Paint solid(Hsl c) { return {Kind::color, c, {}}; }
};

namespace detail {

inline constexpr std::pair<std::string_view, std::uint32_t> kNamedColors[] = {
      {"aliceblue", 0xf0f8ff}, {"antiquewhite", 0xfaebd7}, {"aqua", 0x00ffff}, {"aquamarine", 0x7fffd4},
      {"azure", 0xf0ffff}, {"beige", 0xf5f5dc}, {"bisque", 0xffe4c4}, {"black", 0x000000},
      {"blanchedalmond", 0xffebcd}, {"blue", 0x0000ff}, {"blueviolet", 0x8a2be2}, {"brown", 0xa52a2a},
      {"burlywood", 0xdeb887}, {"cadetblue", 0x5f9ea0}, {"chartreuse", 0x7fff00}, {"chocolate", 0xd2691e},
      {"coral", 0xff7f50}, {"cornflowerblue", 0x6495ed}, {"cornsilk", 0xfff8dc}, {"crimson", 0xdc143c},
      {"cyan", 0x00ffff}, {"darkblue", 0x00008b}, {"darkcyan", 0x008b8b}, {"darkgoldenrod", 0xb8860b},
      {"darkgray", 0xa9a9a9}, {"darkgreen", 0x006400}, {"darkgrey", 0xa9a9a9}, {"darkkhaki", 0xbdb76b},
      {"darkmagenta", 0x8b008b}, {"darkolivegreen", 0x556b2f}, {"darkorange", 0xff8c00}, {"darkorchid", 0x9932cc},
      {"darkred", 0x8b0000}, {"darksalmon", 0xe9967a}, {"darkseagreen", 0x8fbc8f}, {"darkslateblue", 0x483d8b},
      {"darkslategray", 0x2f4f4f}, {"darkslategrey", 0x2f4f4f}, {"darkturquoise", 0x00ced1},
      {"darkviolet", 0x9400d3}, {"deeppink", 0xff1493}, {"deepskyblue", 0x00bfff}, {"dimgray", 0x696969},
      {"dimgrey", 0x696969}, {"dodgerblue", 0x1e90ff}, {"firebrick", 0xb22222}, {"floralwhite", 0xfffaf0},
      {"forestgreen", 0x228b22}, {"fuchsia", 0xff00ff}, {"gainsboro", 0xdcdcdc}, {"ghostwhite", 0xf8f8ff},
      {"gold", 0xffd700}, {"goldenrod", 0xdaa520}, {"gray", 0x808080}, {"green", 0x008000},
      {"greenyellow", 0xadff2f}, {"grey", 0x808080}, {"honeydew", 0xf0fff0}, {"hotpink", 0xff69b4},
      {"indianred", 0xcd5c5c}, {"indigo", 0x4b0082}, {"ivory", 0xfffff0}, {"khaki", 0xf0e68c},
      {"lavender", 0xe6e6fa}, {"lavenderblush", 0xfff0f5}, {"lawngreen", 0x7cfc00}, {"lemonchiffon", 0xfffacd},
      {"lightblue", 0xadd8e6}, {"lightcoral", 0xf08080}, {"lightcyan", 0xe0ffff},
      {"lightgoldenrodyellow", 0xfafad2}, {"lightgray", 0xd3d3d3}, {"lightgreen", 0x90ee90},
      {"lightgrey", 0xd3d3d3}, {"lightpink", 0xffb6c1}, {"lightsalmon", 0xffa07a}, {"lightseagreen", 0x20b2aa},
      {"lightskyblue", 0x87cefa}, {"lightslategray", 0x778899}, {"lightslategrey", 0x778899},
      {"lightsteelblue", 0xb0c4de}, {"lightyellow", 0xffffe0}, {"lime", 0x00ff00}, {"limegreen", 0x32cd32},
      {"linen", 0xfaf0e6}, {"magenta", 0xff00ff}, {"maroon", 0x800000}, {"mediumaquamarine", 0x66cdaa},
      {"mediumblue", 0x0000cd}, {"mediumorchid", 0xba55d3}, {"mediumpurple", 0x9370db},
      {"mediumseagreen", 0x3cb371}, {"mediumslateblue", 0x7b68ee}, {"mediumspringgreen", 0x00fa9a},
      {"mediumturquoise", 0x48d1cc}, {"mediumvioletred", 0xc71585}, {"midnightblue", 0x191970},
      {"mintcream", 0xf5fffa}, {"mistyrose", 0xffe4e1}, {"moccasin", 0xffe4b5}, {"navajowhite", 0xffdead},
      {"navy", 0x000080}, {"oldlace", 0xfdf5e6}, {"olive", 0x808000}, {"olivedrab", 0x6b8e23},
      {"orange", 0xffa500}, {"orangered", 0xff4500}, {"orchid", 0xda70d6}, {"palegoldenrod", 0xeee8aa},
      {"palegreen", 0x98fb98}, {"paleturquoise", 0xafeeee}, {"palevioletred", 0xdb7093}, {"papayawhip", 0xffefd5},
      {"peachpuff", 0xffdab9}, {"peru", 0xcd853f}, {"pink", 0xffc0cb}, {"plum", 0xdda0dd},
      {"powderblue", 0xb0e0e6}, {"purple", 0x800080}, {"rebeccapurple", 0x663399}, {"red", 0xff0000},
      {"rosybrown", 0xbc8f8f}, {"royalblue", 0x4169e1}, {"saddlebrown", 0x8b4513}, {"salmon", 0xfa8072},
      {"sandybrown", 0xf4a460}, {"seagreen", 0x2e8b57}, {"seashell", 0xfff5ee}, {"sienna", 0xa0522d},
      {"silver", 0xc0c0c0}, {"skyblue", 0x87ceeb}, {"slateblue", 0x6a5acd}, {"slategray", 0x708090},
      {"slategrey", 0x708090}, {"snow", 0xfffafa}, {"springgreen", 0x00ff7f}, {"steelblue", 0x4682b4},
      {"tan", 0xd2b48c}, {"teal", 0x008080}, {"thistle", 0xd8bfd8}, {"tomato", 0xff6347}, {"turquoise", 0x40e0d0},
      {"violet", 0xee82ee}, {"wheat", 0xf5deb3}, {"white", 0xffffff}, {"whitesmoke", 0xf5f5f5},
      {"yellow", 0xffff00}, {"yellowgreen", 0x9acd32}
};

inline std::string lower_trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

// Reads "n" or "n%" arguments of rgb()/hsl(); percentages are reported.
inline bool read_args(std::string_view body, std::array<double, 4>& vals, std::array<bool, 4>& pct, int& count) {
  std::size_t i = 0;
  count = 0;
  double v = 0;
  while (count < 4 && read_number(body, i, v)) {
    vals[count] = v;
    pct[count] = false;
    while (i < body.size() && body[i] == ' ') ++i;
    if (i < body.size() && body[i] == '%') {
      pct[count] = true;
      ++i;
    } else if (body.substr(i, 3) == "deg") {
      i += 3;
    }
    ++count;
    while (i < body.size() && (body[i] == ' ' || body[i] == ',' || body[i] == '/')) ++i;
  }
  return i >= body.size();
}

}  // namespace detail

/// Parses an SVG/CSS color value. Returns nullopt for unrecognized syntax.
inline std::optional<Paint> parse_paint(std::string_view value) {
  const std::string s = detail::lower_trim(value);
  if (s.empty()) return std::nullopt;
  if (s == "none" || s == "transparent") return Paint::none();
  if (s == "currentcolor") return Paint{Paint::Kind::current_color, {}, {}};
  if (s.rfind("url(", 0) == 0) {
    const auto open = value.find('(');
    const auto close = value.find(')');
    if (close == std::string_view::npos || close < open) return std::nullopt;
    std::string id(value.substr(open + 1, close - open - 1));
    while (!id.empty() && (id.front() == ' ' || id.front() == '\'' || id.front() == '"')) id.erase(id.begin());
    while (!id.empty() && (id.back() == ' ' || id.back() == '\'' || id.back() == '"')) id.pop_back();
    if (!id.empty() && id.front() == '#') id.erase(id.begin());
    return Paint{Paint::Kind::url, {}, id};
  }
  if (s[0] == '#') {
    const std::string_view hex = std::string_view(s).substr(1);
    int v[6];
    for (std::size_t k = 0; k < hex.size() && k < 6; ++k) {
      v[k] = detail::hex_digit(hex[k]);
      if (v[k] < 0) return std::nullopt;
    }
    Rgb8 c;
    if (hex.size() == 3 || hex.size() == 4) {
      c = {static_cast<std::uint8_t>(v[0] * 17), static_cast<std::uint8_t>(v[1] * 17), static_cast<std::uint8_t>(v[2] * 17)};
    } else if (hex.size() == 6 || hex.size() == 8) {
      c = {static_cast<std::uint8_t>(v[0] * 16 + v[1]), static_cast<std::uint8_t>(v[2] * 16 + v[3]),
           static_cast<std::uint8_t>(v[4] * 16 + v[5])};
    } else {
      return std::nullopt;
    }
    return Paint::solid(rgb_to_hsl(c));
  }
  const auto open = s.find('(');
  if (open != std::string::npos && s.back() == ')') {
    const std::string fn = s.substr(0, open);
    const std::string_view body = std::string_view(s).substr(open + 1, s.size() - open - 2);
    std::array<double, 4> vals{};
    std::array<bool, 4> pct{};
    int count = 0;
    if (!detail::read_args(body, vals, pct, count) || count < 3) return std::nullopt;
    if (fn == "rgb" || fn == "rgba") {
      double ch[3];
      for (int k = 0; k < 3; ++k) ch[k] = std::clamp(pct[k] ? vals[k] / 100.0 : vals[k] / 255.0, 0.0, 1.0);
      return Paint::solid(rgb_to_hsl(ch[0], ch[1], ch[2]));
    }
    if (fn == "hsl" || fn == "hsla") {
      double h = std::fmod(vals[0], 360.0);
      if (h < 0) h += 360.0;
      return Paint::solid({h, std::clamp(vals[1], 0.0, 100.0), std::clamp(vals[2], 0.0, 100.0)});
    }
    return std::nullopt;
  }
  for (const auto& [name, rgb] : detail::kNamedColors) {
    if (name == s) {
      return Paint::solid(rgb_to_hsl(Rgb8{static_cast<std::uint8_t>(rgb >> 16), static_cast<std::uint8_t>((rgb >> 8) & 255),
                                          static_cast<std::uint8_t>(rgb & 255)}));
    }
  }
  return std::nullopt;
}

}  // namespace simvec::svg
