#include <gtest/gtest.h>

#include <string>

#include "simvec/core/color.hpp"
#include "simvec/core/grammar.hpp"
#include "simvec/core/tokens.hpp"
#include "simvec/core/validate.hpp"
#include "support/generators.hpp"

using namespace simvec;

namespace {

const char* const kFourKindsDoc =
    "{text \"Title\" [100, 50, 200, 30] hsl (0, 0, 18)}\n"
    "{rect [100, 100, 50, 150] hsl (10, 15, 12)}\n"
    "{line [(0, 0), (100, 100)] hsl (0, 0, 5)}\n"
    "{polygon [(0, 0), (50, 50), (100, 0)] hsl (5, 10, 15)}\n";

ParseErrorKind parse_failure(const std::string& src) {
  try {
    parse_simvec(src);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for: " << src;
  return ParseErrorKind::syntax;
}

}  // namespace

TEST(Grammar, ParsesTextExample) {
  const auto doc = parse_simvec("{text \"Title\" [100, 50, 200, 30] hsl (0, 0, 18)}");
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc.elements[0], Element(TextElement{"Title", {100, 50, 200, 30}, {0, 0, 18}}));
}

TEST(Grammar, ParsesLineExample) {
  const auto doc = parse_simvec("{line [(0, 0), (100, 100)] hsl (0, 0, 5)}");
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc.elements[0], Element(LineElement{{{0, 0}, {100, 100}}, {0, 0, 5}}));
}

TEST(Grammar, EmptyInputIsEmptyDocument) {
  EXPECT_TRUE(parse_simvec("").empty());
  EXPECT_TRUE(parse_simvec(" \n\t ").empty());
}

TEST(Grammar, ArityErrors) {
  EXPECT_EQ(parse_failure("{rect [100, 100, 50] hsl (1,1,1)}"), ParseErrorKind::arity);
  EXPECT_EQ(parse_failure("{rect [1, 2, 3, 4] hsl (1,1)}"), ParseErrorKind::arity);
  EXPECT_EQ(parse_failure("{line [(0, 0)] hsl (1,1,1)}"), ParseErrorKind::arity);
  EXPECT_EQ(parse_failure("{polygon [(0, 0), (1, 1)] hsl (1,1,1)}"), ParseErrorKind::arity);
  EXPECT_EQ(parse_failure("{line [(0, 0, 3), (1, 1)] hsl (1,1,1)}"), ParseErrorKind::arity);
}

TEST(Grammar, SyntaxAndKeywordErrors) {
  EXPECT_EQ(parse_failure("{circle [1, 2, 3, 4] hsl (1,1,1)}"), ParseErrorKind::unknown_element);
  EXPECT_EQ(parse_failure("{rect [1, 2, 3, 4] hsl (1,1,1)"), ParseErrorKind::syntax);
  EXPECT_EQ(parse_failure("{text Title [1, 2, 3, 4] hsl (1,1,1)}"), ParseErrorKind::syntax);
  EXPECT_EQ(parse_failure("{rect [1, 2.5, 3, 4] hsl (1,1,1)}"), ParseErrorKind::syntax);
  EXPECT_EQ(parse_failure("{text \"abc [1, 2, 3, 4] hsl (1,1,1)}"), ParseErrorKind::syntax);
}

TEST(Grammar, ErrorCarriesPosition) {
  try {
    parse_simvec("{rect [1, 2, 3, 4] hsl (1,1,1)}\n{rect [1, 2, x, 4] hsl (1,1,1)}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 14u);
    EXPECT_EQ(e.expected(), "integer");
  }
}

TEST(Grammar, SerializesFourKindsExamples) {
  EXPECT_EQ(format_element(RectElement{{100, 100, 50, 150}, {10, 15, 12}}), "{rect [100, 100, 50, 150] hsl (10, 15, 12)}");
  EXPECT_EQ(format_element(PolygonElement{{{0, 0}, {50, 50}, {100, 0}}, {5, 10, 15}}),
            "{polygon [(0, 0), (50, 50), (100, 0)] hsl (5, 10, 15)}");
  EXPECT_EQ(serialize_simvec(SimVecDoc{}), "");
  EXPECT_EQ(serialize_simvec(parse_simvec(kFourKindsDoc)), kFourKindsDoc);
}

TEST(Grammar, EscapesQuotesAndBackslashes) {
  SimVecDoc doc;
  doc.elements.push_back(TextElement{"say \"hi\" \\o/", {0, 0, 10, 10}, {0, 0, 0}});
  const std::string text = serialize_simvec(doc);
  EXPECT_EQ(text, "{text \"say \\\"hi\\\" \\\\o/\" [0, 0, 10, 10] hsl (0, 0, 0)}\n");
  EXPECT_EQ(parse_simvec(text), doc);
}

TEST(Grammar, SerializeRejectsInvalidDocument) {
  SimVecDoc doc;
  doc.elements.push_back(RectElement{{1200, 0, 10, 10}, {0, 0, 0}});
  try {
    serialize_simvec(doc);
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].index, 0u);
  }
}

TEST(Grammar, RoundTripProperty) {
  testgen::Gen gen(7);
  for (int i = 0; i < 300; ++i) {
    const SimVecDoc doc = gen.doc();
    const std::string text = serialize_simvec(doc);
    ASSERT_EQ(parse_simvec(text), doc);
    ASSERT_EQ(serialize_simvec(parse_simvec(text)), text);
  }
}

TEST(Grammar, WhitespaceBetweenTokensIsInsignificant) {
  testgen::Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const SimVecDoc doc = gen.doc(8);
    const std::string text = serialize_simvec(doc);
    // Re-space outside string literals: drop canonical spaces, then pad
    // every structural character with random whitespace.
    std::string spaced;
    bool in_string = false;
    for (std::size_t k = 0; k < text.size(); ++k) {
      const char c = text[k];
      if (in_string) {
        spaced += c;
        if (c == '\\') spaced += text[++k];
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') {
        in_string = true;
        spaced += c;
        continue;
      }
      if (c == ' ') continue;
      static const char* kWs[] = {"", " ", "\n", "\t  ", "\r\n "};
      if (c == '{' || c == '}' || c == '[' || c == ']' || c == '(' || c == ')' || c == ',') {
        spaced += kWs[gen.integer(0, 4)];
        spaced += c;
        spaced += kWs[gen.integer(0, 4)];
      } else if (c == 'h' && text.compare(k, 3, "hsl") == 0) {
        spaced += " hsl";
        spaced += kWs[gen.integer(0, 4)];
        k += 2;
      } else if (std::isalpha(static_cast<unsigned char>(c)) && k > 0 && text[k - 1] == '{') {
        // element keyword
        const auto end = text.find(' ', k);
        spaced += text.substr(k, end - k) + " ";
        k = end - 1;
      } else {
        spaced += c;
      }
    }
    ASSERT_EQ(parse_simvec(spaced), doc) << spaced;
  }
}

TEST(Validate, FourKindsDocumentIsClean) { EXPECT_TRUE(validate(parse_simvec(kFourKindsDoc)).empty()); }

TEST(Validate, FlagsOutOfRangeValues) {
  SimVecDoc doc;
  doc.elements.push_back(RectElement{{1200, 0, 10, 10}, {0, 0, 0}});
  auto v = validate(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (Violation{0, "bbox.left", 1200}));

  doc.elements.assign(1, TextElement{"x", {0, 0, 10, 10}, {25, 0, 0}});
  v = validate(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (Violation{0, "color.h", 25}));
}

TEST(Validate, FlagsOverflowAndArity) {
  SimVecDoc doc;
  doc.elements.push_back(RectElement{{900, 0, 200, 10}, {0, 0, 0}});
  doc.elements.push_back(LineElement{{{0, 0}}, {0, 0, 0}});
  doc.elements.push_back(PolygonElement{{{0, 0}, {1, 1}, {-1, 5}}, {0, 0, 0}});
  doc.elements.push_back(TextElement{"", {0, 0, 1, 1}, {0, 0, 0}});
  const auto v = validate(doc);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], (Violation{0, "bbox.right", 1100}));
  EXPECT_EQ(v[1], (Violation{1, "points", 1}));
  EXPECT_EQ(v[2], (Violation{2, "points[2].x", -1}));
  EXPECT_EQ(v[3], (Violation{3, "text", 0}));
}

TEST(Color, QuantizeEndpoints) {
  EXPECT_EQ(quantize_color(0, 0, 100), (HslQ{0, 0, 20}));
  EXPECT_EQ(quantize_color(0, 0, 0), (HslQ{0, 0, 0}));
  EXPECT_EQ(quantize_color(0, 100, 50), (HslQ{0, 20, 10}));
}

TEST(Color, HueWrapAndRounding) {
  EXPECT_EQ(quantize_color(360, 0, 0).h, 0);
  EXPECT_EQ(quantize_color(355, 0, 0).h, 20);
  EXPECT_EQ(quantize_color(351, 0, 0).h, 20);  // 19.5 rounds away from zero
  EXPECT_EQ(quantize_color(9, 0, 0).h, 1);     // 0.5 rounds away from zero
  EXPECT_EQ(quantize_color(0, 2.5, 0).s, 1);
  EXPECT_THROW(quantize_color(-1, 0, 0), std::out_of_range);
  EXPECT_THROW(quantize_color(0, 101, 0), std::out_of_range);
  EXPECT_THROW(quantize_color(0, 0, -0.5), std::out_of_range);
}

TEST(Color, QuantizeInvertsDequantizeOnWholeGrid) {
  for (int h = 0; h <= 20; ++h)
    for (int s = 0; s <= 20; ++s)
      for (int l = 0; l <= 20; ++l) {
        const HslQ q{h, s, l};
        ASSERT_EQ(quantize_color(dequantize_color(q)), q) << h << " " << s << " " << l;
      }
}

TEST(Color, RgbConversionsAgree) {
  EXPECT_EQ(to_hex(hsl_to_rgb8({0, 100, 50})), "#ff0000");
  EXPECT_EQ(to_hex(hsl_to_rgb8({120, 100, 25})), "#008000");
  const Hsl c = rgb_to_hsl(Rgb8{0x4c, 0x78, 0xa8});
  // colorsys.rgb_to_hls(0x4c/255, 0x78/255, 0xa8/255)
  EXPECT_NEAR(c.h, 0.5869565217391304 * 360, 1e-9);
  EXPECT_NEAR(c.s, 37.70491803278689, 1e-9);
  EXPECT_NEAR(c.l, 47.84313725490196, 1e-9);
}

TEST(Color, Distance) {
  EXPECT_DOUBLE_EQ(color_distance({0, 0, 0}, {3, 4, 0}), 5.0);
  EXPECT_DOUBLE_EQ(color_distance({1, 0, 0}, {19, 0, 0}), 18.0);
  EXPECT_DOUBLE_EQ(color_distance({1, 0, 0}, {19, 0, 0}, true), 2.0);
}

TEST(Tokens, Examples) {
  // { rect [ 100 , 100 , 50 , 150 ] hsl ( 10 , 15 , 12 ) }
  EXPECT_EQ(count_tokens("{rect [100, 100, 50, 150] hsl (10, 15, 12)}"), 20u);
  EXPECT_EQ(count_tokens(""), 0u);
  EXPECT_EQ(count_tokens("hsl"), 1u);
  EXPECT_EQ(count_tokens("x=-12.5"), 5u);  // x = -12 . 5
  EXPECT_EQ(count_tokens("a - b"), 3u);
  EXPECT_EQ(count_tokens("<rect/>"), 4u);
}

TEST(Tokens, AdditiveAcrossWhitespaceBoundaries) {
  testgen::Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    const std::string a = gen.text(40) + " ";
    const std::string b = " " + gen.text(40);
    ASSERT_EQ(count_tokens(a) + count_tokens(b), count_tokens(a + b));
  }
}
