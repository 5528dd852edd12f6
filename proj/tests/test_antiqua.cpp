#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "simvec/antiqua/antiqua.hpp"
#include "simvec/chart/corpus.hpp"
#include "simvec/svg/ingest.hpp"

using namespace simvec;
using antiqua::AntiquaParams;

namespace {

const char* kLineSvg =
    R"(<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000"><line x1="0" y1="100" x2="200" y2="100" stroke="black" stroke-width="2"/></svg>)";

std::vector<svg::Vec2> path_points(const std::string& d) {
  std::vector<svg::Vec2> out;
  for (const auto& sp : svg::parse_path_data(d).subpaths) {
    out.push_back(sp.start);
    for (const auto& s : sp.segments) out.push_back(s.end);
  }
  return out;
}

std::vector<const xml::Element*> find_all(const xml::Element& root, std::string_view name) {
  std::vector<const xml::Element*> out;
  auto visit = [&](auto& self, const xml::Element& el) -> void {
    if (el.name == name) out.push_back(&el);
    for (const auto& n : el.children)
      if (n.is_element()) self(self, n.element());
  };
  visit(visit, root);
  return out;
}

AntiquaParams jitter_only(double amp, std::uint64_t seed = 1) {
  AntiquaParams p;
  p.jitter_amplitude = amp;
  p.seed = seed;
  return p;
}

const std::vector<chart::CorpusItem>& corpus() {
  static const auto items = chart::gen_corpus(30, {1, 1, 1}, 42);
  return items;
}

double distance_to_polyline(NPoint p, const std::vector<NPoint>& line) {
  double best = 1e18;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double ax = line[i].x, ay = line[i].y, bx = line[i + 1].x, by = line[i + 1].y;
    const double dx = bx - ax, dy = by - ay;
    const double l2 = dx * dx + dy * dy;
    double t = l2 > 0 ? ((p.x - ax) * dx + (p.y - ay) * dy) / l2 : 0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - (ax + t * dx), p.y - (ay + t * dy)));
  }
  if (line.size() == 1) best = std::hypot(p.x - line[0].x, p.y - line[0].y);
  return best;
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(antiqua::check_params({}));
  AntiquaParams p;
  p.jitter_amplitude = -1;
  EXPECT_THROW(antiqua::check_params(p), antiqua::AntiquaError);
  p = {};
  p.segment_length = 0;
  EXPECT_THROW(antiqua::check_params(p), antiqua::AntiquaError);
  p = {};
  p.tint_strength = 1.5;
  EXPECT_THROW(antiqua::check_params(p), antiqua::AntiquaError);
  p = {};
  p.speckle_density = -3;
  EXPECT_THROW(antiqua::check_params(p), antiqua::AntiquaError);
  EXPECT_THROW(antiqua::preset("sepia"), antiqua::AntiquaError);
}

TEST(Params, PaperPresetIsActive) {
  const auto p = antiqua::preset("paper", 9);
  EXPECT_GT(p.jitter_amplitude, 0);
  EXPECT_GT(p.thickness_variation, 0);
  EXPECT_GT(p.tint_strength, 0);
  EXPECT_GT(p.speckle_density, 0);
  EXPECT_FALSE(p.font_name.empty());
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(antiqua::preset("none"), AntiquaParams{});
}

TEST(Jitter, ZeroParamsIsIdentity) {
  const std::string& svg = corpus()[0].chart.svg;
  EXPECT_EQ(antiqua::jitter_strokes(svg, {}), svg);
  EXPECT_EQ(antiqua::oldify(svg, {}), svg);
}

TEST(Jitter, SubdividesAndBoundsOffsets) {
  const std::string out = antiqua::jitter_strokes(kLineSvg, jitter_only(3));
  const auto doc = xml::parse(out);
  const auto paths = find_all(doc.root, "path");
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0]->get("fill"), "none");
  const auto pts = path_points(*paths[0]->get("d"));
  // 200 / 20 = 10 pieces: 9 interior vertices
  ASSERT_EQ(pts.size(), 11u);
  EXPECT_EQ(pts.front(), (svg::Vec2{0, 100}));
  EXPECT_EQ(pts.back(), (svg::Vec2{200, 100}));
  double moved = 0;
  for (std::size_t k = 1; k < 10; ++k) {
    EXPECT_NEAR(pts[k].x, 20.0 * static_cast<double>(k), 1e-4);
    EXPECT_LE(std::abs(pts[k].y - 100), 6.0 + 1e-4);  // truncated at 2 std
    moved += std::abs(pts[k].y - 100);
  }
  EXPECT_GT(moved, 0);
}

TEST(Jitter, NoiseMatchesRegeneratedDraws) {
  chart::Rng a(77), b(77);
  const std::vector<svg::Vec2> line{{0, 0}, {0, 200}};
  const auto pts = antiqua::jitter_polyline(line, false, 3, 20, a);
  ASSERT_EQ(pts.size(), 11u);
  for (std::size_t k = 1; k < 10; ++k) {
    const double off = b.truncated_gaussian(3, 2);
    // normal of a downward edge points to -x
    EXPECT_DOUBLE_EQ(pts[k].x, -off);
    EXPECT_DOUBLE_EQ(pts[k].y, 20.0 * static_cast<double>(k));
  }
}

TEST(Jitter, ClosedShapeKeepsCorners) {
  chart::Rng rng(3);
  const std::vector<svg::Vec2> sq{{0, 0}, {100, 0}, {100, 100}, {0, 100}};
  const auto pts = antiqua::jitter_polyline(sq, true, 2, 20, rng);
  ASSERT_EQ(pts.size(), 20u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(pts[i * 5], sq[i]);
}

TEST(Jitter, AmplitudeIsInNormalizedUnits) {
  // same drawing in a 100-unit viewBox: offsets shrink tenfold
  const char* small =
      R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100"><line x1="0" y1="10" x2="20" y2="10" stroke="black"/></svg>)";
  const auto doc = xml::parse(antiqua::jitter_strokes(small, jitter_only(3)));
  const auto pts = path_points(*find_all(doc.root, "path").at(0)->get("d"));
  ASSERT_EQ(pts.size(), 11u);
  for (const auto& p : pts) EXPECT_LE(std::abs(p.y - 10), 0.6 + 1e-4);
}

TEST(Jitter, Deterministic) {
  const std::string& svg = corpus()[1].chart.svg;
  const auto p = antiqua::preset("paper", 5);
  EXPECT_EQ(antiqua::oldify(svg, p), antiqua::oldify(svg, p));
  auto q = p;
  q.seed = 6;
  EXPECT_NE(antiqua::oldify(svg, p), antiqua::oldify(svg, q));
}

TEST(Jitter, FilledShapeGetsStrokeOverlay) {
  const char* s =
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000"><rect x="10" y="10" width="100" height="50" fill="red" stroke="blue" style="stroke: blue"/></svg>)";
  const auto doc = xml::parse(antiqua::jitter_strokes(s, jitter_only(1)));
  const auto rects = find_all(doc.root, "rect");
  const auto paths = find_all(doc.root, "path");
  ASSERT_EQ(rects.size(), 1u);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(rects[0]->get("fill"), "red");
  EXPECT_EQ(rects[0]->get("stroke"), "none");
  EXPECT_FALSE(rects[0]->attr("style"));
  EXPECT_EQ(paths[0]->get("fill"), "none");
  EXPECT_EQ(paths[0]->get("stroke"), "blue");
}

TEST(Jitter, CurvesAndFillOnlyUntouched) {
  const char* s =
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100"><path d="M0,0 C10,10 20,10 30,0" stroke="black" fill="none"/><rect x="1" y="1" width="5" height="5" fill="red"/></svg>)";
  auto p = jitter_only(2);
  EXPECT_EQ(antiqua::jitter_strokes(s, p), s);
}

TEST(Jitter, ThicknessVariationBounded) {
  AntiquaParams p;
  p.thickness_variation = 0.25;
  const auto doc = xml::parse(antiqua::jitter_strokes(kLineSvg, p));
  const double w = std::stod(*find_all(doc.root, "path").at(0)->get("stroke-width"));
  EXPECT_GE(w, 2 * 0.75 - 1e-4);
  EXPECT_LE(w, 2 * 1.25 + 1e-4);
}

TEST(Texture, ZeroIsIdentity) {
  const std::string& svg = corpus()[2].chart.svg;
  EXPECT_EQ(antiqua::apply_paper_texture(svg, {}), svg);
}

TEST(Texture, TintsBackgroundAndCountsSpeckles) {
  const std::string& svg = corpus()[0].chart.svg;  // 800 x 500
  AntiquaParams p;
  p.tint_strength = 1;
  p.speckle_density = 400;
  const auto doc = xml::parse(antiqua::apply_paper_texture(svg, p));
  const auto rects = find_all(doc.root, "rect");
  const auto bg = std::find_if(rects.begin(), rects.end(), [](auto* r) { return r->get("class") == "background"; });
  ASSERT_NE(bg, rects.end());
  EXPECT_EQ((*bg)->get("fill"), to_hex(antiqua::kParchment));
  // normalized area 1000 x 625
  EXPECT_EQ(find_all(doc.root, "circle").size(), static_cast<std::size_t>(std::llround(400 * 1000.0 * 625.0 / 1e6)));
}

TEST(Texture, InsertsPaperWhenNoBackground) {
  const char* s = R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 200 100"><text x="5" y="5">A</text></svg>)";
  AntiquaParams p;
  p.tint_strength = 0.5;
  const auto doc = xml::parse(antiqua::apply_paper_texture(s, p));
  ASSERT_TRUE(doc.root.children.front().is_element());
  const auto paper = find_all(doc.root.children.front().element(), "rect");
  ASSERT_EQ(paper.size(), 1u);
  EXPECT_EQ(paper[0]->get("width"), "200");
  EXPECT_EQ(paper[0]->get("height"), "100");
  EXPECT_EQ(paper[0]->get("fill"), to_hex(antiqua::detail::blend({255, 255, 255}, antiqua::kParchment, 0.5)));
}

TEST(Fonts, EveryTextChanged) {
  std::string s = R"(<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">)";
  for (int i = 0; i < 12; ++i)
    s += "<text x=\"1\" y=\"" + std::to_string(i * 8) + "\" font-family=\"Arial\" style=\"font-family: Arial; font-size: 8px\">t" +
         std::to_string(i) + "</text>";
  s += "</svg>";
  const auto doc = xml::parse(antiqua::substitute_fonts(s, "Caveat"));
  const auto texts = find_all(doc.root, "text");
  ASSERT_EQ(texts.size(), 12u);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ(texts[i]->get("font-family"), "Caveat");
    EXPECT_EQ(texts[i]->get("style"), "font-size: 8px");
    EXPECT_EQ(texts[i]->text_content(), "t" + std::to_string(i));
  }
  const std::string once = antiqua::substitute_fonts(s, "Caveat");
  EXPECT_EQ(antiqua::substitute_fonts(once, "Caveat"), once);
  EXPECT_THROW(antiqua::substitute_fonts(s, ""), antiqua::AntiquaError);
}

TEST(Oldify, PaperPresetStructure) {
  const auto& item = corpus()[0];
  const auto doc = xml::parse(antiqua::oldify(item.chart.svg, antiqua::preset("paper", 1)));
  const auto groups = find_all(doc.root, "g");
  const auto tex = std::find_if(groups.begin(), groups.end(), [](auto* g) { return g->get("class") == "antiqua-texture"; });
  ASSERT_NE(tex, groups.end());
  EXPECT_FALSE(find_all(**tex, "circle").empty());
  EXPECT_TRUE(find_all(doc.root, "line").empty());
  std::size_t axis_paths = 0;
  for (const auto* path : find_all(doc.root, "path"))
    if (path->get("class").value_or("").find("role-axis-domain") != std::string::npos) {
      ++axis_paths;
      EXPECT_GT(path_points(*path->get("d")).size(), 2u);
    }
  EXPECT_EQ(axis_paths, 2u);
  for (const auto* t : find_all(doc.root, "text")) EXPECT_EQ(t->get("font-family"), antiqua::preset("paper").font_name);
}

TEST(AntiquaProperty, GroundTruthSurvives) {
  for (const auto& it : corpus()) {
    const auto p = antiqua::preset("paper", it.seed);
    const SimVecDoc clean = svg::ingest_svg(it.chart.svg);
    const SimVecDoc old = svg::ingest_svg(antiqua::oldify(it.chart.svg, p));
    const std::size_t speckles = old.size() - clean.size();
    // dots that quantize to fewer than 3 points vanish on ingest
    ASSERT_LE(speckles, static_cast<std::size_t>(std::llround(p.speckle_density * 1000.0 * 625.0 / 1e6))) << it.index;
    ASSERT_GT(speckles, 0u);
    // the background stays first, speckles sit right above it
    ASSERT_TRUE(std::holds_alternative<RectElement>(old.elements[0]));
    for (std::size_t i = 1; i <= speckles; ++i) EXPECT_EQ(color_of(old.elements[i]), color_of(old.elements[1])) << it.index;
    const double tol = 3 * p.jitter_amplitude;
    for (std::size_t i = 1; i < clean.size(); ++i) {
      const Element& a = old.elements[i + speckles];
      const Element& b = clean.elements[i];
      ASSERT_EQ(a.index(), b.index()) << it.index << " " << i;
      if (const auto* t = std::get_if<TextElement>(&b)) {
        EXPECT_EQ(std::get<TextElement>(a), *t);
      } else if (const auto* r = std::get_if<RectElement>(&b)) {
        EXPECT_EQ(std::get<RectElement>(a).bbox, r->bbox);
        EXPECT_EQ(color_of(a), color_of(b));
      } else if (const auto* l = std::get_if<LineElement>(&b)) {
        EXPECT_EQ(color_of(a), color_of(b));
        const auto& pts = std::get<LineElement>(a).points;
        EXPECT_GE(pts.size(), l->points.size());
        for (const auto& q : pts) EXPECT_LE(distance_to_polyline(q, l->points), tol) << it.index;
      } else {
        EXPECT_EQ(a, b);
      }
    }
  }
}
