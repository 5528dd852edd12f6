#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "simvec/chart/corpus.hpp"
#include "simvec/core/grammar.hpp"
#include "simvec/core/tokens.hpp"
#include "simvec/core/validate.hpp"
#include "simvec/svg/ingest.hpp"

using namespace simvec;
using namespace simvec::chart;

namespace {

DataSpec small_percent_spec() {
  DataSpec s;
  s.topic = "test topic";
  s.categorical = {"group", {"A", "B"}};
  s.temporal = {"year", {"2001", "2002", "2003"}};
  s.quantitative = {"share", "%", ValueMode::percent_stacked, 0, 100};
  return s;
}

DataTable table_of(const DataSpec& s, std::vector<std::vector<double>> values) {
  DataTable t;
  t.categories = s.categorical.values;
  t.times = s.temporal.values;
  t.mode = s.quantitative.mode;
  t.values = std::move(values);
  return t;
}

const std::vector<CorpusItem>& corpus300() {
  static const auto items = gen_corpus(300, {1, 1, 1}, 42);
  return items;
}

int bottom(const NBBox& b) { return b.top + b.height; }

}  // namespace

TEST(Random, StableHashIsPureAndSpreads) {
  EXPECT_EQ(stable_hash(7, 3), stable_hash(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(stable_hash(7, i));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Random, IntegerStaysInRangeAndHitsEnds) {
  Rng rng(1);
  bool lo = false, hi = false;
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.integer(-3, 4);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 4);
    lo |= v == -3;
    hi |= v == 4;
  }
  EXPECT_TRUE(lo && hi);
}

TEST(Random, TruncatedGaussianRespectsLimit) {
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) ASSERT_LE(std::abs(rng.truncated_gaussian(1.5, 2.0)), 3.0);
}

TEST(SynthSpec, Deterministic) {
  for (std::uint64_t s : {0ull, 1ull, 99ull, 123456789ull}) EXPECT_EQ(synth_spec(s), synth_spec(s));
}

TEST(SynthSpec, EnergySourceTopicAppears) {
  const std::set<std::string> pool = {"Coal", "Gas", "Solar", "Wind", "Nuclear", "Hydro", "Oil", "Biomass"};
  bool found = false;
  for (std::uint64_t s = 0; s < 2000 && !found; ++s) {
    const DataSpec spec = synth_spec(s);
    if (spec.categorical.name != "energy source") continue;
    found = true;
    EXPECT_EQ(spec.temporal.name, "year");
    for (const auto& v : spec.categorical.values) EXPECT_TRUE(pool.count(v)) << v;
  }
  EXPECT_TRUE(found);
}

TEST(SynthSpec, BankIsBroadAndSpecsValid) {
  EXPECT_GE(topic_bank_size(), 20u);
  std::set<std::string> topics;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const DataSpec spec = synth_spec(s);
    EXPECT_NO_THROW(check_spec(spec));
    topics.insert(spec.topic);
    if (spec.temporal.name == "year") {
      int prev = 0;
      for (const auto& y : spec.temporal.values) {
        const int v = std::stoi(y);
        EXPECT_GE(v, 1950);
        EXPECT_LE(v, 2024);
        EXPECT_GT(v, prev);
        prev = v;
      }
    }
  }
  EXPECT_EQ(topics.size(), topic_bank_size());
}

TEST(SynthSpec, DifferentSeedsDifferMostOfTheTime) {
  int differ = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const DataSpec a = synth_spec(2 * i);
    const DataSpec b = synth_spec(2 * i + 1);
    differ += a.topic != b.topic || a.categorical.values != b.categorical.values || a.temporal.values != b.temporal.values;
  }
  EXPECT_GE(differ, 900);
}

TEST(SynthTable, PercentSlicesSumTo100) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const DataSpec spec = as_percent(synth_spec(s));
    const DataTable t = synth_table(spec, s);
    for (std::size_t j = 0; j < t.times.size(); ++j) {
      double sum = 0;
      for (std::size_t c = 0; c < t.categories.size(); ++c) {
        EXPECT_GT(t.at(c, j), 0);
        sum += t.at(c, j);
      }
      EXPECT_NEAR(sum, 100.0, 1e-9);
    }
  }
}

TEST(SynthTable, AbsoluteValuesInRangeWithTwoDecimals) {
  DataSpec spec = synth_spec(5);
  spec.quantitative = {"level", "u", ValueMode::absolute, 10, 90};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DataTable t = synth_table(spec, s);
    for (const auto& row : t.values)
      for (double v : row) {
        EXPECT_GE(v, 10);
        EXPECT_LE(v, 90);
        EXPECT_NEAR(v * 100, std::round(v * 100), 1e-6);
      }
  }
}

TEST(SynthTable, Deterministic) {
  const DataSpec spec = synth_spec(11);
  EXPECT_EQ(synth_table(spec, 4).values, synth_table(spec, 4).values);
}

TEST(SynthTable, RejectsInvalidSpec) {
  DataSpec spec = small_percent_spec();
  spec.categorical.values = {"only"};
  EXPECT_THROW(synth_table(spec, 1), SpecError);
  spec = small_percent_spec();
  spec.temporal.values.pop_back();
  EXPECT_THROW(synth_table(spec, 1), SpecError);
}

TEST(LargestRemainder, ExactTotals) {
  EXPECT_EQ(largest_remainder(300, {1, 1, 1}), (std::vector<std::int64_t>{100, 100, 100}));
  EXPECT_EQ(largest_remainder(10, {1, 1, 1}), (std::vector<std::int64_t>{4, 3, 3}));
}

TEST(Scale, Height140Example) {
  const AxisScale s = make_scale(0, 100, 50, 450, Orientation::y, true);
  EXPECT_DOUBLE_EQ(s.extent(35), 140);
  EXPECT_DOUBLE_EQ(140.0 / (450 - 50) * 100, 35);
  EXPECT_DOUBLE_EQ(s.invert(450 - 140), 35);
}

TEST(Scale, Endpoints) {
  const AxisScale up = make_scale(0, 100, 50, 450, Orientation::y, false);
  const AxisScale inv = make_scale(0, 100, 50, 450, Orientation::y, true);
  EXPECT_DOUBLE_EQ(up.apply(0), 50);
  EXPECT_DOUBLE_EQ(up.apply(100), 450);
  EXPECT_DOUBLE_EQ(inv.apply(0), 450);
  EXPECT_DOUBLE_EQ(inv.apply(100), 50);
}

TEST(Scale, InvertIsInverse) {
  Rng rng(3);
  const AxisScale s = make_scale(-20, 380, 110, 760, Orientation::x, false);
  const AxisScale t = make_scale(0, 2.5, 50, 450, Orientation::y, true);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-20, 380);
    EXPECT_NEAR(s.invert(s.apply(v)), v, 1e-9);
    const double w = rng.uniform(0, 2.5);
    EXPECT_NEAR(t.invert(t.apply(w)), w, 1e-12);
  }
}

TEST(Scale, DegenerateRangesThrow) {
  EXPECT_THROW(make_scale(1, 1, 0, 10, Orientation::x, false), ScaleError);
  EXPECT_THROW(make_scale(0, 1, 10, 10, Orientation::x, false), ScaleError);
}

TEST(Scale, NiceMax) {
  EXPECT_EQ(nice_max(35), 40);
  EXPECT_EQ(nice_max(40), 40);
  EXPECT_EQ(nice_max(41), 50);
  EXPECT_EQ(nice_max(210), 250);
  EXPECT_EQ(nice_max(0.3), 0.4);
}

TEST(Render, GroupedThreeByFiveHasFifteenBars) {
  DataSpec spec;
  spec.topic = "test";
  spec.categorical = {"group", {"A", "B", "C"}};
  spec.temporal = {"year", {"2001", "2002", "2003", "2004", "2005"}};
  spec.quantitative = {"level", "u", ValueMode::absolute, 10, 90};
  const DataTable table = synth_table(spec, 8);
  const RenderedChart chart = render_chart(spec, table, ChartType::bar_grouped, 1);
  ASSERT_EQ(chart.meta.bindings.size(), 15u);
  std::set<std::size_t> elements;
  for (const auto& b : chart.meta.bindings) {
    ASSERT_LT(b.element, chart.simvec.size());
    EXPECT_EQ(kind_of(chart.simvec.elements[b.element]), ElementKind::rect);
    EXPECT_EQ(color_of(chart.simvec.elements[b.element]), chart.meta.palette[table.category_index(b.category)]);
    elements.insert(b.element);
  }
  EXPECT_EQ(elements.size(), 15u);
  // 15 bars plus background rect and legend swatches
  const auto rects = std::count_if(chart.simvec.elements.begin(), chart.simvec.elements.end(),
                                   [](const Element& e) { return kind_of(e) == ElementKind::rect; });
  EXPECT_EQ(rects, 15 + 1 + 3);
}

TEST(Render, BarOf35PercentIs140High) {
  const DataSpec spec = small_percent_spec();
  const DataTable table = table_of(spec, {{35, 50, 60}, {65, 50, 40}});
  for (ChartType type : {ChartType::bar_grouped, ChartType::bar_stacked}) {
    const RenderedChart chart = render_chart(spec, table, type, 5);
    const MarkBinding* b = chart.meta.find("A", "2001");
    ASSERT_NE(b, nullptr);
    const auto& r = std::get<RectElement>(chart.simvec.elements[b->element]);
    EXPECT_EQ(r.bbox.height, 140);
    EXPECT_EQ(bottom(r.bbox), 450);
    EXPECT_DOUBLE_EQ(b->geometry.extent, 140);
  }
}

TEST(Render, MarkKindsPerChartType) {
  const DataSpec spec = small_percent_spec();
  const DataTable table = table_of(spec, {{35, 50, 60}, {65, 50, 40}});
  const RenderedChart line = render_chart(spec, table, ChartType::line, 2);
  const RenderedChart area = render_chart(spec, table, ChartType::area_stacked, 2);
  for (const auto& b : line.meta.bindings) {
    const auto& e = std::get<LineElement>(line.simvec.elements[b.element]);
    EXPECT_EQ(e.points.size(), 3u);
  }
  for (const auto& b : area.meta.bindings) {
    const auto& e = std::get<PolygonElement>(area.simvec.elements[b.element]);
    EXPECT_EQ(e.points.size(), 6u);
  }
}

TEST(Render, RejectsIncompatibleTable) {
  DataSpec spec = small_percent_spec();
  spec.quantitative = {"level", "u", ValueMode::absolute, 0, 10};
  const DataTable table = table_of(spec, {{1, 2, 3}, {4, 5, 6}});
  EXPECT_THROW(render_chart(spec, table, ChartType::area_stacked, 1), ChartError);
  EXPECT_NO_THROW(render_chart(spec, table, ChartType::bar_stacked, 1));
}

TEST(Render, SvgContainsTitleAxesLegend) {
  const auto& c = corpus300().front().chart;
  EXPECT_NE(c.svg.find("role-title-text"), std::string::npos);
  EXPECT_NE(c.svg.find("role-axis-label"), std::string::npos);
  EXPECT_NE(c.svg.find("role-legend"), std::string::npos);
  for (const auto& t : c.meta.table.times) EXPECT_NE(c.svg.find(">" + t + "<"), std::string::npos);
  for (const auto& cat : c.meta.table.categories) EXPECT_NE(c.svg.find(">" + cat + "<"), std::string::npos);
}

TEST(Palette, HexRoundTrip) {
  for (const HslQ& q : kPalette) {
    const std::string hex = to_hex(hsl_to_rgb8(dequantize_color(q)));
    unsigned r = 0, g = 0, b = 0;
    ASSERT_EQ(std::sscanf(hex.c_str(), "#%02x%02x%02x", &r, &g, &b), 3);
    EXPECT_EQ(quantize_color(rgb_to_hsl(Rgb8{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                             static_cast<std::uint8_t>(b)})),
              q)
        << hex;
  }
}

TEST(Corpus, EqualMixSplitsExactly) {
  const auto counts = mix_counts(300, {1, 1, 1});
  EXPECT_EQ(counts, (std::array<std::int64_t, 3>{100, 100, 100}));
  int bar = 0, line = 0, area = 0;
  for (const auto& it : corpus300()) {
    const auto f = chart_family(it.chart.meta.type);
    bar += f == "bar";
    line += f == "line";
    area += f == "area";
  }
  EXPECT_EQ(bar, 100);
  EXPECT_EQ(line, 100);
  EXPECT_EQ(area, 100);
}

TEST(Corpus, Mix1012Split) {
  EXPECT_EQ(mix_counts(2999, parse_mix("1012:1012:975")), (std::array<std::int64_t, 3>{1012, 1012, 975}));
  const auto plan = corpus_plan(2999, parse_mix("1012:1012:975"), 7);
  EXPECT_EQ(std::count(plan.begin(), plan.end(), "area"), 975);
}

TEST(Corpus, ParseMixErrors) {
  EXPECT_THROW(parse_mix("1:1"), std::invalid_argument);
  EXPECT_THROW(parse_mix("1:x:1"), std::invalid_argument);
  EXPECT_THROW(parse_mix("0:0:0"), std::invalid_argument);
  EXPECT_THROW(parse_mix("1:-1:1"), std::invalid_argument);
}

TEST(Corpus, ByteIdenticalAndOrderIndependent) {
  const auto a = gen_corpus(12, {1, 1, 1}, 99);
  const auto b = gen_corpus(12, {1, 1, 1}, 99);
  const auto plan = corpus_plan(12, {1, 1, 1}, 99);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].chart.svg, b[i].chart.svg);
    EXPECT_EQ(serialize_simvec(a[i].chart.simvec), serialize_simvec(b[i].chart.simvec));
    EXPECT_EQ(a[i].chart.meta, b[i].chart.meta);
    EXPECT_EQ(a[i].seed, stable_hash(99, i));
  }
  const std::size_t k = 7;
  EXPECT_EQ(make_corpus_item(99, k, plan[k]).chart.svg, a[k].chart.svg);
}

TEST(Corpus, MetaJsonRoundTrip) {
  for (std::size_t i = 0; i < 6; ++i) {
    const ChartMeta& m = corpus300()[i].chart.meta;
    const nlohmann::json j = m;
    EXPECT_EQ(j.get<ChartMeta>(), m);
  }
}

TEST(CorpusProperty, EveryChartValidates) {
  for (const auto& it : corpus300()) EXPECT_TRUE(validate(it.chart.simvec).empty()) << it.index;
}

TEST(CorpusProperty, IngestMatchesDirectEmission) {
  for (const auto& it : corpus300()) {
    const SimVecDoc ingested = svg::ingest_svg(it.chart.svg);
    const SimVecDoc& direct = it.chart.simvec;
    ASSERT_EQ(ingested.size(), direct.size()) << it.index;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      const Element& a = ingested.elements[i];
      const Element& b = direct.elements[i];
      ASSERT_EQ(kind_of(a), kind_of(b));
      EXPECT_EQ(color_of(a), color_of(b));
      auto near = [](int u, int v) { return std::abs(u - v) <= 1; };
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, TextElement>) EXPECT_EQ(x.text, y.text);
            if constexpr (std::is_same_v<T, TextElement> || std::is_same_v<T, RectElement>) {
              EXPECT_TRUE(near(x.bbox.left, y.bbox.left) && near(x.bbox.top, y.bbox.top) &&
                          near(x.bbox.width, y.bbox.width) && near(x.bbox.height, y.bbox.height))
                  << it.index << " " << format_element(a) << " vs " << format_element(b);
            } else {
              ASSERT_EQ(x.points.size(), y.points.size());
              for (std::size_t k = 0; k < x.points.size(); ++k)
                EXPECT_TRUE(near(x.points[k].x, y.points[k].x) && near(x.points[k].y, y.points[k].y)) << it.index;
            }
          },
          a);
    }
  }
}

TEST(CorpusProperty, CompactnessEveryChart) {
  std::vector<double> reduction;
  for (const auto& it : corpus300()) {
    const double r = 1.0 - static_cast<double>(count_tokens(serialize_simvec(it.chart.simvec))) /
                               static_cast<double>(count_tokens(it.chart.svg));
    EXPECT_GE(r, 0.80) << it.index;
    reduction.push_back(r);
  }
  std::nth_element(reduction.begin(), reduction.begin() + 150, reduction.end());
  EXPECT_GE(reduction[150], 0.80);
}

TEST(CorpusProperty, ScaleGeometryConsistency) {
  for (const auto& it : corpus300()) {
    const ChartMeta& m = it.chart.meta;
    EXPECT_EQ(m.bindings.size(), m.table.categories.size() * m.table.times.size());
    const bool stacked = m.type == ChartType::bar_stacked || m.type == ChartType::area_stacked;
    for (const auto& b : m.bindings) {
      const std::size_t c = m.table.category_index(b.category);
      const std::size_t t = m.table.time_index(b.time);
      double top = b.value;
      if (stacked)
        for (std::size_t k = 0; k < c; ++k) top += m.table.at(k, t);
      const double baseline = m.y_scale.pixel_max;
      EXPECT_NEAR(b.geometry.position, baseline - m.y_scale.apply(top), 1e-9);
      EXPECT_NEAR(b.geometry.extent, m.y_scale.extent(b.value), 1e-9);
      const Element& e = it.chart.simvec.elements[b.element];
      const double py = m.y_scale.apply(top);
      if (const auto* r = std::get_if<RectElement>(&e)) {
        EXPECT_LE(std::abs(r->bbox.top - py), 1.0);
        EXPECT_LE(std::abs(r->bbox.height - m.y_scale.extent(b.value)), 1.0);
        EXPECT_EQ(bottom(r->bbox), stacked ? round_to_int(m.y_scale.apply(top - b.value)) : 450);
      } else {
        const auto& pts = std::holds_alternative<LineElement>(e) ? std::get<LineElement>(e).points
                                                                 : std::get<PolygonElement>(e).points;
        ASSERT_GT(pts.size(), t);
        EXPECT_LE(std::abs(pts[t].x - m.x_scale.apply(static_cast<double>(t))), 1.0);
        EXPECT_LE(std::abs(pts[t].y - py), 1.0);
      }
    }
  }
}

TEST(CorpusProperty, StackedSegmentsTileTheAxis) {
  for (const auto& it : corpus300()) {
    const ChartMeta& m = it.chart.meta;
    const std::size_t nc = m.table.categories.size();
    const std::size_t nt = m.table.times.size();
    const bool percent = m.table.mode == ValueMode::percent_stacked;
    if (m.type == ChartType::bar_stacked) {
      for (const auto& t : m.table.times) {
        int prev_top = 450;
        int total = 0;
        for (const auto& cat : m.table.categories) {
          const auto& r = std::get<RectElement>(it.chart.simvec.elements[m.find(cat, t)->element]);
          EXPECT_EQ(bottom(r.bbox), prev_top);
          prev_top = r.bbox.top;
          total += r.bbox.height;
        }
        if (percent) EXPECT_EQ(total, 400);
      }
    } else if (m.type == ChartType::area_stacked) {
      std::vector<NPoint> below(nt);
      for (std::size_t t = 0; t < nt; ++t) below[t] = {round_to_int(m.x_scale.apply(static_cast<double>(t))), 450};
      for (std::size_t c = 0; c < nc; ++c) {
        const auto& poly = std::get<PolygonElement>(it.chart.simvec.elements[m.find(m.table.categories[c], m.table.times[0])->element]);
        ASSERT_EQ(poly.points.size(), 2 * nt);
        for (std::size_t t = 0; t < nt; ++t) EXPECT_EQ(poly.points[2 * nt - 1 - t], below[t]);
        for (std::size_t t = 0; t < nt; ++t) below[t] = poly.points[t];
      }
      for (const auto& p : below) EXPECT_EQ(p.y, 50);
    }
  }
}
