#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <string>
#include <vector>

#include "simvec/chart/corpus.hpp"
#include "simvec/qa/qa.hpp"

using namespace simvec;
using namespace simvec::qa;
using chart::ChartType;

namespace {

chart::DataSpec energy_spec() {
  chart::DataSpec s;
  s.topic = "electricity mix";
  s.categorical = {"energy source", {"Coal", "Gas", "Solar"}};
  s.temporal = {"year", {"2019", "2020", "2021"}};
  s.quantitative = {"share of generation", "%", chart::ValueMode::percent_stacked, 0, 100};
  return s;
}

chart::RenderedChart energy_chart(ChartType type) {
  const auto spec = energy_spec();
  chart::DataTable t;
  t.categories = spec.categorical.values;
  t.times = spec.temporal.values;
  t.mode = spec.quantitative.mode;
  t.values = {{45, 40, 30}, {20, 35, 40}, {35, 25, 30}};
  return chart::render_chart(spec, t, type, 3);
}

// Hand-built meta: one slice of bars whose heights equal their values.
chart::ChartMeta identity_meta(const std::vector<double>& values) {
  chart::ChartMeta m;
  m.type = ChartType::bar_grouped;
  m.spec.categorical = {"kind", {}};
  m.spec.temporal = {"year", {"2000"}};
  m.spec.quantitative = {"amount", "", chart::ValueMode::absolute, 0, 400};
  m.y_scale = chart::make_scale(0, 400, 50, 450, chart::Orientation::y, true);
  m.table.times = {"2000"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string name = "K" + std::to_string(i);
    m.spec.categorical.values.push_back(name);
    m.table.categories.push_back(name);
    m.table.values.push_back({values[i]});
    chart::MarkGeometry g{0, 450 - values[i], 10, values[i], values[i]};
    m.bindings.push_back({"bar-" + std::to_string(i), i, name, "2000", values[i], g});
  }
  return m;
}

const std::vector<chart::CorpusItem>& corpus() {
  static const auto items = chart::gen_corpus(300, {1, 1, 1}, 42);
  return items;
}

// All "<number> pixels" mentions in order.
std::vector<double> pixel_mentions(const std::string& s) {
  static const std::regex re(R"(([0-9]+(?:\.[0-9]+)?) pixels)");
  std::vector<double> out;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back(std::stod((*it)[1].str()));
  return out;
}

}  // namespace

TEST(Arithmetic, Evaluates) {
  EXPECT_DOUBLE_EQ(eval_arithmetic("(140/(450 − 50))×100"), 35);
  EXPECT_DOUBLE_EQ(eval_arithmetic("(140/(450 - 50))*100"), 35);
  EXPECT_DOUBLE_EQ(eval_arithmetic("1 + 2 × 3"), 7);
  EXPECT_DOUBLE_EQ(eval_arithmetic("-(2 − 5) ÷ 2"), 1.5);
  EXPECT_DOUBLE_EQ(eval_arithmetic("(10/(450 − 50))×100 + 20"), 22.5);
}

TEST(Arithmetic, Errors) {
  EXPECT_THROW(eval_arithmetic(""), ArithmeticError);
  EXPECT_THROW(eval_arithmetic("(1 + 2"), ArithmeticError);
  EXPECT_THROW(eval_arithmetic("1 / 0"), ArithmeticError);
  EXPECT_THROW(eval_arithmetic("2 x 3"), ArithmeticError);
}

TEST(Arithmetic, ExpressionBeforeEquals) {
  EXPECT_EQ(expression_before_equals("Thus, Gas in 2020 accounts for (140/(450 − 50))×100 = 35%."),
            "(140/(450 − 50))×100");
  EXPECT_THROW(expression_before_equals("no equals"), ArithmeticError);
}

TEST(Extract, ConclusionSentence) {
  const auto e = extract_final_answer("…Thus, Gas in 2020 accounts for (140/(450 − 50))×100= 35%.", AnswerKind::number);
  ASSERT_TRUE(e.answerable);
  EXPECT_DOUBLE_EQ(e.number, 35);
}

TEST(Extract, LastNumberWins) {
  const auto e = extract_final_answer("The answer is 42. No wait, 43.", AnswerKind::number);
  ASSERT_TRUE(e.answerable);
  EXPECT_DOUBLE_EQ(e.number, 43);
}

TEST(Extract, Unanswerable) {
  EXPECT_FALSE(extract_final_answer("no idea", AnswerKind::number).answerable);
  const std::vector<std::string> labels = {"Coal", "Gas"};
  EXPECT_FALSE(extract_final_answer("no idea", AnswerKind::label, labels).answerable);
}

TEST(Extract, NumberFormats) {
  EXPECT_DOUBLE_EQ(extract_final_answer("about 1,234.5 TWh", AnswerKind::number).number, 1234.5);
  EXPECT_DOUBLE_EQ(extract_final_answer("it fell to -2.5 points", AnswerKind::number).number, -2.5);
  EXPECT_DOUBLE_EQ(extract_final_answer("450-50 gives 400", AnswerKind::number).number, 400);
  EXPECT_DOUBLE_EQ(extract_final_answer("value 12 in Q1", AnswerKind::number).number, 12);
  EXPECT_DOUBLE_EQ(extract_final_answer("0.75", AnswerKind::number).number, 0.75);
}

TEST(Extract, Labels) {
  const std::vector<std::string> labels = {"Gas", "Coal", "Gasoline"};
  EXPECT_EQ(extract_final_answer("Gas beats coal", AnswerKind::label, labels).label, "Coal");
  EXPECT_EQ(extract_final_answer("I think GASOLINE", AnswerKind::label, labels).label, "Gasoline");
  EXPECT_EQ(extract_final_answer("Coal, then Gas.", AnswerKind::label, labels).label, "Gas");
  EXPECT_FALSE(extract_final_answer("Gaseous", AnswerKind::label, labels).answerable);
}

TEST(Retrieve, GasIn2020Is35) {
  const auto chart = energy_chart(ChartType::bar_grouped);
  const QaItem item = gen_retrieve_value(chart.meta, "Gas", "2020");
  EXPECT_EQ(item.kind, TaskKind::retrieve_value);
  EXPECT_EQ(item.answer.kind, AnswerKind::number);
  EXPECT_EQ(item.answer.number, 35);
  EXPECT_EQ(item.answer.text(), "35%");
  EXPECT_EQ(item.cot.axis,
            "The Y-axis of the chart maps from 50 pixels to 450 pixels, corresponding to a percentage range of 0% to 100%.");
  EXPECT_EQ(item.cot.geometry, "The height of the bar representing Gas in 2020 is 140 pixels.");
  const std::string text = item.cot.text();
  const std::string tail = "(140/(450 − 50))×100 = 35%.";
  ASSERT_GE(text.size(), tail.size());
  EXPECT_EQ(text.substr(text.size() - tail.size()), tail);
}

TEST(Retrieve, Endpoints) {
  const auto m = identity_meta({0, 400, 120});
  EXPECT_EQ(gen_retrieve_value(m, "K0", "2000").answer.number, 0);
  EXPECT_EQ(gen_retrieve_value(m, "K1", "2000").answer.number, 400);
  EXPECT_DOUBLE_EQ(eval_arithmetic(expression_before_equals(gen_retrieve_value(m, "K1", "2000").cot.text())), 400);
}

TEST(Retrieve, MissingKeyThrows) {
  const auto chart = energy_chart(ChartType::line);
  EXPECT_THROW(gen_retrieve_value(chart.meta, "Oil", "2020"), QaError);
  EXPECT_THROW(gen_retrieve_value(chart.meta, "Gas", "1999"), QaError);
}

TEST(Retrieve, CotHasFourPartsInOrder) {
  for (ChartType type : {ChartType::bar_grouped, ChartType::bar_stacked, ChartType::line, ChartType::area_stacked}) {
    const auto chart = energy_chart(type);
    const QaItem item = gen_retrieve_value(chart.meta, "Solar", "2021");
    const std::string text = item.cot.text();
    const auto a = text.find(item.cot.axis), g = text.find(item.cot.geometry), f = text.find(item.cot.arithmetic),
               c = text.find(item.cot.conclusion);
    ASSERT_NE(c, std::string::npos);
    EXPECT_LT(a, g);
    EXPECT_LT(g, f);
    EXPECT_LT(f, c);
    EXPECT_EQ(item.answer.number, 30);
  }
}

TEST(Extreme, WhichMax) {
  const auto m = identity_meta({20, 35, 45});
  const QaItem item = gen_extreme(m, {Scope::Kind::slice, "2000"}, Extreme::max, AnswerKind::label);
  EXPECT_EQ(item.kind, TaskKind::extreme_which);
  EXPECT_EQ(item.answer.label, "K2");
}

TEST(Extreme, ValueMax) {
  const auto m = identity_meta({20, 35, 45});
  const QaItem item = gen_extreme(m, {Scope::Kind::slice, "2000"}, Extreme::max, AnswerKind::number);
  EXPECT_EQ(item.kind, TaskKind::extreme_value);
  EXPECT_EQ(item.answer.number, 45);
}

TEST(Extreme, TiesGoToFirst) {
  const auto m = identity_meta({40, 40, 10});
  EXPECT_EQ(gen_extreme(m, {Scope::Kind::slice, "2000"}, Extreme::max, AnswerKind::label).answer.label, "K0");
  const auto n = identity_meta({10, 40, 10});
  EXPECT_EQ(gen_extreme(n, {Scope::Kind::slice, "2000"}, Extreme::min, AnswerKind::label).answer.label, "K0");
  EXPECT_NE(gen_extreme(m, {Scope::Kind::slice, "2000"}, Extreme::max, AnswerKind::label).cot.text().find("ties"),
            std::string::npos);
}

TEST(Extreme, SeriesScopeAnswersTime) {
  const auto chart = energy_chart(ChartType::line);
  const QaItem hi = gen_extreme(chart.meta, {Scope::Kind::series, "Gas"}, Extreme::max, AnswerKind::label);
  EXPECT_EQ(hi.answer.label, "2021");
  const QaItem lo = gen_extreme(chart.meta, {Scope::Kind::series, "Coal"}, Extreme::min, AnswerKind::number);
  EXPECT_EQ(lo.answer.number, 30);
}

TEST(Extreme, EmptyScopeThrows) {
  const auto m = identity_meta({20});
  EXPECT_THROW(gen_extreme(m, {Scope::Kind::slice, "2000"}, Extreme::max, AnswerKind::label), QaError);
  const auto chart = energy_chart(ChartType::bar_grouped);
  EXPECT_THROW(gen_extreme(chart.meta, {Scope::Kind::series, "Oil"}, Extreme::max, AnswerKind::label), QaError);
}

TEST(Suite, OneRetrievePlusTwoExtremes) {
  const auto chart = energy_chart(ChartType::bar_stacked);
  const auto suite = gen_qa_suite(chart.meta, 17);
  ASSERT_EQ(suite.size(), 3u);
  EXPECT_EQ(suite[0].kind, TaskKind::retrieve_value);
  EXPECT_NE(suite[1].kind, TaskKind::retrieve_value);
  EXPECT_NE(suite[2].kind, TaskKind::retrieve_value);
  EXPECT_EQ(suite, gen_qa_suite(chart.meta, 17));
}

TEST(Suite, DegenerateScopeSkipped) {
  const auto m = identity_meta({20});
  const auto suite = gen_qa_suite(m, 1);
  ASSERT_EQ(suite.size(), 1u);
  EXPECT_EQ(suite[0].kind, TaskKind::retrieve_value);
}

TEST(Suite, JsonRoundTrip) {
  for (const auto& item : gen_qa_suite(corpus()[3].chart.meta, 5)) {
    const nlohmann::json j = item;
    EXPECT_EQ(j.get<QaItem>(), item);
  }
}

TEST(QaProperty, CotArithmeticReproducesAnswer) {
  for (const auto& it : corpus()) {
    for (const auto& item : gen_qa_suite(it.chart.meta, it.seed)) {
      const double v = eval_arithmetic(expression_before_equals(item.cot.text()));
      EXPECT_EQ(round_to(v, 2), item.value) << item.cot.text();
      if (item.answer.kind == AnswerKind::number) EXPECT_EQ(item.answer.number, item.value);
      const double datum = it.chart.meta.table.at(it.chart.meta.table.category_index(item.category),
                                                  it.chart.meta.table.time_index(item.time));
      EXPECT_EQ(item.value, datum);
    }
  }
}

TEST(QaProperty, ExtractRecoversAnswer) {
  for (const auto& it : corpus()) {
    for (const auto& item : gen_qa_suite(it.chart.meta, it.seed)) {
      const auto e = extract_final_answer(item.cot.text(), item.answer.kind, item.labels);
      ASSERT_TRUE(e.answerable) << item.cot.text();
      if (item.answer.kind == AnswerKind::number)
        EXPECT_EQ(e.number, item.answer.number) << item.cot.text();
      else
        EXPECT_EQ(e.label, item.answer.label) << item.cot.text();
    }
  }
}

TEST(QaProperty, WhichAnswersAreListMembers) {
  for (const auto& it : corpus()) {
    const auto& t = it.chart.meta.table;
    for (const auto& item : gen_qa_suite(it.chart.meta, it.seed)) {
      if (item.kind != TaskKind::extreme_which) continue;
      const bool in_list = std::find(t.categories.begin(), t.categories.end(), item.answer.label) != t.categories.end() ||
                           std::find(t.times.begin(), t.times.end(), item.answer.label) != t.times.end();
      EXPECT_TRUE(in_list);
    }
  }
}

TEST(QaProperty, GeometryGrounding) {
  for (const auto& it : corpus()) {
    const auto& m = it.chart.meta;
    const QaItem item = gen_qa_suite(m, it.seed).front();
    const auto* b = m.find(item.category, item.time);
    ASSERT_NE(b, nullptr);
    const auto mentions = pixel_mentions(item.cot.geometry);
    ASSERT_FALSE(mentions.empty());
    const double expected = m.type == ChartType::line ? b->geometry.position : b->geometry.extent;
    EXPECT_LE(std::abs(mentions.front() - expected), 1.0) << item.cot.geometry;
    // the quoted measurement agrees with the emitted element too
    const Element& e = it.chart.simvec.elements[b->element];
    if (const auto* r = std::get_if<RectElement>(&e)) EXPECT_LE(std::abs(mentions.front() - r->bbox.height), 1.0);
  }
}

TEST(QaProperty, ExtremeWhichIsScaleInvariant) {
  for (std::size_t i = 0; i < 60; ++i) {
    const auto& meta = corpus()[i].chart.meta;
    if (meta.table.mode != chart::ValueMode::absolute) continue;
    chart::DataTable scaled = meta.table;
    for (auto& row : scaled.values)
      for (double& v : row) v *= 3;
    const auto again = chart::render_chart(meta.spec, scaled, meta.type, meta.seed).meta;
    for (const auto& key : meta.table.times) {
      for (Extreme k : {Extreme::max, Extreme::min}) {
        const Scope s{Scope::Kind::slice, key};
        EXPECT_EQ(gen_extreme(meta, s, k, AnswerKind::label).answer.label,
                  gen_extreme(again, s, k, AnswerKind::label).answer.label);
      }
    }
  }
}

TEST(QaProperty, TaskRatio) {
  std::size_t retrieve = 0, extreme = 0;
  for (const auto& it : corpus())
    for (const auto& item : gen_qa_suite(it.chart.meta, it.seed)) (item.kind == TaskKind::retrieve_value ? retrieve : extreme)++;
  EXPECT_EQ(retrieve, corpus().size());
  EXPECT_EQ(extreme, 2 * corpus().size());
}
