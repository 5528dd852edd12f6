#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "simvec/antiqua/antiqua.hpp"
#include "simvec/chart/corpus.hpp"
#include "simvec/chart/provider.hpp"
#include "simvec/core/grammar.hpp"
#include "simvec/core/tokens.hpp"
#include "simvec/core/validate.hpp"
#include "simvec/eval/qa_score.hpp"
#include "simvec/eval/recon.hpp"
#include "simvec/pipeline/io.hpp"
#include "simvec/pipeline/manifest.hpp"
#include "simvec/pipeline/render.hpp"
#include "simvec/qa/arith.hpp"
#include "simvec/qa/qa.hpp"
#include "simvec/svg/ingest.hpp"

namespace simvec::pipeline {

/// Turns an SVG file into a PNG: a shell template with {svg}, {png} and
/// {width} placeholders, or an http:// URL receiving the SVG as a POST body
/// (query "width") and answering with PNG bytes.
struct RasterizerAdapter {
  std::string command;
  int width = 1000;
  int timeout_seconds = 60;

  [[nodiscard]] bool configured() const { return !command.empty(); }
};

namespace detail {

inline std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

}  // namespace detail

/// Empty string on success, else the reason.
inline std::string rasterize(const RasterizerAdapter& r, const fs::path& svg, const fs::path& png) {
  if (r.command.rfind("http://", 0) == 0) {
    const auto slash = r.command.find('/', 7);
    httplib::Client client(r.command.substr(0, slash));
    client.set_connection_timeout(r.timeout_seconds, 0);
    client.set_read_timeout(r.timeout_seconds, 0);
    const std::string path = (slash == std::string::npos ? "/" : r.command.substr(slash)) + "?width=" + std::to_string(r.width);
    const auto res = client.Post(path, read_text(svg), "image/svg+xml");
    if (!res) return "rasterizer request failed: " + httplib::to_string(res.error());
    if (res->status != 200) return "rasterizer answered HTTP " + std::to_string(res->status);
    write_atomic(png, res->body);
    return {};
  }
  std::string cmd = detail::replace_all(r.command, "{svg}", chart::detail::shell_quote(svg.string()));
  cmd = detail::replace_all(cmd, "{png}", chart::detail::shell_quote(png.string()));
  cmd = detail::replace_all(cmd, "{width}", std::to_string(r.width));
  const std::string full = "timeout -k 1 " + std::to_string(r.timeout_seconds) + " sh -c " + chart::detail::shell_quote(cmd);
  const int status = std::system(full.c_str());
  if (status != 0) return "rasterizer exited with status " + std::to_string(status);
  if (!fs::exists(png)) return "rasterizer produced no file";
  return {};
}

struct SynthOptions {
  std::int64_t n = 300;
  chart::Mix mix;
  std::uint64_t seed = 42;
  fs::path out = "out";
  std::optional<antiqua::AntiquaParams> style;  // historical variants when set
  int workers = 0;
  RasterizerAdapter rasterizer;
  chart::TopicProvider provider;
};

struct SynthSummary {
  fs::path manifest;
  std::size_t records = 0;
  std::map<std::string, std::size_t> per_type;  // digital charts only
  std::size_t retrieve_items = 0;
  std::size_t extreme_items = 0;
  std::vector<std::string> warnings;
};

inline std::string chart_id(std::size_t index) {
  std::string n = std::to_string(index);
  return "chart-" + std::string(n.size() < 5 ? 5 - n.size() : 0, '0') + n;
}

/// Generates the corpus into `out`: per chart an SVG, its SimVec, meta and
/// QA JSON, plus manifest.jsonl. Historical variants share the clean
/// chart's ground-truth files.
inline SynthSummary cmd_synth(const SynthOptions& opt) {
  if (opt.n < 0) throw PipelineError(ExitCode::usage, "n must be >= 0");
  if (opt.style) antiqua::check_params(*opt.style);
  const std::vector<std::string> plan = chart::corpus_plan(opt.n, opt.mix, opt.seed);
  const std::size_t n = plan.size();
  std::vector<std::vector<ManifestRecord>> records(n);
  std::vector<std::vector<std::string>> warnings(n);

  parallel_for(n, resolve_workers(opt.workers), [&](std::size_t i) {
    const std::uint64_t item_seed = chart::stable_hash(opt.seed, i);
    std::optional<chart::DataSpec> spec;
    if (opt.provider.configured()) {
      std::string w;
      spec = chart::fetch_spec(opt.provider, chart::splitmix64(item_seed ^ 1), w);
      if (!w.empty()) warnings[i].push_back(chart_id(i) + ": " + w);
    }
    const chart::CorpusItem item = chart::make_corpus_item(opt.seed, i, plan[i], spec ? &*spec : nullptr);
    if (const auto v = validate(item.chart.simvec); !v.empty())
      throw PipelineError(ExitCode::validation, chart_id(i) + ": " + describe(v.front()));

    ManifestRecord r;
    r.id = chart_id(i);
    r.chart_type = item.chart.meta.type;
    r.svg_path = "charts/" + r.id + ".svg";
    r.simvec_path = "charts/" + r.id + ".simvec";
    r.meta = item.chart.meta;
    r.master_seed = opt.seed;
    const auto suite = qa::gen_qa_suite(item.chart.meta, item.seed);
    for (std::size_t k = 0; k < suite.size(); ++k) r.qa.push_back({r.id + "/q" + std::to_string(k), suite[k]});

    write_atomic(opt.out / r.svg_path, item.chart.svg);
    write_atomic(opt.out / r.simvec_path, serialize_simvec(item.chart.simvec));
    write_atomic(opt.out / ("charts/" + r.id + ".meta.json"), nlohmann::json(item.chart.meta).dump(2) + "\n");
    nlohmann::json qa_json = nlohmann::json::array();
    for (const auto& e : r.qa) {
      nlohmann::json q = e.item;
      q["id"] = e.id;
      qa_json.push_back(std::move(q));
    }
    write_atomic(opt.out / ("charts/" + r.id + ".qa.json"), qa_json.dump(2) + "\n");

    auto raster = [&](ManifestRecord& rec) {
      if (!opt.rasterizer.configured()) return;
      const std::string png = "charts/" + rec.id + ".png";
      const std::string err = rasterize(opt.rasterizer, opt.out / rec.svg_path, opt.out / png);
      if (err.empty())
        rec.png_path = png;
      else
        warnings[i].push_back(rec.id + ": " + err);
    };
    raster(r);
    records[i].push_back(r);

    if (opt.style) {
      ManifestRecord h = r;
      h.id = r.id + "-h";
      h.style = "historical";
      h.svg_path = "charts/" + h.id + ".svg";
      h.png_path.reset();
      antiqua::AntiquaParams p = *opt.style;
      p.seed = chart::splitmix64(item.seed ^ p.seed ^ 0x01d1ULL);
      write_atomic(opt.out / h.svg_path, antiqua::oldify(item.chart.svg, p));
      for (std::size_t k = 0; k < h.qa.size(); ++k) h.qa[k].id = h.id + "/q" + std::to_string(k);
      raster(h);
      records[i].push_back(std::move(h));
    }
  });

  SynthSummary s;
  std::vector<ManifestRecord> flat;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& r : records[i]) {
      if (r.style == "digital") ++s.per_type[std::string(chart::chart_type_name(r.chart_type))];
      for (const auto& e : r.qa) ++(e.item.kind == qa::TaskKind::retrieve_value ? s.retrieve_items : s.extreme_items);
      flat.push_back(std::move(r));
    }
    for (auto& w : warnings[i]) s.warnings.push_back(std::move(w));
  }
  s.records = flat.size();
  s.manifest = opt.out / "manifest.jsonl";
  write_atomic(s.manifest, manifest_text(flat));
  return s;
}

/// SVG file to SimVec text; ingest failures map to exit code 2.
inline std::string cmd_convert(const fs::path& svg_path, const fs::path& out, bool strict = false) {
  const std::string svg = read_text(svg_path);
  std::string text;
  try {
    svg::IngestOptions o;
    o.strict = strict;
    text = serialize_simvec(svg::ingest_svg(svg, o));
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(ExitCode::validation, svg_path.string() + ": " + e.what());
  }
  if (!out.empty()) write_atomic(out, text);
  return text;
}

inline std::string cmd_render(const fs::path& simvec_path, const fs::path& out) {
  const std::string src = read_text(simvec_path);
  std::string svg;
  try {
    svg = render_simvec(parse_simvec(src));
  } catch (const std::exception& e) {
    throw PipelineError(ExitCode::validation, simvec_path.string() + ": " + e.what());
  }
  if (!out.empty()) write_atomic(out, svg);
  return svg;
}

inline std::string cmd_oldify(const fs::path& svg_path, const fs::path& out, const antiqua::AntiquaParams& params) {
  const std::string svg = read_text(svg_path);
  std::string old;
  try {
    old = antiqua::oldify(svg, params);
  } catch (const std::exception& e) {
    throw PipelineError(ExitCode::validation, svg_path.string() + ": " + e.what());
  }
  if (!out.empty()) write_atomic(out, old);
  return old;
}

/// Keeps every line that parses as an element; returns the count dropped.
inline std::size_t parse_simvec_lenient(std::string_view text, SimVecDoc& out) {
  std::size_t dropped = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      SimVecDoc d = parse_simvec(line);
      if (!validate(d).empty()) {
        ++dropped;
        continue;
      }
      for (auto& e : d.elements) out.elements.push_back(std::move(e));
    } catch (const std::exception&) {
      ++dropped;
    }
  }
  return dropped;
}

enum class EvalMode { recon, qa };

struct EvalOutput {
  nlohmann::json report;
  std::string table;
};

namespace detail {

inline std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  const std::string text = read_text(path);
  std::vector<nlohmann::json> out;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw PipelineError(ExitCode::validation, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace detail

/// Scores predictions against a manifest. Reports land in
/// <prefix>.json and <prefix>.txt when `prefix` is non-empty.
inline EvalOutput cmd_eval(const fs::path& manifest_path, const fs::path& predictions, EvalMode mode, const fs::path& prefix = {}) {
  const Manifest m = read_manifest(manifest_path);
  const auto lines = detail::read_jsonl(predictions);
  EvalOutput out;
  try {
    if (mode == EvalMode::qa) {
      std::vector<eval::QaTruth> truths;
      for (const auto& r : m.records)
        for (const auto& e : r.qa)
          truths.push_back({e.id, std::string(chart::chart_type_name(r.chart_type)), e.item, r.meta.y_scale.data_span()});
      std::vector<eval::QaPrediction> preds;
      for (const auto& j : lines) preds.push_back({j.at("itemId").get<std::string>(), j.at("rawText").get<std::string>()});
      const eval::QaScore score = eval::score_qa(preds, truths);
      out.report = score;
      out.table = eval::qa_table(score);
    } else {
      std::map<std::string, std::string> by_chart;
      for (const auto& j : lines) {
        const auto id = j.at("chartId").get<std::string>();
        if (!by_chart.emplace(id, j.at("simvecText").get<std::string>()).second)
          throw eval::EvalError("duplicate prediction for chart: " + id);
      }
      std::set<std::string> known;
      for (const auto& r : m.records) known.insert(r.id);
      for (const auto& [id, text] : by_chart)
        if (!known.count(id)) throw eval::EvalError("prediction for unknown chart: " + id);
      std::vector<std::pair<std::string, eval::ReconReport>> reports;
      nlohmann::json charts = nlohmann::json::array();
      std::size_t dropped_lines = 0, missing = 0;
      for (const auto& r : m.records) {
        const SimVecDoc gt = parse_simvec(read_text(m.resolve(r.simvec_path)));
        SimVecDoc pred;
        if (const auto it = by_chart.find(r.id); it != by_chart.end())
          dropped_lines += parse_simvec_lenient(it->second, pred);
        else
          ++missing;
        reports.emplace_back(std::string(chart::chart_type_name(r.chart_type)), eval::evaluate_reconstruction(pred, gt));
        nlohmann::json c = reports.back().second;
        c["chartId"] = r.id;
        charts.push_back(std::move(c));
      }
      const eval::ReconAggregate agg = eval::aggregate_recon(reports);
      out.report = {{"aggregate", agg}, {"charts", std::move(charts)}, {"unparsedLines", dropped_lines}, {"missingPredictions", missing}};
      out.table = eval::recon_table(agg);
    }
  } catch (const eval::EvalError& e) {
    throw PipelineError(ExitCode::validation, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw PipelineError(ExitCode::validation, predictions.string() + ": " + e.what());
  }
  if (!prefix.empty()) {
    fs::path json = prefix, txt = prefix;
    json += ".json";
    txt += ".txt";
    write_atomic(json, out.report.dump(2) + "\n");
    write_atomic(txt, out.table);
  }
  return out;
}

struct TokenRow {
  std::string id;
  std::size_t svg_tokens = 0;
  std::size_t simvec_tokens = 0;
  double reduction = 0;
};

struct TokenReport {
  std::vector<TokenRow> rows;
  std::optional<double> median;
};

inline std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

/// Per chart token counts of the SVG and its SimVec.
inline TokenReport cmd_tokens(const fs::path& manifest_path) {
  const Manifest m = read_manifest(manifest_path);
  TokenReport rep;
  std::vector<double> red;
  for (const auto& r : m.records) {
    TokenRow row{r.id, count_tokens(read_text(m.resolve(r.svg_path))), count_tokens(read_text(m.resolve(r.simvec_path))), 0};
    row.reduction = row.svg_tokens ? 1.0 - static_cast<double>(row.simvec_tokens) / static_cast<double>(row.svg_tokens) : 0.0;
    red.push_back(row.reduction);
    rep.rows.push_back(std::move(row));
  }
  rep.median = median(red);
  return rep;
}

inline void to_json(nlohmann::json& j, const TokenReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"id", x.id}, {"svgTokens", x.svg_tokens}, {"simvecTokens", x.simvec_tokens}, {"reduction", x.reduction}});
  j = {{"charts", std::move(rows)}, {"medianReduction", r.median ? nlohmann::json(*r.median) : nlohmann::json(nullptr)}};
}

namespace detail {

inline void check_qa(const ManifestRecord& r, const QaEntry& e, std::vector<std::string>& problems) {
  const auto& m = r.meta;
  const auto& q = e.item;
  auto fail = [&](const std::string& what) { problems.push_back(r.id + " " + e.id + ": " + what); };
  const bool has_cat = std::find(m.table.categories.begin(), m.table.categories.end(), q.category) != m.table.categories.end();
  const bool has_time = std::find(m.table.times.begin(), m.table.times.end(), q.time) != m.table.times.end();
  if (!has_cat || !has_time || !m.find(q.category, q.time)) return fail("key does not resolve in meta");
  if (q.kind != qa::TaskKind::retrieve_value) {
    if (!q.scope) return fail("extreme item without scope");
    const auto& pool = q.scope->kind == qa::Scope::Kind::slice ? m.table.times : m.table.categories;
    if (std::find(pool.begin(), pool.end(), q.scope->key) == pool.end()) return fail("scope key does not resolve in meta");
  }
  if (m.table.at(m.table.category_index(q.category), m.table.time_index(q.time)) != q.value) fail("value differs from table");
  try {
    const double v = qa::eval_arithmetic(qa::expression_before_equals(q.cot.text()));
    if (round_to(v, 2) != q.value) fail("CoT arithmetic gives " + format_number(v));
  } catch (const std::exception& ex) {
    fail(std::string("CoT arithmetic: ") + ex.what());
  }
  if (q.answer.kind == qa::AnswerKind::number && q.answer.number != q.value) fail("answer differs from value");
  if (q.answer.kind == qa::AnswerKind::label && q.answer.label != q.category && q.answer.label != q.time)
    fail("label answer is not the key");
}

}  // namespace detail

/// Problems found in a packaged manifest; empty when it is sound.
inline std::vector<std::string> verify_manifest(const fs::path& manifest_path) {
  const Manifest m = read_manifest(manifest_path);
  std::vector<std::string> problems;
  std::set<std::string> ids, qa_ids;
  for (const auto& r : m.records) {
    if (!ids.insert(r.id).second) problems.push_back(r.id + ": duplicate id");
    for (const std::string* p : {&r.svg_path, &r.simvec_path})
      if (!fs::exists(m.resolve(*p))) problems.push_back(r.id + ": missing " + *p);
    if (r.png_path && !fs::exists(m.resolve(*r.png_path))) problems.push_back(r.id + ": missing " + *r.png_path);
    if (fs::exists(m.resolve(r.simvec_path))) {
      try {
        const SimVecDoc d = parse_simvec(read_text(m.resolve(r.simvec_path)));
        if (const auto v = validate(d); !v.empty()) problems.push_back(r.id + ": " + describe(v.front()));
        if (d.size() < r.meta.bindings.size()) problems.push_back(r.id + ": fewer elements than mark bindings");
        for (const auto& b : r.meta.bindings)
          if (b.element >= d.size()) problems.push_back(r.id + ": binding points past the document");
      } catch (const std::exception& e) {
        problems.push_back(r.id + ": simvec does not parse: " + e.what());
      }
    }
    for (const auto& e : r.qa) {
      if (!qa_ids.insert(e.id).second) problems.push_back(r.id + ": duplicate qa id " + e.id);
      detail::check_qa(r, e, problems);
    }
  }
  return problems;
}

}  // namespace simvec::pipeline
