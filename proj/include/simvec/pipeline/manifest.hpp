#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "simvec/chart/meta.hpp"
#include "simvec/pipeline/io.hpp"
#include "simvec/qa/qa.hpp"

namespace simvec::pipeline {

inline constexpr const char* kGeneratorVersion = "simvec-forge/1.0";

struct QaEntry {
  std::string id;
  qa::QaItem item;
};

/// One chart; paths are relative to the manifest's directory.
struct ManifestRecord {
  std::string id;
  chart::ChartType chart_type = chart::ChartType::bar_grouped;
  std::string style = "digital";  // or "historical"
  std::string svg_path;
  std::optional<std::string> png_path;
  std::string simvec_path;
  chart::ChartMeta meta;
  std::vector<QaEntry> qa;
  std::string generator_version = kGeneratorVersion;
  std::uint64_t master_seed = 0;
};

inline void to_json(nlohmann::json& j, const ManifestRecord& r) {
  nlohmann::json qa = nlohmann::json::array();
  for (const auto& e : r.qa) {
    nlohmann::json q = e.item;
    q["id"] = e.id;
    qa.push_back(std::move(q));
  }
  j = {{"id", r.id},
       {"chartType", chart::chart_type_name(r.chart_type)},
       {"style", r.style},
       {"svgPath", r.svg_path},
       {"pngPath", r.png_path ? nlohmann::json(*r.png_path) : nlohmann::json(nullptr)},
       {"simvecPath", r.simvec_path},
       {"meta", r.meta},
       {"qa", std::move(qa)},
       {"generatorVersion", r.generator_version},
       {"masterSeed", r.master_seed}};
}

inline void from_json(const nlohmann::json& j, ManifestRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.chart_type = chart::parse_chart_type(j.at("chartType").get<std::string>());
  r.style = j.at("style").get<std::string>();
  if (r.style != "digital" && r.style != "historical") throw std::invalid_argument("unknown style: " + r.style);
  r.svg_path = j.at("svgPath").get<std::string>();
  r.png_path.reset();
  if (j.contains("pngPath") && !j.at("pngPath").is_null()) r.png_path = j.at("pngPath").get<std::string>();
  r.simvec_path = j.at("simvecPath").get<std::string>();
  r.meta = j.at("meta").get<chart::ChartMeta>();
  r.qa.clear();
  for (const auto& q : j.at("qa")) r.qa.push_back({q.at("id").get<std::string>(), q.get<qa::QaItem>()});
  r.generator_version = j.at("generatorVersion").get<std::string>();
  r.master_seed = j.at("masterSeed").get<std::uint64_t>();
}

struct Manifest {
  fs::path dir;  // base for relative paths
  std::vector<ManifestRecord> records;

  [[nodiscard]] fs::path resolve(const std::string& rel) const { return dir / rel; }
};

inline std::string manifest_text(const std::vector<ManifestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += nlohmann::json(r).dump();
    out += '\n';
  }
  return out;
}

/// One JSON record per non-blank line.
inline Manifest read_manifest(const fs::path& path) {
  Manifest m;
  m.dir = path.parent_path();
  const std::string text = read_text(path);
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      m.records.push_back(nlohmann::json::parse(line).get<ManifestRecord>());
    } catch (const std::exception& e) {
      throw PipelineError(ExitCode::validation, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return m;
}

}  // namespace simvec::pipeline
