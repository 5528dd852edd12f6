#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "simvec/chart/data.hpp"
#include "simvec/chart/random.hpp"
#include "simvec/chart/render.hpp"

namespace simvec::chart {

/// Chart-family weights in bar:line:area order.
struct Mix {
  double bar = 1;
  double line = 1;
  double area = 1;
};

/// Parses "bar:line:area" weights, e.g. "1:1:1" or "1012:1012:975".
inline Mix parse_mix(std::string_view s) {
  std::array<double, 3> w{};
  std::size_t i = 0;
  for (int k = 0; k < 3; ++k) {
    std::size_t end = s.find(':', i);
    if ((end == std::string_view::npos) != (k == 2)) throw std::invalid_argument("mix must look like bar:line:area");
    const std::string part(s.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), w[k]);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || !(w[k] >= 0) || !std::isfinite(w[k]))
      throw std::invalid_argument("bad mix weight '" + part + "'");
    i = end + 1;
  }
  if (!(w[0] + w[1] + w[2] > 0)) throw std::invalid_argument("mix weights sum to zero");
  return {w[0], w[1], w[2]};
}

/// Exact family counts for `n` charts (largest remainder).
inline std::array<std::int64_t, 3> mix_counts(std::int64_t n, const Mix& mix) {
  const auto parts = largest_remainder(n, {mix.bar, mix.line, mix.area});
  return {parts[0], parts[1], parts[2]};
}

/// Chart family of every item, a seeded shuffle of the exact multiset.
inline std::vector<std::string> corpus_plan(std::int64_t n, const Mix& mix, std::uint64_t master_seed) {
  const auto counts = mix_counts(n, mix);
  std::vector<std::string> plan;
  plan.reserve(static_cast<std::size_t>(n));
  static constexpr const char* kFamilies[] = {"bar", "line", "area"};
  for (int k = 0; k < 3; ++k) plan.insert(plan.end(), static_cast<std::size_t>(counts[k]), kFamilies[k]);
  Rng rng(splitmix64(master_seed ^ 0x91a2ULL));
  rng.shuffle(std::span(plan));
  return plan;
}

struct CorpusItem {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RenderedChart chart;
};

/// Item `index` of a corpus: every choice derives from
/// stable_hash(master_seed, index), so items can be built in any order.
inline CorpusItem make_corpus_item(std::uint64_t master_seed, std::size_t index, std::string_view family,
                                   const DataSpec* spec_override = nullptr) {
  const std::uint64_t seed = stable_hash(master_seed, index);
  DataSpec spec = spec_override ? *spec_override : synth_spec(splitmix64(seed ^ 1));
  ChartType type;
  if (family == "bar") {
    type = Rng(splitmix64(seed ^ 5)).chance(0.5) ? ChartType::bar_grouped : ChartType::bar_stacked;
  } else if (family == "line") {
    type = ChartType::line;
  } else if (family == "area") {
    type = ChartType::area_stacked;
    spec = as_percent(std::move(spec));
  } else {
    throw std::invalid_argument("unknown chart family: " + std::string(family));
  }
  const DataTable table = synth_table(spec, splitmix64(seed ^ 2));
  return {index, seed, render_chart(spec, table, type, splitmix64(seed ^ 3))};
}

inline std::vector<CorpusItem> gen_corpus(std::int64_t n, const Mix& mix, std::uint64_t master_seed) {
  const auto plan = corpus_plan(n, mix, master_seed);
  std::vector<CorpusItem> out;
  out.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) out.push_back(make_corpus_item(master_seed, i, plan[i]));
  return out;
}

}  // namespace simvec::chart
