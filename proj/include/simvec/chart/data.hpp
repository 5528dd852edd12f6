#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "simvec/chart/random.hpp"
#include "simvec/core/format.hpp"

namespace simvec::chart {

enum class ValueMode { absolute, percent_stacked };

inline std::string_view mode_name(ValueMode m) { return m == ValueMode::absolute ? "absolute" : "percent-stacked"; }

struct CategoricalAttr {
  std::string name;
  std::vector<std::string> values;
  friend bool operator==(const CategoricalAttr&, const CategoricalAttr&) = default;
};

struct TemporalAttr {
  std::string name;
  std::vector<std::string> values;  // ordered
  friend bool operator==(const TemporalAttr&, const TemporalAttr&) = default;
};

struct QuantAttr {
  std::string name;
  std::string unit;
  ValueMode mode = ValueMode::absolute;
  double min = 0;  // absolute mode draw range
  double max = 100;
  friend bool operator==(const QuantAttr&, const QuantAttr&) = default;
};

struct DataSpec {
  std::string topic;
  CategoricalAttr categorical;
  TemporalAttr temporal;
  QuantAttr quantitative;
  friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_spec(const DataSpec& s) {
  if (s.categorical.values.size() < 2) throw SpecError("spec needs at least 2 categorical values");
  if (s.temporal.values.size() < 3) throw SpecError("spec needs at least 3 temporal values");
  if (s.quantitative.mode == ValueMode::absolute && !(s.quantitative.min < s.quantitative.max))
    throw SpecError("spec value range is empty");
  if (s.quantitative.mode == ValueMode::absolute && s.quantitative.min < 0)
    throw SpecError("spec value range must be non-negative");
}

/// Complete category × time grid. `values[c][t]`.
struct DataTable {
  std::vector<std::string> categories;
  std::vector<std::string> times;
  ValueMode mode = ValueMode::absolute;
  std::vector<std::vector<double>> values;

  [[nodiscard]] double at(std::size_t c, std::size_t t) const { return values.at(c).at(t); }
  [[nodiscard]] std::size_t category_index(std::string_view name) const {
    const auto it = std::find(categories.begin(), categories.end(), name);
    if (it == categories.end()) throw std::out_of_range("unknown category: " + std::string(name));
    return static_cast<std::size_t>(it - categories.begin());
  }
  [[nodiscard]] std::size_t time_index(std::string_view name) const {
    const auto it = std::find(times.begin(), times.end(), name);
    if (it == times.end()) throw std::out_of_range("unknown time: " + std::string(name));
    return static_cast<std::size_t>(it - times.begin());
  }
  friend bool operator==(const DataTable&, const DataTable&) = default;
};

/// Splits `total` proportionally to `weights` (largest remainder; ties go to
/// the lower index). The parts always sum to `total`.
inline std::vector<std::int64_t> largest_remainder(std::int64_t total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0)) throw std::invalid_argument("largest_remainder: weights must have positive sum");
  std::vector<std::int64_t> parts(weights.size());
  std::vector<std::pair<double, std::size_t>> rema;
  std::int64_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double q = static_cast<double>(total) * weights[i] / sum;
    parts[i] = static_cast<std::int64_t>(std::floor(q + 1e-9));
    used += parts[i];
    rema.emplace_back(q - static_cast<double>(parts[i]), i);
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; ++k, ++used) ++parts[rema[k % rema.size()].second];
  return parts;
}

namespace detail {

enum class TimeKind { year, month, quarter };

struct TopicTemplate {
  const char* topic;
  const char* category_name;
  std::vector<const char*> category_pool;
  TimeKind time;
  const char* quantity;
  const char* unit;
  double min;
  double max;
  bool share_capable;
};

inline const std::vector<TopicTemplate>& topic_bank() {
  static const std::vector<TopicTemplate> bank = {
      // energy
      {"electricity generation", "energy source", {"Coal", "Gas", "Solar", "Wind", "Nuclear", "Hydro", "Oil", "Biomass"},
       TimeKind::year, "generation", "TWh", 20, 400, true},
      {"household energy use", "fuel", {"Electricity", "Natural Gas", "Heating Oil", "Wood", "Propane", "District Heat"},
       TimeKind::month, "consumption", "kWh", 50, 900, true},
      {"renewable capacity", "region", {"Europe", "Asia", "North America", "South America", "Africa", "Oceania"},
       TimeKind::year, "installed capacity", "GW", 5, 250, true},
      {"fuel prices", "fuel type", {"Diesel", "Petrol", "Kerosene", "LPG", "Ethanol"}, TimeKind::quarter, "price",
       "USD per litre", 1, 3, false},
      // finance
      {"company revenue", "business unit", {"Retail", "Wholesale", "Online", "Services", "Licensing", "Hardware"},
       TimeKind::quarter, "revenue", "million USD", 10, 500, true},
      {"household spending", "expense", {"Housing", "Food", "Transport", "Health", "Leisure", "Education", "Clothing"},
       TimeKind::year, "spending", "USD", 200, 5000, true},
      {"stock index levels", "index", {"Tech", "Energy", "Banking", "Consumer", "Utilities"}, TimeKind::month,
       "index level", "points", 800, 4000, false},
      {"venture funding", "sector", {"Fintech", "Biotech", "Climate Tech", "Robotics", "Software", "Media"},
       TimeKind::year, "funding", "billion USD", 1, 60, true},
      {"export volumes", "product group", {"Machinery", "Chemicals", "Vehicles", "Textiles", "Food Products", "Metals"},
       TimeKind::year, "exports", "billion USD", 5, 180, true},
      // health
      {"hospital admissions", "department", {"Cardiology", "Oncology", "Pediatrics", "Orthopedics", "Neurology"},
       TimeKind::month, "admissions", "patients", 40, 900, true},
      {"vaccination coverage", "vaccine", {"Measles", "Polio", "Influenza", "Hepatitis B", "Tetanus"}, TimeKind::year,
       "coverage", "percent of children", 40, 99, false},
      {"health expenditure", "care type", {"Inpatient", "Outpatient", "Pharmaceuticals", "Long-term Care", "Prevention"},
       TimeKind::year, "expenditure", "billion EUR", 5, 120, true},
      {"clinic visits", "age group", {"Children", "Teens", "Adults", "Seniors"}, TimeKind::quarter, "visits",
       "thousand visits", 3, 80, true},
      // transport
      {"vehicle sales", "powertrain", {"Petrol", "Diesel", "Hybrid", "Electric", "Plug-in Hybrid"}, TimeKind::year,
       "sales", "thousand units", 20, 900, true},
      {"commuting", "travel mode", {"Car", "Bus", "Rail", "Bicycle", "Walking", "Tram"}, TimeKind::year, "trips",
       "million trips", 10, 600, true},
      {"air traffic", "airport", {"Northfield", "Lakeside", "Harbor City", "Pine Valley", "Riverside"},
       TimeKind::month, "passengers", "thousand passengers", 80, 2500, true},
      {"freight transport", "freight mode", {"Road", "Rail", "Inland Water", "Pipeline", "Air"}, TimeKind::year,
       "freight volume", "billion tonne-km", 5, 400, true},
      // climate
      {"greenhouse gas emissions", "sector", {"Power", "Industry", "Transport", "Buildings", "Agriculture", "Waste"},
       TimeKind::year, "emissions", "Mt CO₂e", 10, 500, true},
      {"monthly rainfall", "city", {"Lisbon", "Oslo", "Nairobi", "Lima", "Hanoi", "Perth"}, TimeKind::month,
       "rainfall", "mm", 5, 300, false},
      {"average temperature", "station", {"Coastal", "Mountain", "Valley", "Desert", "Forest"}, TimeKind::month,
       "temperature", "degrees C", 1, 35, false},
      {"forest cover loss", "biome", {"Tropical", "Temperate", "Boreal", "Subtropical", "Mangrove"}, TimeKind::year,
       "area lost", "thousand hectares", 20, 900, true},
      {"waste recycling", "material", {"Paper", "Plastic", "Glass", "Metal", "Organic", "Textile"}, TimeKind::year,
       "recycled amount", "thousand tonnes", 15, 700, true},
      // other
      {"university enrollment", "faculty", {"Engineering", "Medicine", "Law", "Arts", "Science", "Business"},
       TimeKind::year, "enrollment", "students", 300, 9000, true},
      {"crop production", "crop", {"Wheat", "Maize", "Rice", "Soybean", "Barley", "Potato"}, TimeKind::year,
       "production", "million tonnes", 5, 300, true},
      {"streaming usage", "platform", {"Video", "Music", "Podcasts", "Games", "Live TV"}, TimeKind::quarter,
       "usage time", "hours per user", 2, 60, true},
  };
  return bank;
}

inline constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace detail

inline std::size_t topic_bank_size() { return detail::topic_bank().size(); }

/// Deterministic data spec drawn from the built-in topic bank.
inline DataSpec synth_spec(std::uint64_t topic_seed) {
  Rng rng(splitmix64(topic_seed ^ 0x5eedULL));
  const auto& bank = detail::topic_bank();
  const auto& tpl = bank[rng.index(bank.size())];
  DataSpec spec;
  spec.topic = tpl.topic;

  spec.categorical.name = tpl.category_name;
  const std::size_t pool = tpl.category_pool.size();
  const std::size_t c = static_cast<std::size_t>(rng.integer(2, static_cast<std::int64_t>(std::min<std::size_t>(5, pool))));
  std::vector<std::size_t> picks(pool);
  std::iota(picks.begin(), picks.end(), 0);
  rng.shuffle(std::span(picks));
  picks.resize(c);
  std::sort(picks.begin(), picks.end());
  for (std::size_t i : picks) spec.categorical.values.emplace_back(tpl.category_pool[i]);

  const int t = static_cast<int>(rng.integer(3, 8));
  switch (tpl.time) {
    case detail::TimeKind::year: {
      spec.temporal.name = "year";
      const int step = rng.chance(0.2) ? 5 : 1;
      const int latest = 2024 - step * (t - 1);
      const int start = static_cast<int>(rng.integer(std::min(1990, latest), latest));
      for (int k = 0; k < t; ++k) spec.temporal.values.push_back(std::to_string(start + step * k));
      break;
    }
    case detail::TimeKind::month: {
      spec.temporal.name = "month";
      const int start = static_cast<int>(rng.integer(0, 12 - t));
      for (int k = 0; k < t; ++k) spec.temporal.values.emplace_back(detail::kMonths[start + k]);
      break;
    }
    case detail::TimeKind::quarter: {
      spec.temporal.name = "quarter";
      int year = static_cast<int>(rng.integer(2005, 2022));
      int q = static_cast<int>(rng.integer(1, 4));
      for (int k = 0; k < t; ++k) {
        spec.temporal.values.push_back("Q" + std::to_string(q) + " " + std::to_string(year));
        if (++q > 4) {
          q = 1;
          ++year;
        }
      }
      break;
    }
  }

  if (tpl.share_capable && rng.chance(0.5)) {
    spec.quantitative = {"share of " + std::string(tpl.quantity), "%", ValueMode::percent_stacked, 0, 100};
  } else {
    spec.quantitative = {tpl.quantity, tpl.unit, ValueMode::absolute, tpl.min, tpl.max};
  }
  return spec;
}

/// Rewrites an absolute spec as a percent-stacked one (area charts need it).
inline DataSpec as_percent(DataSpec spec) {
  if (spec.quantitative.mode == ValueMode::percent_stacked) return spec;
  spec.quantitative = {"share of " + spec.quantitative.name, "%", ValueMode::percent_stacked, 0, 100};
  return spec;
}

/// Smallest share any category receives in percent-stacked tables, in cents.
inline constexpr std::int64_t kMinShareCents = 200;

/// Random values on the DataSpec grid: uniform in the declared range (2
/// decimals) or per-slice shares summing to exactly 100.
inline DataTable synth_table(const DataSpec& spec, std::uint64_t seed) {
  check_spec(spec);
  Rng rng(splitmix64(seed ^ 0x7ab1eULL));
  DataTable table;
  table.categories = spec.categorical.values;
  table.times = spec.temporal.values;
  table.mode = spec.quantitative.mode;
  const std::size_t nc = table.categories.size();
  const std::size_t nt = table.times.size();
  table.values.assign(nc, std::vector<double>(nt, 0.0));
  if (spec.quantitative.mode == ValueMode::absolute) {
    const auto lo = static_cast<std::int64_t>(std::ceil(spec.quantitative.min * 100 - 1e-9));
    const auto hi = static_cast<std::int64_t>(std::floor(spec.quantitative.max * 100 + 1e-9));
    for (std::size_t t = 0; t < nt; ++t)
      for (std::size_t c = 0; c < nc; ++c) table.values[c][t] = static_cast<double>(rng.integer(lo, hi)) / 100.0;
  } else {
    const auto free = 10000 - kMinShareCents * static_cast<std::int64_t>(nc);
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<double> w(nc);
      for (double& x : w) x = rng.exponential();
      const auto parts = largest_remainder(free, w);
      for (std::size_t c = 0; c < nc; ++c) table.values[c][t] = static_cast<double>(kMinShareCents + parts[c]) / 100.0;
    }
  }
  return table;
}

// JSON

inline void to_json(nlohmann::json& j, const DataSpec& s) {
  j = {{"topic", s.topic},
       {"categorical", {{"name", s.categorical.name}, {"values", s.categorical.values}}},
       {"temporal", {{"name", s.temporal.name}, {"values", s.temporal.values}}},
       {"quantitative",
        {{"name", s.quantitative.name},
         {"unit", s.quantitative.unit},
         {"mode", mode_name(s.quantitative.mode)},
         {"min", s.quantitative.min},
         {"max", s.quantitative.max}}}};
}

inline ValueMode parse_mode(const std::string& s) {
  if (s == "absolute") return ValueMode::absolute;
  if (s == "percent-stacked") return ValueMode::percent_stacked;
  throw std::invalid_argument("unknown value mode: " + s);
}

inline void from_json(const nlohmann::json& j, DataSpec& s) {
  s.topic = j.at("topic").get<std::string>();
  s.categorical.name = j.at("categorical").at("name").get<std::string>();
  s.categorical.values = j.at("categorical").at("values").get<std::vector<std::string>>();
  s.temporal.name = j.at("temporal").at("name").get<std::string>();
  s.temporal.values = j.at("temporal").at("values").get<std::vector<std::string>>();
  const auto& q = j.at("quantitative");
  s.quantitative.name = q.at("name").get<std::string>();
  s.quantitative.unit = q.at("unit").get<std::string>();
  s.quantitative.mode = parse_mode(q.at("mode").get<std::string>());
  s.quantitative.min = q.value("min", 0.0);
  s.quantitative.max = q.value("max", 100.0);
}

inline void to_json(nlohmann::json& j, const DataTable& t) {
  j = {{"categories", t.categories}, {"times", t.times}, {"mode", mode_name(t.mode)}, {"values", t.values}};
}

inline void from_json(const nlohmann::json& j, DataTable& t) {
  t.categories = j.at("categories").get<std::vector<std::string>>();
  t.times = j.at("times").get<std::vector<std::string>>();
  t.mode = parse_mode(j.at("mode").get<std::string>());
  t.values = j.at("values").get<std::vector<std::vector<double>>>();
}

}  // namespace simvec::chart
