#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seismo/chunker/canonical_json.hpp"
#include "seismo/chunker/sha256.hpp"
#include "seismo/core/dataset.hpp"

namespace seismo {

namespace detail {

inline void write_period_header(CanonicalWriter& w, const PeriodAxis& axis) {
  w.key("periods").begin_object();
  w.key("count").integer(static_cast<long long>(axis.size()));
  w.key("first").string(axis.first_label());
  w.key("granularity").string(to_string(axis.granularity()));
  w.end_object();
}

[[noreturn]] inline void corrupt(const std::string& what) { throw Error(Errc::corrupt_payload, what); }

inline nlohmann::json parse_payload(std::string_view bytes) {
  try {
    return nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    corrupt(std::string("not JSON: ") + e.what());
  }
}

inline void expect_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> keys, std::string_view what) {
  if (!obj.is_object()) corrupt(std::string(what) + " is not an object");
  if (obj.size() != keys.size()) corrupt(std::string(what) + " has unexpected members");
  for (auto k : keys)
    if (!obj.contains(k)) corrupt(std::string(what) + " lacks '" + std::string(k) + "'");
}

inline const std::string& expect_string(const nlohmann::json& j, std::string_view what) {
  if (!j.is_string()) corrupt(std::string(what) + " is not a string");
  return j.get_ref<const std::string&>();
}

inline PeriodAxis read_period_header(const nlohmann::json& j) {
  expect_keys(j, {"count", "first", "granularity"}, "periods");
  if (!j["count"].is_number_unsigned()) corrupt("periods.count is not a non-negative integer");
  try {
    const Granularity g = parse_granularity(expect_string(j["granularity"], "periods.granularity"));
    return PeriodAxis(g, parse_calendar(expect_string(j["first"], "periods.first"), g), j["count"].get<std::size_t>());
  } catch (const Error& e) {
    corrupt("periods: " + e.detail());
  }
}

inline std::vector<Value> read_value_array(const nlohmann::json& j, std::size_t expected, std::string_view what) {
  if (!j.is_array() || j.size() != expected)
    corrupt(std::string(what) + " is not an array of " + std::to_string(expected) + " values");
  std::vector<Value> out;
  out.reserve(expected);
  for (const auto& v : j) {
    if (v.is_null()) out.emplace_back(std::nullopt);
    else if (v.is_number()) out.emplace_back(v.get<double>());
    else corrupt(std::string(what) + " holds a non-numeric value");
  }
  return out;
}

inline RegionCode read_region(const nlohmann::json& j, std::string_view what) {
  try {
    return RegionCode::from_canonical(expect_string(j, what));
  } catch (const Error& e) {
    corrupt(std::string(what) + ": " + e.detail());
  }
}

}  // namespace detail

struct SummaryTrack {
  std::string name;
  std::string indicator;
  /// Region-major: values[region * periods + period].
  std::vector<Value> values;

  friend bool operator==(const SummaryTrack&, const SummaryTrack&) = default;
};

/// The eager payload: every region's track values for all periods.
struct GlobalSummary {
  PeriodAxis periods;
  std::vector<RegionCode> regions;
  std::vector<SummaryTrack> tracks;
  /// SHA-256 hex of the canonical serialisation.
  std::string hash;

  const SummaryTrack* find_track(std::string_view name) const {
    for (const auto& t : tracks)
      if (t.name == name) return &t;
    return nullptr;
  }

  const Value& at(std::size_t track, std::size_t region, std::size_t period) const {
    return tracks.at(track).values.at(region * periods.size() + period);
  }

  std::size_t cell_count() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tracks) n += t.values.size();
    return n;
  }

  friend bool operator==(const GlobalSummary&, const GlobalSummary&) = default;
};

inline std::string serialize(const GlobalSummary& summary) {
  const std::size_t periods = summary.periods.size();
  std::string out;
  out.reserve(64 + summary.regions.size() * 8 + summary.cell_count() * 8);
  detail::CanonicalWriter w(out);
  w.begin_object();
  detail::write_period_header(w, summary.periods);
  w.key("regions").begin_array();
  for (const auto& r : summary.regions) w.string(r.text());
  w.end_array();
  w.key("tracks").begin_array();
  for (const auto& t : summary.tracks) {
    w.begin_object();
    w.key("indicator").string(t.indicator);
    w.key("name").string(t.name);
    w.key("values").begin_array();
    for (std::size_t r = 0; r < summary.regions.size(); ++r) {
      w.begin_array();
      for (std::size_t p = 0; p < periods; ++p) w.value(t.values[r * periods + p]);
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return out;
}

/// One matrix per track, copied from the track's source indicator. No
/// aggregation; MISSING propagates.
inline GlobalSummary build_summary(const Dataset& dataset) {
  GlobalSummary summary;
  summary.periods = dataset.periods();
  summary.regions = dataset.regions();
  const std::size_t periods = dataset.periods().size();
  for (const auto& track : dataset.tracks()) {
    const auto ind = dataset.indicator_index(track.indicator);
    if (!ind)
      throw Error(Errc::track_source_missing,
                  "track '" + track.name + "' reads undeclared indicator '" + track.indicator + "'");
    SummaryTrack st{track.name, track.indicator, {}};
    st.values.reserve(dataset.regions().size() * periods);
    for (std::size_t r = 0; r < dataset.regions().size(); ++r) {
      const auto series = dataset.series(r, *ind);
      st.values.insert(st.values.end(), series.begin(), series.end());
    }
    summary.tracks.push_back(std::move(st));
  }
  summary.hash = sha256_hex(serialize(summary));
  return summary;
}

inline GlobalSummary deserialize_summary(std::string_view bytes) {
  using detail::corrupt;
  const nlohmann::json doc = detail::parse_payload(bytes);
  detail::expect_keys(doc, {"periods", "regions", "tracks"}, "summary");
  GlobalSummary summary;
  summary.periods = detail::read_period_header(doc["periods"]);
  if (!doc["regions"].is_array()) corrupt("summary.regions is not an array");
  for (const auto& r : doc["regions"]) summary.regions.push_back(detail::read_region(r, "summary region"));
  if (!doc["tracks"].is_array()) corrupt("summary.tracks is not an array");
  const std::size_t periods = summary.periods.size();
  for (const auto& t : doc["tracks"]) {
    detail::expect_keys(t, {"indicator", "name", "values"}, "summary track");
    SummaryTrack st{detail::expect_string(t["name"], "track name"), detail::expect_string(t["indicator"], "track indicator"), {}};
    const auto& rows = t["values"];
    if (!rows.is_array() || rows.size() != summary.regions.size())
      corrupt("track '" + st.name + "' does not have one row per region");
    st.values.reserve(summary.regions.size() * periods);
    for (const auto& row : rows) {
      auto values = detail::read_value_array(row, periods, "track '" + st.name + "' row");
      st.values.insert(st.values.end(), values.begin(), values.end());
    }
    summary.tracks.push_back(std::move(st));
  }
  summary.hash = sha256_hex(serialize(summary));
  return summary;
}

}  // namespace seismo
