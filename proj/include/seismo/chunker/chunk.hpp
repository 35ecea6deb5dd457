#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/chunker/summary.hpp"

namespace seismo {

/// Indicator id -> period series.
using IndicatorSeries = std::map<std::string, std::vector<Value>>;

/// The lazy payload for one country: its own series and those of its
/// ISO-3166-2 subdivisions present in the dataset.
struct DetailChunk {
  /// Country-level key; never a subdivision.
  RegionCode key;
  PeriodAxis periods;
  std::map<RegionCode, IndicatorSeries> regions;
  std::string hash;

  const IndicatorSeries* find(const RegionCode& region) const {
    const auto it = regions.find(region);
    return it == regions.end() ? nullptr : &it->second;
  }

  std::size_t cell_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, series] : regions)
      for (const auto& [__, values] : series) n += values.size();
    return n;
  }

  friend bool operator==(const DetailChunk&, const DetailChunk&) = default;
};

inline std::string serialize(const DetailChunk& chunk) {
  std::string out;
  out.reserve(64 + chunk.cell_count() * 8);
  detail::CanonicalWriter w(out);
  w.begin_object();
  w.key("key").string(chunk.key.text());
  detail::write_period_header(w, chunk.periods);
  w.key("regions").begin_object();
  for (const auto& [region, series] : chunk.regions) {
    w.key(region.text()).begin_object();
    for (const auto& [id, values] : series) {
      w.key(id).begin_array();
      for (const auto& v : values) w.value(v);
      w.end_array();
    }
    w.end_object();
  }
  w.end_object();
  w.end_object();
  return out;
}

/// Chunk of one country key, or a chunk with no regions if the dataset
/// holds nothing under that key.
inline DetailChunk build_chunk(const Dataset& dataset, const RegionCode& key) {
  DetailChunk chunk{key.parent(), dataset.periods(), {}, {}};
  for (std::size_t r = 0; r < dataset.regions().size(); ++r) {
    const RegionCode& region = dataset.regions()[r];
    if (region.country != chunk.key.country) continue;
    IndicatorSeries& series = chunk.regions[region];
    for (std::size_t i = 0; i < dataset.indicators().size(); ++i) {
      const auto s = dataset.series(r, i);
      series[dataset.indicators()[i].id] = std::vector<Value>(s.begin(), s.end());
    }
  }
  chunk.hash = sha256_hex(serialize(chunk));
  return chunk;
}

/// Country keys of a dataset in code order.
inline std::vector<RegionCode> chunk_keys(const Dataset& dataset) {
  std::vector<RegionCode> keys;
  for (const auto& r : dataset.regions()) keys.push_back(r.parent());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

/// One chunk per country key. Each key's build reads only the immutable
/// dataset, so callers may split the keys across threads.
inline std::vector<DetailChunk> build_chunks(const Dataset& dataset) {
  std::vector<DetailChunk> chunks;
  for (const auto& key : chunk_keys(dataset)) chunks.push_back(build_chunk(dataset, key));
  return chunks;
}

inline DetailChunk deserialize_chunk(std::string_view bytes) {
  using detail::corrupt;
  const nlohmann::json doc = detail::parse_payload(bytes);
  detail::expect_keys(doc, {"key", "periods", "regions"}, "chunk");
  DetailChunk chunk;
  chunk.key = detail::read_region(doc["key"], "chunk key");
  if (chunk.key.is_subdivision()) corrupt("chunk key " + chunk.key.text() + " is a subdivision");
  chunk.periods = detail::read_period_header(doc["periods"]);
  if (!doc["regions"].is_object()) corrupt("chunk.regions is not an object");
  for (const auto& [code, series] : doc["regions"].items()) {
    const RegionCode region = detail::read_region(code, "chunk region");
    if (region.country != chunk.key.country) corrupt("region " + code + " does not belong to chunk " + chunk.key.text());
    if (!series.is_object()) corrupt("series of " + code + " is not an object");
    IndicatorSeries& out = chunk.regions[region];
    for (const auto& [id, values] : series.items())
      out[id] = detail::read_value_array(values, chunk.periods.size(), code + "." + id);
  }
  chunk.hash = sha256_hex(serialize(chunk));
  return chunk;
}

/// Shape of a dataset without its cells, as persisted in meta.json.
struct DatasetShape {
  std::vector<RegionCode> regions;
  PeriodAxis periods;
  std::vector<Indicator> indicators;
  std::vector<Track> tracks;
  std::string provenance;

  static DatasetShape of(const Dataset& d) {
    return DatasetShape{d.regions(), d.periods(), d.indicators(), d.tracks(), d.provenance()};
  }
};

/// Rebuilds the dataset from its chunks. Every declared (region,
/// indicator) must be present with a full-length series.
inline Dataset reassemble(const DatasetShape& shape, const std::vector<DetailChunk>& chunks) {
  std::map<RegionCode, const DetailChunk*> by_key;
  for (const auto& c : chunks) by_key[c.key] = &c;
  const std::size_t periods = shape.periods.size();
  std::vector<Value> values;
  values.reserve(shape.regions.size() * shape.indicators.size() * periods);
  for (const auto& region : shape.regions) {
    const auto it = by_key.find(region.parent());
    if (it == by_key.end()) throw Error(Errc::corrupt_payload, "no chunk for " + region.parent().text());
    if (!(it->second->periods == shape.periods))
      throw Error(Errc::corrupt_payload, "chunk " + it->first.text() + " has a different period axis");
    const IndicatorSeries* series = it->second->find(region);
    if (!series) throw Error(Errc::corrupt_payload, "chunk " + it->first.text() + " lacks " + region.text());
    for (const auto& ind : shape.indicators) {
      const auto s = series->find(ind.id);
      if (s == series->end() || s->second.size() != periods)
        throw Error(Errc::corrupt_payload, "chunk " + it->first.text() + " lacks series " + region.text() + "." + ind.id);
      values.insert(values.end(), s->second.begin(), s->second.end());
    }
  }
  return Dataset(shape.regions, shape.periods, shape.indicators, shape.tracks, std::move(values), shape.provenance);
}

}  // namespace seismo
