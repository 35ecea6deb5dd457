#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seismo/chunker/chunk.hpp"
#include "seismo/chunker/size_report.hpp"
#include "seismo/chunker/summary.hpp"

namespace seismo {

inline constexpr std::string_view store_format = "seismo-store/1";

struct PayloadRef {
  std::size_t bytes = 0;
  std::string hash;

  friend bool operator==(const PayloadRef&, const PayloadRef&) = default;
};

/// Contents of meta.json: the dataset shape plus size and hash of every
/// payload file.
struct StoreMeta {
  DatasetShape shape;
  /// Display names of `shape.regions`, same order.
  std::vector<std::string> region_names;
  PayloadRef summary;
  std::map<std::string, PayloadRef> chunks;
};

inline std::string serialize(const StoreMeta& meta) {
  const auto& s = meta.shape;
  std::string out;
  detail::CanonicalWriter w(out);
  w.begin_object();
  w.key("chunks").begin_object();
  for (const auto& [key, ref] : meta.chunks) {
    w.key(key).begin_object();
    w.key("bytes").integer(static_cast<long long>(ref.bytes));
    w.key("hash").string(ref.hash);
    w.end_object();
  }
  w.end_object();
  w.key("format").string(store_format);
  w.key("indicators").begin_array();
  for (const auto& ind : s.indicators) {
    w.begin_object();
    w.key("id").string(ind.id);
    w.key("name").string(ind.name);
    w.key("unit").string(ind.unit);
    w.end_object();
  }
  w.end_array();
  w.key("periods").begin_object();
  w.key("count").integer(static_cast<long long>(s.periods.size()));
  w.key("first").string(s.periods.first_label());
  w.key("granularity").string(to_string(s.periods.granularity()));
  w.key("labels").begin_array();
  for (std::size_t p = 0; p < s.periods.size(); ++p) w.string(s.periods.label(p));
  w.end_array();
  w.key("last").string(s.periods.last_label());
  w.end_object();
  w.key("provenance").string(s.provenance);
  w.key("regions").begin_array();
  for (std::size_t r = 0; r < s.regions.size(); ++r) {
    w.begin_object();
    w.key("code").string(s.regions[r].text());
    w.key("name").string(r < meta.region_names.size() ? meta.region_names[r] : std::string{});
    w.end_object();
  }
  w.end_array();
  w.key("summary").begin_object();
  w.key("bytes").integer(static_cast<long long>(meta.summary.bytes));
  w.key("hash").string(meta.summary.hash);
  w.end_object();
  w.key("tracks").begin_array();
  for (const auto& t : s.tracks) {
    w.begin_object();
    w.key("indicator").string(t.indicator);
    w.key("name").string(t.name);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return out;
}

inline StoreMeta deserialize_meta(std::string_view bytes) {
  using detail::corrupt;
  using detail::expect_keys;
  using detail::expect_string;
  const nlohmann::json doc = detail::parse_payload(bytes);
  expect_keys(doc, {"chunks", "format", "indicators", "periods", "provenance", "regions", "summary", "tracks"}, "meta");
  if (expect_string(doc["format"], "meta.format") != store_format)
    corrupt("unsupported store format '" + doc["format"].get<std::string>() + "'");

  auto read_ref = [](const nlohmann::json& j, std::string_view what) {
    expect_keys(j, {"bytes", "hash"}, what);
    if (!j["bytes"].is_number_unsigned()) corrupt(std::string(what) + ".bytes is not a size");
    return PayloadRef{j["bytes"].get<std::size_t>(), expect_string(j["hash"], what)};
  };

  StoreMeta meta;
  if (!doc["chunks"].is_object()) corrupt("meta.chunks is not an object");
  for (const auto& [key, ref] : doc["chunks"].items()) meta.chunks[key] = read_ref(ref, "chunk " + key);
  meta.summary = read_ref(doc["summary"], "meta.summary");

  if (!doc["indicators"].is_array()) corrupt("meta.indicators is not an array");
  for (const auto& ind : doc["indicators"]) {
    expect_keys(ind, {"id", "name", "unit"}, "indicator");
    meta.shape.indicators.push_back(Indicator{expect_string(ind["id"], "indicator id"),
                                              expect_string(ind["name"], "indicator name"),
                                              expect_string(ind["unit"], "indicator unit")});
  }
  const auto& periods = doc["periods"];
  expect_keys(periods, {"count", "first", "granularity", "labels", "last"}, "meta.periods");
  nlohmann::json header = {{"count", periods["count"]}, {"first", periods["first"]}, {"granularity", periods["granularity"]}};
  meta.shape.periods = detail::read_period_header(header);
  meta.shape.provenance = expect_string(doc["provenance"], "meta.provenance");

  if (!doc["regions"].is_array()) corrupt("meta.regions is not an array");
  for (const auto& r : doc["regions"]) {
    expect_keys(r, {"code", "name"}, "region");
    meta.shape.regions.push_back(detail::read_region(r["code"], "region code"));
    meta.region_names.push_back(expect_string(r["name"], "region name"));
  }
  if (!doc["tracks"].is_array()) corrupt("meta.tracks is not an array");
  for (const auto& t : doc["tracks"]) {
    expect_keys(t, {"indicator", "name"}, "track");
    meta.shape.tracks.push_back(Track{expect_string(t["name"], "track name"), expect_string(t["indicator"], "track indicator")});
  }
  return meta;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::corrupt_store, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::vector<std::string> region_names(const std::vector<RegionCode>& regions, const RegionRegistry& registry) {
  std::vector<std::string> names;
  for (const auto& r : regions) {
    const auto* entry = registry.find(r);
    names.push_back(entry ? entry->name : r.text());
  }
  return names;
}

}  // namespace detail

/// Every payload of a dataset, serialised and hashed, ready to persist.
struct PackedStore {
  std::string meta_bytes;
  StoreMeta meta;
  std::string summary_bytes;
  GlobalSummary summary;
  /// Country key -> chunk bytes.
  std::map<std::string, std::string> chunk_bytes;

  static PackedStore pack(const Dataset& dataset, const RegionRegistry& registry = RegionRegistry::bundled()) {
    PackedStore out;
    out.summary = build_summary(dataset);
    out.summary_bytes = serialize(out.summary);
    out.meta.shape = DatasetShape::of(dataset);
    out.meta.region_names = detail::region_names(dataset.regions(), registry);
    out.meta.summary = PayloadRef{out.summary_bytes.size(), out.summary.hash};
    for (const auto& key : chunk_keys(dataset)) {
      const DetailChunk chunk = build_chunk(dataset, key);
      std::string bytes = serialize(chunk);
      out.meta.chunks[key.text()] = PayloadRef{bytes.size(), chunk.hash};
      out.chunk_bytes.emplace(key.text(), std::move(bytes));
    }
    out.meta_bytes = serialize(out.meta);
    return out;
  }

  SizeReport size_report(std::size_t budget = default_chunk_budget) const {
    std::vector<std::pair<std::string, std::size_t>> chunks;
    for (const auto& [key, bytes] : chunk_bytes) chunks.emplace_back(key, bytes.size());
    return SizeReport::from_sizes(summary_bytes.size(), meta_bytes.size(), chunks, budget);
  }

  /// Writes meta.json, summary.json and chunks/<KEY>.json under `dir`,
  /// removing chunk files of keys no longer present.
  void write(const std::filesystem::path& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "chunks");
    for (const auto& [key, bytes] : chunk_bytes) detail::write_file(dir / "chunks" / (key + ".json"), bytes);
    for (const auto& entry : fs::directory_iterator(dir / "chunks")) {
      const auto& p = entry.path();
      if (p.extension() == ".json" && !chunk_bytes.contains(p.stem().string())) fs::remove(p);
    }
    detail::write_file(dir / "summary.json", summary_bytes);
    detail::write_file(dir / "meta.json", meta_bytes);
  }
};

/// Serialised sizes of `dataset`'s summary, meta and chunks. Tracks whose
/// source indicator is undeclared are left out of the summary and reported
/// as warnings.
inline SizeReport size_report(const Dataset& dataset, std::size_t budget = default_chunk_budget,
                              const RegionRegistry& registry = RegionRegistry::bundled()) {
  std::vector<Track> usable;
  std::vector<std::string> dropped;
  for (const auto& t : dataset.tracks()) {
    if (dataset.indicator_index(t.indicator)) usable.push_back(t);
    else dropped.push_back("track " + t.name + " skipped: source indicator " + t.indicator + " is undeclared");
  }
  SizeReport report;
  if (dropped.empty()) {
    report = PackedStore::pack(dataset, registry).size_report(budget);
  } else {
    const Dataset trimmed(dataset.regions(), dataset.periods(), dataset.indicators(), usable, dataset.values(),
                          dataset.provenance());
    report = PackedStore::pack(trimmed, registry).size_report(budget);
  }
  report.warnings.insert(report.warnings.begin(), dropped.begin(), dropped.end());
  return report;
}

/// A persisted store opened for reading. Every payload's hash is checked
/// against meta.json on open; any mismatch or missing file is CorruptStore.
class Store {
 public:
  static Store open(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    Store s;
    s.dir_ = dir;
    if (!fs::exists(dir / "meta.json")) throw Error(Errc::corrupt_store, "missing " + (dir / "meta.json").string());
    s.meta_bytes_ = detail::read_file(dir / "meta.json");
    try {
      s.meta_ = deserialize_meta(s.meta_bytes_);
    } catch (const Error& e) {
      throw Error(Errc::corrupt_store, "meta.json: " + e.detail());
    }
    s.meta_hash_ = sha256_hex(s.meta_bytes_);

    s.summary_bytes_ = detail::read_file(dir / "summary.json");
    if (sha256_hex(s.summary_bytes_) != s.meta_.summary.hash)
      throw Error(Errc::corrupt_store, "summary.json does not match its hash in meta.json");
    try {
      s.summary_ = deserialize_summary(s.summary_bytes_);
    } catch (const Error& e) {
      throw Error(Errc::corrupt_store, "summary.json: " + e.detail());
    }
    if (!(s.summary_.periods == s.meta_.shape.periods) || s.summary_.regions != s.meta_.shape.regions)
      throw Error(Errc::corrupt_store, "summary.json disagrees with meta.json on regions or periods");

    for (const auto& [key, ref] : s.meta_.chunks) {
      const fs::path path = dir / "chunks" / (key + ".json");
      if (!fs::exists(path)) throw Error(Errc::corrupt_store, "missing chunk file " + path.string());
      std::string bytes = detail::read_file(path);
      if (sha256_hex(bytes) != ref.hash) throw Error(Errc::corrupt_store, "chunk " + key + " does not match its hash");
      s.chunk_bytes_.emplace(key, std::move(bytes));
    }
    return s;
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const StoreMeta& meta() const noexcept { return meta_; }
  const std::string& meta_bytes() const noexcept { return meta_bytes_; }
  const std::string& meta_hash() const noexcept { return meta_hash_; }
  const GlobalSummary& summary() const noexcept { return summary_; }
  const std::string& summary_bytes() const noexcept { return summary_bytes_; }

  /// Canonical chunk bytes for a country key, or nullptr.
  const std::string* chunk_bytes(std::string_view key) const {
    const auto it = chunk_bytes_.find(std::string(key));
    return it == chunk_bytes_.end() ? nullptr : &it->second;
  }

  DetailChunk chunk(std::string_view key) const {
    const std::string* bytes = chunk_bytes(key);
    if (!bytes) throw Error(Errc::corrupt_store, "no chunk " + std::string(key));
    return deserialize_chunk(*bytes);
  }

  Dataset dataset() const {
    std::vector<DetailChunk> chunks;
    for (const auto& [key, bytes] : chunk_bytes_) chunks.push_back(deserialize_chunk(bytes));
    return reassemble(meta_.shape, chunks);
  }

  SizeReport size_report(std::size_t budget = default_chunk_budget) const {
    std::vector<std::pair<std::string, std::size_t>> chunks;
    for (const auto& [key, bytes] : chunk_bytes_) chunks.emplace_back(key, bytes.size());
    return SizeReport::from_sizes(summary_bytes_.size(), meta_bytes_.size(), chunks, budget);
  }

 private:
  std::filesystem::path dir_;
  std::string meta_bytes_;
  std::string meta_hash_;
  StoreMeta meta_;
  std::string summary_bytes_;
  GlobalSummary summary_;
  std::map<std::string, std::string> chunk_bytes_;
};

}  // namespace seismo
