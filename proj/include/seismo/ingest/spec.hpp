#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "seismo/core/dataset.hpp"
#include "seismo/error.hpp"

namespace seismo {

enum class SourceFormat { csv, json_rows, json_columnar, html_table };

constexpr std::string_view to_string(SourceFormat f) noexcept {
  switch (f) {
    case SourceFormat::csv: return "csv";
    case SourceFormat::json_rows: return "json-rows";
    case SourceFormat::json_columnar: return "json-columnar";
    case SourceFormat::html_table: return "html-table";
  }
  return "csv";
}

inline SourceFormat parse_source_format(std::string_view text) {
  for (auto f : {SourceFormat::csv, SourceFormat::json_rows, SourceFormat::json_columnar, SourceFormat::html_table})
    if (text == to_string(f)) return f;
  throw Error(Errc::schema_error, "unknown format '" + std::string(text) +
                                      "' (expected csv, json-rows, json-columnar or html-table)");
}

struct ColumnMapping {
  std::string region = "region";
  std::string period = "period";
  std::string indicator = "indicator";
  std::string value = "value";
};

/// How to read one source into a Dataset.
struct IngestSpec {
  SourceFormat format = SourceFormat::csv;
  ColumnMapping columns;
  Granularity granularity = Granularity::monthly;
  std::vector<Track> tracks;
  /// Cell text read as MISSING. JSON null is always MISSING.
  std::string missing_token;
  /// Drop rows whose region, period, indicator or value cannot be read and
  /// count them, instead of aborting.
  bool skip_bad_rows = false;
  /// Display metadata for indicator ids; ids absent here use the id as name.
  std::map<std::string, Indicator> indicator_info;
  std::string provenance;

  void check() const {
    const std::set<std::string> distinct{columns.region, columns.period, columns.indicator, columns.value};
    if (distinct.size() != 4) throw Error(Errc::schema_error, "ingest spec maps two roles to the same column");
    if (tracks.empty()) throw Error(Errc::schema_error, "ingest spec declares no track");
    std::set<std::string> names;
    for (const auto& t : tracks) {
      if (t.name.empty()) throw Error(Errc::schema_error, "ingest spec has a track without a name");
      if (!names.insert(t.name).second) throw Error(Errc::schema_error, "track '" + t.name + "' declared twice");
    }
  }

  /// Reads the JSON form used by `seismo ingest --spec`:
  ///
  ///   {"format": "csv", "granularity": "monthly",
  ///    "columns": {"region": "...", "period": "...", "indicator": "...", "value": "..."},
  ///    "tracks": [{"name": "...", "indicator": "..."}],
  ///    "missing_token": "", "skip_bad_rows": false, "provenance": "...",
  ///    "indicators": {"<id>": {"name": "...", "unit": "..."}}}
  ///
  /// Only "tracks" is required. Unknown keys are rejected.
  static IngestSpec from_json(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::schema_error, std::string("ingest spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::schema_error, "ingest spec must be a JSON object");

    auto str = [](const nlohmann::json& j, std::string_view what) {
      if (!j.is_string()) throw Error(Errc::schema_error, "ingest spec: " + std::string(what) + " must be a string");
      return j.get<std::string>();
    };

    IngestSpec spec;
    for (const auto& [key, val] : doc.items()) {
      if (key == "format") {
        spec.format = parse_source_format(str(val, "format"));
      } else if (key == "granularity") {
        try {
          spec.granularity = parse_granularity(str(val, "granularity"));
        } catch (const Error& e) {
          throw Error(Errc::schema_error, e.detail());
        }
      } else if (key == "columns") {
        if (!val.is_object()) throw Error(Errc::schema_error, "ingest spec: columns must be an object");
        for (const auto& [role, name] : val.items()) {
          if (role == "region") spec.columns.region = str(name, "columns.region");
          else if (role == "period") spec.columns.period = str(name, "columns.period");
          else if (role == "indicator") spec.columns.indicator = str(name, "columns.indicator");
          else if (role == "value") spec.columns.value = str(name, "columns.value");
          else throw Error(Errc::schema_error, "ingest spec: unknown column role '" + role + "'");
        }
      } else if (key == "tracks") {
        if (!val.is_array()) throw Error(Errc::schema_error, "ingest spec: tracks must be an array");
        for (const auto& t : val) {
          if (!t.is_object() || !t.contains("name") || !t.contains("indicator") || t.size() != 2)
            throw Error(Errc::schema_error, "ingest spec: each track needs exactly 'name' and 'indicator'");
          spec.tracks.push_back(Track{str(t["name"], "track name"), str(t["indicator"], "track indicator")});
        }
      } else if (key == "missing_token") {
        spec.missing_token = str(val, "missing_token");
      } else if (key == "skip_bad_rows") {
        if (!val.is_boolean()) throw Error(Errc::schema_error, "ingest spec: skip_bad_rows must be a boolean");
        spec.skip_bad_rows = val.get<bool>();
      } else if (key == "provenance") {
        spec.provenance = str(val, "provenance");
      } else if (key == "indicators") {
        if (!val.is_object()) throw Error(Errc::schema_error, "ingest spec: indicators must be an object");
        for (const auto& [id, meta] : val.items()) {
          if (!meta.is_object()) throw Error(Errc::schema_error, "ingest spec: indicators." + id + " must be an object");
          Indicator ind{id, id, {}};
          for (const auto& [field, fv] : meta.items()) {
            if (field == "name") ind.name = str(fv, "indicator name");
            else if (field == "unit") ind.unit = str(fv, "indicator unit");
            else throw Error(Errc::schema_error, "ingest spec: unknown indicator field '" + field + "'");
          }
          spec.indicator_info[id] = std::move(ind);
        }
      } else {
        throw Error(Errc::schema_error, "ingest spec: unknown key '" + key + "'");
      }
    }
    spec.check();
    return spec;
  }

  std::string to_json() const {
    nlohmann::ordered_json doc;
    doc["format"] = std::string(to_string(format));
    doc["granularity"] = std::string(to_string(granularity));
    doc["columns"] = {{"region", columns.region}, {"period", columns.period},
                      {"indicator", columns.indicator}, {"value", columns.value}};
    doc["tracks"] = nlohmann::ordered_json::array();
    for (const auto& t : tracks) doc["tracks"].push_back({{"name", t.name}, {"indicator", t.indicator}});
    doc["missing_token"] = missing_token;
    doc["skip_bad_rows"] = skip_bad_rows;
    if (!indicator_info.empty()) {
      doc["indicators"] = nlohmann::ordered_json::object();
      for (const auto& [id, ind] : indicator_info) doc["indicators"][id] = {{"name", ind.name}, {"unit", ind.unit}};
    }
    if (!provenance.empty()) doc["provenance"] = provenance;
    return doc.dump(2) + "\n";
  }
};

}  // namespace seismo
