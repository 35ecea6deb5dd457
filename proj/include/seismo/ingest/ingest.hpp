#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "seismo/core/dataset.hpp"
#include "seismo/ingest/csv.hpp"
#include "seismo/ingest/html.hpp"
#include "seismo/ingest/spec.hpp"
#include "seismo/ingest/text.hpp"
#include "seismo/ingest/validate.hpp"

namespace seismo {

/// Side information from one ingest call.
struct IngestStats {
  std::size_t records = 0;
  std::size_t skipped_rows = 0;
  /// One line per skipped row, "row N: reason".
  std::vector<std::string> skipped;
};

namespace detail {

/// A value cell as it appears in the source, before interpretation.
struct RawValue {
  enum class Kind { text, number, null } kind = Kind::null;
  std::string_view text;
  double number = 0;
};

/// Collects records from any connector and densifies them into a Dataset.
/// Row numbers are 1-based: the CSV line or HTML <tr> where the record
/// starts (header = row 1), or the record's position in a JSON array.
class DatasetAssembler {
 public:
  DatasetAssembler(const IngestSpec& spec, const RegionRegistry& registry, IngestStats* stats)
      : spec_(spec), registry_(registry), stats_(stats) {}

  void add(std::size_t row, std::string_view region, std::string_view period, std::string_view indicator,
           const RawValue& value) {
    if (stats_) ++stats_->records;
    try {
      Record rec;
      rec.region = region_slot(region, row);
      rec.serial = period_serial(period, row);
      rec.indicator = indicator_slot(indicator, row);
      rec.value = read_value(value, row);
      rec.row = row;
      records_.push_back(rec);
    } catch (const Error& e) {
      if (!spec_.skip_bad_rows) throw;
      if (stats_) {
        ++stats_->skipped_rows;
        stats_->skipped.push_back("row " + std::to_string(row) + ": " + e.detail());
      }
    }
  }

  /// With `enforce`, invariant violations are a SchemaError; without, the
  /// dataset is returned as built for validate() to report on.
  Dataset finish(bool enforce = true) && {
    // Canonical axis order: regions by code, indicators by id.
    std::vector<std::uint32_t> region_order(regions_.size());
    std::iota(region_order.begin(), region_order.end(), 0u);
    std::sort(region_order.begin(), region_order.end(),
              [&](auto a, auto b) { return regions_[a] < regions_[b]; });
    std::vector<std::uint32_t> region_rank(regions_.size());
    for (std::uint32_t i = 0; i < region_order.size(); ++i) region_rank[region_order[i]] = i;

    std::vector<std::uint32_t> ind_order(indicator_ids_.size());
    std::iota(ind_order.begin(), ind_order.end(), 0u);
    std::sort(ind_order.begin(), ind_order.end(),
              [&](auto a, auto b) { return indicator_ids_[a] < indicator_ids_[b]; });
    std::vector<std::uint32_t> ind_rank(indicator_ids_.size());
    for (std::uint32_t i = 0; i < ind_order.size(); ++i) ind_rank[ind_order[i]] = i;

    std::vector<RegionCode> regions;
    for (auto i : region_order) regions.push_back(regions_[i]);
    std::vector<Indicator> indicators;
    for (auto i : ind_order) {
      const std::string& id = indicator_ids_[i];
      const auto info = spec_.indicator_info.find(id);
      indicators.push_back(info != spec_.indicator_info.end() ? Indicator{id, info->second.name, info->second.unit}
                                                               : Indicator{id, id, {}});
    }

    PeriodAxis axis(spec_.granularity, 0, 0);
    if (!records_.empty()) {
      const auto [lo, hi] = std::minmax_element(records_.begin(), records_.end(),
                                                [](const Record& a, const Record& b) { return a.serial < b.serial; });
      axis = PeriodAxis(spec_.granularity, lo->serial, static_cast<std::size_t>(hi->serial - lo->serial + 1));
    }

    const std::size_t n_periods = axis.size(), n_indicators = indicators.size();
    std::vector<Value> values(regions.size() * n_periods * n_indicators);
    std::vector<bool> assigned(values.size(), false);
    for (const Record& rec : records_) {
      const std::size_t p = static_cast<std::size_t>(rec.serial - axis.first_serial());
      const std::size_t cell = (region_rank[rec.region] * n_indicators + ind_rank[rec.indicator]) * n_periods + p;
      if (assigned[cell])
        throw Error(Errc::duplicate_cell,
                    regions_[rec.region].text() + "," + axis.label(p) + "," + indicator_ids_[rec.indicator], rec.row);
      assigned[cell] = true;
      values[cell] = rec.value;
    }

    Dataset dataset(std::move(regions), axis, std::move(indicators), spec_.tracks, std::move(values),
                    spec_.provenance);
    if (!enforce) return dataset;
    const ValidationReport report = validate(dataset, registry_);
    if (!report.ok()) {
      std::string all;
      for (const auto& v : report.violations) all += (all.empty() ? "" : "; ") + v;
      throw Error(Errc::schema_error, all);
    }
    return dataset;
  }

 private:
  struct Record {
    std::uint32_t region = 0;
    std::uint32_t indicator = 0;
    CalendarSerial serial = 0;
    Value value;
    std::size_t row = 0;
  };

  std::uint32_t region_slot(std::string_view text, std::size_t row) {
    if (const auto it = region_by_text_.find(std::string(text)); it != region_by_text_.end()) return it->second;
    RegionCode code;
    try {
      code = registry_.resolve(text);
    } catch (const Error& e) {
      throw Error(Errc::region_error, e.detail(), row, e.candidates());
    }
    std::uint32_t slot;
    if (const auto it = region_by_code_.find(code); it != region_by_code_.end()) {
      slot = it->second;
    } else {
      slot = static_cast<std::uint32_t>(regions_.size());
      regions_.push_back(code);
      region_by_code_.emplace(code, slot);
    }
    region_by_text_.emplace(std::string(text), slot);
    return slot;
  }

  CalendarSerial period_serial(std::string_view text, std::size_t row) const {
    const auto serial = try_parse_calendar(trim(text), spec_.granularity);
    if (!serial)
      throw Error(Errc::period_error,
                  "'" + std::string(text) + "' is not a " + std::string(to_string(spec_.granularity)) + " period",
                  row);
    return *serial;
  }

  std::uint32_t indicator_slot(std::string_view text, std::size_t row) {
    const std::string id(trim(text));
    if (const auto it = indicator_by_id_.find(id); it != indicator_by_id_.end()) return it->second;
    if (!is_valid_indicator_id(id))
      throw Error(Errc::indicator_error, "'" + id + "' does not match [a-z0-9_]{1,64}", row);
    const auto slot = static_cast<std::uint32_t>(indicator_ids_.size());
    indicator_ids_.push_back(id);
    indicator_by_id_.emplace(id, slot);
    return slot;
  }

  Value read_value(const RawValue& v, std::size_t row) const {
    switch (v.kind) {
      case RawValue::Kind::null: return std::nullopt;
      case RawValue::Kind::number: return v.number;
      case RawValue::Kind::text:
        if (v.text == spec_.missing_token) return std::nullopt;
        if (auto number = parse_number(v.text)) return number;
        throw Error(Errc::value_error, "'" + std::string(v.text) + "' is not a number", row);
    }
    return std::nullopt;
  }

  const IngestSpec& spec_;
  const RegionRegistry& registry_;
  IngestStats* stats_;
  std::vector<Record> records_;
  std::vector<RegionCode> regions_;
  std::unordered_map<RegionCode, std::uint32_t> region_by_code_;
  std::unordered_map<std::string, std::uint32_t> region_by_text_;
  std::vector<std::string> indicator_ids_;
  std::unordered_map<std::string, std::uint32_t> indicator_by_id_;
};

struct ColumnIndex {
  std::size_t region, period, indicator, value;
};

inline ColumnIndex locate_columns(std::span<const std::string_view> header, const ColumnMapping& m) {
  auto find = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return i;
    throw Error(Errc::schema_error, "missing mapped column '" + name + "'", 1);
  };
  return ColumnIndex{find(m.region), find(m.period), find(m.indicator), find(m.value)};
}

/// Shared by the CSV and HTML connectors: header row first, then records.
class TabularReader {
 public:
  explicit TabularReader(DatasetAssembler& out, const ColumnMapping& mapping) : out_(out), mapping_(mapping) {}

  void operator()(std::size_t row, std::span<const std::string_view> fields) {
    if (!columns_) {
      columns_ = locate_columns(fields, mapping_);
      width_ = fields.size();
      return;
    }
    if (fields.size() != width_)
      throw Error(Errc::schema_error,
                  "expected " + std::to_string(width_) + " fields, found " + std::to_string(fields.size()), row);
    RawValue value{RawValue::Kind::text, fields[columns_->value], 0};
    out_.add(row, fields[columns_->region], fields[columns_->period], fields[columns_->indicator], value);
  }

  bool saw_header() const noexcept { return columns_.has_value(); }

 private:
  DatasetAssembler& out_;
  const ColumnMapping& mapping_;
  std::optional<ColumnIndex> columns_;
  std::size_t width_ = 0;
};

inline nlohmann::json parse_json_source(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::decode_error, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string_view json_text(const nlohmann::json& j, const std::string& column, std::size_t row) {
  if (!j.is_string()) throw Error(Errc::schema_error, "column '" + column + "' must hold strings", row);
  return j.get_ref<const std::string&>();
}

inline RawValue json_value(const nlohmann::json& j, const std::string& column, std::size_t row) {
  if (j.is_null()) return RawValue{};
  if (j.is_number()) return RawValue{RawValue::Kind::number, {}, j.get<double>()};
  if (j.is_string()) return RawValue{RawValue::Kind::text, j.get_ref<const std::string&>(), 0};
  throw Error(Errc::value_error, "column '" + column + "' must hold numbers, strings or null", row);
}

inline void read_json_rows(std::string_view text, const ColumnMapping& m, DatasetAssembler& out) {
  const nlohmann::json doc = parse_json_source(text);
  if (!doc.is_array()) throw Error(Errc::schema_error, "row JSON must be an array of objects");
  std::size_t row = 0;
  for (const auto& rec : doc) {
    ++row;
    if (!rec.is_object()) throw Error(Errc::schema_error, "record is not an object", row);
    for (const std::string* key : {&m.region, &m.period, &m.indicator, &m.value})
      if (!rec.contains(*key)) throw Error(Errc::schema_error, "missing mapped column '" + *key + "'", row);
    out.add(row, json_text(rec[m.region], m.region, row), json_text(rec[m.period], m.period, row),
            json_text(rec[m.indicator], m.indicator, row), json_value(rec[m.value], m.value, row));
  }
}

inline void read_json_columnar(std::string_view text, const ColumnMapping& m, DatasetAssembler& out) {
  const nlohmann::json doc = parse_json_source(text);
  if (!doc.is_object()) throw Error(Errc::schema_error, "columnar JSON must be an object of arrays");
  std::optional<std::size_t> length;
  for (const std::string* key : {&m.region, &m.period, &m.indicator, &m.value}) {
    if (!doc.contains(*key)) throw Error(Errc::schema_error, "missing mapped column '" + *key + "'");
    if (!doc[*key].is_array()) throw Error(Errc::schema_error, "column '" + *key + "' is not an array");
    if (length && doc[*key].size() != *length)
      throw Error(Errc::schema_error, "column '" + *key + "' has " + std::to_string(doc[*key].size()) +
                                          " entries, expected " + std::to_string(*length));
    length = doc[*key].size();
  }
  const auto& regions = doc[m.region];
  const auto& periods = doc[m.period];
  const auto& indicators = doc[m.indicator];
  const auto& values = doc[m.value];
  for (std::size_t i = 0; i < *length; ++i) {
    const std::size_t row = i + 1;
    out.add(row, json_text(regions[i], m.region, row), json_text(periods[i], m.period, row),
            json_text(indicators[i], m.indicator, row), json_value(values[i], m.value, row));
  }
}

inline void read_html(std::string_view text, const ColumnMapping& m, DatasetAssembler& out) {
  const auto rows = read_first_html_table(text);
  if (!rows) throw Error(Errc::no_table_found, "document contains no <table>");
  TabularReader reader(out, m);
  std::vector<std::string_view> views;
  for (const auto& r : *rows) {
    views.assign(r.cells.begin(), r.cells.end());
    reader(r.row, views);
  }
  if (!reader.saw_header()) throw Error(Errc::schema_error, "table has no header row");
}

}  // namespace detail

namespace detail {

inline Dataset run_connector(std::string_view source, const IngestSpec& spec, const RegionRegistry& registry,
                             IngestStats* stats, bool enforce) {
  spec.check();
  const std::string_view text = checked_utf8(source);
  DatasetAssembler assembler(spec, registry, stats);
  switch (spec.format) {
    case SourceFormat::csv: {
      TabularReader reader(assembler, spec.columns);
      read_csv(text, reader);
      if (!reader.saw_header()) throw Error(Errc::schema_error, "CSV has no header row");
      break;
    }
    case SourceFormat::json_rows: read_json_rows(text, spec.columns, assembler); break;
    case SourceFormat::json_columnar: read_json_columnar(text, spec.columns, assembler); break;
    case SourceFormat::html_table: read_html(text, spec.columns, assembler); break;
  }
  return std::move(assembler).finish(enforce);
}

}  // namespace detail

/// Loads `source` into a validated Dataset. Regions, periods and indicators
/// are exactly those observed; periods are densified over [min, max] with
/// MISSING in the gaps. A repeated (region, period, indicator) is an error.
inline Dataset ingest(std::string_view source, const IngestSpec& spec,
                      const RegionRegistry& registry = RegionRegistry::bundled(), IngestStats* stats = nullptr) {
  return detail::run_connector(source, spec, registry, stats, true);
}

/// The HTML connector regardless of `spec.format`.
inline Dataset ingest_html_table(std::string_view document, IngestSpec spec,
                                 const RegionRegistry& registry = RegionRegistry::bundled(),
                                 IngestStats* stats = nullptr) {
  spec.format = SourceFormat::html_table;
  return ingest(document, spec, registry, stats);
}

/// Reads `source` like ingest() but reports Dataset invariant violations
/// instead of throwing on them. Connector errors (decoding, schema,
/// duplicates, unreadable rows without skip_bad_rows) still throw.
inline ValidationReport validate_source(std::string_view source, const IngestSpec& spec,
                                        const RegionRegistry& registry = RegionRegistry::bundled()) {
  IngestStats stats;
  const Dataset dataset = detail::run_connector(source, spec, registry, &stats, false);
  ValidationReport report = validate(dataset, registry);
  report.skipped_rows = stats.skipped_rows;
  return report;
}

}  // namespace seismo
