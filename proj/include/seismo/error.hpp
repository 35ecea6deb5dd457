#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seismo {

enum class Errc {
  // core-model
  unknown_code,
  malformed_code,
  unresolvable,
  ambiguous_name,
  format_error,
  reversed_range,
  // ingest
  decode_error,
  schema_error,
  duplicate_cell,
  region_error,
  period_error,
  indicator_error,
  value_error,
  no_table_found,
  // chunker
  track_source_missing,
  corrupt_payload,
  corrupt_store,
  // choropleth
  degenerate_scale,
  unknown_track,
  period_out_of_range,
  malformed_svg,
  invalid_scale,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::unknown_code: return "UnknownCode";
    case Errc::malformed_code: return "MalformedCode";
    case Errc::unresolvable: return "Unresolvable";
    case Errc::ambiguous_name: return "AmbiguousName";
    case Errc::format_error: return "FormatError";
    case Errc::reversed_range: return "ReversedRange";
    case Errc::decode_error: return "DecodeError";
    case Errc::schema_error: return "SchemaError";
    case Errc::duplicate_cell: return "DuplicateCell";
    case Errc::region_error: return "RegionError";
    case Errc::period_error: return "PeriodError";
    case Errc::indicator_error: return "IndicatorError";
    case Errc::value_error: return "ValueError";
    case Errc::no_table_found: return "NoTableFound";
    case Errc::track_source_missing: return "TrackSourceMissing";
    case Errc::corrupt_payload: return "CorruptPayload";
    case Errc::corrupt_store: return "CorruptStore";
    case Errc::degenerate_scale: return "DegenerateScale";
    case Errc::unknown_track: return "UnknownTrack";
    case Errc::period_out_of_range: return "PeriodOutOfRange";
    case Errc::malformed_svg: return "MalformedSvg";
    case Errc::invalid_scale: return "InvalidScale";
  }
  return "Error";
}

/// Every failure raised by the library. `row` is set by the ingest
/// connectors (1-based, see ingest.hpp for numbering); `candidates` is set
/// for AmbiguousName.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail, std::optional<std::size_t> row = std::nullopt,
        std::vector<std::string> candidates = {})
      : std::runtime_error(format(code, detail, row)),
        code_(code),
        detail_(std::move(detail)),
        row_(row),
        candidates_(std::move(candidates)) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  static std::string format(Errc code, const std::string& detail,
                            std::optional<std::size_t> row) {
    std::string out(errc_name(code));
    if (row) out += " at row " + std::to_string(*row);
    if (!detail.empty()) out += ": " + detail;
    return out;
  }

  Errc code_;
  std::string detail_;
  std::optional<std::size_t> row_;
  std::vector<std::string> candidates_;
};

}  // namespace seismo
