#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seismo/core/period.hpp"
#include "seismo/core/region.hpp"

namespace seismo {

/// A cell value. std::nullopt is MISSING, which is distinct from 0.0.
using Value = std::optional<double>;

struct Indicator {
  std::string id;
  std::string name;
  std::string unit;

  friend bool operator==(const Indicator&, const Indicator&) = default;
};

/// A value series promoted to the timeline and the map.
struct Track {
  std::string name;
  std::string indicator;

  friend bool operator==(const Track&, const Track&) = default;
};

inline bool is_valid_indicator_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

/// Immutable dense store of (region, period, indicator) -> Value.
///
/// Cells are laid out region-major, then indicator, then period, so one
/// region's indicator series are contiguous. Construction only checks the
/// grid shape; the remaining invariants are reported by validate() and
/// enforced by the ingest connectors.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<RegionCode> regions, PeriodAxis periods, std::vector<Indicator> indicators,
          std::vector<Track> tracks, std::vector<Value> values, std::string provenance = {})
      : regions_(std::move(regions)),
        periods_(periods),
        indicators_(std::move(indicators)),
        tracks_(std::move(tracks)),
        values_(std::move(values)),
        provenance_(std::move(provenance)) {
    if (values_.size() != regions_.size() * periods_.size() * indicators_.size())
      throw std::invalid_argument("dataset grid has " + std::to_string(values_.size()) + " cells, expected " +
                                  std::to_string(regions_.size() * periods_.size() * indicators_.size()));
  }

  /// All-MISSING grid of the given shape.
  static Dataset blank(std::vector<RegionCode> regions, PeriodAxis periods, std::vector<Indicator> indicators,
                       std::vector<Track> tracks, std::string provenance = {}) {
    std::vector<Value> values(regions.size() * periods.size() * indicators.size());
    return Dataset(std::move(regions), periods, std::move(indicators), std::move(tracks), std::move(values),
                   std::move(provenance));
  }

  const std::vector<RegionCode>& regions() const noexcept { return regions_; }
  const PeriodAxis& periods() const noexcept { return periods_; }
  const std::vector<Indicator>& indicators() const noexcept { return indicators_; }
  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  const std::string& provenance() const noexcept { return provenance_; }
  const std::vector<Value>& values() const noexcept { return values_; }

  std::size_t cell_index(std::size_t region, std::size_t period, std::size_t indicator) const noexcept {
    return (region * indicators_.size() + indicator) * periods_.size() + period;
  }

  const Value& at(std::size_t region, std::size_t period, std::size_t indicator) const {
    return values_.at(cell_index(region, period, indicator));
  }

  /// Contiguous period series of one (region, indicator) pair.
  std::span<const Value> series(std::size_t region, std::size_t indicator) const {
    return std::span<const Value>(values_).subspan(cell_index(region, 0, indicator), periods_.size());
  }

  std::optional<std::size_t> region_index(const RegionCode& code) const {
    const auto it = std::find(regions_.begin(), regions_.end(), code);
    if (it == regions_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - regions_.begin());
  }

  std::optional<std::size_t> indicator_index(std::string_view id) const {
    for (std::size_t i = 0; i < indicators_.size(); ++i)
      if (indicators_[i].id == id) return i;
    return std::nullopt;
  }

  /// Value at (region, period ordinal, indicator id); MISSING when any key
  /// is undeclared.
  Value value(const RegionCode& region, std::size_t ordinal, std::string_view indicator) const {
    const auto r = region_index(region);
    const auto i = indicator_index(indicator);
    if (!r || !i || ordinal >= periods_.size()) return std::nullopt;
    return at(*r, ordinal, *i);
  }

  std::size_t cell_count() const noexcept { return values_.size(); }
  std::size_t observed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](const Value& v) { return v.has_value(); }));
  }

  /// Equal regions, periods, indicators, tracks and cells. Provenance is a
  /// note and does not take part.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.regions_ == b.regions_ && a.periods_ == b.periods_ && a.indicators_ == b.indicators_ &&
           a.tracks_ == b.tracks_ && a.values_ == b.values_;
  }

 private:
  std::vector<RegionCode> regions_;
  PeriodAxis periods_;
  std::vector<Indicator> indicators_;
  std::vector<Track> tracks_;
  std::vector<Value> values_;
  std::string provenance_;
};

}  // namespace seismo
