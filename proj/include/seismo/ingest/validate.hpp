#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "seismo/core/dataset.hpp"

namespace seismo {

struct IndicatorCoverage {
  std::string id;
  std::size_t observed = 0;
  std::size_t total = 0;

  double coverage() const noexcept { return total == 0 ? 0.0 : static_cast<double>(observed) / static_cast<double>(total); }
  double missing_ratio() const noexcept { return total == 0 ? 0.0 : 1.0 - coverage(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<IndicatorCoverage> indicators;
  std::size_t period_count = 0;
  /// Periods holding at least one observed cell.
  std::size_t periods_with_data = 0;
  /// Rows dropped by ingest with skip_bad_rows; zero otherwise.
  std::size_t skipped_rows = 0;

  bool ok() const noexcept { return violations.empty(); }

  const IndicatorCoverage* coverage_of(std::string_view id) const {
    for (const auto& c : indicators)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/// Checks the Dataset invariants against `registry` and measures coverage.
inline ValidationReport validate(const Dataset& dataset, const RegionRegistry& registry = RegionRegistry::bundled()) {
  ValidationReport report;
  auto& v = report.violations;

  std::set<RegionCode> seen_regions;
  for (const auto& r : dataset.regions()) {
    const std::string text = r.text();
    if (!detail::is_canonical_code(text))
      v.push_back("region '" + text + "' is not a canonical code");
    else if (!registry.contains(r))
      v.push_back("region " + text + " is not in the registry");
    if (!seen_regions.insert(r).second) v.push_back("region " + text + " is declared twice");
  }

  std::set<std::string> seen_ids;
  for (const auto& ind : dataset.indicators()) {
    if (!is_valid_indicator_id(ind.id)) v.push_back("indicator id '" + ind.id + "' does not match [a-z0-9_]{1,64}");
    if (!seen_ids.insert(ind.id).second) v.push_back("indicator " + ind.id + " is declared twice");
  }

  if (dataset.tracks().empty()) v.push_back("dataset declares no track");
  std::set<std::string> seen_tracks;
  for (const auto& t : dataset.tracks()) {
    if (t.name.empty()) v.push_back("track with empty name");
    if (!seen_tracks.insert(t.name).second) v.push_back("track " + t.name + " is declared twice");
    if (!dataset.indicator_index(t.indicator))
      v.push_back("track " + t.name + " references undeclared indicator " + t.indicator);
  }

  const std::size_t regions = dataset.regions().size();
  const std::size_t periods = dataset.periods().size();
  std::vector<bool> period_has_data(periods, false);
  for (std::size_t i = 0; i < dataset.indicators().size(); ++i) {
    IndicatorCoverage cov{dataset.indicators()[i].id, 0, regions * periods};
    for (std::size_t r = 0; r < regions; ++r) {
      const auto series = dataset.series(r, i);
      for (std::size_t p = 0; p < periods; ++p) {
        if (!series[p]) continue;
        if (!std::isfinite(*series[p]))
          v.push_back("non-finite value at " + dataset.regions()[r].text() + " " + dataset.periods().label(p) + " " +
                      cov.id);
        ++cov.observed;
        period_has_data[p] = true;
      }
    }
    report.indicators.push_back(std::move(cov));
  }
  report.period_count = periods;
  for (bool b : period_has_data) report.periods_with_data += b ? 1 : 0;
  return report;
}

}  // namespace seismo
