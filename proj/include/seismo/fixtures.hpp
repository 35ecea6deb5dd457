#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seismo/core/dataset.hpp"
#include "seismo/ingest/spec.hpp"

// Synthetic datasets shaped like the two reference use cases, plus small
// randomised datasets for property tests. All generators are deterministic
// in their seed: they use std::mt19937_64 (whose output sequence is fixed
// by the standard) and their own transforms instead of std distributions.

namespace seismo::fixtures {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n).
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  bool chance(double p) { return uniform() < p; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<RegionCode> first_countries(std::size_t n, const RegionRegistry& registry = RegionRegistry::bundled()) {
  std::vector<RegionCode> out;
  for (const auto& e : registry.entries())
    if (!e.code.is_subdivision()) out.push_back(e.code);
  std::sort(out.begin(), out.end());
  if (out.size() > n) out.resize(n);
  return out;
}

struct ConflictShape {
  std::size_t regions = 141;
  std::string first = "2000-01";
  std::size_t months = 240;
  /// Includes the two track sources, "ground_truth" and "prediction".
  std::size_t indicators = 60;
  double missing_rate = 0.03;
  std::uint64_t seed = 2021;
};

/// Monthly conflict-monitoring-like data: per-country intensity drives a
/// fatality count ("ground_truth") and a model probability ("prediction",
/// full double precision); the remaining indicators mix counts, shares,
/// indices and large magnitudes.
inline Dataset conflict_dataset(const ConflictShape& shape = {}) {
  Rng rng(shape.seed);
  const auto regions = first_countries(shape.regions);
  const PeriodAxis axis(Granularity::monthly, parse_calendar(shape.first, Granularity::monthly), shape.months);

  std::vector<Indicator> indicators;
  const std::size_t extra = shape.indicators >= 2 ? shape.indicators - 2 : 0;
  for (std::size_t i = 0; i < extra; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "feature_%02zu", i);
    static constexpr const char* units[] = {"events", "share", "index", "people"};
    indicators.push_back(Indicator{id, "Feature " + std::to_string(i), units[i % 4]});
  }
  indicators.push_back(Indicator{"ground_truth", "Fatalities", "people"});
  indicators.push_back(Indicator{"prediction", "Predicted conflict probability", ""});
  std::sort(indicators.begin(), indicators.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<Value> values(regions.size() * axis.size() * indicators.size());
  const std::size_t periods = axis.size();
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const double intensity = rng.uniform();
    for (std::size_t i = 0; i < indicators.size(); ++i) {
      const std::string& id = indicators[i].id;
      const std::size_t kind = id == "ground_truth" ? 10 : id == "prediction" ? 11 : i % 4;
      const double scale = std::pow(10.0, 5 + 3 * rng.uniform());
      for (std::size_t p = 0; p < periods; ++p) {
        Value v;
        const double u = rng.uniform();
        switch (kind) {
          case 10: v = std::floor(std::exp(u * 8 * intensity)) - 1; break;
          case 11: v = std::clamp(intensity * 0.6 + u * 0.4, 0.0, 1.0); break;
          case 0: v = std::floor(u * u * 1000); break;
          case 1: v = std::round(u * 1000) / 1000; break;
          case 2: v = std::round(u * 1000) / 10; break;
          default: v = std::floor(scale * (0.9 + 0.2 * u)); break;
        }
        if (kind < 10 && rng.chance(shape.missing_rate)) v.reset();
        values[(r * indicators.size() + i) * periods + p] = v;
      }
    }
  }
  return Dataset(regions, axis, indicators, {Track{"ground_truth", "ground_truth"}, Track{"prediction", "prediction"}},
                 std::move(values), "synthetic conflict-shaped fixture");
}

struct PandemicShape {
  std::size_t regions = 180;
  std::string first = "2020-01-22";
  std::size_t days = 730;
  std::uint64_t seed = 2020;
};

/// Daily cumulative counts ("confirmed", "deaths", "recovered") following
/// per-country logistic waves.
inline Dataset pandemic_dataset(const PandemicShape& shape = {}) {
  Rng rng(shape.seed);
  const auto regions = first_countries(shape.regions);
  const PeriodAxis axis(Granularity::daily, parse_calendar(shape.first, Granularity::daily), shape.days);
  const std::vector<Indicator> indicators{{"confirmed", "Confirmed cases", "people"},
                                          {"deaths", "Deaths", "people"},
                                          {"recovered", "Recovered", "people"}};
  const std::size_t periods = axis.size();
  std::vector<Value> values(regions.size() * periods * indicators.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const double population = std::pow(10.0, 5 + 4 * rng.uniform());
    const double midpoint = 60 + rng.uniform() * static_cast<double>(periods);
    const double steepness = 0.02 + 0.08 * rng.uniform();
    const double attack = 0.05 + 0.3 * rng.uniform();
    const double fatality = 0.002 + 0.02 * rng.uniform();
    for (std::size_t p = 0; p < periods; ++p) {
      const double confirmed =
          std::floor(population * attack / (1 + std::exp(-steepness * (static_cast<double>(p) - midpoint))));
      values[(r * 3 + 0) * periods + p] = confirmed;
      values[(r * 3 + 1) * periods + p] = std::floor(confirmed * fatality);
      values[(r * 3 + 2) * periods + p] = p >= 14 ? std::floor(*values[(r * 3 + 0) * periods + p - 14] * 0.97) : 0.0;
    }
  }
  return Dataset(regions, axis, indicators, {Track{"confirmed", "confirmed"}, Track{"deaths", "deaths"}},
                 std::move(values), "synthetic pandemic-shaped fixture");
}

struct RandomLimits {
  std::size_t max_regions = 10;
  std::size_t max_periods = 24;
  std::size_t max_indicators = 5;
  std::size_t max_tracks = 2;
};

/// A small valid dataset with regions drawn from countries and their
/// subdivisions, and values spanning integers, fractions, negative zero,
/// extreme exponents and MISSING.
inline Dataset random_dataset(std::uint64_t seed, const RandomLimits& limits = {},
                              const RegionRegistry& registry = RegionRegistry::bundled()) {
  Rng rng(seed);
  const auto entries = registry.entries();
  std::vector<RegionCode> regions;
  const std::size_t n_regions = 1 + rng.below(limits.max_regions);
  while (regions.size() < n_regions) {
    RegionCode code = entries[rng.below(entries.size())].code;
    if (rng.chance(0.3) && code.is_subdivision()) code = code.parent();
    if (std::find(regions.begin(), regions.end(), code) == regions.end()) regions.push_back(code);
  }
  std::sort(regions.begin(), regions.end());

  const Granularity g = rng.chance(0.5) ? Granularity::monthly : Granularity::daily;
  const CalendarSerial first =
      g == Granularity::monthly ? CalendarSerial{1990 * 12} + static_cast<CalendarSerial>(rng.below(400))
                                : CalendarSerial{7000} + static_cast<CalendarSerial>(rng.below(12000));
  const PeriodAxis axis(g, first, 1 + rng.below(limits.max_periods));

  std::vector<Indicator> indicators;
  const std::size_t n_ind = 1 + rng.below(limits.max_indicators);
  for (std::size_t i = 0; i < n_ind; ++i)
    indicators.push_back(Indicator{"ind_" + std::to_string(i), "Indicator " + std::to_string(i), i % 2 ? "unit" : ""});

  std::vector<Track> tracks;
  const std::size_t n_tracks = 1 + rng.below(std::min(limits.max_tracks, n_ind));
  for (std::size_t t = 0; t < n_tracks; ++t)
    tracks.push_back(Track{"track_" + std::to_string(t), indicators[rng.below(n_ind)].id});

  std::vector<Value> values(regions.size() * axis.size() * indicators.size());
  for (auto& v : values) {
    const double u = rng.uniform();
    switch (rng.below(8)) {
      case 0: v.reset(); break;
      case 1: v = std::floor(u * 1e6); break;
      case 2: v = (u - 0.5) * 200; break;
      case 3: v = std::ldexp(u + 0.5, static_cast<int>(rng.below(2000)) - 1000); break;
      case 4: v = rng.chance(0.5) ? 0.0 : -0.0; break;
      case 5: v = std::round(u * 10000) / 100; break;
      case 6: v = -std::floor(u * 1e15); break;
      default: v = u; break;
    }
  }
  return Dataset(std::move(regions), axis, std::move(indicators), std::move(tracks), std::move(values),
                 "random fixture " + std::to_string(seed));
}

inline std::string format_value(const Value& v) {
  if (!v) return {};
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, end);
}

/// `region,period,indicator,value` CSV with one row per cell; MISSING is
/// an empty value field.
inline std::string to_csv(const Dataset& d) {
  std::string out = "region,period,indicator,value\n";
  out.reserve(d.cell_count() * 28);
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < d.periods().size(); ++p) labels.push_back(d.periods().label(p));
  for (std::size_t r = 0; r < d.regions().size(); ++r) {
    const std::string region = d.regions()[r].text();
    for (std::size_t i = 0; i < d.indicators().size(); ++i) {
      const auto series = d.series(r, i);
      for (std::size_t p = 0; p < series.size(); ++p) {
        out += region;
        out += ',';
        out += labels[p];
        out += ',';
        out += d.indicators()[i].id;
        out += ',';
        out += format_value(series[p]);
        out += '\n';
      }
    }
  }
  return out;
}

/// Ingest spec matching to_csv output for `d`.
inline IngestSpec csv_spec_for(const Dataset& d) {
  IngestSpec spec;
  spec.format = SourceFormat::csv;
  spec.granularity = d.periods().granularity();
  spec.tracks = d.tracks();
  for (const auto& ind : d.indicators()) spec.indicator_info[ind.id] = ind;
  spec.provenance = d.provenance();
  return spec;
}

/// Minimal SVG map: one labelled rectangle per region, id = canonical code,
/// laid out on a grid, plus an id-less background.
inline std::string fixture_map_svg(const std::vector<RegionCode>& regions) {
  const std::size_t cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(regions.size())))));
  const std::size_t rows = regions.empty() ? 1 : (regions.size() + cols - 1) / cols;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(cols * 60) + "\" height=\"" +
         std::to_string(rows * 40) + "\" viewBox=\"0 0 " + std::to_string(cols * 60) + " " + std::to_string(rows * 40) + "\">\n";
  out += "  <!-- fixture map: one cell per region -->\n";
  out += "  <rect class=\"ocean\" x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#f0f4f8\"/>\n";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::size_t x = (i % cols) * 60, y = (i / cols) * 40;
    const std::string code = regions[i].text();
    out += "  <path id=\"" + code + "\" class=\"region\" d=\"M" + std::to_string(x + 2) + " " + std::to_string(y + 2) +
           "h56v36h-56z\" fill=\"#e0e0e0\" stroke=\"#ffffff\"><title>" + code + "</title></path>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace seismo::fixtures
