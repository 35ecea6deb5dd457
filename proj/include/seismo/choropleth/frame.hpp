#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/chunker/canonical_json.hpp"
#include "seismo/chunker/summary.hpp"
#include "seismo/choropleth/scale.hpp"

namespace seismo {

/// One period's region -> color assignment for one track.
struct ChoroplethFrame {
  Period period;
  std::string track;
  std::map<RegionCode, Color> assignment;
  std::optional<std::string> svg;

  friend bool operator==(const ChoroplethFrame&, const ChoroplethFrame&) = default;
};

inline ChoroplethFrame color_frame(const GlobalSummary& summary, std::size_t ordinal, std::string_view track,
                                   const ColorScale& scale) {
  std::size_t t = 0;
  while (t < summary.tracks.size() && summary.tracks[t].name != track) ++t;
  if (t == summary.tracks.size()) throw Error(Errc::unknown_track, "no track '" + std::string(track) + "'");
  ChoroplethFrame frame{summary.periods.at(ordinal), std::string(track), {}, std::nullopt};
  for (std::size_t r = 0; r < summary.regions.size(); ++r)
    frame.assignment.emplace(summary.regions[r], scale.color(summary.at(t, r, ordinal)));
  return frame;
}

/// Assignment as a flat {"CODE": "#rrggbb"} JSON object.
inline std::string frame_json(const ChoroplethFrame& frame) {
  std::string out;
  detail::CanonicalWriter w(out);
  w.begin_object();
  for (const auto& [region, color] : frame.assignment) w.key(region.text()).string(color.hex());
  w.end_object();
  return out;
}

namespace detail {

inline std::vector<double> track_values(const GlobalSummary& summary, std::string_view track) {
  const SummaryTrack* t = summary.find_track(track);
  if (!t) throw Error(Errc::unknown_track, "no track '" + std::string(track) + "'");
  std::vector<double> out;
  for (const auto& v : t->values)
    if (v) out.push_back(*v);
  return out;
}

}  // namespace detail

/// Linear scale over the track's [min, max] across all periods, so colors
/// stay comparable during playback. A constant or empty track gets the
/// domain [v, v + 1] (or [0, 1]) and colors every present value with the
/// first ramp step.
inline ColorScale whole_range_linear(const GlobalSummary& summary, std::string_view track,
                                     std::vector<Color> ramp = default_ramp(), Color missing = default_missing_color()) {
  const auto values = detail::track_values(summary, track);
  if (values.empty()) return ColorScale::linear(0, 1, std::move(ramp), missing);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double max = *hi > *lo ? *hi : *lo + 1;
  return ColorScale::linear(*lo, max, std::move(ramp), missing);
}

/// Quantile scale sampled from every present value of the track.
inline ColorScale whole_range_quantile(const GlobalSummary& summary, std::string_view track,
                                       std::vector<Color> ramp = default_ramp(), Color missing = default_missing_color()) {
  return ColorScale::quantile(detail::track_values(summary, track), std::move(ramp), missing);
}

}  // namespace seismo
