#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "seismo/choropleth/frame.hpp"

namespace seismo {

/// A scale recipe selectable by name; the domain or sample is taken from
/// the whole time range of whichever track it is applied to.
struct NamedScale {
  std::string name;
  ScaleKind kind = ScaleKind::linear;
  std::vector<Color> ramp = default_ramp();
  Color missing = default_missing_color();

  ColorScale build(const GlobalSummary& summary, std::string_view track) const {
    return kind == ScaleKind::linear ? whole_range_linear(summary, track, ramp, missing)
                                     : whole_range_quantile(summary, track, ramp, missing);
  }
};

/// "linear" (the default) and "quantile", both over the 7-step default ramp.
inline std::vector<NamedScale> default_named_scales() {
  return {NamedScale{"linear", ScaleKind::linear}, NamedScale{"quantile", ScaleKind::quantile}};
}

inline constexpr std::string_view default_scale_name = "linear";

inline const NamedScale* find_scale(const std::vector<NamedScale>& scales, std::string_view name) {
  for (const auto& s : scales)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace seismo
