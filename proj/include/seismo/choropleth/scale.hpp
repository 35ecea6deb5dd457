#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/error.hpp"

namespace seismo {

struct Color {
  std::uint8_t r = 0, g = 0, b = 0;

  /// Strict `#RRGGBB`; hex digits in either case.
  static Color parse(std::string_view text) {
    auto nibble = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(Errc::invalid_scale, "'" + std::string(text) + "' is not a #RRGGBB color");
    };
    if (text.size() != 7 || text[0] != '#') throw Error(Errc::invalid_scale, "'" + std::string(text) + "' is not a #RRGGBB color");
    auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(text[i]) * 16 + nibble(text[i + 1])); };
    return Color{byte(1), byte(3), byte(5)};
  }

  /// Lowercase `#rrggbb`.
  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "#";
    for (std::uint8_t c : {r, g, b}) {
      out += digits[c >> 4];
      out += digits[c & 0xF];
    }
    return out;
  }

  friend bool operator==(const Color&, const Color&) = default;
};

enum class ScaleKind { linear, quantile };

/// 7-step light-to-dark single-hue ramp (ColorBrewer Reds).
inline std::vector<Color> default_ramp() {
  return {Color::parse("#fee5d9"), Color::parse("#fcbba1"), Color::parse("#fc9272"), Color::parse("#fb6a4a"),
          Color::parse("#ef3b2c"), Color::parse("#cb181d"), Color::parse("#99000d")};
}

inline Color default_missing_color() { return Color{0xcc, 0xcc, 0xcc}; }

/// Maps values to one of B ramp colors.
///
/// Linear scales split [min, max] into B equal bins; values outside clamp
/// to the end bins. Quantile scales keep a sorted sample and place the
/// B-1 breaks at sample[floor(k*n/B)], k = 1..B-1, with left-closed bins,
/// so n distinct sample values fill the bins within one of each other.
class ColorScale {
 public:
  static ColorScale linear(double min, double max, std::vector<Color> ramp = default_ramp(),
                           Color missing = default_missing_color()) {
    ColorScale s(ScaleKind::linear, std::move(ramp), missing);
    if (!std::isfinite(min) || !std::isfinite(max))
      throw Error(Errc::invalid_scale, "linear domain must be finite");
    if (max < min) throw Error(Errc::invalid_scale, "linear domain has min > max");
    s.min_ = min;
    s.max_ = max;
    const std::size_t b = s.bins();
    for (std::size_t k = 0; k <= b; ++k)
      s.edges_.push_back(min + (max - min) * static_cast<double>(k) / static_cast<double>(b));
    return s;
  }

  static ColorScale quantile(std::vector<double> sample, std::vector<Color> ramp = default_ramp(),
                             Color missing = default_missing_color()) {
    ColorScale s(ScaleKind::quantile, std::move(ramp), missing);
    std::erase_if(sample, [](double v) { return !std::isfinite(v); });
    std::sort(sample.begin(), sample.end());
    s.sample_ = std::move(sample);
    const std::size_t n = s.sample_.size();
    const std::size_t bins = s.bins();
    if (n > 0)
      for (std::size_t k = 1; k < bins; ++k) s.breaks_.push_back(s.sample_[k * n / bins]);
    return s;
  }

  ScaleKind kind() const noexcept { return kind_; }
  std::size_t bins() const noexcept { return ramp_.size(); }
  const std::vector<Color>& ramp() const noexcept { return ramp_; }
  Color missing_color() const noexcept { return missing_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  const std::vector<double>& sample() const noexcept { return sample_; }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& edges() const noexcept { return edges_; }

  /// Bin of a present value, in [0, B-1].
  std::size_t bin_index(double value) const {
    const std::size_t b = bins();
    if (kind_ == ScaleKind::linear) {
      if (!(min_ < max_)) throw Error(Errc::degenerate_scale, "linear scale with min == max");
      const double pos = std::floor((value - min_) / (max_ - min_) * static_cast<double>(b));
      std::size_t i = !(pos > 0) ? 0 : pos >= static_cast<double>(b - 1) ? b - 1 : static_cast<std::size_t>(pos);
      // The quotient can land one bin off next to a rounded edge.
      while (i > 0 && value < edges_[i]) --i;
      while (i + 1 < b && value >= edges_[i + 1]) ++i;
      return i;
    }
    if (sample_.empty()) throw Error(Errc::degenerate_scale, "quantile scale with an empty sample");
    return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), value) - breaks_.begin());
  }

  Color color(const std::optional<double>& value) const { return value ? ramp_[bin_index(*value)] : missing_; }

 private:
  ColorScale(ScaleKind kind, std::vector<Color> ramp, Color missing)
      : kind_(kind), ramp_(std::move(ramp)), missing_(missing) {
    if (ramp_.size() < 2) throw Error(Errc::invalid_scale, "a scale needs at least 2 bins");
  }

  ScaleKind kind_;
  std::vector<Color> ramp_;
  Color missing_;
  double min_ = 0, max_ = 0;
  std::vector<double> sample_;
  std::vector<double> breaks_;
  /// Linear bin i is [edges_[i], edges_[i+1]), end bins open outward.
  std::vector<double> edges_;
};

inline std::size_t bin_index(double value, const ColorScale& scale) { return scale.bin_index(value); }

}  // namespace seismo
