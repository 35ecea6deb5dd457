#pragma once

#include <charconv>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/error.hpp"

namespace seismo {

enum class Granularity { monthly, daily };

constexpr std::string_view to_string(Granularity g) noexcept {
  return g == Granularity::monthly ? "monthly" : "daily";
}

inline Granularity parse_granularity(std::string_view text) {
  if (text == "monthly") return Granularity::monthly;
  if (text == "daily") return Granularity::daily;
  throw Error(Errc::format_error, "granularity must be 'monthly' or 'daily', got '" + std::string(text) + "'");
}

namespace detail {

inline std::optional<int> fixed_digits(std::string_view s) {
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

inline void append_padded(std::string& out, int value, int width) {
  char buf[8];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  for (int pad = width - static_cast<int>(end - buf); pad > 0; --pad) out += '0';
  out.append(buf, end);
}

}  // namespace detail

/// Absolute position on a calendar axis: months since 0000-01 for monthly,
/// days since 1970-01-01 for daily.
using CalendarSerial = std::int64_t;

inline std::optional<CalendarSerial> try_parse_calendar(std::string_view text, Granularity g) {
  const std::size_t expected = g == Granularity::monthly ? 7 : 10;
  if (text.size() != expected || text[4] != '-') return std::nullopt;
  const auto year = detail::fixed_digits(text.substr(0, 4));
  const auto month = detail::fixed_digits(text.substr(5, 2));
  if (!year || !month || *month < 1 || *month > 12) return std::nullopt;
  if (g == Granularity::monthly) return CalendarSerial{*year} * 12 + (*month - 1);

  if (text[7] != '-') return std::nullopt;
  const auto day = detail::fixed_digits(text.substr(8, 2));
  if (!day) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                                        std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

inline CalendarSerial parse_calendar(std::string_view text, Granularity g) {
  if (auto serial = try_parse_calendar(text, g)) return *serial;
  throw Error(Errc::format_error, "'" + std::string(text) + "' is not a " + std::string(to_string(g)) +
                                      (g == Granularity::monthly ? " period (YYYY-MM)" : " period (YYYY-MM-DD)"));
}

inline std::string format_calendar(CalendarSerial serial, Granularity g) {
  std::string out;
  if (g == Granularity::monthly) {
    detail::append_padded(out, static_cast<int>(serial / 12), 4);
    out += '-';
    detail::append_padded(out, static_cast<int>(serial % 12) + 1, 2);
    return out;
  }
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{serial}}};
  detail::append_padded(out, static_cast<int>(ymd.year()), 4);
  out += '-';
  detail::append_padded(out, static_cast<int>(static_cast<unsigned>(ymd.month())), 2);
  out += '-';
  detail::append_padded(out, static_cast<int>(static_cast<unsigned>(ymd.day())), 2);
  return out;
}

/// One step of a dataset's time axis. `ordinal` is relative to the axis
/// epoch; `serial` is the absolute calendar position.
struct Period {
  Granularity granularity = Granularity::monthly;
  std::size_t ordinal = 0;
  CalendarSerial serial = 0;

  std::string label() const { return format_calendar(serial, granularity); }

  friend bool operator==(const Period&, const Period&) = default;
};

/// Dense, contiguous period range starting at `first`.
class PeriodAxis {
 public:
  PeriodAxis() = default;
  PeriodAxis(Granularity g, CalendarSerial first, std::size_t count)
      : granularity_(g), first_(first), count_(count) {}

  static PeriodAxis between(std::string_view first, std::string_view last, Granularity g) {
    const CalendarSerial a = parse_calendar(first, g);
    const CalendarSerial b = parse_calendar(last, g);
    if (b < a)
      throw Error(Errc::reversed_range, std::string(first) + " is after " + std::string(last));
    return PeriodAxis(g, a, static_cast<std::size_t>(b - a + 1));
  }

  Granularity granularity() const noexcept { return granularity_; }
  CalendarSerial first_serial() const noexcept { return first_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  Period at(std::size_t ordinal) const {
    if (ordinal >= count_)
      throw Error(Errc::period_out_of_range,
                  "ordinal " + std::to_string(ordinal) + " outside [0, " + std::to_string(count_) + ")");
    return Period{granularity_, ordinal, first_ + static_cast<CalendarSerial>(ordinal)};
  }

  std::string label(std::size_t ordinal) const { return at(ordinal).label(); }
  std::string first_label() const { return format_calendar(first_, granularity_); }
  std::string last_label() const {
    return count_ == 0 ? std::string{} : format_calendar(first_ + static_cast<CalendarSerial>(count_) - 1, granularity_);
  }

  std::optional<std::size_t> ordinal_of(CalendarSerial serial) const noexcept {
    if (serial < first_ || serial >= first_ + static_cast<CalendarSerial>(count_)) return std::nullopt;
    return static_cast<std::size_t>(serial - first_);
  }

  std::optional<std::size_t> ordinal_of(std::string_view label) const {
    const auto serial = try_parse_calendar(label, granularity_);
    return serial ? ordinal_of(*serial) : std::nullopt;
  }

  std::vector<Period> periods() const {
    std::vector<Period> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.push_back(at(i));
    return out;
  }

  friend bool operator==(const PeriodAxis&, const PeriodAxis&) = default;

 private:
  Granularity granularity_ = Granularity::monthly;
  CalendarSerial first_ = 0;
  std::size_t count_ = 0;
};

inline std::vector<Period> period_range(std::string_view first, std::string_view last, Granularity g) {
  return PeriodAxis::between(first, last, g).periods();
}

}  // namespace seismo
