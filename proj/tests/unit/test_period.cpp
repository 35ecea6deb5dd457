#include <gtest/gtest.h>

#include "seismo/core/period.hpp"
#include "seismo/error.hpp"

using namespace seismo;

TEST(PeriodRange, ThreeMonths) {
  const auto ps = period_range("2000-01", "2000-03", Granularity::monthly);
  ASSERT_EQ(ps.size(), 3u);
  const char* labels[] = {"2000-01", "2000-02", "2000-03"};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(ps[i].ordinal, i);
    EXPECT_EQ(ps[i].label(), labels[i]);
  }
}

TEST(PeriodRange, SinglePeriod) {
  const auto ps = period_range("2001-01", "2001-01", Granularity::monthly);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].ordinal, 0u);
}

TEST(PeriodRange, TwentyYearsOfMonths) {
  EXPECT_EQ(period_range("2000-01", "2019-12", Granularity::monthly).size(), 20u * 12u);
}

TEST(PeriodRange, DailyAcrossLeapDay) {
  const auto ps = period_range("2020-02-27", "2020-03-01", Granularity::daily);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(ps[2].label(), "2020-02-29");
  EXPECT_EQ(period_range("2019-02-28", "2019-03-01", Granularity::daily).size(), 2u);
}

TEST(PeriodRange, ReversedRangeFails) {
  try {
    period_range("2000-03", "2000-01", Granularity::monthly);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::reversed_range);
  }
}

TEST(PeriodParse, RejectsBadCalendarForms) {
  for (const char* bad : {"2000-13", "2000-00", "2000-1", "20000-01", "2000-01-01", "abcd-01"})
    EXPECT_THROW(parse_calendar(bad, Granularity::monthly), Error) << bad;
  for (const char* bad : {"2021-02-29", "2020-04-31", "2020-01", "2020-1-01"})
    EXPECT_THROW(parse_calendar(bad, Granularity::daily), Error) << bad;
  EXPECT_NO_THROW(parse_calendar("2000-02-29", Granularity::daily));
  EXPECT_THROW(parse_calendar("1900-02-29", Granularity::daily), Error);
}

TEST(PeriodAxis, OrdinalCalendarBijection) {
  for (const auto g : {Granularity::monthly, Granularity::daily}) {
    const auto first = g == Granularity::monthly ? "1999-11" : "1999-12-25";
    const PeriodAxis axis(g, parse_calendar(first, g), 800);
    for (std::size_t i = 0; i < axis.size(); ++i) {
      const std::string label = axis.label(i);
      EXPECT_EQ(format_calendar(parse_calendar(label, g), g), label);
      ASSERT_EQ(axis.ordinal_of(label), i);
    }
    EXPECT_FALSE(axis.ordinal_of(axis.first_serial() - 1).has_value());
    EXPECT_THROW(axis.at(axis.size()), Error);
  }
}

TEST(PeriodAxis, LastLabel) {
  const auto axis = PeriodAxis::between("2000-01", "2019-12", Granularity::monthly);
  EXPECT_EQ(axis.first_label(), "2000-01");
  EXPECT_EQ(axis.last_label(), "2019-12");
}

TEST(Granularity, ParseAndName) {
  EXPECT_EQ(parse_granularity("daily"), Granularity::daily);
  EXPECT_EQ(to_string(Granularity::monthly), "monthly");
  EXPECT_THROW(parse_granularity("weekly"), Error);
}
