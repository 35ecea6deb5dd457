#include <gtest/gtest.h>

#include "seismo/fixtures.hpp"
#include "seismo/ingest/ingest.hpp"
#include "test_support.hpp"

using namespace seismo;

namespace {

IngestSpec cases_spec(SourceFormat format = SourceFormat::csv) {
  IngestSpec spec;
  spec.format = format;
  spec.tracks = {Track{"cases", "cases"}};
  return spec;
}

const char* kTwoRows = "region,period,indicator,value\nDE,2020-01,cases,5\nDE,2020-02,cases,7";

template <class F>
Errc error_of(F&& f, std::optional<std::size_t>* row = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (row) *row = e.row();
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::format_error;
}

}  // namespace

TEST(IngestCsv, TwoRows) {
  const Dataset d = ingest(kTwoRows, cases_spec());
  ASSERT_EQ(d.regions().size(), 1u);
  ASSERT_EQ(d.periods().size(), 2u);
  ASSERT_EQ(d.indicators().size(), 1u);
  const RegionCode de = parse_region_code("DE");
  EXPECT_EQ(d.value(de, 0, "cases"), 5.0);
  EXPECT_EQ(d.value(de, 1, "cases"), 7.0);
  EXPECT_EQ(d.periods().first_label(), "2020-01");
}

TEST(IngestCsv, RepeatedCellIsDuplicate) {
  std::optional<std::size_t> row;
  const std::string src = std::string(kTwoRows) + "\nDE,2020-01,cases,9\n";
  EXPECT_EQ(error_of([&] { ingest(src, cases_spec()); }, &row), Errc::duplicate_cell);
  EXPECT_EQ(row, 4u);
}

TEST(IngestCsv, CrlfQuotesAndNames) {
  const std::string src =
      "value,indicator,period,region\r\n"
      "\"1.5e3\",cases,2020-01,\"Germany\"\r\n"
      "\"-2\",cases,2020-01,\"Korea, Republic of\"\r\n";
  const Dataset d = ingest(src, cases_spec());
  EXPECT_EQ(d.value(parse_region_code("DE"), 0, "cases"), 1500.0);
  EXPECT_EQ(d.value(parse_region_code("KR"), 0, "cases"), -2.0);
}

TEST(IngestCsv, RemappedColumnsAndMissingToken) {
  IngestSpec spec = cases_spec();
  spec.columns = ColumnMapping{"iso", "month", "var", "x"};
  spec.missing_token = "NA";
  const Dataset d = ingest("iso,month,var,x\nFR,2020-01,cases,NA\nFR,2020-02,cases,0\n", spec);
  EXPECT_FALSE(d.value(parse_region_code("FR"), 0, "cases").has_value());
  EXPECT_EQ(d.value(parse_region_code("FR"), 1, "cases"), 0.0);
}

TEST(IngestCsv, ThousandsSeparatorRejected) {
  std::optional<std::size_t> row;
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nDE,2020-01,cases,\"1,000\"\n", cases_spec()); }, &row),
            Errc::value_error);
  EXPECT_EQ(row, 2u);
}

TEST(IngestCsv, UnknownRegionCitesRow) {
  std::optional<std::size_t> row;
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nAtlantis,2020-01,cases,1\n", cases_spec()); }, &row),
            Errc::region_error);
  EXPECT_EQ(row, 2u);
}

TEST(IngestCsv, SkipBadRowsCounts) {
  IngestSpec spec = cases_spec();
  spec.skip_bad_rows = true;
  IngestStats stats;
  const Dataset d = ingest("region,period,indicator,value\nAtlantis,2020-01,cases,1\nDE,2020-13,cases,1\n"
                           "DE,2020-01,cases,x\nDE,2020-01,cases,4\n",
                           spec, RegionRegistry::bundled(), &stats);
  EXPECT_EQ(stats.skipped_rows, 3u);
  EXPECT_EQ(stats.records, 4u);
  EXPECT_EQ(d.observed_count(), 1u);
}

TEST(IngestCsv, MalformedInputs) {
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator\nDE,2020-01,cases\n", cases_spec()); }), Errc::schema_error);
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nDE,2020-01,cases,\"5\n", cases_spec()); }),
            Errc::schema_error);
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nDE,2020-01\n", cases_spec()); }), Errc::schema_error);
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nDE,2020-01,cases,\xff\n", cases_spec()); }),
            Errc::decode_error);
  EXPECT_EQ(error_of([&] { ingest("region,period,indicator,value\nDE,2020-01,Cases!,1\n", cases_spec()); }),
            Errc::indicator_error);
}

TEST(IngestCsv, TrackSourceMustAppear) {
  IngestSpec spec = cases_spec();
  spec.tracks = {Track{"deaths", "deaths"}};
  EXPECT_EQ(error_of([&] { ingest(kTwoRows, spec); }), Errc::schema_error);
}

TEST(IngestJson, ColumnarMatchesRowCsv) {
  const Dataset columnar = ingest(
      R"({"region":["DE","FR"],"period":["2020-01","2020-01"],"indicator":["cases","cases"],"value":[5,3]})",
      cases_spec(SourceFormat::json_columnar));
  EXPECT_EQ(columnar.regions().size(), 2u);
  EXPECT_EQ(columnar.periods().size(), 1u);
  const Dataset csv = ingest("region,period,indicator,value\nDE,2020-01,cases,5\nFR,2020-01,cases,3\n", cases_spec());
  EXPECT_EQ(columnar, csv);
}

TEST(IngestJson, RowsWithNullAndStrings) {
  const Dataset d = ingest(
      R"([{"region":"DE","period":"2020-01","indicator":"cases","value":null},
          {"region":"DE","period":"2020-02","indicator":"cases","value":"7"}])",
      cases_spec(SourceFormat::json_rows));
  EXPECT_FALSE(d.value(parse_region_code("DE"), 0, "cases").has_value());
  EXPECT_EQ(d.value(parse_region_code("DE"), 1, "cases"), 7.0);
}

TEST(IngestJson, ErrorsCiteRecord) {
  std::optional<std::size_t> row;
  EXPECT_EQ(error_of([&] {
              ingest(R"([{"region":"DE","period":"2020-01","indicator":"cases","value":1},
                         {"region":"XZ","period":"2020-01","indicator":"cases","value":1}])",
                     cases_spec(SourceFormat::json_rows));
            }, &row),
            Errc::region_error);
  EXPECT_EQ(row, 2u);
  EXPECT_EQ(error_of([&] {
              ingest(R"({"region":["DE"],"period":["2020-01","2020-02"],"indicator":["cases"],"value":[1]})",
                     cases_spec(SourceFormat::json_columnar));
            }),
            Errc::schema_error);
  EXPECT_EQ(error_of([&] { ingest("[1,", cases_spec(SourceFormat::json_rows)); }), Errc::decode_error);
}

TEST(IngestHtml, MirrorsCsv) {
  const std::string html =
      "<html><body><p>intro</p><table class=\"data\">\n"
      "<thead><tr><th>region</th><th>period</th><th>indicator</th><th>value</th></tr></thead>\n"
      "<tbody><tr><td>DE</td><td>2020-01</td><td>cases</td><td>5</td></tr>\n"
      "<tr><td> DE </td><td>2020-02</td><td><b>cases</b></td><td>7</td></tr></tbody></table>"
      "<table><tr><th>ignored</th></tr></table></body></html>";
  EXPECT_EQ(ingest_html_table(html, cases_spec()), ingest(kTwoRows, cases_spec()));
}

TEST(IngestHtml, NoTable) {
  EXPECT_EQ(error_of([&] { ingest_html_table("<html><body><p>nothing</p></body></html>", cases_spec()); }),
            Errc::no_table_found);
}

TEST(IngestHtml, EntitiesDecodedBeforeResolution) {
  const std::string html =
      "<table><tr><th>region</th><th>period</th><th>indicator</th><th>value</th></tr>"
      "<tr><td>Trinidad &amp; Tobago</td><td>2020-01</td><td>cases</td><td>1</td></tr>"
      "<tr><td>Bosnia &#38; Herzegovina</td><td>2020-01</td><td>cases</td><td>2</td></tr></table>";
  const Dataset d = ingest_html_table(html, cases_spec());
  EXPECT_EQ(d.value(parse_region_code("TT"), 0, "cases"), 1.0);
  EXPECT_EQ(d.value(parse_region_code("BA"), 0, "cases"), 2.0);
}

TEST(IngestHtml, RowNumbersCountTableRows) {
  std::optional<std::size_t> row;
  const std::string html =
      "<table><tr><th>region</th><th>period</th><th>indicator</th><th>value</th></tr>"
      "<tr><td>DE</td><td>2020-01</td><td>cases</td><td>1</td></tr>"
      "<tr><td>DE</td><td>Jan</td><td>cases</td><td>1</td></tr></table>";
  EXPECT_EQ(error_of([&] { ingest_html_table(html, cases_spec()); }, &row), Errc::period_error);
  EXPECT_EQ(row, 3u);
}

TEST(Validate, TwoRowDatasetIsClean) {
  const ValidationReport r = validate(ingest(kTwoRows, cases_spec()));
  EXPECT_TRUE(r.ok());
  ASSERT_NE(r.coverage_of("cases"), nullptr);
  EXPECT_DOUBLE_EQ(r.coverage_of("cases")->coverage(), 1.0);
}

TEST(Validate, GapMonthCoverage) {
  const Dataset d = ingest("region,period,indicator,value\nDE,2020-01,cases,5\nDE,2020-03,cases,7\n", cases_spec());
  const ValidationReport r = validate(d);
  EXPECT_TRUE(r.violations.empty());
  // Brute-force count over the grid.
  std::size_t present = 0;
  for (const auto& v : d.values()) present += v.has_value();
  const auto* cov = r.coverage_of("cases");
  ASSERT_NE(cov, nullptr);
  EXPECT_EQ(cov->observed, present);
  EXPECT_EQ(cov->total, d.cell_count());
  EXPECT_EQ(cov->observed, 2u);
  EXPECT_EQ(cov->total, 3u);
  EXPECT_EQ(r.periods_with_data, 2u);
}

TEST(Validate, UndeclaredTrackIndicator) {
  const Dataset d(std::vector<RegionCode>{parse_region_code("DE")}, PeriodAxis(Granularity::monthly, 24000, 1),
                  {Indicator{"cases", "cases", ""}}, {Track{"deaths", "deaths"}}, {Value{1.0}});
  EXPECT_EQ(validate(d).violations.size(), 1u);
}

TEST(Validate, SourceReportCountsSkips) {
  IngestSpec spec = cases_spec();
  spec.skip_bad_rows = true;
  const auto r = validate_source("region,period,indicator,value\nDE,2020-01,cases,1\nXZ,2020-01,cases,1\n", spec);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.skipped_rows, 1u);
}

TEST(IngestSpec, JsonRoundTrip) {
  IngestSpec spec = cases_spec(SourceFormat::json_columnar);
  spec.granularity = Granularity::daily;
  spec.missing_token = "-";
  spec.indicator_info["cases"] = Indicator{"cases", "Confirmed cases", "people"};
  const IngestSpec back = IngestSpec::from_json(spec.to_json());
  EXPECT_EQ(back.format, spec.format);
  EXPECT_EQ(back.granularity, spec.granularity);
  EXPECT_EQ(back.missing_token, "-");
  EXPECT_EQ(back.indicator_info.at("cases").name, "Confirmed cases");
  EXPECT_EQ(back.tracks.size(), 1u);
}

TEST(IngestSpec, Rejections) {
  EXPECT_THROW(IngestSpec::from_json(R"({"tracks":[]})"), Error);
  EXPECT_THROW(IngestSpec::from_json(R"({"tracks":[{"name":"a","indicator":"a"}],"bogus":1})"), Error);
  EXPECT_THROW(IngestSpec::from_json(
                   R"({"tracks":[{"name":"a","indicator":"a"}],"columns":{"region":"x","period":"x"}})"),
               Error);
}

TEST(IngestDeterminism, SameBytesSameDataset) {
  const Dataset d = fixtures::random_dataset(7);
  const std::string csv = fixtures::to_csv(d);
  const IngestSpec spec = fixtures::csv_spec_for(d);
  const Dataset a = ingest(csv, spec), b = ingest(csv, spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(IngestDensify, EveryRecordRetrievable) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset d = fixtures::random_dataset(seed);
    const Dataset back = ingest(fixtures::to_csv(d), fixtures::csv_spec_for(d));
    ASSERT_EQ(back.cell_count(), d.cell_count());
    for (std::size_t i = 0; i < d.values().size(); ++i)
      ASSERT_TRUE(testing_support::same_value(d.values()[i], back.values()[i])) << "seed " << seed << " cell " << i;
  }
}
