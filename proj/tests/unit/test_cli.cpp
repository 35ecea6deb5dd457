#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include <json.hpp>

#include "seismo/cli/cli.hpp"
#include "test_support.hpp"

using namespace seismo;
using testing_support::TempDir;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kSpec = R"({"format":"csv","tracks":[{"name":"cases","indicator":"cases"}]})";

struct Source {
  TempDir dir{"seismo-cli"};
  std::string spec = (dir / "spec.json").string();
  std::string csv = (dir / "in.csv").string();
  std::string store = (dir / "store").string();

  explicit Source(const std::string& body) {
    detail::write_file(spec, kSpec);
    detail::write_file(csv, "region,period,indicator,value\n" + body);
  }
};

// Parses the aligned `label value` lines of the text report.
std::map<std::string, std::string> text_fields(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto last = line.find_last_of(' ');
    std::string label = line.substr(0, line.find_last_not_of(' ', last) + 1);
    out[label] = line.substr(last + 1);
  }
  return out;
}

}  // namespace

TEST(Cli, IngestTwoRows) {
  Source s("DE,2020-01,cases,5\nDE,2020-02,cases,7\n");
  const auto r = run({"ingest", "--format", "csv", "--spec", s.spec, "--in", s.csv, "--out", s.store});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t chunks = 0;
  for (const auto& e : std::filesystem::directory_iterator(s.store + "/chunks")) chunks += e.is_regular_file();
  EXPECT_EQ(chunks, 1u);
  EXPECT_TRUE(std::filesystem::exists(s.store + "/meta.json"));
  EXPECT_TRUE(std::filesystem::exists(s.store + "/summary.json"));
  EXPECT_NE(r.out.find("violations   0"), std::string::npos);
  EXPECT_NE(r.err.find("reading"), std::string::npos);
}

TEST(Cli, UnknownRegionCitesRow2) {
  Source s("Atlantis,2020-01,cases,5\n");
  const auto r = run({"ingest", "--spec", s.spec, "--in", s.csv, "--out", s.store});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(s.store));
}

TEST(Cli, SkipBadRowsFlag) {
  Source s("Atlantis,2020-01,cases,5\nDE,2020-01,cases,1\n");
  const auto r = run({"ingest", "--spec", s.spec, "--in", s.csv, "--out", s.store, "--skip-bad-rows"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("skipped rows 1"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"stats"}).code, 1);
  EXPECT_EQ(run({"stats", "--data", "x", "--bogus"}).code, 1);
  EXPECT_EQ(run({"stats", "--data", "/nonexistent/store"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ValidateReports) {
  Source s("DE,2020-01,cases,5\nDE,2020-03,cases,7\n");
  const auto r = run({"validate", "--spec", s.spec, "--in", s.csv, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["indicators"][0]["observed"], 2);
  EXPECT_EQ(j["indicators"][0]["total"], 3);
  EXPECT_EQ(run({"validate", "--spec", s.spec, "--in", s.csv}).code, 0);
  Source bad("DE,2020-01,cases,5\nDE,2020-01,cases,6\n");
  EXPECT_EQ(run({"validate", "--spec", bad.spec, "--in", bad.csv}).code, 1);
}

TEST(Cli, StatsTextMatchesJsonAndReport) {
  TempDir dir("seismo-stats");
  const Dataset d = fixtures::random_dataset(21);
  testing_support::write_store(d, dir.path());
  const auto text = run({"stats", "--data", dir.path().string()});
  const auto json = run({"stats", "--data", dir.path().string(), "--json"});
  ASSERT_EQ(text.code, 0);
  ASSERT_EQ(json.code, 0);
  const auto j = nlohmann::json::parse(json.out);
  const auto f = text_fields(text.out);
  EXPECT_GT(j["summary_bytes"].get<std::size_t>(), 0u);
  EXPECT_EQ(f.at("summary"), std::to_string(j["summary_bytes"].get<std::size_t>()));
  EXPECT_EQ(f.at("total"), std::to_string(j["total_bytes"].get<std::size_t>()));
  EXPECT_EQ(f.at("chunks"), std::to_string(j["chunk_count"].get<std::size_t>()));
  EXPECT_EQ(f.at("chunk max"), std::to_string(j["chunk_max_bytes"].get<std::size_t>()));
  EXPECT_EQ(j["total_bytes"].get<std::size_t>(), size_report(d).total);
}

TEST(Cli, PackRewritesVerifiedStore) {
  TempDir dir("seismo-pack");
  const Dataset d = fixtures::random_dataset(22);
  testing_support::write_store(d, dir / "a");
  const auto r = run({"pack", "--data", (dir / "a").string(), "--out", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(detail::read_file(dir / "a/summary.json"), detail::read_file(dir / "b/summary.json"));
  EXPECT_EQ(detail::read_file(dir / "a/meta.json"), detail::read_file(dir / "b/meta.json"));
  EXPECT_EQ(Store::open(dir / "b").dataset(), d);
}

TEST(Cli, ExportFramesMatchServer) {
  TempDir dir("seismo-frames");
  const Dataset d = testing_support::grid_dataset({"DE", "FR", "IT"}, "2020-01", 6,
                                                  [](auto r, auto p) { return (r + 1.0) * (p + 2.0); });
  testing_support::write_store(d, dir.path());
  const std::string out = (dir / "frames").string();
  const auto r = run({"export-frames", "--data", dir.path().string(), "--map", (dir / "map.svg").string(), "--track",
                      "cases", "--from", "1", "--to", "2020-04", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(out)) files += e.is_regular_file();
  EXPECT_EQ(files, 3u);

  testing_support::LiveServer live(testing_support::config_for(dir.path()));
  auto client = live.client();
  for (int ordinal = 1; ordinal <= 3; ++ordinal) {
    auto res = client.Get("/api/frame/" + std::to_string(ordinal) + "?track=cases", {{"Accept", "image/svg+xml"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(detail::read_file(out + "/frame-" + std::to_string(ordinal) + ".svg"), res->body) << ordinal;
  }
}

TEST(Cli, ExportFramesErrors) {
  TempDir dir("seismo-frames-bad");
  testing_support::write_store(testing_support::grid_dataset({"DE"}, "2020-01", 4, [](auto, auto p) { return p; }),
                               dir.path());
  const std::string data = dir.path().string(), map = (dir / "map.svg").string(), out = (dir / "f").string();
  EXPECT_EQ(run({"export-frames", "--data", data, "--map", map, "--track", "cases", "--from", "3", "--to", "1", "--out", out}).code, 1);
  EXPECT_EQ(run({"export-frames", "--data", data, "--map", map, "--track", "nope", "--from", "0", "--to", "1", "--out", out}).code, 1);
  EXPECT_EQ(run({"export-frames", "--data", data, "--map", map, "--track", "cases", "--from", "0", "--to", "9", "--out", out}).code, 1);
  EXPECT_EQ(run({"export-frames", "--data", data, "--map", map, "--track", "cases", "--from", "0", "--to", "1", "--out", out,
                 "--scale", "quantile"}).code, 0);
}

TEST(Cli, IdempotentIngest) {
  Source s("DE,2020-01,cases,5\nFR,2020-02,cases,7\n");
  const std::vector<std::string> args{"ingest", "--spec", s.spec, "--in", s.csv, "--out", s.store};
  ASSERT_EQ(run(args).code, 0);
  const std::string first = detail::read_file(s.store + "/meta.json");
  const auto again = run(args);
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(detail::read_file(s.store + "/meta.json"), first);
}

TEST(Cli, BinaryExitCodes) {
  const std::string exe = SEISMO_CLI_PATH;
  EXPECT_EQ(WEXITSTATUS(std::system((exe + " stats --data /nonexistent >/dev/null 2>&1").c_str())), 1);
  EXPECT_EQ(WEXITSTATUS(std::system((exe + " --help >/dev/null 2>&1").c_str())), 0);
}
