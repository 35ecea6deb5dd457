#include <future>

#include <gtest/gtest.h>

#include <json.hpp>

#include "seismo/server/server.hpp"
#include "test_support.hpp"

using namespace seismo;
using namespace testing_support;

namespace {

const std::vector<std::string> kEndpoints{"/api/meta", "/api/summary", "/api/detail/DE", "/api/frame/0", "/api/map"};

class ServerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("seismo-server");
    dataset_ = new Dataset(grid_dataset({"DE", "DE-BY", "FR"}, "2020-01", 2,
                                        [](auto r, auto p) { return r == 2 && p == 1 ? std::nan("") : r * 3.0 + p; }));
    write_store(*dataset_, dir_->path());
    live_ = new LiveServer(config_for(dir_->path()));
  }
  static void TearDownTestSuite() {
    delete live_;
    delete dataset_;
    delete dir_;
  }

  static httplib::Result get(const std::string& path, httplib::Headers headers = {}) {
    auto client = live_->client();
    return client.Get(path, headers);
  }

  static inline TempDir* dir_ = nullptr;
  static inline Dataset* dataset_ = nullptr;
  static inline LiveServer* live_ = nullptr;
};

}  // namespace

TEST(Etag, NoneMatch) {
  const std::string tag = http::strong_etag("abc");
  EXPECT_EQ(tag, "\"abc\"");
  EXPECT_TRUE(http::none_match_hits("\"abc\"", tag));
  EXPECT_TRUE(http::none_match_hits("W/\"abc\"", tag));
  EXPECT_TRUE(http::none_match_hits("\"x\", \"abc\"", tag));
  EXPECT_TRUE(http::none_match_hits("*", tag));
  EXPECT_FALSE(http::none_match_hits("\"abd\"", tag));
  EXPECT_FALSE(http::none_match_hits("abc", tag));
  EXPECT_FALSE(http::none_match_hits("", tag));
  EXPECT_EQ(http::etag_of("abc"), "\"" + sha256_hex("abc") + "\"");
}

TEST_F(ServerTest, MetaDescribesFixture) {
  auto res = get("/api/meta");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto meta = nlohmann::json::parse(res->body);
  EXPECT_EQ(meta["regions"].size(), 3u);
  EXPECT_EQ(meta["periods"]["count"], 2);
  EXPECT_EQ(res->body, detail::read_file(dir_->path() / "meta.json"));
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServerTest, SummaryIsStoredBytesWithHashEtag) {
  auto res = get("/api/summary");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, detail::read_file(dir_->path() / "summary.json"));
  EXPECT_EQ(res->get_header_value("ETag"), "\"" + sha256_hex(res->body) + "\"");
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
}

TEST_F(ServerTest, EveryEndpointHonoursIfNoneMatch) {
  for (const auto& path : kEndpoints) {
    auto first = get(path);
    ASSERT_TRUE(first) << path;
    ASSERT_EQ(first->status, 200) << path;
    const std::string etag = first->get_header_value("ETag");
    ASSERT_FALSE(etag.empty()) << path;
    auto again = get(path, {{"If-None-Match", etag}});
    ASSERT_TRUE(again);
    EXPECT_EQ(again->status, 304) << path;
    EXPECT_TRUE(again->body.empty()) << path;
    EXPECT_EQ(again->get_header_value("ETag"), etag);
    auto stale = get(path, {{"If-None-Match", "\"0000\""}});
    EXPECT_EQ(stale->status, 200) << path;
  }
}

TEST_F(ServerTest, DetailLookup) {
  auto de = get("/api/detail/DE");
  ASSERT_TRUE(de);
  EXPECT_EQ(de->status, 200);
  EXPECT_EQ(de->body, detail::read_file(dir_->path() / "chunks/DE.json"));
  EXPECT_EQ(deserialize_chunk(de->body).regions.size(), 2u);
  EXPECT_EQ(get("/api/detail/de")->status, 200);
  EXPECT_EQ(get("/api/detail/de-by")->body, de->body);

  auto unknown = get("/api/detail/XZ");
  EXPECT_EQ(unknown->status, 404);
  const auto err = nlohmann::json::parse(unknown->body);
  EXPECT_EQ(err["error"], "UnknownRegion");
  EXPECT_TRUE(err["detail"].is_string());
  EXPECT_EQ(get("/api/detail/IT")->status, 404);
  EXPECT_EQ(get("/api/detail/FR-IDF")->status, 404);
  EXPECT_EQ(get("/api/detail/123")->status, 400);
}

TEST_F(ServerTest, FrameJsonAndSvg) {
  auto res = get("/api/frame/0");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto colors = nlohmann::json::parse(res->body);
  EXPECT_EQ(colors.size(), 3u);
  const Store store = Store::open(dir_->path());
  const auto& store_summary = store.summary();
  const auto direct = color_frame(store_summary, 1, "cases", whole_range_linear(store_summary, "cases"));
  EXPECT_EQ(get("/api/frame/1?track=cases&scale=linear")->body, frame_json(direct));
  EXPECT_EQ(nlohmann::json::parse(get("/api/frame/1")->body)["FR"], "#cccccc");

  auto svg = get("/api/frame/1", {{"Accept", "image/svg+xml"}});
  ASSERT_TRUE(svg);
  EXPECT_EQ(svg->status, 200);
  EXPECT_EQ(svg->get_header_value("Content-Type"), "image/svg+xml");
  EXPECT_EQ(svg->body, render_svg(direct, detail::read_file(dir_->path() / "map.svg")).svg);
  EXPECT_TRUE(parses_as_xml(svg->body));

  EXPECT_EQ(get("/api/frame/0?scale=quantile")->status, 200);
  EXPECT_EQ(get("/api/frame/2")->status, 404);
  EXPECT_EQ(get("/api/frame/x")->status, 400);
  EXPECT_EQ(get("/api/frame/-1")->status, 400);
  EXPECT_EQ(get("/api/frame/0?track=nope")->status, 400);
  auto bad_scale = get("/api/frame/0?scale=viridis");
  EXPECT_EQ(bad_scale->status, 400);
  EXPECT_EQ(nlohmann::json::parse(bad_scale->body)["error"], "UnknownScale");
}

TEST_F(ServerTest, MapServedVerbatim) {
  auto res = get("/api/map");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/svg+xml");
  EXPECT_EQ(res->body, detail::read_file(dir_->path() / "map.svg"));
}

TEST_F(ServerTest, UnknownPathAndPreflight) {
  EXPECT_EQ(get("/api/nothing")->status, 404);
  auto client = live_->client();
  auto pre = client.Options("/api/summary");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServerTest, GzipNegotiated) {
  auto client = live_->client();
  client.set_decompress(false);
  auto res = client.Get("/api/summary", {{"Accept-Encoding", "gzip"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Content-Encoding"), "gzip");
  EXPECT_LT(res->body.size(), detail::read_file(dir_->path() / "summary.json").size());
}

TEST_F(ServerTest, ConcurrentReadersSeeIdenticalBytes) {
  std::vector<std::future<std::string>> jobs;
  for (int i = 0; i < 8; ++i)
    jobs.push_back(std::async(std::launch::async, [] {
      std::string all;
      for (const auto& path : kEndpoints) all += get(path)->body;
      return all;
    }));
  const std::string first = jobs[0].get();
  for (std::size_t i = 1; i < jobs.size(); ++i) EXPECT_EQ(jobs[i].get(), first);
}

TEST(ServerFailures, MissingMetaAndMap) {
  TempDir dir("seismo-broken");
  write_store(grid_dataset({"DE"}, "2020-01", 1, [](auto, auto) { return 1.0; }), dir.path());
  std::filesystem::remove(dir / "meta.json");
  ServerConfig cfg = config_for(dir.path());
  cfg.map_path = dir / "absent.svg";
  Server server(cfg);
  EXPECT_FALSE(server.store_error().empty());
  EXPECT_FALSE(server.map_error().empty());
  for (const auto& path : kEndpoints) {
    httplib::Request req;
    req.path = path;
    httplib::Response res;
    server.handle(req, res);
    EXPECT_EQ(res.status, 500) << path;
    const auto body = nlohmann::json::parse(res.body);
    EXPECT_TRUE(body.contains("error") && body.contains("detail")) << path;
  }
}

TEST(ServerFailures, MalformedMapIsReported) {
  TempDir dir("seismo-badmap");
  write_store(grid_dataset({"DE"}, "2020-01", 1, [](auto, auto) { return 1.0; }), dir.path());
  detail::write_file(dir / "map.svg", "<svg><path></svg>");
  Server server(config_for(dir.path()));
  httplib::Request req;
  req.path = "/api/map";
  httplib::Response res;
  server.handle(req, res);
  EXPECT_EQ(res.status, 500);
  EXPECT_EQ(nlohmann::json::parse(res.body)["error"], "MapUnavailable");
}

TEST(ServerConfig, Defaults) {
  const ServerConfig cfg;
  EXPECT_EQ(cfg.port, 8080);
  EXPECT_EQ(cfg.cors_origin, "*");
  EXPECT_EQ(cfg.chunk_budget, 256u * 1024u);
  EXPECT_EQ(cfg.default_scale, "linear");
}
