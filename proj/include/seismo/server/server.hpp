#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>

#include "seismo/chunker/store.hpp"
#include "seismo/choropleth/named_scale.hpp"
#include "seismo/choropleth/svg.hpp"
#include "seismo/server/etag.hpp"

namespace seismo {

struct ServerConfig {
  std::filesystem::path data_dir;
  std::filesystem::path map_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  std::size_t chunk_budget = default_chunk_budget;
  std::vector<NamedScale> scales = default_named_scales();
  std::string default_scale = std::string(default_scale_name);
  bool log_requests = false;
};

/// Read-only HTTP view of a persisted store:
///
///   GET /api/meta              meta.json
///   GET /api/summary           summary.json
///   GET /api/detail/{region}   the chunk holding {region}
///   GET /api/frame/{ordinal}   ?track=T&scale=S; JSON colors, or SVG
///                              when Accept names image/svg+xml
///   GET /api/map               the map file
///
/// Every 200 carries a strong ETag and honours If-None-Match with 304.
/// Errors are {"detail": ..., "error": ...}. The store and map are loaded
/// once in the constructor; a failed load is reported as 500 on the
/// endpoints that need it instead of aborting.
class Server {
 public:
  explicit Server(ServerConfig config) : config_(std::move(config)) {
    state_ = std::make_shared<const State>(load(config_));
    routes();
  }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  const ServerConfig& config() const noexcept { return config_; }
  const std::string& store_error() const noexcept { return state_->store_error; }
  const std::string& map_error() const noexcept { return state_->map_error; }

  /// Binds to `host:port`; port 0 picks a free port. Returns the bound
  /// port, or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return http_.bind_to_any_port(host);
    return http_.bind_to_port(host, port) ? port : -1;
  }

  bool listen_after_bind() { return http_.listen_after_bind(); }
  void stop() { http_.stop(); }
  void wait_until_ready() const { http_.wait_until_ready(); }
  bool is_running() const { return http_.is_running(); }

  /// Routes one request; public so the endpoint logic is testable without
  /// sockets.
  void handle(const httplib::Request& req, httplib::Response& res) const {
    res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
    res.set_header("Access-Control-Expose-Headers", "ETag");
    const State& s = *state_;
    const std::string& path = req.path;

    if (path == "/api/meta") {
      if (!s.store) return fail(res, 500, "CorruptStore", s.store_error);
      return send(req, res, s.store->meta_bytes(), "application/json", http::strong_etag(s.store->meta_hash()));
    }
    if (path == "/api/summary") {
      if (!s.store) return fail(res, 500, "CorruptStore", s.store_error);
      return send(req, res, s.store->summary_bytes(), "application/json", http::strong_etag(s.store->meta().summary.hash));
    }
    if (path == "/api/map") {
      if (!s.map) return fail(res, 500, "MapUnavailable", s.map_error);
      return send(req, res, *s.map, "image/svg+xml", s.map_etag);
    }
    if (path.starts_with("/api/detail/")) return serve_detail(req, res, path.substr(12));
    if (path.starts_with("/api/frame/")) return serve_frame(req, res, path.substr(11));
    fail(res, 404, "NotFound", "no endpoint " + path);
  }

 private:
  struct State {
    std::optional<Store> store;
    std::string store_error;
    std::optional<std::string> map;
    std::string map_error;
    std::string map_etag;
    std::set<RegionCode> regions;
    /// track -> scale name -> scale
    std::map<std::string, std::map<std::string, ColorScale>, std::less<>> scales;
  };

  static State load(const ServerConfig& config) {
    State s;
    try {
      s.store = Store::open(config.data_dir);
      s.regions.insert(s.store->meta().shape.regions.begin(), s.store->meta().shape.regions.end());
      for (const auto& track : s.store->summary().tracks)
        for (const auto& named : config.scales)
          s.scales[track.name].emplace(named.name, named.build(s.store->summary(), track.name));
    } catch (const std::exception& e) {
      s.store.reset();
      s.store_error = e.what();
    }
    try {
      std::string bytes = detail::read_file(config.map_path);
      check_svg(bytes);
      s.map_etag = http::etag_of(bytes);
      s.map = std::move(bytes);
    } catch (const std::exception& e) {
      s.map_error = e.what();
    }
    return s;
  }

  void routes() {
    http_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
    http_.Options(".*", [this](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "If-None-Match, Accept");
      res.set_header("Access-Control-Max-Age", "600");
    });
    if (config_.log_requests)
      http_.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        std::cerr << req.method << ' ' << req.path << ' ' << res.status << '\n';
      });
  }

  static void send(const httplib::Request& req, httplib::Response& res, const std::string& body,
                   const char* content_type, const std::string& etag) {
    res.set_header("ETag", etag);
    res.set_header("Cache-Control", "no-cache");
    if (req.has_header("If-None-Match") && http::none_match_hits(req.get_header_value("If-None-Match"), etag)) {
      res.status = 304;
      return;
    }
    res.status = 200;
    res.set_content(body, content_type);
  }

  static void fail(httplib::Response& res, int status, std::string_view code, std::string_view message) {
    std::string body;
    detail::CanonicalWriter w(body);
    w.begin_object().key("detail").string(message).key("error").string(code).end_object();
    res.status = status;
    res.set_content(body, "application/json");
  }

  void serve_detail(const httplib::Request& req, httplib::Response& res, std::string_view text) const {
    const State& s = *state_;
    if (!s.store) return fail(res, 500, "CorruptStore", s.store_error);
    RegionCode region;
    try {
      region = parse_region_code(text);
    } catch (const Error& e) {
      const bool malformed = e.code() == Errc::malformed_code;
      return fail(res, malformed ? 400 : 404, malformed ? "MalformedCode" : "UnknownRegion", e.detail());
    }
    const std::string key = region.parent().text();
    const std::string* bytes = s.store->chunk_bytes(key);
    if (!bytes || !s.regions.contains(region))
      return fail(res, 404, "UnknownRegion", region.text() + " is not in this dataset");
    send(req, res, *bytes, "application/json", http::strong_etag(s.store->meta().chunks.at(key).hash));
  }

  void serve_frame(const httplib::Request& req, httplib::Response& res, std::string_view text) const {
    const State& s = *state_;
    if (!s.store) return fail(res, 500, "CorruptStore", s.store_error);
    std::size_t ordinal = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ordinal);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
      return fail(res, 400, "BadOrdinal", "'" + std::string(text) + "' is not a period ordinal");
    const GlobalSummary& summary = s.store->summary();
    if (ordinal >= summary.periods.size())
      return fail(res, 404, "PeriodOutOfRange",
                  "ordinal " + std::to_string(ordinal) + " outside [0, " + std::to_string(summary.periods.size()) + ")");

    std::string track = req.has_param("track") ? req.get_param_value("track") : std::string{};
    if (track.empty()) {
      if (summary.tracks.empty()) return fail(res, 400, "UnknownTrack", "dataset has no tracks");
      track = summary.tracks.front().name;
    }
    const auto by_track = s.scales.find(track);
    if (by_track == s.scales.end()) return fail(res, 400, "UnknownTrack", "no track '" + track + "'");
    const std::string scale_name = req.has_param("scale") ? req.get_param_value("scale") : config_.default_scale;
    const auto scale = by_track->second.find(scale_name);
    if (scale == by_track->second.end()) return fail(res, 400, "UnknownScale", "no scale '" + scale_name + "'");

    const ChoroplethFrame frame = color_frame(summary, ordinal, track, scale->second);
    res.set_header("Vary", "Accept");
    if (req.get_header_value("Accept").find("image/svg+xml") != std::string::npos) {
      if (!s.map) return fail(res, 500, "MapUnavailable", s.map_error);
      const std::string svg = render_svg(frame, *s.map).svg;
      return send(req, res, svg, "image/svg+xml", http::etag_of(svg));
    }
    const std::string body = frame_json(frame);
    send(req, res, body, "application/json", http::etag_of(body));
  }

  ServerConfig config_;
  std::shared_ptr<const State> state_;
  httplib::Server http_;
};

}  // namespace seismo
