#pragma once

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <expat.h>
#include <httplib.h>

#include "seismo/chunker/store.hpp"
#include "seismo/core/dataset.hpp"
#include "seismo/fixtures.hpp"
#include "seismo/server/server.hpp"

namespace testing_support {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "seismo") {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Bitwise equality of optional doubles; separates 0.0 from -0.0.
inline bool same_value(const seismo::Value& a, const seismo::Value& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::bit_cast<std::uint64_t>(*a) == std::bit_cast<std::uint64_t>(*b);
}

/// Independent well-formedness check through expat; also requires an
/// <svg> root element.
inline bool parses_as_xml(const std::string& doc, std::string* error = nullptr) {
  struct Root {
    std::string name;
  } root;
  XML_Parser parser = XML_ParserCreateNS(nullptr, ' ');
  XML_SetUserData(parser, &root);
  XML_SetStartElementHandler(parser, [](void* data, const XML_Char* name, const XML_Char**) {
    auto* r = static_cast<Root*>(data);
    if (r->name.empty()) r->name = name;
  });
  const bool ok = XML_Parse(parser, doc.data(), static_cast<int>(doc.size()), 1) == XML_STATUS_OK;
  if (!ok && error) *error = XML_ErrorString(XML_GetErrorCode(parser));
  XML_ParserFree(parser);
  const std::string local = root.name.substr(root.name.find(' ') == std::string::npos ? 0 : root.name.find(' ') + 1);
  return ok && local == "svg";
}

/// Writes a packed store for `dataset` plus a fixture map into `dir`.
inline void write_store(const seismo::Dataset& dataset, const fs::path& dir) {
  seismo::PackedStore::pack(dataset).write(dir);
  seismo::detail::write_file(dir / "map.svg", seismo::fixtures::fixture_map_svg(dataset.regions()));
}

/// In-process server on a free localhost port, stopped on destruction.
class LiveServer {
 public:
  explicit LiveServer(seismo::ServerConfig config) : server_(std::make_unique<seismo::Server>(std::move(config))) {
    port_ = server_->bind("127.0.0.1", 0);
    if (port_ <= 0) throw std::runtime_error("cannot bind a test port");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
  }
  ~LiveServer() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
  }
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  int port() const noexcept { return port_; }
  seismo::Server& server() noexcept { return *server_; }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_keep_alive(true);
    c.set_read_timeout(30, 0);
    return c;
  }

 private:
  std::unique_ptr<seismo::Server> server_;
  int port_ = -1;
  std::thread thread_;
};

inline seismo::ServerConfig config_for(const fs::path& dir) {
  seismo::ServerConfig cfg;
  cfg.data_dir = dir;
  cfg.map_path = dir / "map.svg";
  return cfg;
}

/// Regions × months dataset with one indicator "cases" and track "cases";
/// cell (r, p) holds value(r, p), or MISSING when it returns NaN.
template <class F>
seismo::Dataset grid_dataset(const std::vector<std::string>& codes, const std::string& first_month,
                             std::size_t months, F value) {
  using namespace seismo;
  std::vector<RegionCode> regions;
  for (const auto& c : codes) regions.push_back(parse_region_code(c));
  std::sort(regions.begin(), regions.end());
  const PeriodAxis axis(Granularity::monthly, parse_calendar(first_month, Granularity::monthly), months);
  std::vector<Value> values;
  for (std::size_t r = 0; r < regions.size(); ++r)
    for (std::size_t p = 0; p < months; ++p) {
      const double v = value(r, p);
      values.push_back(std::isnan(v) ? Value{} : Value{v});
    }
  return Dataset(std::move(regions), axis, {Indicator{"cases", "Cases", "people"}}, {Track{"cases", "cases"}},
                 std::move(values), "test grid");
}

}  // namespace testing_support
