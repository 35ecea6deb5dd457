#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seismo/chunker/chunk.hpp"

namespace seismo {

inline constexpr std::size_t default_chunk_budget = 256 * 1024;

/// Serialised payload sizes in bytes, uncompressed.
struct SizeReport {
  std::size_t summary_bytes = 0;
  std::size_t meta_bytes = 0;
  std::size_t chunk_count = 0;
  std::size_t chunk_min = 0;
  std::size_t chunk_max = 0;
  double chunk_mean = 0;
  std::size_t chunk_total = 0;
  /// summary + meta + all chunks.
  std::size_t total = 0;
  std::size_t chunk_budget = default_chunk_budget;
  std::vector<std::string> warnings;

  static SizeReport from_sizes(std::size_t summary, std::size_t meta,
                               const std::vector<std::pair<std::string, std::size_t>>& chunks,
                               std::size_t budget = default_chunk_budget) {
    SizeReport r;
    r.summary_bytes = summary;
    r.meta_bytes = meta;
    r.chunk_budget = budget;
    r.chunk_count = chunks.size();
    if (!chunks.empty()) {
      r.chunk_min = chunks.front().second;
      for (const auto& [key, bytes] : chunks) {
        r.chunk_min = std::min(r.chunk_min, bytes);
        r.chunk_max = std::max(r.chunk_max, bytes);
        r.chunk_total += bytes;
        if (bytes > budget)
          r.warnings.push_back("chunk " + key + " is " + std::to_string(bytes) + " bytes, over the " +
                               std::to_string(budget) + " byte soft budget");
      }
      r.chunk_mean = static_cast<double>(r.chunk_total) / static_cast<double>(chunks.size());
    }
    r.total = summary + meta + r.chunk_total;
    return r;
  }

  nlohmann::ordered_json to_json() const {
    return {{"summary_bytes", summary_bytes}, {"meta_bytes", meta_bytes},   {"chunk_count", chunk_count},
            {"chunk_min_bytes", chunk_min},   {"chunk_mean_bytes", chunk_mean}, {"chunk_max_bytes", chunk_max},
            {"chunk_total_bytes", chunk_total}, {"total_bytes", total},       {"chunk_budget_bytes", chunk_budget},
            {"warnings", warnings}};
  }

  std::string to_text() const {
    auto line = [](const char* label, const std::string& value) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-14s %14s\n", label, value.c_str());
      return std::string(buf);
    };
    auto mean = [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", chunk_mean);
      return std::string(buf);
    };
    std::string out;
    out += line("summary", std::to_string(summary_bytes));
    out += line("meta", std::to_string(meta_bytes));
    out += line("chunks", std::to_string(chunk_count));
    out += line("chunk min", std::to_string(chunk_min));
    out += line("chunk mean", mean());
    out += line("chunk max", std::to_string(chunk_max));
    out += line("chunk total", std::to_string(chunk_total));
    out += line("total", std::to_string(total));
    out += line("chunk budget", std::to_string(chunk_budget));
    for (const auto& w : warnings) out += "warning: " + w + "\n";
    return out;
  }
};

}  // namespace seismo
