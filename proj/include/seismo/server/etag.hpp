#pragma once

#include <string>
#include <string_view>

#include "seismo/chunker/sha256.hpp"

namespace seismo::http {

/// Strong entity tag for a content hash: the hash in double quotes.
inline std::string strong_etag(std::string_view hash) { return "\"" + std::string(hash) + "\""; }

inline std::string etag_of(std::string_view body) { return strong_etag(sha256_hex(body)); }

/// If-None-Match evaluation (RFC 9110 13.1.2): `*` matches any current
/// representation; otherwise the header is a comma-separated list of
/// entity tags compared weakly, i.e. ignoring a `W/` prefix.
inline bool none_match_hits(std::string_view header, std::string_view etag) {
  auto opaque = [](std::string_view tag) {
    if (tag.substr(0, 2) == "W/") tag.remove_prefix(2);
    return tag;
  };
  const std::string_view target = opaque(etag);
  std::size_t i = 0;
  while (i < header.size()) {
    while (i < header.size() && (header[i] == ' ' || header[i] == '\t' || header[i] == ',')) ++i;
    if (i >= header.size()) break;
    if (header[i] == '*') return true;
    std::size_t start = i;
    if (header.substr(i, 2) == "W/") i += 2;
    if (i >= header.size() || header[i] != '"') {
      // Not an entity tag; skip to the next list member.
      while (i < header.size() && header[i] != ',') ++i;
      continue;
    }
    const auto close = header.find('"', i + 1);
    if (close == std::string_view::npos) return false;
    if (opaque(header.substr(start, close + 1 - start)) == target) return true;
    i = close + 1;
  }
  return false;
}

}  // namespace seismo::http
