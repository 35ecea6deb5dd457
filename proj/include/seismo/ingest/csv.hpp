#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/error.hpp"

namespace seismo::detail {

/// RFC 4180 reader: comma separator, double-quote quoting with "" escapes,
/// LF or CRLF line ends. Blank lines are skipped. `on_record(line, fields)`
/// receives the 1-based physical line on which each record starts; the
/// field views are valid only for the duration of the call.
template <typename OnRecord>
void read_csv(std::string_view text, OnRecord&& on_record) {
  struct Field {
    std::size_t begin = 0, end = 0;
    bool quoted = false;
  };
  std::vector<Field> fields;
  std::vector<std::string> unescaped;
  std::vector<std::string_view> views;

  std::size_t pos = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();

  while (pos < n) {
    if (text[pos] == '\n' || (text[pos] == '\r' && pos + 1 < n && text[pos + 1] == '\n')) {
      pos += text[pos] == '\r' ? 2 : 1;
      ++line;
      continue;
    }
    const std::size_t record_line = line;
    fields.clear();
    bool at_end = false;
    while (!at_end) {
      Field f;
      if (pos < n && text[pos] == '"') {
        f.quoted = true;
        const std::size_t idx = fields.size();
        if (unescaped.size() <= idx) unescaped.resize(idx + 1);
        std::string& buf = unescaped[idx];
        buf.clear();
        ++pos;
        for (;;) {
          if (pos >= n) throw Error(Errc::schema_error, "unterminated quoted field", record_line);
          const char c = text[pos];
          if (c == '"') {
            if (pos + 1 < n && text[pos + 1] == '"') {
              buf += '"';
              pos += 2;
              continue;
            }
            ++pos;
            break;
          }
          if (c == '\n') ++line;
          buf += c;
          ++pos;
        }
        f.begin = idx;
        if (pos < n && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r')
          throw Error(Errc::schema_error, "unexpected character after closing quote", line);
      } else {
        f.begin = pos;
        while (pos < n && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          if (text[pos] == '"') throw Error(Errc::schema_error, "quote inside unquoted field", line);
          ++pos;
        }
        f.end = pos;
      }
      fields.push_back(f);

      if (pos >= n) {
        at_end = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else if (text[pos] == '\n') {
        ++pos;
        ++line;
        at_end = true;
      } else if (text[pos] == '\r' && pos + 1 < n && text[pos + 1] == '\n') {
        pos += 2;
        ++line;
        at_end = true;
      } else {
        throw Error(Errc::schema_error, "bare carriage return", line);
      }
    }

    views.clear();
    for (const Field& f : fields)
      views.push_back(f.quoted ? std::string_view(unescaped[f.begin]) : text.substr(f.begin, f.end - f.begin));
    on_record(record_line, std::span<const std::string_view>(views));
  }
}

}  // namespace seismo::detail
