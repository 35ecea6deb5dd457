#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seismo/ingest/text.hpp"

namespace seismo::detail {

struct HtmlRow {
  std::size_t row = 0;  // 1-based position among the table's <tr> rows
  std::vector<std::string> cells;
};

namespace html {

inline bool iequals_prefix(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != word[i]) return false;
  }
  return true;
}

/// Name of the tag starting at `pos` (which holds '<'), lowercased, with a
/// leading '/' for end tags. Empty for comments and declarations.
inline std::string tag_name(std::string_view s, std::size_t pos) {
  std::size_t i = pos + 1;
  std::string name;
  if (i < s.size() && s[i] == '/') name += s[i++];
  while (i < s.size()) {
    char c = s[i];
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) break;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    name += c;
    ++i;
  }
  return name == "/" ? std::string{} : name;
}

/// End of the markup construct that starts at `pos`; npos when unterminated.
inline std::size_t markup_end(std::string_view s, std::size_t pos) {
  if (s.substr(pos, 4) == "<!--") {
    const auto e = s.find("-->", pos + 4);
    return e == std::string_view::npos ? e : e + 3;
  }
  char quote = 0;
  for (std::size_t i = pos + 1; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

inline std::string normalise_cell(std::string_view raw) {
  std::string decoded = decode_entities(raw);
  std::string out;
  bool pending_space = false;
  for (char c : decoded) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace html

/// Rows of the first <table> in an HTML document; nullopt when there is
/// none. Cell text has tags stripped, entities decoded and whitespace
/// collapsed. Tables nested inside the first table are flattened into
/// their parent cell's text.
inline std::optional<std::vector<HtmlRow>> read_first_html_table(std::string_view doc) {
  std::size_t pos = 0;
  std::optional<std::size_t> table_start;
  while ((pos = doc.find('<', pos)) != std::string_view::npos) {
    if (doc.substr(pos, 4) == "<!--") {
      const auto e = html::markup_end(doc, pos);
      if (e == std::string_view::npos) return std::nullopt;
      pos = e;
      continue;
    }
    if (html::tag_name(doc, pos) == "table") {
      table_start = html::markup_end(doc, pos);
      break;
    }
    ++pos;
  }
  if (!table_start || *table_start == std::string_view::npos) return std::nullopt;

  std::vector<HtmlRow> rows;
  std::string cell_text;
  bool in_cell = false;
  int nested = 0;
  std::size_t tr_count = 0;

  auto close_cell = [&] {
    if (in_cell && !rows.empty()) rows.back().cells.push_back(html::normalise_cell(cell_text));
    in_cell = false;
    cell_text.clear();
  };

  pos = *table_start;
  while (pos < doc.size()) {
    const auto lt = doc.find('<', pos);
    const std::size_t text_end = lt == std::string_view::npos ? doc.size() : lt;
    if (in_cell) cell_text.append(doc.substr(pos, text_end - pos));
    if (lt == std::string_view::npos) break;
    const auto end = html::markup_end(doc, lt);
    if (end == std::string_view::npos) break;
    const std::string name = html::tag_name(doc, lt);
    pos = end;

    if (name == "table") {
      ++nested;
    } else if (name == "/table") {
      if (nested == 0) break;
      --nested;
    }
    if (nested > 0 || name == "/table") {
      if (in_cell) cell_text += ' ';
      continue;
    }
    if (name == "tr") {
      close_cell();
      rows.push_back(HtmlRow{++tr_count, {}});
    } else if (name == "/tr") {
      close_cell();
    } else if (name == "td" || name == "th") {
      close_cell();
      if (rows.empty()) rows.push_back(HtmlRow{++tr_count, {}});
      in_cell = true;
    } else if (name == "/td" || name == "/th") {
      close_cell();
    } else if (in_cell && (name == "br" || name == "p" || name == "/p" || name == "div" || name == "/div")) {
      cell_text += ' ';
    }
  }
  close_cell();
  std::erase_if(rows, [](const HtmlRow& r) { return r.cells.empty(); });
  return rows;
}

}  // namespace seismo::detail
