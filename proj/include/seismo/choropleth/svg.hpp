#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seismo/choropleth/frame.hpp"
#include "seismo/core/region.hpp"
#include "seismo/error.hpp"

namespace seismo {

namespace detail::svg {

struct Attribute {
  std::string_view name;
  std::size_t value_begin = 0;  // first byte inside the quotes
  std::size_t value_end = 0;    // closing quote
};

struct StartTag {
  std::string_view name;
  std::size_t begin = 0;      // '<'
  std::size_t end = 0;        // one past '>'
  std::size_t attrs_end = 0;  // one past the last attribute, or past the name
  std::vector<Attribute> attrs;

  const Attribute* find(std::string_view attr) const {
    for (const auto& a : attrs)
      if (a.name == attr) return &a;
    return nullptr;
  }
};

[[noreturn]] inline void malformed(const std::string& what, std::size_t at) {
  throw Error(Errc::malformed_svg, what + " at byte " + std::to_string(at));
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

inline bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

/// Checks XML well-formedness and reports every start tag. Entity
/// references must be predefined or numeric unless the document has a
/// DOCTYPE (whose internal subset may declare more). The root element's
/// local name must be `svg`.
class Scanner {
 public:
  explicit Scanner(std::string_view doc) : doc_(doc) {}

  std::vector<StartTag> run() {
    if (doc_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    while (pos_ < doc_.size()) {
      if (doc_[pos_] != '<') {
        text();
        continue;
      }
      if (starts("<?")) pi();
      else if (starts("<!--")) comment();
      else if (starts("<![CDATA[")) cdata();
      else if (starts("<!DOCTYPE")) doctype();
      else if (starts("</")) end_tag();
      else start_tag();
    }
    if (!stack_.empty()) malformed("unclosed element <" + std::string(stack_.back()) + ">", doc_.size());
    if (!seen_root_) malformed("no root element", doc_.size());
    return std::move(tags_);
  }

 private:
  bool starts(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  std::size_t find_or_fail(std::string_view s, std::size_t from, const char* what) const {
    const auto at = doc_.find(s, from);
    if (at == std::string_view::npos) malformed(std::string("unterminated ") + what, pos_);
    return at;
  }

  void pi() { pos_ = find_or_fail("?>", pos_ + 2, "processing instruction") + 2; }
  void comment() { pos_ = find_or_fail("-->", pos_ + 4, "comment") + 3; }

  void cdata() {
    if (stack_.empty()) malformed("CDATA outside the root element", pos_);
    pos_ = find_or_fail("]]>", pos_ + 9, "CDATA section") + 3;
  }

  void doctype() {
    if (seen_root_ || has_doctype_) malformed("misplaced DOCTYPE", pos_);
    has_doctype_ = true;
    char quote = 0;
    int bracket = 0;
    for (std::size_t i = pos_ + 9; i < doc_.size(); ++i) {
      const char c = doc_[i];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '[') {
        ++bracket;
      } else if (c == ']') {
        --bracket;
      } else if (c == '>' && bracket == 0) {
        pos_ = i + 1;
        return;
      }
    }
    malformed("unterminated DOCTYPE", pos_);
  }

  std::string_view name() {
    const std::size_t b = pos_;
    if (pos_ >= doc_.size() || !is_name_start(doc_[pos_])) malformed("expected a name", pos_);
    while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
    return doc_.substr(b, pos_ - b);
  }

  void skip_space() {
    while (pos_ < doc_.size() && is_space(doc_[pos_])) ++pos_;
  }

  void check_references(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      if (doc_[i] != '&') continue;
      const auto semi = doc_.find(';', i);
      if (semi == std::string_view::npos || semi >= e) malformed("unterminated entity reference", i);
      const std::string_view ref = doc_.substr(i + 1, semi - i - 1);
      bool ok = false;
      if (ref.size() > 1 && ref[0] == '#') {
        const bool hex = ref[1] == 'x';
        const std::string_view digits = ref.substr(hex ? 2 : 1);
        ok = !digits.empty() && std::all_of(digits.begin(), digits.end(), [&](char c) {
          return (c >= '0' && c <= '9') || (hex && ((c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F')));
        });
      } else if (!ref.empty() && is_name_start(ref[0]) && std::all_of(ref.begin(), ref.end(), is_name_char)) {
        ok = ref == "amp" || ref == "lt" || ref == "gt" || ref == "quot" || ref == "apos" || has_doctype_;
      }
      if (!ok) malformed("bad entity reference &" + std::string(ref) + ";", i);
      i = semi;
    }
  }

  void text() {
    const auto lt = doc_.find('<', pos_);
    const std::size_t e = lt == std::string_view::npos ? doc_.size() : lt;
    if (stack_.empty()) {
      for (std::size_t i = pos_; i < e; ++i)
        if (!is_space(doc_[i])) malformed("text outside the root element", i);
    } else {
      check_references(pos_, e);
    }
    pos_ = e;
  }

  void end_tag() {
    const std::size_t at = pos_;
    pos_ += 2;
    const std::string_view n = name();
    skip_space();
    if (pos_ >= doc_.size() || doc_[pos_] != '>') malformed("expected '>'", pos_);
    ++pos_;
    if (stack_.empty() || stack_.back() != n) malformed("mismatched </" + std::string(n) + ">", at);
    stack_.pop_back();
  }

  void start_tag() {
    if (stack_.empty() && seen_root_) malformed("second root element", pos_);
    StartTag tag;
    tag.begin = pos_;
    ++pos_;
    tag.name = name();
    tag.attrs_end = pos_;
    for (;;) {
      const std::size_t before_space = pos_;
      skip_space();
      if (pos_ >= doc_.size()) malformed("unterminated start tag", tag.begin);
      if (doc_[pos_] == '>' || starts("/>")) break;
      if (pos_ == before_space) malformed("expected whitespace before attribute", pos_);
      Attribute a;
      a.name = name();
      skip_space();
      if (pos_ >= doc_.size() || doc_[pos_] != '=') malformed("expected '=' after attribute name", pos_);
      ++pos_;
      skip_space();
      if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) malformed("unquoted attribute value", pos_);
      const char quote = doc_[pos_++];
      a.value_begin = pos_;
      const auto close = doc_.find(quote, pos_);
      if (close == std::string_view::npos) malformed("unterminated attribute value", a.value_begin);
      if (doc_.substr(pos_, close - pos_).find('<') != std::string_view::npos)
        malformed("'<' in attribute value", a.value_begin);
      check_references(pos_, close);
      a.value_end = close;
      pos_ = close + 1;
      if (tag.find(a.name)) malformed("duplicate attribute " + std::string(a.name), a.value_begin);
      tag.attrs.push_back(a);
      tag.attrs_end = pos_;
    }
    const bool self_closing = doc_[pos_] == '/';
    pos_ += self_closing ? 2 : 1;
    tag.end = pos_;
    if (!seen_root_) {
      const auto colon = tag.name.rfind(':');
      const std::string_view local = colon == std::string_view::npos ? tag.name : tag.name.substr(colon + 1);
      if (local != "svg") malformed("root element is <" + std::string(tag.name) + ">, not <svg>", tag.begin);
      seen_root_ = true;
    }
    if (!self_closing) stack_.push_back(tag.name);
    tags_.push_back(std::move(tag));
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::vector<std::string_view> stack_;
  std::vector<StartTag> tags_;
  bool seen_root_ = false;
  bool has_doctype_ = false;
};

/// Drops every `fill` declaration and appends `fill:<color>`.
inline std::string restyle(std::string_view style, const std::string& color) {
  std::string out;
  while (true) {
    const auto semi = style.find(';');
    const std::string_view decl = style.substr(0, semi);
    const std::string_view trimmed = trim(decl);
    if (!trimmed.empty()) {
      const auto colon = trimmed.find(':');
      const std::string prop = ascii_lower(trim(trimmed.substr(0, colon)));
      if (prop != "fill") {
        out.append(decl);
        out += ';';
      }
    }
    if (semi == std::string_view::npos) break;
    style.remove_prefix(semi + 1);
  }
  return out + "fill:" + color;
}

}  // namespace detail::svg

/// Throws MalformedSvg unless `doc` is a well-formed XML document rooted
/// at an <svg> element.
inline void check_svg(std::string_view doc) { detail::svg::Scanner(doc).run(); }

struct RenderResult {
  std::string svg;
  /// One entry per assigned region that matched no element.
  std::vector<std::string> warnings;
};

/// Sets `fill` (attribute and inline style) on every element whose `id`,
/// or `data-id` when `id` is absent, names an assigned region. Ids are
/// compared after uppercasing. All other bytes are copied unchanged.
inline RenderResult render_svg(const ChoroplethFrame& frame, std::string_view map) {
  const auto tags = detail::svg::Scanner(map).run();

  std::unordered_map<std::string, std::string> colors;
  for (const auto& [region, color] : frame.assignment) colors.emplace(region.text(), color.hex());
  std::set<std::string> matched;

  RenderResult result;
  result.svg.reserve(map.size() + map.size() / 8);
  std::size_t copied = 0;
  for (const auto& tag : tags) {
    const auto* id = tag.find("id");
    if (!id) id = tag.find("data-id");
    if (!id) continue;
    const std::string key = detail::ascii_upper(map.substr(id->value_begin, id->value_end - id->value_begin));
    const auto it = colors.find(key);
    if (it == colors.end()) continue;
    matched.insert(key);
    const std::string& color = it->second;

    struct Edit {
      std::size_t begin, end;
      std::string text;
    };
    std::vector<Edit> edits;
    const auto* fill = tag.find("fill");
    const auto* style = tag.find("style");
    if (fill) edits.push_back({fill->value_begin, fill->value_end, color});
    if (style)
      edits.push_back({style->value_begin, style->value_end,
                       detail::svg::restyle(map.substr(style->value_begin, style->value_end - style->value_begin), color)});
    std::string inserted;
    if (!fill) inserted += " fill=\"" + color + "\"";
    if (!style) inserted += " style=\"fill:" + color + "\"";
    if (!inserted.empty()) edits.push_back({tag.attrs_end, tag.attrs_end, inserted});
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });

    for (const auto& e : edits) {
      result.svg.append(map.substr(copied, e.begin - copied));
      result.svg += e.text;
      copied = e.end;
    }
  }
  result.svg.append(map.substr(copied));

  for (const auto& [region, _] : frame.assignment)
    if (!matched.contains(region.text()))
      result.warnings.push_back("region " + region.text() + " has no element in the map");
  return result;
}

}  // namespace seismo
