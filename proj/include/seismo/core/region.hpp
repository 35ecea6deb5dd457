#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "seismo/core/registry_data.hpp"
#include "seismo/error.hpp"

namespace seismo {

namespace detail {

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// `CC` or `CC-SUB` with SUB in [A-Z0-9]{1,3}.
inline bool is_canonical_code(std::string_view s) {
  if (s.size() < 2 || !is_upper(s[0]) || !is_upper(s[1])) return false;
  if (s.size() == 2) return true;
  if (s[2] != '-' || s.size() < 4 || s.size() > 6) return false;
  return std::all_of(s.begin() + 3, s.end(), [](char c) { return is_upper(c) || is_digit(c); });
}

}  // namespace detail

/// ISO-3166-1 country with an optional ISO-3166-2 subdivision suffix.
/// Ordering matches the ordering of the canonical text form.
struct RegionCode {
  std::string country;
  std::string subdivision;

  bool is_subdivision() const noexcept { return !subdivision.empty(); }
  RegionCode parent() const { return RegionCode{country, {}}; }

  std::string text() const {
    return subdivision.empty() ? country : country + "-" + subdivision;
  }

  /// Splits a canonical code without consulting any registry.
  static RegionCode from_canonical(std::string_view text) {
    if (!detail::is_canonical_code(text))
      throw Error(Errc::malformed_code, "'" + std::string(text) + "' is not CC or CC-SUB");
    RegionCode code{std::string(text.substr(0, 2)), {}};
    if (text.size() > 2) code.subdivision = std::string(text.substr(3));
    return code;
  }

  friend auto operator<=>(const RegionCode&, const RegionCode&) = default;
  friend bool operator==(const RegionCode&, const RegionCode&) = default;
};

class RegionRegistry {
 public:
  struct Entry {
    RegionCode code;
    std::string name;
    std::vector<std::string> aliases;
  };

  /// Parses `CODE<TAB>Name<TAB>alias|alias` lines. Lines starting with '#'
  /// are comments; the first comment line mentioning "edition" is kept as
  /// the registry edition. An alias prefixed with '!' is a declared shared
  /// alias; any other alias claimed by two codes is rejected.
  static RegionRegistry from_tsv(std::string_view text) {
    RegionRegistry reg;
    std::size_t line_no = 0;
    std::unordered_map<std::string, std::size_t> plain_alias_owner;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      if (line.front() == '#') {
        if (reg.edition_.empty() && line.find("edition") != std::string_view::npos)
          reg.edition_ = std::string(detail::trim(line.substr(1)));
        continue;
      }
      const auto t1 = line.find('\t');
      if (t1 == std::string_view::npos)
        throw Error(Errc::format_error, "registry line " + std::to_string(line_no) + ": missing name column");
      const auto t2 = line.find('\t', t1 + 1);
      const std::string_view code_text = line.substr(0, t1);
      const std::string_view name = line.substr(t1 + 1, t2 == std::string_view::npos ? std::string_view::npos : t2 - t1 - 1);
      std::string_view alias_text = t2 == std::string_view::npos ? std::string_view{} : line.substr(t2 + 1);

      Entry entry{RegionCode::from_canonical(code_text), std::string(name), {}};
      const std::size_t index = reg.entries_.size();
      if (!reg.by_code_.emplace(entry.code.text(), index).second)
        throw Error(Errc::format_error, "registry line " + std::to_string(line_no) + ": duplicate code " + std::string(code_text));

      while (!alias_text.empty()) {
        const auto bar = alias_text.find('|');
        std::string_view alias = alias_text.substr(0, bar);
        alias_text = bar == std::string_view::npos ? std::string_view{} : alias_text.substr(bar + 1);
        if (alias.empty()) continue;
        const bool shared = alias.front() == '!';
        if (shared) alias.remove_prefix(1);
        std::string folded = detail::ascii_lower(alias);
        if (shared) {
          reg.shared_aliases_.insert(folded);
        } else if (auto [it, inserted] = plain_alias_owner.emplace(folded, index);
                   !inserted && it->second != index) {
          throw Error(Errc::format_error, "registry line " + std::to_string(line_no) + ": alias '" +
                                              std::string(alias) + "' already belongs to " +
                                              reg.entries_[it->second].code.text() + " and is not marked shared");
        }
        reg.by_alias_[folded].push_back(index);
        entry.aliases.emplace_back(alias);
      }
      reg.by_name_[entry.name].push_back(index);
      reg.by_folded_name_[detail::ascii_lower(entry.name)].push_back(index);
      reg.entries_.push_back(std::move(entry));
    }
    return reg;
  }

  /// The registry compiled into the library from data/iso3166.tsv.
  static const RegionRegistry& bundled() {
    static const RegionRegistry registry = from_tsv(detail::bundled_registry_tsv);
    return registry;
  }

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& edition() const noexcept { return edition_; }

  const Entry* find(const RegionCode& code) const {
    const auto it = by_code_.find(code.text());
    return it == by_code_.end() ? nullptr : &entries_[it->second];
  }
  bool contains(const RegionCode& code) const { return find(code) != nullptr; }

  /// Exact match on the canonical form after uppercasing.
  RegionCode parse(std::string_view text) const {
    if (text.empty()) throw Error(Errc::malformed_code, "empty region code");
    const std::string upper = detail::ascii_upper(text);
    if (!detail::is_canonical_code(upper))
      throw Error(Errc::malformed_code, "'" + std::string(text) + "' is not CC or CC-SUB");
    const auto it = by_code_.find(upper);
    if (it == by_code_.end()) throw Error(Errc::unknown_code, "'" + upper + "' is not in the registry");
    return entries_[it->second].code;
  }

  /// Code, then exact name, then case-insensitive name or alias. At each
  /// name tier a country entry beats subdivision entries; remaining ties
  /// are AmbiguousName. Never fuzzy.
  RegionCode resolve(std::string_view text) const {
    const std::string_view trimmed = detail::trim(text);
    if (trimmed.empty()) throw Error(Errc::unresolvable, "empty region name");

    const std::string upper = detail::ascii_upper(trimmed);
    if (detail::is_canonical_code(upper))
      if (const auto it = by_code_.find(upper); it != by_code_.end()) return entries_[it->second].code;

    if (const auto it = by_name_.find(std::string(trimmed)); it != by_name_.end())
      return pick(trimmed, it->second);

    const std::string folded = detail::ascii_lower(trimmed);
    if (shared_aliases_.contains(folded)) {
      std::vector<std::size_t> all = by_alias_.at(folded);
      throw ambiguous(trimmed, all);
    }
    std::vector<std::size_t> candidates;
    if (const auto it = by_folded_name_.find(folded); it != by_folded_name_.end())
      candidates = it->second;
    if (const auto it = by_alias_.find(folded); it != by_alias_.end())
      candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    if (candidates.empty())
      throw Error(Errc::unresolvable, "'" + std::string(trimmed) + "' matches no code, name or alias");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return pick(trimmed, candidates);
  }

 private:
  RegionCode pick(std::string_view text, const std::vector<std::size_t>& candidates) const {
    std::vector<std::size_t> countries;
    for (std::size_t i : candidates)
      if (!entries_[i].code.is_subdivision()) countries.push_back(i);
    const auto& tier = countries.empty() ? candidates : countries;
    if (tier.size() == 1) return entries_[tier.front()].code;
    throw ambiguous(text, tier);
  }

  Error ambiguous(std::string_view text, const std::vector<std::size_t>& indices) const {
    std::vector<std::string> codes;
    for (std::size_t i : indices) codes.push_back(entries_[i].code.text());
    std::sort(codes.begin(), codes.end());
    std::string list;
    for (const auto& c : codes) list += (list.empty() ? "" : ", ") + c;
    return Error(Errc::ambiguous_name, "'" + std::string(text) + "' could be " + list, std::nullopt, codes);
  }

  std::vector<Entry> entries_;
  std::string edition_;
  std::unordered_map<std::string, std::size_t> by_code_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_folded_name_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_alias_;
  std::unordered_set<std::string> shared_aliases_;
};

inline RegionCode parse_region_code(std::string_view text,
                                    const RegionRegistry& registry = RegionRegistry::bundled()) {
  return registry.parse(text);
}

inline RegionCode resolve_region_name(std::string_view text,
                                      const RegionRegistry& registry = RegionRegistry::bundled()) {
  return registry.resolve(text);
}

}  // namespace seismo

template <>
struct std::hash<seismo::RegionCode> {
  std::size_t operator()(const seismo::RegionCode& code) const noexcept {
    return std::hash<std::string>{}(code.country) * 31 + std::hash<std::string>{}(code.subdivision);
  }
};
