#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seismo::detail {

/// Appends JSON with no insignificant whitespace. Object keys must be
/// written in ascending byte order; the writer throws std::logic_error
/// otherwise. Doubles are written shortest-round-trip; -0.0 is written as
/// "-0.0" so it survives a parse as a float.
class CanonicalWriter {
 public:
  explicit CanonicalWriter(std::string& out) : out_(out) {}

  CanonicalWriter& begin_object() {
    element();
    out_ += '{';
    stack_.push_back(Frame{true, true, {}, false});
    return *this;
  }

  CanonicalWriter& end_object() {
    out_ += '}';
    stack_.pop_back();
    return *this;
  }

  CanonicalWriter& begin_array() {
    element();
    out_ += '[';
    stack_.push_back(Frame{false, true, {}, false});
    return *this;
  }

  CanonicalWriter& end_array() {
    out_ += ']';
    stack_.pop_back();
    return *this;
  }

  CanonicalWriter& key(std::string_view k) {
    Frame& f = stack_.back();
    if (!f.object) throw std::logic_error("key outside object");
    if (f.has_last && !(f.last_key < k))
      throw std::logic_error("object keys out of canonical order: '" + f.last_key + "' then '" + std::string(k) + "'");
    f.last_key.assign(k);
    f.has_last = true;
    if (!f.first) out_ += ',';
    f.first = false;
    write_string(k);
    out_ += ':';
    pending_key_ = true;
    return *this;
  }

  CanonicalWriter& string(std::string_view s) {
    element();
    write_string(s);
    return *this;
  }

  CanonicalWriter& number(double v) {
    element();
    write_number(v);
    return *this;
  }

  CanonicalWriter& integer(long long v) {
    element();
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out_.append(buf, end);
    return *this;
  }

  CanonicalWriter& null() {
    element();
    out_ += "null";
    return *this;
  }

  CanonicalWriter& value(const std::optional<double>& v) { return v ? number(*v) : null(); }

 private:
  struct Frame {
    bool object;
    bool first;
    std::string last_key;
    bool has_last;
  };

  void element() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (stack_.empty()) return;
    Frame& f = stack_.back();
    if (f.object) throw std::logic_error("object member without key");
    if (!f.first) out_ += ',';
    f.first = false;
  }

  void write_number(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite number has no JSON form");
    if (v == 0 && std::signbit(v)) {
      out_ += "-0.0";
      return;
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out_.append(buf, end);
  }

  void write_string(std::string_view s) {
    static constexpr char hex[] = "0123456789abcdef";
    out_ += '"';
    for (char ch : s) {
      const auto c = static_cast<unsigned char>(ch);
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\b': out_ += "\\b"; break;
        case '\f': out_ += "\\f"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (c < 0x20) {
            out_ += "\\u00";
            out_ += hex[c >> 4];
            out_ += hex[c & 0xF];
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string& out_;
  std::vector<Frame> stack_;
  bool pending_key_ = false;
};

}  // namespace seismo::detail
