// Copyright 2026 The qdaif Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdaif/toml.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "qdaif/errors.hpp"

namespace qdaif::toml {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Json document() {
    Json root = Json::object();
    Json* table = &root;
    while (true) {
      skip_ws_comments_newlines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array = peek(1) == '[';
        pos_ += array ? 2 : 1;
        skip_inline_ws();
        auto path = key_path();
        skip_inline_ws();
        expect(']');
        if (array) expect(']');
        table = array ? &append_table(root, path) : &open_table(root, path);
        end_of_line();
        continue;
      }
      auto path = key_path();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      Json v = value();
      assign(*table, path, std::move(v));
      end_of_line();
    }
    return root;
  }

  Json single_value() {
    skip_inline_ws();
    Json v = value();
    skip_inline_ws();
    if (!eof()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line_), msg);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }
  char get() {
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  bool starts_with(std::string_view p) const {
    return s_.substr(pos_).starts_with(p);
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }
  void skip_ws_comments_newlines() {
    while (!eof()) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\r' && peek(1) == '\n') ++pos_;
      if (peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') fail("expected end of line");
    get();
  }

  static bool bare_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> path;
    while (true) {
      skip_inline_ws();
      if (peek() == '"') {
        path.push_back(basic_string());
      } else if (peek() == '\'') {
        path.push_back(literal_string());
      } else {
        std::string k;
        while (!eof() && bare_key_char(peek())) k += get();
        if (k.empty()) fail("expected a key");
        path.push_back(std::move(k));
      }
      skip_inline_ws();
      if (peek() != '.') break;
      get();
    }
    return path;
  }

  Json& open_table(Json& root, const std::vector<std::string>& path) {
    Json* cur = &root;
    for (const auto& k : path) {
      Json& next = (*cur)[k];
      if (next.is_null()) next = Json::object();
      if (next.is_array() && !next.empty() && next.back().is_object()) {
        cur = &next.back();
        continue;
      }
      if (!next.is_object()) fail("key '" + k + "' is not a table");
      cur = &next;
    }
    return *cur;
  }

  Json& append_table(Json& root, const std::vector<std::string>& path) {
    std::vector<std::string> parent(path.begin(), path.end() - 1);
    Json& owner = open_table(root, parent);
    Json& arr = owner[path.back()];
    if (arr.is_null()) arr = Json::array();
    if (!arr.is_array()) fail("key '" + path.back() + "' is not an array");
    arr.push_back(Json::object());
    return arr.back();
  }

  void assign(Json& table, const std::vector<std::string>& path, Json v) {
    Json* cur = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Json& next = (*cur)[path[i]];
      if (next.is_null()) next = Json::object();
      if (!next.is_object()) fail("key '" + path[i] + "' is not a table");
      cur = &next;
    }
    if (cur->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*cur)[path.back()] = std::move(v);
  }

  Json value() {
    const char c = peek();
    if (c == '"') {
      if (starts_with("\"\"\"")) return multiline_basic();
      return basic_string();
    }
    if (c == '\'') {
      if (starts_with("'''")) return multiline_literal();
      return literal_string();
    }
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (starts_with("true")) {
      pos_ += 4;
      return true;
    }
    if (starts_with("false")) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      fail("invalid unicode escape");
    }
  }

  void escape(std::string& out) {
    const char e = get();
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case 'b': out += '\b'; break;
      case 'f': out += '\f'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'u':
      case 'U': {
        const int n = e == 'u' ? 4 : 8;
        std::uint32_t cp = 0;
        for (int i = 0; i < n; ++i) {
          const char h = get();
          cp <<= 4;
          if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
          else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
          else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
          else fail("bad hex digit in unicode escape");
        }
        append_utf8(out, cp);
        break;
      }
      default:
        fail(std::string("unknown escape \\") + e);
    }
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') break;
      if (c == '\\') {
        escape(out);
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  std::string multiline_basic() {
    pos_ += 3;
    if (peek() == '\r' && peek(1) == '\n') pos_ += 1;
    if (peek() == '\n') get();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated multi-line string");
      if (starts_with("\"\"\"")) {
        pos_ += 3;
        // Up to two quotes may sit right before the closing delimiter.
        for (int extra = 0; extra < 2 && peek() == '"'; ++extra) out += get();
        break;
      }
      const char c = get();
      if (c != '\\') {
        out += c;
        continue;
      }
      // Line-ending backslash: drop it and the following whitespace.
      std::size_t look = pos_;
      while (look < s_.size() && (s_[look] == ' ' || s_[look] == '\t')) ++look;
      if (look < s_.size() && (s_[look] == '\n' || s_[look] == '\r')) {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' ||
                          peek() == '\r')) {
          get();
        }
        continue;
      }
      escape(out);
    }
    return out;
  }

  std::string multiline_literal() {
    pos_ += 3;
    if (peek() == '\r' && peek(1) == '\n') pos_ += 1;
    if (peek() == '\n') get();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated multi-line string");
      if (starts_with("'''")) {
        pos_ += 3;
        for (int extra = 0; extra < 2 && peek() == '\''; ++extra) out += get();
        break;
      }
      out += get();
    }
    return out;
  }

  Json array() {
    expect('[');
    Json out = Json::array();
    while (true) {
      skip_ws_comments_newlines();
      if (peek() == ']') {
        get();
        return out;
      }
      out.push_back(value());
      skip_ws_comments_newlines();
      if (peek() == ',') {
        get();
        continue;
      }
      skip_ws_comments_newlines();
      expect(']');
      return out;
    }
  }

  Json inline_table() {
    expect('{');
    Json out = Json::object();
    skip_inline_ws();
    if (peek() == '}') {
      get();
      return out;
    }
    while (true) {
      auto path = key_path();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      assign(out, path, value());
      skip_inline_ws();
      if (peek() == ',') {
        get();
        skip_inline_ws();
        continue;
      }
      expect('}');
      return out;
    }
  }

  Json number() {
    std::string tok;
    while (!eof()) {
      const char c = peek();
      if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' ||
          c == 'e' || c == 'E' || c == '_' || c == 'i' || c == 'n' ||
          c == 'f' || c == 'a' || c == 'x' || c == 'o' || c == 'b' ||
          (c >= 'A' && c <= 'F') || (c >= 'a' && c <= 'f') || c == ':' ||
          c == 'T' || c == 'Z') {
        tok += get();
      } else {
        break;
      }
    }
    if (tok.empty()) fail("expected a value");
    if (tok.find(':') != std::string::npos ||
        (tok.size() >= 10 && tok[4] == '-' && tok[7] == '-')) {
      fail("date-time values are not supported");
    }
    std::string clean;
    for (char c : tok) {
      if (c != '_') clean += c;
    }
    const bool neg = !clean.empty() && clean[0] == '-';
    std::string mag = (clean[0] == '+' || clean[0] == '-') ? clean.substr(1) : clean;
    if (mag == "inf") {
      return neg ? -std::numeric_limits<double>::infinity()
                 : std::numeric_limits<double>::infinity();
    }
    if (mag == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (mag.starts_with("0x") || mag.starts_with("0o") || mag.starts_with("0b")) {
      const int base = mag[1] == 'x' ? 16 : mag[1] == 'o' ? 8 : 2;
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(mag.data() + 2, mag.data() + mag.size(), v, base);
      if (ec != std::errc() || p != mag.data() + mag.size()) fail("bad integer '" + tok + "'");
      return v;
    }
    const bool is_float = mag.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(clean.data() + (clean[0] == '+' ? 1 : 0),
                                     clean.data() + clean.size(), v);
      if (ec != std::errc() || p != clean.data() + clean.size()) {
        fail("bad value '" + tok + "'");
      }
      return v;
    }
    double v = 0;
    auto [p, ec] = std::from_chars(clean.data() + (clean[0] == '+' ? 1 : 0),
                                   clean.data() + clean.size(), v);
    if (ec != std::errc() || p != clean.data() + clean.size()) {
      fail("bad number '" + tok + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string key(const std::string& k) {
  bool bare = !k.empty();
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    bare = bare && ok;
  }
  return bare ? k : quote(k);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string scalar(const Json& v);

std::string inline_value(const Json& v) {
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ", ";
      out += inline_value(v[i]);
    }
    return out + "]";
  }
  if (v.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, x] : v.items()) {
      if (x.is_null()) continue;
      out += first ? " " : ", ";
      first = false;
      out += key(k) + " = " + inline_value(x);
    }
    return out + (first ? "}" : " }");
  }
  return scalar(v);
}

std::string scalar(const Json& v) {
  if (v.is_string()) return quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  return inline_value(v);
}

bool is_table_array(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& x : v) {
    if (!x.is_object()) return false;
  }
  return true;
}

void write_table(std::string& out, const Json& table,
                 const std::string& prefix) {
  for (const auto& [k, v] : table.items()) {
    if (v.is_null() || v.is_object() || is_table_array(v)) continue;
    out += key(k) + " = " + inline_value(v) + "\n";
  }
  for (const auto& [k, v] : table.items()) {
    const std::string name = prefix.empty() ? key(k) : prefix + "." + key(k);
    if (v.is_object()) {
      out += "\n[" + name + "]\n";
      write_table(out, v, name);
    } else if (is_table_array(v)) {
      for (const auto& item : v) {
        out += "\n[[" + name + "]]\n";
        write_table(out, item, name);
      }
    }
  }
}

}  // namespace

Json parse(std::string_view text) { return Parser(text).document(); }

Json parse_value(std::string_view text) { return Parser(text).single_value(); }

std::string write(const Json& doc) {
  if (!doc.is_object()) throw ArgumentError("TOML documents must be tables");
  std::string out;
  write_table(out, doc, "");
  if (!out.empty() && out.front() == '\n') out.erase(0, 1);
  return out;
}

}  // namespace qdaif::toml
