#pragma once

// Decoders for the text artifact formats: JSON metadata stores, JSON-lines
// analytics logs, Android shared_prefs XML, and plain timestamped app logs.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cloudsift/detail/xml.hpp"
#include "cloudsift/model.hpp"

namespace cloudsift {

// ---------------------------------------------------------------------------
// JSON

class JsonValue;
using JsonArray = std::vector<JsonValue>;
using JsonObject = std::map<std::string, JsonValue>;

class JsonValue {
 public:
  using Storage =
      std::variant<std::nullptr_t, bool, int64_t, double, std::string, JsonArray, JsonObject>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(int64_t i) : v_(i) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(JsonArray a) : v_(std::move(a)) {}
  JsonValue(JsonObject o) : v_(std::move(o)) {}

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_int() || is_double(); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<JsonArray>(v_); }
  bool is_object() const { return std::holds_alternative<JsonObject>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  int64_t as_int() const { return std::get<int64_t>(v_); }
  double as_double() const { return is_int() ? double(as_int()) : std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const JsonArray& as_array() const { return std::get<JsonArray>(v_); }
  const JsonObject& as_object() const { return std::get<JsonObject>(v_); }
  JsonObject& as_object() { return std::get<JsonObject>(v_); }

  const JsonValue* find(const std::string& key) const {
    if (!is_object()) return nullptr;
    auto it = as_object().find(key);
    return it == as_object().end() ? nullptr : &it->second;
  }

  bool operator==(const JsonValue& o) const { return v_ == o.v_; }

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

struct JsonParseError : std::runtime_error {
  size_t line, column;
  JsonParseError(const std::string& msg, size_t l, size_t c)
      : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
        line(l),
        column(c) {}
};

struct JsonDoc {
  JsonValue root;
  std::vector<std::string> warnings;
};

namespace detail {

class JsonParser {
 public:
  explicit JsonParser(std::string_view in) : in_(in) {}

  JsonDoc parse() {
    JsonDoc doc;
    doc.root = parse_value(doc.warnings);
    skip_ws();
    if (pos_ != in_.size()) fail("trailing content after JSON value");
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < in_.size(); ++i) {
      if (in_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw JsonParseError(msg, line, col);
  }

  JsonValue parse_value(std::vector<std::string>& warnings) {
    skip_ws();
    if (pos_ >= in_.size()) fail("unexpected end of input");
    char c = in_[pos_];
    switch (c) {
      case '{': return parse_object(warnings);
      case '[': return parse_array(warnings);
      case '"': return JsonValue(parse_string());
      case 't':
        expect_word("true");
        return JsonValue(true);
      case 'f':
        expect_word("false");
        return JsonValue(false);
      case 'n':
        expect_word("null");
        return JsonValue(nullptr);
      default:
        if (c == '-' || (c >= '0' && c <= '9')) return parse_number();
        fail("unexpected character");
    }
  }

  JsonValue parse_object(std::vector<std::string>& warnings) {
    ++pos_;  // {
    JsonObject obj;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return JsonValue(std::move(obj));
    }
    for (;;) {
      skip_ws();
      if (peek() != '"') fail("expected object key");
      std::string key = parse_string();
      skip_ws();
      if (peek() != ':') fail("expected ':'");
      ++pos_;
      JsonValue val = parse_value(warnings);
      auto [it, inserted] = obj.try_emplace(key, std::move(val));
      if (!inserted) {
        it->second = std::move(val);  // duplicate key: last occurrence wins
        warnings.push_back("duplicate key '" + key + "' in object; last value kept");
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        return JsonValue(std::move(obj));
      }
      fail("expected ',' or '}'");
    }
  }

  JsonValue parse_array(std::vector<std::string>& warnings) {
    ++pos_;  // [
    JsonArray arr;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return JsonValue(std::move(arr));
    }
    for (;;) {
      arr.push_back(parse_value(warnings));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return JsonValue(std::move(arr));
      }
      fail("expected ',' or ']'");
    }
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated string");
      char c = in_[pos_++];
      if (c == '"') return out;
      if (static_cast<unsigned char>(c) < 0x20) fail("raw control character in string");
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= in_.size()) fail("unterminated escape");
      char e = in_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
          uint32_t cp = parse_hex4();
          if (cp >= 0xd800 && cp <= 0xdbff) {
            if (pos_ + 1 < in_.size() && in_[pos_] == '\\' && in_[pos_ + 1] == 'u') {
              pos_ += 2;
              uint32_t lo = parse_hex4();
              if (lo >= 0xdc00 && lo <= 0xdfff)
                cp = 0x10000 + ((cp - 0xd800) << 10) + (lo - 0xdc00);
              else
                fail("invalid low surrogate");
            } else {
              fail("unpaired surrogate");
            }
          }
          append_utf8(out, cp);
          break;
        }
        default: fail("unknown escape");
      }
    }
  }

  static void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }

  uint32_t parse_hex4() {
    if (pos_ + 4 > in_.size()) fail("truncated \\u escape");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      char c = in_[pos_++];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else { fail("bad hex digit in \\u escape"); }
      v = v * 16 + static_cast<uint32_t>(d);
    }
    return v;
  }

  // Integers that fit int64 stay exact; everything else becomes a double.
  JsonValue parse_number() {
    size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
    bool integral = true;
    if (pos_ < in_.size() && in_[pos_] == '.') {
      integral = false;
      ++pos_;
      while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
    }
    if (pos_ < in_.size() && (in_[pos_] == 'e' || in_[pos_] == 'E')) {
      integral = false;
      ++pos_;
      if (pos_ < in_.size() && (in_[pos_] == '+' || in_[pos_] == '-')) ++pos_;
      while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
    }
    std::string_view text = in_.substr(start, pos_ - start);
    if (text.empty() || text == "-") fail("malformed number");
    if (integral) {
      int64_t iv = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), iv);
      if (ec == std::errc() && p == text.data() + text.size()) return JsonValue(iv);
    }
    double dv = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), dv);
    if (ec != std::errc() || p != text.data() + text.size()) fail("malformed number");
    return JsonValue(dv);
  }

  void expect_word(std::string_view w) {
    if (in_.compare(pos_, w.size(), w) != 0) fail("unexpected token");
    pos_ += w.size();
  }

  char peek() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < in_.size() &&
           (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\r' || in_[pos_] == '\n'))
      ++pos_;
  }

  std::string_view in_;
  size_t pos_ = 0;
};

inline void dump_json_to(const JsonValue& v, std::string& out);

inline void dump_json_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

inline void dump_json_to(const JsonValue& v, std::string& out) {
  if (v.is_null()) {
    out += "null";
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else if (v.is_int()) {
    out += std::to_string(v.as_int());
  } else if (v.is_double()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.as_double());
    out += buf;
  } else if (v.is_string()) {
    dump_json_string(v.as_string(), out);
  } else if (v.is_array()) {
    out.push_back('[');
    bool first = true;
    for (const auto& e : v.as_array()) {
      if (!first) out.push_back(',');
      first = false;
      dump_json_to(e, out);
    }
    out.push_back(']');
  } else {
    out.push_back('{');
    bool first = true;
    for (const auto& [k, e] : v.as_object()) {
      if (!first) out.push_back(',');
      first = false;
      dump_json_string(k, out);
      out.push_back(':');
      dump_json_to(e, out);
    }
    out.push_back('}');
  }
}

}  // namespace detail

inline JsonDoc parse_json(std::string_view text) { return detail::JsonParser(text).parse(); }

inline std::string dump_json(const JsonValue& v) {
  std::string out;
  detail::dump_json_to(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON-lines analytics logs (one event object per line)

struct ParsedEvents {
  std::vector<LogEvent> events;
  std::vector<std::string> warnings;
};

namespace detail {

inline Scalar json_to_scalar(const JsonValue& v) {
  if (v.is_null()) return nullptr;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_double()) return v.as_double();
  if (v.is_string()) return v.as_string();
  return dump_json(v);  // nested structures kept verbatim as JSON text
}

inline std::optional<double> scalar_seconds(const JsonValue& v) {
  if (v.is_number()) return v.as_double();
  if (v.is_string()) {
    const std::string& s = v.as_string();
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && end != s.c_str()) return d;
  }
  return std::nullopt;
}

}  // namespace detail

inline ParsedEvents parse_json_lines_log(std::string_view text, const std::string& source) {
  ParsedEvents out;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    // trim
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    JsonDoc doc;
    try {
      doc = parse_json(line);
    } catch (const JsonParseError&) {
      out.warnings.push_back(source + ": skipped malformed line " + std::to_string(lineno));
      continue;
    }
    for (auto& w : doc.warnings)
      out.warnings.push_back(source + " line " + std::to_string(lineno) + ": " + w);
    if (!doc.root.is_object()) {
      out.warnings.push_back(source + ": skipped non-object line " + std::to_string(lineno));
      continue;
    }
    LogEvent ev;
    ev.source = source;
    ev.event_kind = "unknown";
    const auto& obj = doc.root.as_object();
    if (const JsonValue* e = doc.root.find("event"); e && e->is_string())
      ev.event_kind = e->as_string();
    if (const JsonValue* ts = doc.root.find("ts")) {
      if (auto secs = detail::scalar_seconds(*ts)) ev.timestamp = unix_ts(*secs);
    }
    for (const auto& [k, v] : obj) {
      if (k == "event" || k == "ts") continue;
      ev.attributes.emplace_back(k, detail::json_to_scalar(v));
    }
    out.events.push_back(std::move(ev));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Android shared_prefs XML

enum class PrefKind { String, Long, Int, Boolean, Map };

inline const char* to_string(PrefKind k) {
  switch (k) {
    case PrefKind::String: return "string";
    case PrefKind::Long: return "long";
    case PrefKind::Int: return "int";
    case PrefKind::Boolean: return "boolean";
    case PrefKind::Map: return "map";
  }
  return "?";
}

struct PrefEntry {
  PrefKind kind = PrefKind::String;
  std::string name;
  std::string value;  // text content for strings, value attribute otherwise
};

struct ParsedPrefs {
  std::vector<PrefEntry> entries;  // document order
  std::vector<std::string> warnings;
};

inline ParsedPrefs parse_shared_prefs(std::string_view xml, const std::string& source = "") {
  ParsedPrefs out;
  detail::XmlNode root = detail::parse_xml(xml);
  if (root.name != "map")
    throw detail::XmlError("shared_prefs root element is <" + root.name + ">, expected <map>", 0);
  for (const auto& child : root.children) {
    PrefEntry e;
    const std::string* name = child.attr("name");
    e.name = name ? *name : "";
    if (child.name == "string") {
      e.kind = PrefKind::String;
      e.value = child.text;
    } else if (child.name == "long" || child.name == "int" || child.name == "boolean" ||
               child.name == "float") {
      e.kind = child.name == "long" ? PrefKind::Long
               : child.name == "int" ? PrefKind::Int
               : child.name == "boolean" ? PrefKind::Boolean
                                         : PrefKind::String;
      const std::string* v = child.attr("value");
      if (!v) {
        out.warnings.push_back(source + ": <" + child.name + " name=\"" + e.name +
                               "\"> missing value attribute");
        continue;
      }
      e.value = *v;
    } else if (child.name == "map") {
      e.kind = PrefKind::Map;
      out.warnings.push_back(source + ": nested <map name=\"" + e.name + "\"> not flattened");
    } else {
      out.warnings.push_back(source + ": unknown element <" + child.name + "> skipped");
      continue;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Plain timestamped logs: "<epoch-seconds> <free text>" per line.

inline const std::set<std::string>& known_log_formats() {
  static const std::set<std::string> ids = {
      "dropbox_android_log", "dropbox_ios_run", "sugarsync_log",
      "syncplicity_ios_log", "syncplicity_android_log",
  };
  return ids;
}

inline ParsedEvents parse_kv_log(std::string_view text, const std::string& format_id,
                                 const std::string& source) {
  if (!known_log_formats().count(format_id))
    throw std::invalid_argument("unknown log format id: " + format_id);
  ParsedEvents out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t num_start = i;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    bool fractional = false;
    if (i < line.size() && line[i] == '.') {
      fractional = true;
      ++i;
      while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    }
    LogEvent ev;
    ev.source = source;
    bool ok = i > num_start && (!fractional || i > num_start + 1) && i < line.size() &&
              (line[i] == ' ' || line[i] == '\t');
    if (ok) {
      double secs = std::strtod(std::string(line.substr(num_start, i - num_start)).c_str(), nullptr);
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      ev.timestamp = unix_ts(secs);
      ev.event_kind = "entry";
      ev.attributes.emplace_back("message", std::string(line.substr(i)));
    } else {
      ev.event_kind = "raw";
      ev.attributes.emplace_back("line", std::string(line));
    }
    out.events.push_back(std::move(ev));
  }
  return out;
}

}  // namespace cloudsift
