#pragma once

// Apple property list reader and writer. Handles the XML form and the
// binary bplist00 form; both are produced by the iOS apps whose caches we
// reconstruct. The reader is a from-scratch implementation so that parsed
// values can be differentially compared against an independent decoder.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/detail/calendar.hpp"
#include "cloudsift/detail/xml.hpp"
#include "cloudsift/model.hpp"

namespace cloudsift {

struct PlistError : std::runtime_error {
  explicit PlistError(const std::string& msg) : std::runtime_error(msg) {}
};

class PlistValue;
using PlistArray = std::vector<PlistValue>;
using PlistDict = std::map<std::string, PlistValue>;
using PlistData = std::vector<uint8_t>;

// Dates carry Apple absolute seconds, the storage unit of both plist forms.
struct PlistDate {
  double apple_seconds = 0;
  bool operator==(const PlistDate&) const = default;
};

class PlistValue {
 public:
  using Storage =
      std::variant<bool, int64_t, double, std::string, PlistData, PlistDate, PlistArray, PlistDict>;

  PlistValue() : v_(std::string()) {}
  PlistValue(bool b) : v_(b) {}
  PlistValue(int64_t i) : v_(i) {}
  PlistValue(int i) : v_(int64_t(i)) {}
  PlistValue(double d) : v_(d) {}
  PlistValue(std::string s) : v_(std::move(s)) {}
  PlistValue(const char* s) : v_(std::string(s)) {}
  PlistValue(PlistData d) : v_(std::move(d)) {}
  PlistValue(PlistDate d) : v_(d) {}
  PlistValue(PlistArray a) : v_(std::move(a)) {}
  PlistValue(PlistDict d) : v_(std::move(d)) {}

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_real() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_data() const { return std::holds_alternative<PlistData>(v_); }
  bool is_date() const { return std::holds_alternative<PlistDate>(v_); }
  bool is_array() const { return std::holds_alternative<PlistArray>(v_); }
  bool is_dict() const { return std::holds_alternative<PlistDict>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  int64_t as_int() const { return std::get<int64_t>(v_); }
  double as_real() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const PlistData& as_data() const { return std::get<PlistData>(v_); }
  PlistDate as_date() const { return std::get<PlistDate>(v_); }
  const PlistArray& as_array() const { return std::get<PlistArray>(v_); }
  const PlistDict& as_dict() const { return std::get<PlistDict>(v_); }
  PlistDict& as_dict() { return std::get<PlistDict>(v_); }

  const PlistValue* find(const std::string& key) const {
    if (!is_dict()) return nullptr;
    auto it = as_dict().find(key);
    return it == as_dict().end() ? nullptr : &it->second;
  }

  bool operator==(const PlistValue& o) const { return v_ == o.v_; }

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

namespace detail {

// --- base64 ---------------------------------------------------------------

inline std::string base64_encode(std::span<const uint8_t> in) {
  static const char tab[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= in.size(); i += 3) {
    uint32_t v = (uint32_t(in[i]) << 16) | (uint32_t(in[i + 1]) << 8) | in[i + 2];
    out.push_back(tab[(v >> 18) & 63]);
    out.push_back(tab[(v >> 12) & 63]);
    out.push_back(tab[(v >> 6) & 63]);
    out.push_back(tab[v & 63]);
  }
  size_t rem = in.size() - i;
  if (rem == 1) {
    uint32_t v = uint32_t(in[i]) << 16;
    out.push_back(tab[(v >> 18) & 63]);
    out.push_back(tab[(v >> 12) & 63]);
    out += "==";
  } else if (rem == 2) {
    uint32_t v = (uint32_t(in[i]) << 16) | (uint32_t(in[i + 1]) << 8);
    out.push_back(tab[(v >> 18) & 63]);
    out.push_back(tab[(v >> 12) & 63]);
    out.push_back(tab[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline std::vector<uint8_t> base64_decode(std::string_view in) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<uint8_t> out;
  uint32_t acc = 0;
  int bits = 0;
  for (char c : in) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '=') break;
    int v = val(c);
    if (v < 0) throw PlistError("invalid base64 character in <data>");
    acc = (acc << 6) | static_cast<uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<uint8_t>((acc >> bits) & 0xff));
    }
  }
  return out;
}

// --- XML form -------------------------------------------------------------

inline PlistValue plist_from_xml_node(const XmlNode& n) {
  if (n.name == "dict") {
    PlistDict d;
    for (size_t i = 0; i < n.children.size(); i += 2) {
      if (n.children[i].name != "key" || i + 1 >= n.children.size())
        throw PlistError("malformed <dict>: expected alternating <key>/value elements");
      d[n.children[i].text] = plist_from_xml_node(n.children[i + 1]);
    }
    return PlistValue(std::move(d));
  }
  if (n.name == "array") {
    PlistArray a;
    for (const auto& c : n.children) a.push_back(plist_from_xml_node(c));
    return PlistValue(std::move(a));
  }
  if (n.name == "string") return PlistValue(n.text);
  if (n.name == "integer") {
    try {
      return PlistValue(int64_t(std::stoll(n.text)));
    } catch (...) {
      throw PlistError("bad <integer>: " + n.text);
    }
  }
  if (n.name == "real") {
    try {
      return PlistValue(std::stod(n.text));
    } catch (...) {
      throw PlistError("bad <real>: " + n.text);
    }
  }
  if (n.name == "true") return PlistValue(true);
  if (n.name == "false") return PlistValue(false);
  if (n.name == "data") return PlistValue(base64_decode(n.text));
  if (n.name == "date") {
    auto unix_val = parse_iso8601_utc(n.text);
    if (!unix_val) throw PlistError("bad <date>: " + n.text);
    return PlistValue(PlistDate{double(*unix_val - kAppleEpochOffset)});
  }
  throw PlistError("unknown plist element <" + n.name + ">");
}

// --- binary form ----------------------------------------------------------

class BinaryPlistReader {
 public:
  explicit BinaryPlistReader(std::span<const uint8_t> in) : in_(in) {}

  PlistValue parse() {
    if (in_.size() < 40 || std::memcmp(in_.data(), "bplist0", 7) != 0)
      throw PlistError("not a binary plist");
    const uint8_t* t = in_.data() + in_.size() - 32;
    offset_size_ = t[6];
    ref_size_ = t[7];
    num_objects_ = read_be64(t + 8);
    uint64_t top = read_be64(t + 16);
    table_off_ = read_be64(t + 24);
    if (offset_size_ < 1 || offset_size_ > 8 || ref_size_ < 1 || ref_size_ > 8)
      throw PlistError("binary plist trailer has invalid field widths");
    if (num_objects_ == 0 || top >= num_objects_) throw PlistError("binary plist trailer out of range");
    if (table_off_ + num_objects_ * offset_size_ > in_.size() - 32)
      throw PlistError("binary plist offset table out of range");
    return read_object(top);
  }

 private:
  uint64_t object_offset(uint64_t idx) const {
    return read_uint(table_off_ + idx * offset_size_, offset_size_);
  }

  uint64_t read_uint(uint64_t at, unsigned n) const {
    if (at + n > in_.size()) throw PlistError("binary plist read past end");
    uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v = (v << 8) | in_[at + i];
    return v;
  }

  // Length fields of 0xf are followed by an int object holding the count.
  uint64_t read_length(uint64_t& pos, uint8_t info) const {
    if (info != 0x0f) return info;
    uint8_t marker = static_cast<uint8_t>(read_uint(pos, 1));
    ++pos;
    if ((marker >> 4) != 0x1) throw PlistError("expected int marker for extended length");
    unsigned n = 1u << (marker & 0x0f);
    if (n > 8) throw PlistError("length int wider than 8 bytes");
    uint64_t v = read_uint(pos, n);
    pos += n;
    return v;
  }

  PlistValue read_object(uint64_t idx) {
    if (idx >= num_objects_) throw PlistError("object reference out of range");
    if (in_progress_.count(idx)) throw PlistError("cycle in binary plist object graph");
    in_progress_.insert(idx);
    PlistValue v = read_object_at(object_offset(idx));
    in_progress_.erase(idx);
    return v;
  }

  PlistValue read_object_at(uint64_t pos) {
    uint8_t marker = static_cast<uint8_t>(read_uint(pos, 1));
    ++pos;
    uint8_t type = marker >> 4;
    uint8_t info = marker & 0x0f;
    switch (type) {
      case 0x0:
        if (info == 0x8) return PlistValue(false);
        if (info == 0x9) return PlistValue(true);
        throw PlistError("unsupported null-class object");
      case 0x1: {  // int: 1/2/4 unsigned, 8 signed
        unsigned n = 1u << info;
        if (n > 8) throw PlistError("integer wider than 8 bytes");
        uint64_t raw = read_uint(pos, n);
        if (n == 8) return PlistValue(static_cast<int64_t>(raw));
        return PlistValue(static_cast<int64_t>(raw));
      }
      case 0x2: {  // real
        unsigned n = 1u << info;
        if (n == 4) {
          uint32_t raw = static_cast<uint32_t>(read_uint(pos, 4));
          float f;
          std::memcpy(&f, &raw, 4);
          return PlistValue(double(f));
        }
        if (n == 8) {
          uint64_t raw = read_uint(pos, 8);
          double d;
          std::memcpy(&d, &raw, 8);
          return PlistValue(d);
        }
        throw PlistError("unsupported real width");
      }
      case 0x3: {  // date: float64 of Apple absolute seconds
        if (info != 0x3) throw PlistError("unsupported date encoding");
        uint64_t raw = read_uint(pos, 8);
        double d;
        std::memcpy(&d, &raw, 8);
        return PlistValue(PlistDate{d});
      }
      case 0x4: {  // data
        uint64_t len = read_length(pos, info);
        if (pos + len > in_.size()) throw PlistError("data object past end");
        return PlistValue(PlistData(in_.begin() + pos, in_.begin() + pos + len));
      }
      case 0x5: {  // ASCII string
        uint64_t len = read_length(pos, info);
        if (pos + len > in_.size()) throw PlistError("string object past end");
        return PlistValue(std::string(in_.begin() + pos, in_.begin() + pos + len));
      }
      case 0x6: {  // UTF-16BE string; len counts code units
        uint64_t len = read_length(pos, info);
        if (pos + len * 2 > in_.size()) throw PlistError("string object past end");
        std::string out;
        for (uint64_t i = 0; i < len;) {
          uint32_t cu = static_cast<uint32_t>(read_uint(pos + i * 2, 2));
          ++i;
          uint32_t cp = cu;
          if (cu >= 0xd800 && cu <= 0xdbff) {
            if (i >= len) throw PlistError("unpaired surrogate in UTF-16 string");
            uint32_t lo = static_cast<uint32_t>(read_uint(pos + i * 2, 2));
            ++i;
            if (lo < 0xdc00 || lo > 0xdfff) throw PlistError("invalid surrogate pair");
            cp = 0x10000 + ((cu - 0xd800) << 10) + (lo - 0xdc00);
          } else if (cu >= 0xdc00 && cu <= 0xdfff) {
            throw PlistError("stray low surrogate in UTF-16 string");
          }
          append_utf8(out, cp);
        }
        return PlistValue(std::move(out));
      }
      case 0xa: {  // array
        uint64_t len = read_length(pos, info);
        PlistArray arr;
        arr.reserve(len);
        for (uint64_t i = 0; i < len; ++i)
          arr.push_back(read_object(read_uint(pos + i * ref_size_, ref_size_)));
        return PlistValue(std::move(arr));
      }
      case 0xd: {  // dict: key refs then value refs
        uint64_t len = read_length(pos, info);
        PlistDict d;
        for (uint64_t i = 0; i < len; ++i) {
          PlistValue key = read_object(read_uint(pos + i * ref_size_, ref_size_));
          if (!key.is_string()) throw PlistError("non-string dict key");
          d[key.as_string()] =
              read_object(read_uint(pos + (len + i) * ref_size_, ref_size_));
        }
        return PlistValue(std::move(d));
      }
      default:
        throw PlistError("unsupported binary plist object type");
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

  std::span<const uint8_t> in_;
  unsigned offset_size_ = 0, ref_size_ = 0;
  uint64_t num_objects_ = 0, table_off_ = 0;
  std::set<uint64_t> in_progress_;
};

}  // namespace detail

inline bool looks_like_binary_plist(std::span<const uint8_t> bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), "bplist0", 7) == 0;
}

inline PlistValue parse_plist(std::span<const uint8_t> bytes) {
  if (looks_like_binary_plist(bytes)) return detail::BinaryPlistReader(bytes).parse();
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  detail::XmlNode root = [&] {
    try {
      return detail::parse_xml(text);
    } catch (const detail::XmlError& e) {
      throw PlistError(std::string("not a property list: ") + e.what());
    }
  }();
  if (root.name == "plist") {
    if (root.children.size() != 1) throw PlistError("<plist> must contain exactly one value");
    return detail::plist_from_xml_node(root.children[0]);
  }
  return detail::plist_from_xml_node(root);
}

// ---------------------------------------------------------------------------
// Writers. XML output is accepted by common decoders; binary output follows
// bplist00 with per-object entries (no interning).

namespace detail {

inline void xml_escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out.push_back(c);
  }
}

inline void plist_xml_node(const PlistValue& v, std::string& out, int depth) {
  std::string ind(static_cast<size_t>(depth), '\t');
  if (v.is_bool()) {
    out += ind + (v.as_bool() ? "<true/>\n" : "<false/>\n");
  } else if (v.is_int()) {
    out += ind + "<integer>" + std::to_string(v.as_int()) + "</integer>\n";
  } else if (v.is_real()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.as_real());
    out += ind + "<real>" + buf + "</real>\n";
  } else if (v.is_string()) {
    out += ind + "<string>";
    xml_escape_into(out, v.as_string());
    out += "</string>\n";
  } else if (v.is_data()) {
    out += ind + "<data>" + base64_encode(v.as_data()) + "</data>\n";
  } else if (v.is_date()) {
    int64_t unix_val = static_cast<int64_t>(v.as_date().apple_seconds) + kAppleEpochOffset;
    out += ind + "<date>" + format_iso8601_utc(unix_val) + "</date>\n";
  } else if (v.is_array()) {
    if (v.as_array().empty()) {
      out += ind + "<array/>\n";
      return;
    }
    out += ind + "<array>\n";
    for (const auto& e : v.as_array()) plist_xml_node(e, out, depth + 1);
    out += ind + "</array>\n";
  } else {
    if (v.as_dict().empty()) {
      out += ind + "<dict/>\n";
      return;
    }
    out += ind + "<dict>\n";
    for (const auto& [k, e] : v.as_dict()) {
      out += ind + "\t<key>";
      xml_escape_into(out, k);
      out += "</key>\n";
      plist_xml_node(e, out, depth + 1);
    }
    out += ind + "</dict>\n";
  }
}

class BinaryPlistWriter {
 public:
  std::vector<uint8_t> write(const PlistValue& root) {
    out_.assign({'b', 'p', 'l', 'i', 's', 't', '0', '0'});
    flatten(root);
    std::vector<uint64_t> offsets;
    // Object bodies are emitted in flatten order; refs were assigned then.
    for (const auto& body : bodies_) {
      offsets.push_back(out_.size());
      out_.insert(out_.end(), body.begin(), body.end());
    }
    uint64_t table_off = out_.size();
    unsigned offset_size = width_for(table_off);
    for (uint64_t off : offsets) append_uint(out_, off, offset_size);
    uint8_t trailer[32] = {};
    trailer[6] = static_cast<uint8_t>(offset_size);
    trailer[7] = static_cast<uint8_t>(ref_size_);
    put_be64(trailer + 8, bodies_.size());
    put_be64(trailer + 16, 0);  // root is object 0
    put_be64(trailer + 24, table_off);
    out_.insert(out_.end(), trailer, trailer + 32);
    return std::move(out_);
  }

 private:
  static unsigned width_for(uint64_t v) {
    if (v <= 0xff) return 1;
    if (v <= 0xffff) return 2;
    if (v <= 0xffffffffull) return 4;
    return 8;
  }

  static void append_uint(std::vector<uint8_t>& out, uint64_t v, unsigned n) {
    for (unsigned i = 0; i < n; ++i)
      out.push_back(static_cast<uint8_t>((v >> (8 * (n - 1 - i))) & 0xff));
  }

  static void put_be64(uint8_t* p, uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<uint8_t>((v >> (8 * (7 - i))) & 0xff);
  }

  // Two passes over the tree: the first sizes the object table so the ref
  // width is known, the second emits bodies. Collections reserve their slot
  // before descending so the root stays object 0.
  void flatten(const PlistValue& root) {
    ref_size_ = width_for(count_objects(root) - 1);
    emit(root);
  }

  uint64_t count_objects(const PlistValue& v) {
    if (v.is_array()) {
      uint64_t n = 1;
      for (const auto& e : v.as_array()) n += count_objects(e);
      return n;
    }
    if (v.is_dict()) {
      uint64_t n = 1;
      for (const auto& [k, e] : v.as_dict()) n += 1 + count_objects(e);
      return n;
    }
    return 1;
  }

  uint64_t emit(const PlistValue& v) {
    uint64_t idx = bodies_.size();
    bodies_.emplace_back();
    if (v.is_bool()) {
      bodies_[idx].push_back(v.as_bool() ? 0x09 : 0x08);
    } else if (v.is_int()) {
      emit_int(bodies_[idx], v.as_int());
    } else if (v.is_real()) {
      emit_real(bodies_[idx], v.as_real());
    } else if (v.is_string()) {
      emit_string(bodies_[idx], v.as_string());
    } else if (v.is_data()) {
      emit_marker_len(bodies_[idx], 0x4, v.as_data().size());
      bodies_[idx].insert(bodies_[idx].end(), v.as_data().begin(), v.as_data().end());
    } else if (v.is_date()) {
      bodies_[idx].push_back(0x33);
      uint64_t raw;
      double d = v.as_date().apple_seconds;
      std::memcpy(&raw, &d, 8);
      append_uint(bodies_[idx], raw, 8);
    } else if (v.is_array()) {
      std::vector<uint64_t> refs;
      for (const auto& e : v.as_array()) refs.push_back(emit(e));
      emit_marker_len(bodies_[idx], 0xa, refs.size());
      for (uint64_t r : refs) append_uint(bodies_[idx], r, ref_size_);
    } else {
      std::vector<uint64_t> krefs, vrefs;
      for (const auto& [k, e] : v.as_dict()) {
        uint64_t ki = bodies_.size();
        bodies_.emplace_back();
        emit_string(bodies_[ki], k);
        krefs.push_back(ki);
        vrefs.push_back(emit(e));
      }
      emit_marker_len(bodies_[idx], 0xd, krefs.size());
      for (uint64_t r : krefs) append_uint(bodies_[idx], r, ref_size_);
      for (uint64_t r : vrefs) append_uint(bodies_[idx], r, ref_size_);
    }
    return idx;
  }

  static void emit_marker_len(std::vector<uint8_t>& out, uint8_t type, uint64_t len) {
    if (len < 15) {
      out.push_back(static_cast<uint8_t>((type << 4) | len));
      return;
    }
    out.push_back(static_cast<uint8_t>((type << 4) | 0x0f));
    emit_int(out, static_cast<int64_t>(len));
  }

  static void emit_int(std::vector<uint8_t>& out, int64_t v) {
    if (v < 0) {
      out.push_back(0x13);
      append_uint(out, static_cast<uint64_t>(v), 8);
    } else if (v <= 0xff) {
      out.push_back(0x10);
      append_uint(out, static_cast<uint64_t>(v), 1);
    } else if (v <= 0xffff) {
      out.push_back(0x11);
      append_uint(out, static_cast<uint64_t>(v), 2);
    } else if (v <= 0xffffffffll) {
      out.push_back(0x12);
      append_uint(out, static_cast<uint64_t>(v), 4);
    } else {
      out.push_back(0x13);
      append_uint(out, static_cast<uint64_t>(v), 8);
    }
  }

  static void emit_real(std::vector<uint8_t>& out, double d) {
    out.push_back(0x23);
    uint64_t raw;
    std::memcpy(&raw, &d, 8);
    append_uint(out, raw, 8);
  }

  static void emit_string(std::vector<uint8_t>& out, const std::string& s) {
    bool ascii = true;
    for (unsigned char c : s)
      if (c >= 0x80) {
        ascii = false;
        break;
      }
    if (ascii) {
      emit_marker_len(out, 0x5, s.size());
      out.insert(out.end(), s.begin(), s.end());
      return;
    }
    // UTF-8 to UTF-16BE code units
    std::vector<uint16_t> units;
    size_t i = 0;
    while (i < s.size()) {
      unsigned char c = static_cast<unsigned char>(s[i]);
      uint32_t cp;
      size_t n;
      if (c < 0x80) {
        cp = c;
        n = 1;
      } else if ((c & 0xe0) == 0xc0) {
        cp = c & 0x1f;
        n = 2;
      } else if ((c & 0xf0) == 0xe0) {
        cp = c & 0x0f;
        n = 3;
      } else if ((c & 0xf8) == 0xf0) {
        cp = c & 0x07;
        n = 4;
      } else {
        throw PlistError("invalid UTF-8 in string");
      }
      if (i + n > s.size()) throw PlistError("truncated UTF-8 in string");
      for (size_t j = 1; j < n; ++j) cp = (cp << 6) | (static_cast<unsigned char>(s[i + j]) & 0x3f);
      i += n;
      if (cp >= 0x10000) {
        cp -= 0x10000;
        units.push_back(static_cast<uint16_t>(0xd800 + (cp >> 10)));
        units.push_back(static_cast<uint16_t>(0xdc00 + (cp & 0x3ff)));
      } else {
        units.push_back(static_cast<uint16_t>(cp));
      }
    }
    emit_marker_len(out, 0x6, units.size());
    for (uint16_t u : units) append_uint(out, u, 2);
  }

  std::vector<std::vector<uint8_t>> bodies_;
  std::vector<uint8_t> out_;
  unsigned ref_size_ = 1;
};

}  // namespace detail

inline std::string dump_plist_xml(const PlistValue& v) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<!DOCTYPE plist PUBLIC \"-//Apple//DTD PLIST 1.0//EN\" "
      "\"http://www.apple.com/DTDs/PropertyList-1.0.dtd\">\n"
      "<plist version=\"1.0\">\n";
  detail::plist_xml_node(v, out, 0);
  out += "</plist>\n";
  return out;
}

inline std::vector<uint8_t> dump_plist_binary(const PlistValue& v) {
  return detail::BinaryPlistWriter().write(v);
}

}  // namespace cloudsift
