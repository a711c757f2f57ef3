#pragma once

// Minimal non-validating XML reader for the small documents this tool meets:
// Android shared_prefs files and XML property lists. No DTD processing, no
// namespace handling, entity expansion limited to the five predefined
// entities and numeric character references.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cloudsift::detail {

struct XmlError : std::runtime_error {
  size_t offset;
  XmlError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  std::string text;  // concatenated direct character data

  const std::string* attr(const std::string& key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return &v;
    return nullptr;
  }
  const XmlNode* child(const std::string& tag) const {
    for (const auto& c : children)
      if (c.name == tag) return &c;
    return nullptr;
  }
};

class XmlParser {
 public:
  explicit XmlParser(std::string_view in) : in_(in) {}

  XmlNode parse_document() {
    skip_bom();
    skip_misc();
    XmlNode root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) throw XmlError("trailing content after document element", pos_);
    return root;
  }

 private:
  void skip_bom() {
    if (in_.size() >= 3 && static_cast<uint8_t>(in_[0]) == 0xef &&
        static_cast<uint8_t>(in_[1]) == 0xbb && static_cast<uint8_t>(in_[2]) == 0xbf)
      pos_ = 3;
  }

  // whitespace, processing instructions, comments, DOCTYPE
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (remaining(2) && in_[pos_] == '<' && in_[pos_ + 1] == '?') {
        size_t end = in_.find("?>", pos_);
        if (end == std::string_view::npos) throw XmlError("unterminated processing instruction", pos_);
        pos_ = end + 2;
      } else if (remaining(4) && in_.compare(pos_, 4, "<!--") == 0) {
        size_t end = in_.find("-->", pos_);
        if (end == std::string_view::npos) throw XmlError("unterminated comment", pos_);
        pos_ = end + 3;
      } else if (remaining(2) && in_[pos_] == '<' && in_[pos_ + 1] == '!') {
        skip_markup_decl();
      } else {
        return;
      }
    }
  }

  // <!DOCTYPE ...> with quoted strings that may contain '>'
  void skip_markup_decl() {
    size_t start = pos_;
    pos_ += 2;
    int depth = 1;
    while (pos_ < in_.size() && depth > 0) {
      char c = in_[pos_];
      if (c == '"' || c == '\'') {
        size_t end = in_.find(c, pos_ + 1);
        if (end == std::string_view::npos) throw XmlError("unterminated literal in declaration", start);
        pos_ = end + 1;
        continue;
      }
      if (c == '<') ++depth;
      if (c == '>') --depth;
      ++pos_;
    }
    if (depth != 0) throw XmlError("unterminated markup declaration", start);
  }

  XmlNode parse_element() {
    if (!remaining(1) || in_[pos_] != '<') throw XmlError("expected element", pos_);
    ++pos_;
    XmlNode node;
    node.name = parse_name();
    for (;;) {
      skip_ws();
      if (!remaining(1)) throw XmlError("unterminated start tag", pos_);
      if (in_[pos_] == '/') {
        if (!remaining(2) || in_[pos_ + 1] != '>') throw XmlError("malformed empty-element tag", pos_);
        pos_ += 2;
        return node;
      }
      if (in_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string aname = parse_name();
      skip_ws();
      expect('=');
      skip_ws();
      node.attrs.emplace_back(std::move(aname), parse_quoted());
    }
    // content
    for (;;) {
      if (!remaining(1)) throw XmlError("unterminated element: " + node.name, pos_);
      if (in_[pos_] == '<') {
        if (remaining(2) && in_[pos_ + 1] == '/') {
          pos_ += 2;
          std::string closing = parse_name();
          if (closing != node.name)
            throw XmlError("mismatched end tag: " + closing + " closes " + node.name, pos_);
          skip_ws();
          expect('>');
          return node;
        }
        if (remaining(4) && in_.compare(pos_, 4, "<!--") == 0) {
          size_t end = in_.find("-->", pos_);
          if (end == std::string_view::npos) throw XmlError("unterminated comment", pos_);
          pos_ = end + 3;
          continue;
        }
        if (remaining(2) && in_[pos_ + 1] == '?') {
          size_t end = in_.find("?>", pos_);
          if (end == std::string_view::npos) throw XmlError("unterminated processing instruction", pos_);
          pos_ = end + 2;
          continue;
        }
        node.children.push_back(parse_element());
        continue;
      }
      size_t start = pos_;
      while (remaining(1) && in_[pos_] != '<') ++pos_;
      node.text += decode_entities(in_.substr(start, pos_ - start), start);
    }
  }

  std::string parse_name() {
    size_t start = pos_;
    while (remaining(1)) {
      char c = in_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '>' || c == '/' || c == '=')
        break;
      ++pos_;
    }
    if (pos_ == start) throw XmlError("expected name", pos_);
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string parse_quoted() {
    if (!remaining(1) || (in_[pos_] != '"' && in_[pos_] != '\''))
      throw XmlError("expected quoted attribute value", pos_);
    char q = in_[pos_++];
    size_t start = pos_;
    size_t end = in_.find(q, pos_);
    if (end == std::string_view::npos) throw XmlError("unterminated attribute value", start);
    pos_ = end + 1;
    return decode_entities(in_.substr(start, end - start), start);
  }

  std::string decode_entities(std::string_view s, size_t base) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
      if (s[i] != '&') {
        out.push_back(s[i++]);
        continue;
      }
      size_t semi = s.find(';', i);
      if (semi == std::string_view::npos) throw XmlError("unterminated entity reference", base + i);
      std::string_view ent = s.substr(i + 1, semi - i - 1);
      if (ent == "amp") out.push_back('&');
      else if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "quot") out.push_back('"');
      else if (ent == "apos") out.push_back('\'');
      else if (!ent.empty() && ent[0] == '#') {
        uint32_t cp = 0;
        bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
        for (size_t k = hex ? 2 : 1; k < ent.size(); ++k) {
          int d = hex ? hex_nibble_of(ent[k]) : (ent[k] >= '0' && ent[k] <= '9' ? ent[k] - '0' : -1);
          if (d < 0) throw XmlError("bad character reference", base + i);
          cp = cp * (hex ? 16 : 10) + static_cast<uint32_t>(d);
        }
        append_utf8(out, cp);
      } else {
        throw XmlError("unknown entity: " + std::string(ent), base + i);
      }
      i = semi + 1;
    }
    return out;
  }

  static int hex_nibble_of(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
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

  void skip_ws() {
    while (remaining(1) &&
           (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\r' || in_[pos_] == '\n'))
      ++pos_;
  }

  void expect(char c) {
    if (!remaining(1) || in_[pos_] != c)
      throw XmlError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool remaining(size_t n) const { return pos_ + n <= in_.size(); }

  std::string_view in_;
  size_t pos_ = 0;
};

inline XmlNode parse_xml(std::string_view text) { return XmlParser(text).parse_document(); }

}  // namespace cloudsift::detail
