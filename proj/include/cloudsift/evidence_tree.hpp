#pragma once

// Evidence inputs. A tree is either an extracted directory or a POSIX
// ustar/PAX tarball of one; both present the same path->bytes view so the
// rest of the pipeline never cares which form the examiner handed over.
// A raw image is a flat byte buffer destined for carving.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/hash.hpp"

namespace cloudsift {

struct TreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class EvidenceTree {
 public:
  struct Entry {
    std::string path;  // '/'-separated, case preserved, no leading slash
    uint64_t size = 0;
    // backing store: directory file or tar segment
    std::filesystem::path disk_path;
    uint64_t tar_offset = 0;
    bool from_tar = false;
  };

  static EvidenceTree open_tree(const std::filesystem::path& root,
                                std::vector<std::string>* warnings = nullptr) {
    namespace fs = std::filesystem;
    std::error_code ec;
    auto st = fs::symlink_status(root, ec);
    if (ec) throw TreeError("cannot open evidence tree: " + root.string() + ": " + ec.message());
    if (fs::is_directory(st)) return from_directory(root, warnings);
    if (fs::is_regular_file(st)) return from_tar(root, warnings);
    throw TreeError("evidence tree is neither a directory nor a tar file: " + root.string());
  }

  const std::string& label() const { return label_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // Exact path first, then a unique case-insensitive match.
  std::optional<std::string> resolve(const std::string& path) const {
    auto it = by_path_.find(path);
    if (it != by_path_.end()) return path;
    auto lower = detail::ascii_lower(path);
    auto range = by_lower_.equal_range(lower);
    if (range.first == range.second) return std::nullopt;
    auto first = range.first;
    if (std::next(first) != range.second) return std::nullopt;  // ambiguous
    return first->second;
  }

  bool has_file(const std::string& path) const { return resolve(path).has_value(); }

  // True when at least one file lives under dir (case-insensitive on the
  // prefix, consistent with resolve()).
  bool dir_exists(const std::string& dir) const {
    auto prefix = detail::ascii_lower(dir) + "/";
    for (const auto& e : entries_) {
      auto lp = detail::ascii_lower(e.path);
      if (lp.size() > prefix.size() && lp.compare(0, prefix.size(), prefix) == 0) return true;
    }
    return false;
  }

  std::vector<const Entry*> files_under(const std::string& dir) const {
    auto prefix = detail::ascii_lower(dir) + "/";
    std::vector<const Entry*> out;
    for (const auto& e : entries_) {
      auto lp = detail::ascii_lower(e.path);
      if (lp.size() > prefix.size() && lp.compare(0, prefix.size(), prefix) == 0)
        out.push_back(&e);
    }
    return out;
  }

  std::vector<uint8_t> read_file(const std::string& path) const {
    auto resolved = resolve(path);
    if (!resolved) throw TreeError("no such file in evidence tree: " + path);
    const Entry& e = by_path_.at(*resolved);
    std::ifstream in(e.from_tar ? tar_path_ : e.disk_path, std::ios::binary);
    if (!in) throw TreeError("cannot read: " + path);
    if (e.from_tar) in.seekg(static_cast<std::streamoff>(e.tar_offset));
    std::vector<uint8_t> bytes(e.size);
    if (e.size > 0) in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(e.size));
    if (!in) throw TreeError("short read: " + path);
    return bytes;
  }

  // Digest of the sorted (path, size, sha1) listing; equal trees hash equal
  // regardless of their on-disk form.
  std::string listing_sha1() const {
    Sha1 h;
    for (const auto& e : entries_) {
      auto content = read_file(e.path);
      std::string line = e.path + "\n" + std::to_string(e.size) + "\n" + sha1_hex(content) + "\n";
      h.update(reinterpret_cast<const uint8_t*>(line.data()), line.size());
    }
    return h.hex_digest();
  }

 private:
  static EvidenceTree from_directory(const std::filesystem::path& root,
                                     std::vector<std::string>* warnings) {
    namespace fs = std::filesystem;
    EvidenceTree t;
    t.label_ = root.string();
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied), end;
    for (; it != end; ++it) {
      std::error_code ec;
      if (it->is_symlink(ec)) {  // symlinks are recorded nowhere and never followed
        it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file(ec)) {
        if (ec && warnings) warnings->push_back("skipped unreadable entry: " + it->path().string());
        continue;
      }
      Entry e;
      e.disk_path = it->path();
      e.path = fs::relative(it->path(), root, ec).generic_string();
      if (ec) {
        if (warnings) warnings->push_back("skipped unresolvable path: " + it->path().string());
        continue;
      }
      e.size = it->file_size(ec);
      if (ec) {
        if (warnings) warnings->push_back("skipped unreadable entry: " + it->path().string());
        continue;
      }
      t.entries_.push_back(std::move(e));
    }
    t.finish();
    return t;
  }

  static EvidenceTree from_tar(const std::filesystem::path& tar, std::vector<std::string>* warnings) {
    EvidenceTree t;
    t.label_ = tar.string();
    t.tar_path_ = tar;
    std::ifstream in(tar, std::ios::binary);
    if (!in) throw TreeError("cannot open tar: " + tar.string());

    auto read_octal = [](const char* p, size_t n) -> uint64_t {
      uint64_t v = 0;
      for (size_t i = 0; i < n && p[i]; ++i) {
        if (p[i] == ' ') continue;
        if (p[i] < '0' || p[i] > '7') break;
        v = v * 8 + static_cast<uint64_t>(p[i] - '0');
      }
      return v;
    };

    char hdr[512];
    uint64_t pos = 0;
    std::string pending_longname;
    std::map<std::string, std::string> pax;  // pending per-file pax overrides
    bool saw_magic = false;
    int zero_blocks = 0;
    while (in.read(hdr, 512)) {
      pos += 512;
      bool all_zero = true;
      for (char c : hdr)
        if (c != 0) { all_zero = false; break; }
      if (all_zero) {
        if (++zero_blocks == 2) break;
        continue;
      }
      zero_blocks = 0;
      if (std::memcmp(hdr + 257, "ustar", 5) != 0) {
        if (!saw_magic) throw TreeError("not a ustar/PAX archive: " + tar.string());
        if (warnings) warnings->push_back("skipped non-ustar header block in " + tar.string());
        continue;
      }
      saw_magic = true;
      uint64_t size = read_octal(hdr + 124, 12);
      char type = hdr[156];
      uint64_t data_start = pos;
      uint64_t padded = (size + 511) / 512 * 512;

      std::string name(hdr, strnlen(hdr, 100));
      std::string prefix(hdr + 345, strnlen(hdr + 345, 155));
      if (!prefix.empty()) name = prefix + "/" + name;

      if (type == 'L') {  // GNU long name for the next entry
        std::string data(size, '\0');
        in.read(data.data(), static_cast<std::streamsize>(size));
        in.seekg(static_cast<std::streamoff>(padded - size), std::ios::cur);
        pos += padded;
        while (!data.empty() && data.back() == '\0') data.pop_back();
        pending_longname = data;
        continue;
      }
      if (type == 'x' || type == 'g') {  // PAX records: "<len> key=value\n"
        std::string data(size, '\0');
        in.read(data.data(), static_cast<std::streamsize>(size));
        in.seekg(static_cast<std::streamoff>(padded - size), std::ios::cur);
        pos += padded;
        if (type == 'x') {
          size_t off = 0;
          while (off < data.size()) {
            size_t sp = data.find(' ', off);
            if (sp == std::string::npos) break;
            size_t reclen = 0;
            try {
              reclen = std::stoull(data.substr(off, sp - off));
            } catch (...) { break; }
            if (reclen == 0 || off + reclen > data.size()) break;
            std::string rec = data.substr(sp + 1, off + reclen - sp - 2);  // drop trailing \n
            size_t eq = rec.find('=');
            if (eq != std::string::npos) pax[rec.substr(0, eq)] = rec.substr(eq + 1);
            off += reclen;
          }
        }
        continue;
      }

      in.seekg(static_cast<std::streamoff>(padded), std::ios::cur);
      pos += padded;

      if (pax.count("path")) name = pax["path"];
      if (pax.count("size")) {
        try { size = std::stoull(pax["size"]); } catch (...) {}
      }
      if (!pending_longname.empty()) name = pending_longname;
      pending_longname.clear();
      pax.clear();

      if (type != '0' && type != '\0') continue;  // dirs, links, devices: no bytes to serve

      while (name.rfind("./", 0) == 0) name = name.substr(2);
      while (!name.empty() && name.front() == '/') name = name.substr(1);
      if (name.empty()) continue;

      Entry e;
      e.path = name;
      e.size = size;
      e.tar_offset = data_start;
      e.from_tar = true;
      t.entries_.push_back(std::move(e));
    }
    t.finish();
    return t;
  }

  void finish() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.path < b.path; });
    for (const auto& e : entries_) {
      by_path_[e.path] = e;
      by_lower_.emplace(detail::ascii_lower(e.path), e.path);
    }
  }

  std::string label_;
  std::filesystem::path tar_path_;
  std::vector<Entry> entries_;
  std::map<std::string, Entry> by_path_;
  std::multimap<std::string, std::string> by_lower_;
};

struct RawImage {
  std::string label;
  std::vector<uint8_t> bytes;

  static RawImage open_image(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw TreeError("cannot open raw image: " + p.string());
    RawImage img;
    img.label = p.string();
    in.seekg(0, std::ios::end);
    auto n = in.tellg();
    in.seekg(0);
    img.bytes.resize(static_cast<size_t>(n));
    if (n > 0) in.read(reinterpret_cast<char*>(img.bytes.data()), n);
    if (!in) throw TreeError("short read on raw image: " + p.string());
    return img;
  }

  std::string sha1() const { return sha1_hex(bytes); }
};

}  // namespace cloudsift
