#pragma once

// Signature-based carver for raw flash images. Recovers JPEG, PDF, ZIP
// (covers OOXML documents), MP3, and MP4 streams by walking each format's
// own structure from a signature hit to a self-consistent end. Deleted files
// whose blocks still sit in unallocated space come back byte-exact, which
// lets the analyzer tie them to cached metadata by content hash.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/hash.hpp"
#include "cloudsift/model.hpp"

namespace cloudsift {

struct CarvedFile {
  std::string type;  // jpeg, pdf, zip, mp3, mp4
  uint64_t offset = 0;
  uint64_t length = 0;
  std::string logical_name;  // "<type>_<offset>"
  std::string md5, sha1;
};

namespace detail {

// --- JPEG ------------------------------------------------------------------
// SOI, marker segments, entropy-coded scan data, EOI. Returns one past EOI.

inline std::optional<uint64_t> jpeg_end(std::span<const uint8_t> in, uint64_t at) {
  uint64_t p = at;
  if (p + 3 > in.size() || in[p] != 0xff || in[p + 1] != 0xd8 || in[p + 2] != 0xff) return {};
  p += 2;
  while (p + 4 <= in.size()) {
    if (in[p] != 0xff) return {};
    uint8_t marker = in[p + 1];
    if (marker == 0xd8) return {};           // nested SOI
    if (marker == 0xd9) return p + 2;        // EOI before any scan
    if (marker == 0x01 || (marker >= 0xd0 && marker <= 0xd7)) {
      p += 2;
      continue;
    }
    uint64_t seg_len = read_be16(in.data() + p + 2);
    if (seg_len < 2 || p + 2 + seg_len > in.size()) return {};
    p += 2 + seg_len;
    if (marker == 0xda) {
      // entropy-coded data; FF 00 is an escaped FF, FF D0..D7 a restart
      while (p + 1 < in.size()) {
        if (in[p] != 0xff) {
          ++p;
          continue;
        }
        uint8_t m2 = in[p + 1];
        if (m2 == 0x00 || (m2 >= 0xd0 && m2 <= 0xd7)) {
          p += 2;
          continue;
        }
        if (m2 == 0xd9) return p + 2;
        return {};  // unexpected marker inside scan
      }
      return {};
    }
  }
  return {};
}

// --- PDF -------------------------------------------------------------------
// Header to the first end-of-file comment; one trailing EOL belongs to it.

inline std::optional<uint64_t> pdf_end(std::span<const uint8_t> in, uint64_t at) {
  static const uint8_t head[] = {'%', 'P', 'D', 'F', '-'};
  if (at + sizeof head > in.size() ||
      !std::equal(head, head + sizeof head, in.begin() + at))
    return {};
  static const uint8_t eof[] = {'%', '%', 'E', 'O', 'F'};
  auto it = std::search(in.begin() + at + sizeof head, in.end(), eof, eof + sizeof eof);
  if (it == in.end()) return {};
  uint64_t p = static_cast<uint64_t>(it - in.begin()) + sizeof eof;
  if (p < in.size() && in[p] == '\r') ++p;
  if (p < in.size() && in[p] == '\n') ++p;
  return p;
}

// --- ZIP -------------------------------------------------------------------
// Local file header to an end-of-central-directory record whose offsets
// describe exactly this run of bytes. Inconsistent EOCD hits are skipped so
// two adjacent archives do not merge.

inline std::optional<uint64_t> zip_end(std::span<const uint8_t> in, uint64_t at) {
  static const uint8_t lfh[] = {'P', 'K', 0x03, 0x04};
  if (at + 4 > in.size() || !std::equal(lfh, lfh + 4, in.begin() + at)) return {};
  static const uint8_t eocd[] = {'P', 'K', 0x05, 0x06};
  auto search_from = in.begin() + at + 4;
  while (true) {
    auto it = std::search(search_from, in.end(), eocd, eocd + 4);
    if (it == in.end()) return {};
    uint64_t pos = static_cast<uint64_t>(it - in.begin());
    if (pos + 22 > in.size()) return {};
    uint32_t cd_size = read_le32(in.data() + pos + 12);
    uint32_t cd_off = read_le32(in.data() + pos + 16);
    uint16_t comment = read_le16(in.data() + pos + 20);
    if (uint64_t(cd_off) + cd_size == pos - at && pos + 22 + comment <= in.size())
      return pos + 22 + comment;
    search_from = it + 1;
  }
}

// --- MP3 -------------------------------------------------------------------
// ID3v2 tag (synchsafe size) followed by a run of MPEG-1 layer III frames.

inline std::optional<uint64_t> mp3_frame_len(std::span<const uint8_t> in, uint64_t at) {
  static const int kBitrate[] = {0,   32,  40,  48,  56,  64,  80,  96,
                                 112, 128, 160, 192, 224, 256, 320, 0};
  static const int kRate[] = {44100, 48000, 32000, 0};
  if (at + 4 > in.size()) return {};
  if (in[at] != 0xff || (in[at + 1] & 0xfe) != 0xfa) return {};  // MPEG-1 layer III
  int bitrate = kBitrate[in[at + 2] >> 4];
  int rate = kRate[(in[at + 2] >> 2) & 0x3];
  int padding = (in[at + 2] >> 1) & 0x1;
  if (!bitrate || !rate) return {};
  return uint64_t(144 * bitrate * 1000 / rate + padding);
}

inline std::optional<uint64_t> mp3_end(std::span<const uint8_t> in, uint64_t at) {
  uint64_t p = at;
  if (p + 10 > in.size() || in[p] != 'I' || in[p + 1] != 'D' || in[p + 2] != '3') return {};
  uint32_t body = (uint32_t(in[p + 6] & 0x7f) << 21) | (uint32_t(in[p + 7] & 0x7f) << 14) |
                  (uint32_t(in[p + 8] & 0x7f) << 7) | uint32_t(in[p + 9] & 0x7f);
  p += 10 + body;
  if (p > in.size()) return {};
  uint64_t frames = 0;
  while (true) {
    auto len = mp3_frame_len(in, p);
    if (!len || p + *len > in.size()) break;
    p += *len;
    ++frames;
  }
  if (frames == 0) return {};
  return p;
}

// --- MP4 -------------------------------------------------------------------
// The first box must be ftyp; the stream ends when the next four-plus-four
// byte window no longer reads as a box.

inline bool mp4_box_type_ok(std::span<const uint8_t> in, uint64_t at) {
  for (int i = 0; i < 4; ++i) {
    uint8_t c = in[at + i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == ' ' || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

inline std::optional<uint64_t> mp4_end(std::span<const uint8_t> in, uint64_t at) {
  uint64_t p = at;
  if (p + 8 > in.size()) return {};
  if (!(in[p + 4] == 'f' && in[p + 5] == 't' && in[p + 6] == 'y' && in[p + 7] == 'p')) return {};
  uint64_t boxes = 0;
  while (p + 8 <= in.size()) {
    if (!mp4_box_type_ok(in, p + 4)) break;
    uint64_t size = read_be32(in.data() + p);
    if (size == 1) {
      if (p + 16 > in.size()) break;
      size = read_be64(in.data() + p + 8);
      if (size < 16) break;
    } else if (size < 8) {
      break;
    }
    if (p + size > in.size()) break;
    p += size;
    ++boxes;
  }
  if (boxes < 2) return {};  // ftyp plus at least one payload box
  return p;
}

struct CarveCandidate {
  uint64_t offset;
  const char* type;
};

inline void find_signature(std::span<const uint8_t> in, std::span<const uint8_t> sig,
                           int64_t shift, const char* type,
                           std::vector<CarveCandidate>& out) {
  auto it = in.begin();
  while (true) {
    it = std::search(it, in.end(), sig.begin(), sig.end());
    if (it == in.end()) return;
    int64_t at = (it - in.begin()) + shift;
    if (at >= 0) out.push_back({static_cast<uint64_t>(at), type});
    ++it;
  }
}

}  // namespace detail

inline std::vector<CarvedFile> carve_image(std::span<const uint8_t> image) {
  static const uint8_t sig_jpeg[] = {0xff, 0xd8, 0xff};
  static const uint8_t sig_pdf[] = {'%', 'P', 'D', 'F', '-'};
  static const uint8_t sig_zip[] = {'P', 'K', 0x03, 0x04};
  static const uint8_t sig_mp3[] = {'I', 'D', '3'};
  static const uint8_t sig_mp4[] = {'f', 't', 'y', 'p'};

  std::vector<detail::CarveCandidate> cands;
  detail::find_signature(image, sig_jpeg, 0, "jpeg", cands);
  detail::find_signature(image, sig_pdf, 0, "pdf", cands);
  detail::find_signature(image, sig_zip, 0, "zip", cands);
  detail::find_signature(image, sig_mp3, 0, "mp3", cands);
  detail::find_signature(image, sig_mp4, -4, "mp4", cands);  // size precedes the tag
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.offset < b.offset;
  });

  std::vector<CarvedFile> out;
  uint64_t covered_until = 0;  // accepted extents are disjoint and ordered
  for (const auto& c : cands) {
    if (c.offset < covered_until) continue;
    std::optional<uint64_t> end;
    if (std::string_view(c.type) == "jpeg") end = detail::jpeg_end(image, c.offset);
    else if (std::string_view(c.type) == "pdf") end = detail::pdf_end(image, c.offset);
    else if (std::string_view(c.type) == "zip") end = detail::zip_end(image, c.offset);
    else if (std::string_view(c.type) == "mp3") end = detail::mp3_end(image, c.offset);
    else end = detail::mp4_end(image, c.offset);
    if (!end || *end <= c.offset) continue;
    CarvedFile f;
    f.type = c.type;
    f.offset = c.offset;
    f.length = *end - c.offset;
    f.logical_name = f.type + "_" + std::to_string(f.offset);
    auto body = image.subspan(c.offset, f.length);
    f.md5 = md5_hex(body);
    f.sha1 = sha1_hex(body);
    out.push_back(std::move(f));
    covered_until = *end;
  }
  return out;
}

// Carve hits as recovered objects, content slices included, for linking.
inline std::vector<RecoveredObject> carve_to_objects(std::span<const uint8_t> image,
                                                     const std::string& source_label) {
  std::vector<RecoveredObject> out;
  for (const auto& f : carve_image(image)) {
    std::vector<uint8_t> bytes(image.begin() + f.offset, image.begin() + f.offset + f.length);
    out.push_back(make_recovered_object(f.logical_name, ObjectOrigin::Carved,
                                        source_label + ":" + std::to_string(f.offset),
                                        std::move(bytes), f.offset));
  }
  return out;
}

}  // namespace cloudsift
