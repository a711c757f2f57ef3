#pragma once

// MD5 and SHA-1 digests. Self-contained so the reconstruction pipeline does
// not drag in a crypto library for two legacy checksums.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>

#include "cloudsift/detail/bytes.hpp"

namespace cloudsift {

class Md5 {
 public:
  Md5() { reset(); }

  void reset() {
    state_ = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};
    total_ = 0;
    buflen_ = 0;
  }

  void update(const uint8_t* data, size_t len) {
    total_ += len;
    if (buflen_ > 0) {
      size_t take = std::min(len, size_t(64) - buflen_);
      std::memcpy(buf_.data() + buflen_, data, take);
      buflen_ += take;
      data += take;
      len -= take;
      if (buflen_ == 64) {
        block(buf_.data());
        buflen_ = 0;
      }
    }
    while (len >= 64) {
      block(data);
      data += 64;
      len -= 64;
    }
    if (len > 0) {
      std::memcpy(buf_.data(), data, len);
      buflen_ = len;
    }
  }

  void update(std::span<const uint8_t> data) { update(data.data(), data.size()); }

  std::array<uint8_t, 16> digest() {
    uint64_t bitlen = total_ * 8;
    uint8_t pad = 0x80;
    update(&pad, 1);
    static const uint8_t zero = 0;
    while (buflen_ != 56) update(&zero, 1);
    uint8_t lenb[8];
    for (int i = 0; i < 8; ++i) lenb[i] = static_cast<uint8_t>(bitlen >> (8 * i));
    update(lenb, 8);
    std::array<uint8_t, 16> out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i * 4 + j] = static_cast<uint8_t>(state_[i] >> (8 * j));
    return out;
  }

  std::string hex_digest() {
    auto d = digest();
    return detail::to_hex(d);
  }

 private:
  void block(const uint8_t* p) {
    static const uint32_t K[64] = {
        0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613,
        0xfd469501, 0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193,
        0xa679438e, 0x49b40821, 0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d,
        0x02441453, 0xd8a1e681, 0xe7d3fbc8, 0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed,
        0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a, 0xfffa3942, 0x8771f681, 0x6d9d6122,
        0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70, 0x289b7ec6, 0xeaa127fa,
        0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665, 0xf4292244,
        0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
        0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb,
        0xeb86d391};
    static const int S[64] = {7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
                              5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
                              4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
                              6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21};
    uint32_t m[16];
    for (int i = 0; i < 16; ++i) m[i] = detail::read_le32(p + 4 * i);
    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    for (int i = 0; i < 64; ++i) {
      uint32_t f;
      int g;
      if (i < 16) {
        f = (b & c) | (~b & d);
        g = i;
      } else if (i < 32) {
        f = (d & b) | (~d & c);
        g = (5 * i + 1) % 16;
      } else if (i < 48) {
        f = b ^ c ^ d;
        g = (3 * i + 5) % 16;
      } else {
        f = c ^ (b | ~d);
        g = (7 * i) % 16;
      }
      uint32_t tmp = d;
      d = c;
      c = b;
      uint32_t x = a + f + K[i] + m[g];
      b = b + ((x << S[i]) | (x >> (32 - S[i])));
      a = tmp;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
  }

  std::array<uint32_t, 4> state_;
  std::array<uint8_t, 64> buf_;
  uint64_t total_ = 0;
  size_t buflen_ = 0;
};

class Sha1 {
 public:
  Sha1() { reset(); }

  void reset() {
    state_ = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u, 0xc3d2e1f0u};
    total_ = 0;
    buflen_ = 0;
  }

  void update(const uint8_t* data, size_t len) {
    total_ += len;
    if (buflen_ > 0) {
      size_t take = std::min(len, size_t(64) - buflen_);
      std::memcpy(buf_.data() + buflen_, data, take);
      buflen_ += take;
      data += take;
      len -= take;
      if (buflen_ == 64) {
        block(buf_.data());
        buflen_ = 0;
      }
    }
    while (len >= 64) {
      block(data);
      data += 64;
      len -= 64;
    }
    if (len > 0) {
      std::memcpy(buf_.data(), data, len);
      buflen_ = len;
    }
  }

  void update(std::span<const uint8_t> data) { update(data.data(), data.size()); }

  std::array<uint8_t, 20> digest() {
    uint64_t bitlen = total_ * 8;
    uint8_t pad = 0x80;
    update(&pad, 1);
    static const uint8_t zero = 0;
    while (buflen_ != 56) update(&zero, 1);
    uint8_t lenb[8];
    for (int i = 0; i < 8; ++i) lenb[i] = static_cast<uint8_t>(bitlen >> (56 - 8 * i));
    update(lenb, 8);
    std::array<uint8_t, 20> out;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 4; ++j) out[i * 4 + j] = static_cast<uint8_t>(state_[i] >> (24 - 8 * j));
    return out;
  }

  std::string hex_digest() {
    auto d = digest();
    return detail::to_hex(d);
  }

 private:
  void block(const uint8_t* p) {
    uint32_t w[80];
    for (int i = 0; i < 16; ++i) w[i] = detail::read_be32(p + 4 * i);
    for (int i = 16; i < 80; ++i) {
      uint32_t v = w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16];
      w[i] = (v << 1) | (v >> 31);
    }
    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3], e = state_[4];
    for (int i = 0; i < 80; ++i) {
      uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5a827999;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ed9eba1;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8f1bbcdc;
      } else {
        f = b ^ c ^ d;
        k = 0xca62c1d6;
      }
      uint32_t tmp = ((a << 5) | (a >> 27)) + f + e + k + w[i];
      e = d;
      d = c;
      c = (b << 30) | (b >> 2);
      b = a;
      a = tmp;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
  }

  std::array<uint32_t, 5> state_;
  std::array<uint8_t, 64> buf_;
  uint64_t total_ = 0;
  size_t buflen_ = 0;
};

inline std::string md5_hex(std::span<const uint8_t> data) {
  Md5 h;
  h.update(data);
  return h.hex_digest();
}

inline std::string sha1_hex(std::span<const uint8_t> data) {
  Sha1 h;
  h.update(data);
  return h.hex_digest();
}

inline std::string md5_hex(const std::string& s) {
  return md5_hex(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

inline std::string sha1_hex(const std::string& s) {
  return sha1_hex(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

}  // namespace cloudsift
