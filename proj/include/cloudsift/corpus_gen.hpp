#pragma once

// Deterministic evidence corpus generator. Builds device-state scenarios for
// every cataloged app: an internal-storage tree, an SD tree where the app
// uses one, optionally a raw flash image with deleted files still resident,
// and a manifest recording what a correct reconstruction must find.
//
// The generator is the test oracle's second route: it decides placements
// from its own tables and writes artifacts with independent byte-level
// writers (SQLite stores through the stock library), so the analyzer's
// output can be compared against the manifest without shared code paths.

#include <sqlite3.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/hash.hpp"
#include "cloudsift/model.hpp"
#include "cloudsift/plist.hpp"

namespace cloudsift {

struct ScenarioSpec {
  Provider provider = Provider::Dropbox;
  Platform platform = Platform::Android;
  std::string version;
  DeviceState state = DeviceState::ActivePowerState;
  uint64_t seed = 0;
};

struct DatasetFile {
  std::string name;   // 001.jpg .. 020.docx
  std::string kind;   // viewed | offline | no_manipulation | deleted
  uint64_t size = 0;
  std::vector<uint8_t> bytes;
  std::string md5, sha1;
};

struct Dataset {
  uint64_t seed = 0;
  std::vector<DatasetFile> files;  // index 0..19
};

namespace gen {

// --- deterministic byte sources -------------------------------------------
// mt19937_64 raw output only; engine output is pinned by the standard, the
// distribution adaptors are not.

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::mt19937_64 make_rng(std::initializer_list<uint64_t> parts) {
  std::seed_seq seq(parts.begin(), parts.end());
  return std::mt19937_64(seq);
}

inline uint8_t byte_in(std::mt19937_64& rng, uint8_t lo, uint8_t hi) {
  return static_cast<uint8_t>(lo + rng() % (uint64_t(hi) - lo + 1));
}

// Filler that cannot alias any carve signature: no ASCII, no 0xFF sync.
inline std::vector<uint8_t> filler(std::mt19937_64& rng, size_t n) {
  std::vector<uint8_t> out(n);
  for (auto& b : out) b = byte_in(rng, 0x80, 0xfe);
  return out;
}

inline uint32_t crc32(std::span<const uint8_t> data) {
  static uint32_t table[256];
  static bool init = [] {
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      table[i] = c;
    }
    return true;
  }();
  (void)init;
  uint32_t c = 0xffffffffu;
  for (uint8_t b : data) c = table[(c ^ b) & 0xff] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

// --- format writers --------------------------------------------------------

inline void put_le16(std::vector<uint8_t>& v, uint16_t x) {
  v.push_back(x & 0xff);
  v.push_back(x >> 8);
}
inline void put_le32(std::vector<uint8_t>& v, uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xff);
}
inline void put_be32v(std::vector<uint8_t>& v, uint32_t x) {
  for (int i = 3; i >= 0; --i) v.push_back((x >> (8 * i)) & 0xff);
}

inline std::vector<uint8_t> jpeg_bytes(size_t size, std::mt19937_64& rng) {
  // SOI(2) APP0(18) COM(6) SOS(14) entropy EOI(2): fixed overhead 42
  if (size < 43) throw std::invalid_argument("jpeg size too small");
  std::vector<uint8_t> v;
  v.reserve(size);
  v.insert(v.end(), {0xff, 0xd8});
  v.insert(v.end(), {0xff, 0xe0, 0x00, 0x10, 'J', 'F', 'I', 'F', 0x00, 0x01, 0x01, 0x00, 0x00,
                     0x01, 0x00, 0x01, 0x00, 0x00});
  v.insert(v.end(), {0xff, 0xfe, 0x00, 0x04});
  v.push_back(byte_in(rng, 'a', 'z'));
  v.push_back(byte_in(rng, 'a', 'z'));
  v.insert(v.end(), {0xff, 0xda, 0x00, 0x0c, 0x03, 0x01, 0x00, 0x02, 0x11, 0x03, 0x11, 0x00,
                     0x3f, 0x00});
  size_t entropy = size - 42;
  for (size_t i = 0; i < entropy; ++i) {
    uint8_t b = static_cast<uint8_t>(rng());
    v.push_back(b == 0xff ? 0xfe : b);  // keep marker space clean
  }
  v.insert(v.end(), {0xff, 0xd9});
  return v;
}

inline std::vector<uint8_t> pdf_bytes(size_t size, std::mt19937_64& rng) {
  static const char head[] = "%PDF-1.4\n";
  static const char tail[] = "%%EOF\n";
  size_t overhead = 9 + 6;
  if (size < overhead + 1) throw std::invalid_argument("pdf size too small");
  std::vector<uint8_t> v;
  v.reserve(size);
  v.insert(v.end(), head, head + 9);
  size_t body = size - overhead;
  for (size_t i = 0; i < body; ++i) {
    uint8_t b = byte_in(rng, 0x20, 0x7e);
    if (b == '%') b = '#';  // a stray percent could fake the footer
    v.push_back(i % 64 == 63 ? uint8_t('\n') : b);
  }
  v.insert(v.end(), tail, tail + 6);
  return v;
}

inline std::vector<uint8_t> zip_bytes(size_t size, std::mt19937_64& rng) {
  static const std::string n1 = "[Content_Types].xml";
  static const std::string n2 = "word/document.xml";
  size_t overhead = (30 + n1.size()) + (30 + n2.size()) + (46 + n1.size()) + (46 + n2.size()) + 22;
  if (size < overhead + 2) throw std::invalid_argument("zip size too small");
  size_t payload_total = size - overhead;
  size_t p1 = payload_total / 3, p2 = payload_total - p1;
  std::vector<uint8_t> d1 = filler(rng, p1), d2 = filler(rng, p2);
  uint32_t c1 = crc32(d1), c2 = crc32(d2);

  std::vector<uint8_t> v;
  v.reserve(size);
  auto lfh = [&](const std::string& name, const std::vector<uint8_t>& data, uint32_t crc) {
    v.insert(v.end(), {'P', 'K', 0x03, 0x04});
    put_le16(v, 20);  // version needed
    put_le16(v, 0);   // flags
    put_le16(v, 0);   // stored
    put_le16(v, 0x6020);  // dos time
    put_le16(v, 0x4093);  // dos date
    put_le32(v, crc);
    put_le32(v, static_cast<uint32_t>(data.size()));
    put_le32(v, static_cast<uint32_t>(data.size()));
    put_le16(v, static_cast<uint16_t>(name.size()));
    put_le16(v, 0);
    v.insert(v.end(), name.begin(), name.end());
    v.insert(v.end(), data.begin(), data.end());
  };
  uint32_t off1 = static_cast<uint32_t>(v.size());
  lfh(n1, d1, c1);
  uint32_t off2 = static_cast<uint32_t>(v.size());
  lfh(n2, d2, c2);
  uint32_t cd_off = static_cast<uint32_t>(v.size());
  auto cde = [&](const std::string& name, const std::vector<uint8_t>& data, uint32_t crc,
                 uint32_t off) {
    v.insert(v.end(), {'P', 'K', 0x01, 0x02});
    put_le16(v, 20);
    put_le16(v, 20);
    put_le16(v, 0);
    put_le16(v, 0);
    put_le16(v, 0x6020);
    put_le16(v, 0x4093);
    put_le32(v, crc);
    put_le32(v, static_cast<uint32_t>(data.size()));
    put_le32(v, static_cast<uint32_t>(data.size()));
    put_le16(v, static_cast<uint16_t>(name.size()));
    put_le16(v, 0);
    put_le16(v, 0);
    put_le16(v, 0);
    put_le16(v, 0);
    put_le32(v, 0);
    put_le32(v, off);
    v.insert(v.end(), name.begin(), name.end());
  };
  cde(n1, d1, c1, off1);
  cde(n2, d2, c2, off2);
  uint32_t cd_size = static_cast<uint32_t>(v.size()) - cd_off;
  v.insert(v.end(), {'P', 'K', 0x05, 0x06});
  put_le16(v, 0);
  put_le16(v, 0);
  put_le16(v, 2);
  put_le16(v, 2);
  put_le32(v, cd_size);
  put_le32(v, cd_off);
  put_le16(v, 0);
  return v;
}

inline std::vector<uint8_t> mp3_bytes(size_t size, std::mt19937_64& rng) {
  // ID3v2.3 tag absorbs the remainder modulo the fixed 417-byte frame length
  // of 128 kbit/s 44.1 kHz MPEG-1 layer III
  constexpr size_t frame = 417;
  if (size < 10 + frame) throw std::invalid_argument("mp3 size too small");
  size_t body = (size - 10) % frame;
  size_t nframes = (size - 10) / frame;
  std::vector<uint8_t> v;
  v.reserve(size);
  v.insert(v.end(), {'I', 'D', '3', 0x03, 0x00, 0x00});
  v.push_back(static_cast<uint8_t>((body >> 21) & 0x7f));
  v.push_back(static_cast<uint8_t>((body >> 14) & 0x7f));
  v.push_back(static_cast<uint8_t>((body >> 7) & 0x7f));
  v.push_back(static_cast<uint8_t>(body & 0x7f));
  std::vector<uint8_t> tag(body, 0x00);
  if (body >= 14) {
    const char* t = "TIT2";
    std::copy(t, t + 4, tag.begin());
    uint32_t tlen = static_cast<uint32_t>(body - 10);
    tag[4] = (tlen >> 24) & 0xff;
    tag[5] = (tlen >> 16) & 0xff;
    tag[6] = (tlen >> 8) & 0xff;
    tag[7] = tlen & 0xff;
  }
  v.insert(v.end(), tag.begin(), tag.end());
  for (size_t f = 0; f < nframes; ++f) {
    v.insert(v.end(), {0xff, 0xfb, 0x90, 0x00});
    auto data = filler(rng, frame - 4);
    v.insert(v.end(), data.begin(), data.end());
  }
  return v;
}

inline std::vector<uint8_t> mp4_bytes(size_t size, std::mt19937_64& rng) {
  if (size < 48) throw std::invalid_argument("mp4 size too small");
  std::vector<uint8_t> v;
  v.reserve(size);
  put_be32v(v, 24);
  v.insert(v.end(), {'f', 't', 'y', 'p', 'i', 's', 'o', 'm'});
  put_be32v(v, 0x200);
  v.insert(v.end(), {'i', 's', 'o', 'm', 'i', 's', 'o', '2'});
  put_be32v(v, static_cast<uint32_t>(size - 24));
  v.insert(v.end(), {'m', 'd', 'a', 't'});
  auto data = filler(rng, size - 32);
  v.insert(v.end(), data.begin(), data.end());
  return v;
}

inline std::vector<uint8_t> png_stub(std::mt19937_64& rng) {
  std::vector<uint8_t> v = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  auto data = filler(rng, 200 + rng() % 300);
  v.insert(v.end(), data.begin(), data.end());
  return v;
}

// --- filesystem helpers ----------------------------------------------------

inline void write_file(const std::filesystem::path& p, std::span<const uint8_t> bytes) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  write_file(p, {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}

// --- SQLite store writer (stock library, keeps the reader honest) ----------

class SqliteWriter {
 public:
  explicit SqliteWriter(const std::filesystem::path& p) {
    std::filesystem::create_directories(p.parent_path());
    if (sqlite3_open(p.string().c_str(), &db_) != SQLITE_OK)
      throw std::runtime_error("sqlite3_open failed for " + p.string());
    exec("PRAGMA journal_mode=MEMORY");
  }
  SqliteWriter(const SqliteWriter&) = delete;
  SqliteWriter& operator=(const SqliteWriter&) = delete;
  ~SqliteWriter() {
    if (db_) sqlite3_close(db_);
  }

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw std::runtime_error("sqlite exec failed: " + msg + " in " + sql);
    }
  }

  using Bind = std::variant<std::nullptr_t, int64_t, double, std::string>;

  void insert(const std::string& sql, const std::vector<Bind>& binds) {
    sqlite3_stmt* st = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &st, nullptr) != SQLITE_OK)
      throw std::runtime_error("sqlite prepare failed: " + sql);
    for (size_t i = 0; i < binds.size(); ++i) {
      int n = static_cast<int>(i + 1);
      const Bind& b = binds[i];
      if (std::holds_alternative<std::nullptr_t>(b)) sqlite3_bind_null(st, n);
      else if (const auto* iv = std::get_if<int64_t>(&b)) sqlite3_bind_int64(st, n, *iv);
      else if (const auto* dv = std::get_if<double>(&b)) sqlite3_bind_double(st, n, *dv);
      else
        sqlite3_bind_text(st, n, std::get<std::string>(b).c_str(), -1, SQLITE_TRANSIENT);
    }
    if (sqlite3_step(st) != SQLITE_DONE) {
      sqlite3_finalize(st);
      throw std::runtime_error("sqlite step failed: " + sql);
    }
    sqlite3_finalize(st);
  }

 private:
  sqlite3* db_ = nullptr;
};

}  // namespace gen

// --- dataset ---------------------------------------------------------------

inline Dataset build_dataset(uint64_t seed) {
  static const uint64_t sizes[20] = {43183,   6265,    102448,  5548,    3997696,
                                     2703360, 3512009, 4266779, 831687,  245779,
                                     11986533, 21258947, 1695706, 471999, 2371383,
                                     1688736, 84272,   85091,   14860,   20994};
  static const char* kinds[4] = {"viewed", "offline", "no_manipulation", "deleted"};
  Dataset ds;
  ds.seed = seed;
  for (int i = 0; i < 20; ++i) {
    DatasetFile f;
    char name[16];
    const char* ext = i < 4 ? "jpg" : i < 8 ? "mp3" : i < 12 ? "mp4" : i < 16 ? "pdf" : "docx";
    std::snprintf(name, sizeof name, "%03d.%s", i + 1, ext);
    f.name = name;
    f.kind = kinds[i % 4];
    f.size = sizes[i];
    auto rng = gen::make_rng({seed, 0xDA7Aull, static_cast<uint64_t>(i)});
    if (i < 4) f.bytes = gen::jpeg_bytes(f.size, rng);
    else if (i < 8) f.bytes = gen::mp3_bytes(f.size, rng);
    else if (i < 12) f.bytes = gen::mp4_bytes(f.size, rng);
    else if (i < 16) f.bytes = gen::pdf_bytes(f.size, rng);
    else f.bytes = gen::zip_bytes(f.size, rng);
    if (f.bytes.size() != f.size) throw std::logic_error("dataset writer size drift");
    f.md5 = md5_hex(f.bytes);
    f.sha1 = sha1_hex(f.bytes);
    ds.files.push_back(std::move(f));
  }
  return ds;
}

// --- scenario generation ---------------------------------------------------

namespace gen {

// Account fixtures shared by every scenario of a provider.
struct AccountFixture {
  std::string email, display_name, user_id, auth_token, password_hash;
};

inline AccountFixture account_fixture(Provider p) {
  AccountFixture a;
  a.email = "kim.cloud@example.org";
  switch (p) {
    case Provider::Dropbox: a.display_name = "Kim Cloud"; break;
    case Provider::Box:
      a.display_name = "Kim Cloud";
      a.auth_token = "u5es7xli4xejrh89kr6xu14tks6grjn3";
      break;
    case Provider::SugarSync:
      a.user_id = "2463099";
      a.password_hash = sha1_hex(std::string("demo-password-fixture"));
      break;
    case Provider::Syncplicity: a.display_name = "Kim Cloud"; break;
  }
  return a;
}

constexpr int64_t kBaseTime = 1334914769;  // upload epoch for the fixture set

inline int64_t created_ts(int i) { return kBaseTime + i * 60; }
inline int64_t modified_ts(int i) { return created_ts(i) + 2; }
inline int64_t viewed_ts(int i) { return kBaseTime + 2000000 + i * 60; }
inline int64_t saved_ts(int i) { return kBaseTime + 500000 + i; }
inline double apple_secs(int64_t unix_secs) { return double(unix_secs - kAppleEpochOffset); }

// Box file ids; 003.jpg keeps its recovered production id
inline int64_t box_id(int i) { return i == 2 ? 2072716499 : 2072716400 + i; }

struct ScenarioCtx {
  const ScenarioSpec& spec;
  const Dataset& ds;
  std::filesystem::path root;
  std::filesystem::path internal, sd;
  bool aps;  // power state normalized: cache intact
  std::mt19937_64 rng;
  std::map<std::string, RecoveryStatus> expect;  // dataset name -> status
  std::vector<int> carve_set;                    // dataset indices in raw.img
  bool raw_filler_only = false;

  ScenarioCtx(const ScenarioSpec& s, const Dataset& d, std::filesystem::path out)
      : spec(s),
        ds(d),
        root(std::move(out)),
        internal(root / "internal"),
        sd(root / "sd"),
        aps(normalize_power(s.state) == DeviceState::ActivePowerState),
        rng(make_rng({s.seed, fnv1a(to_string(s.provider)), fnv1a(to_string(s.platform)),
                      fnv1a(s.version),
                      static_cast<uint64_t>(normalize_power(s.state) ==
                                            DeviceState::ActivePowerState)})) {
    for (const auto& f : ds.files) expect[f.name] = RecoveryStatus::NotObserved;
  }

  void floor_status(int i, RecoveryStatus s) {
    auto& cur = expect[ds.files[i].name];
    cur = status_max(cur, s);
  }
  void floor_all(std::initializer_list<int> idxs, RecoveryStatus s) {
    for (int i : idxs) floor_status(i, s);
  }

  void place(const std::filesystem::path& dir, std::initializer_list<int> idxs,
             RecoveryStatus floor) {
    for (int i : idxs) {
      write_file(dir / ds.files[i].name, ds.files[i].bytes);
      floor_status(i, floor);
    }
  }

  // thumbnails are small renders named after the original
  void place_thumbs(const std::filesystem::path& dir, std::initializer_list<int> idxs) {
    for (int i : idxs) {
      auto trng = make_rng({spec.seed, 0x7B1Bull, static_cast<uint64_t>(i)});
      write_file(dir / ds.files[i].name, jpeg_bytes(500 + i * 13, trng));
      floor_status(i, RecoveryStatus::ThumbnailOnly);
    }
  }

  void place_previews(const std::filesystem::path& dir, std::initializer_list<int> idxs) {
    for (int i : idxs) {
      write_file(dir / (ds.files[i].name + ".png"), png_stub(rng));
      floor_status(i, RecoveryStatus::PreviewOnly);
    }
  }

  void opaque_blobs(const std::filesystem::path& dir, size_t count) {
    for (size_t k = 0; k < count; ++k) {
      std::vector<uint8_t> id(16);
      for (auto& b : id) b = static_cast<uint8_t>(rng());
      write_file(dir / detail::to_hex(id), filler(rng, 2048 + rng() % 4096));
    }
  }

  void set_carves(std::initializer_list<int> idxs) {
    for (int i : idxs) {
      carve_set.push_back(i);
      floor_status(i, RecoveryStatus::CarvedDeleted);
    }
  }
};

inline std::string kv_log_text(std::initializer_list<std::pair<int64_t, std::string>> lines) {
  std::string out;
  for (const auto& [ts, msg] : lines) out += std::to_string(ts) + " " + msg + "\n";
  return out;
}

// --- per-app writers -------------------------------------------------------

inline void gen_dropbox_android(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::Dropbox);

  {
    SqliteWriter db(c.internal / "databases" / "db.db");
    db.exec(
        "CREATE TABLE dropbox (_id INTEGER PRIMARY KEY, display_name TEXT, parent_path TEXT, "
        "local_hash TEXT, modified INTEGER, last_modified INTEGER, is_favorite INTEGER, "
        "_data TEXT)");
    for (int i = 0; i < 20; ++i) {
      if (i % 4 == 3) continue;  // deleted rows are purged server-side
      bool offline = i % 4 == 1;
      db.insert(
          "INSERT INTO dropbox (display_name, parent_path, local_hash, modified, last_modified, "
          "is_favorite, _data) VALUES (?,?,?,?,?,?,?)",
          {ds.files[i].name, std::string("/"), ds.files[i].md5, created_ts(i), modified_ts(i),
           int64_t(offline ? 1 : 0),
           offline ? SqliteWriter::Bind(std::string(
                         "/mnt/sdcard/Android/data/com.dropbox.android/files/scratch/") +
                     ds.files[i].name)
                   : SqliteWriter::Bind(nullptr)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  }
  {
    SqliteWriter db(c.internal / "databases" / "prefs.db");
    db.exec("CREATE TABLE DropboxAccountPrefs (key TEXT, value TEXT)");
    db.insert("INSERT INTO DropboxAccountPrefs VALUES (?,?)",
              {std::string("ACCOUNT_INFO_0"), acct.display_name});
    db.insert("INSERT INTO DropboxAccountPrefs VALUES (?,?)",
              {std::string("ACCOUNT_INFO_1"), acct.email});
    db.insert("INSERT INTO DropboxAccountPrefs VALUES (?,?)",
              {std::string("LAST_SYNC"), std::string("1335445644")});
  }
  write_text(c.internal / "files" / "log.txt",
             kv_log_text({{1335445640, "session start"},
                          {1335445641, "auth ok user=" + acct.email},
                          {1335445644, "sync complete items=15"}}));

  auto app_sd = c.sd / "Android" / "data" / "com.dropbox.android";
  c.place_thumbs(app_sd / "cache" / "thumbs", {0, 1, 2, 3});
  if (c.aps)
    c.place(app_sd / "files" / "scratch", {1, 5, 9, 12, 13, 16, 17},
            RecoveryStatus::RecoveredIntact);
  else
    c.place(app_sd / "files" / "scratch", {1, 5, 9, 13, 17}, RecoveryStatus::RecoveredIntact);
  if (c.aps) c.set_carves({15, 19});
  else c.set_carves({12, 15, 16, 19});
}

inline void gen_dropbox_ios(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::Dropbox);
  char uuid[40];
  std::snprintf(uuid, sizeof uuid, "%08llX-%04llX-%04llX-%04llX-%012llX",
                static_cast<unsigned long long>(c.rng() & 0xffffffff),
                static_cast<unsigned long long>(c.rng() & 0xffff),
                static_cast<unsigned long long>(c.rng() & 0xffff),
                static_cast<unsigned long long>(c.rng() & 0xffff),
                static_cast<unsigned long long>(c.rng() & 0xffffffffffffull));
  auto approot = c.internal / "private" / "var" / "mobile" / "Applications" / uuid;

  std::vector<int> rows = c.aps ? std::vector<int>{0, 1, 2, 5, 9, 12, 13, 16, 17}
                                : std::vector<int>{1, 5, 9, 13, 17};
  {
    SqliteWriter db(approot / "Documents" / "Dropbox.sqlite");
    db.exec(
        "CREATE TABLE ZCACHEDFILE (Z_PK INTEGER PRIMARY KEY, ZPATH TEXT, ZSIZE INTEGER, "
        "ZFAVORITE INTEGER, ZLASTVIEWEDDATE REAL, ZVIEWCOUNT INTEGER, ZISTHUMBNAIL INTEGER)");
    for (int i : rows) {
      bool thumb_row = c.aps && (i == 0 || i == 1 || i == 2);
      db.insert(
          "INSERT INTO ZCACHEDFILE (ZPATH, ZSIZE, ZFAVORITE, ZLASTVIEWEDDATE, ZVIEWCOUNT, "
          "ZISTHUMBNAIL) VALUES (?,?,?,?,?,?)",
          {std::string("/") + ds.files[i].name, int64_t(ds.files[i].size),
           int64_t(i % 4 == 1 ? 1 : 0), apple_secs(viewed_ts(i)), int64_t(1 + i % 3),
           int64_t(thumb_row ? 1 : 0)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  }
  if (c.aps)
    c.place(approot / "Library" / "Caches" / "Dropbox", {1, 5, 9, 12, 13, 16, 17},
            RecoveryStatus::RecoveredUnverified);
  else
    c.place(approot / "Library" / "Caches" / "Dropbox", {1, 5, 9, 13, 17},
            RecoveryStatus::RecoveredUnverified);
  if (c.aps) c.place_thumbs(approot / "Library" / "Caches" / "Dropbox" / "thumbs", {0, 1, 2});

  PlistDict prefs;
  prefs["Email"] = acct.email;
  prefs["LinkedDeviceName"] = "Kim's iPhone";
  prefs["NotificationsEnabled"] = true;
  write_text(approot / "Library" / "Preferences" / "com.getdropbox.Dropbox.plist",
             dump_plist_xml(PlistValue(prefs)));

  PlistArray favs;
  for (int i : {1, 5, 9, 13, 17}) {
    PlistDict d;
    d["name"] = ds.files[i].name;
    d["size"] = int64_t(ds.files[i].size);
    d["modified"] = PlistDate{apple_secs(modified_ts(i))};
    d["deleted"] = false;
    favs.push_back(PlistValue(d));
  }
  auto fav_bin = dump_plist_binary(PlistValue(favs));
  write_file(approot / "Library" / "Caches" / "FavoriteFiles.plist", fav_bin);

  // analytics stream; the first line is a recovered production sample
  std::string analytics =
      "{ \"retry\":0, \"favorite\":false, \"extension\":\"pdf\", \"id\":23, \"cached\":false, "
      "\"ts\":\"1335445641.29\", \"event\":\"file.view.start\", \"size\":1695706 }\n"
      "{ \"retry\":0, \"extension\":\"pdf\", \"id\":23, \"ts\":\"1335445641.55\", "
      "\"event\":\"download.start\", \"size\":1695706 }\n"
      "{ \"screen\":\"FileViewController\", \"ts\":\"1335445641.78\", \"event\":\"screen.view\" }\n"
      "{ \"retry\":0, \"extension\":\"pdf\", \"id\":23, \"ts\":\"1335445644.02\", "
      "\"event\":\"download.success\", \"size\":1695706, \"duration\":\"2.47\" }\n"
      "{ \"retry\":0, \"favorite\":false, \"extension\":\"pdf\", \"id\":23, \"cached\":true, "
      "\"ts\":\"1335445644.31\", \"event\":\"file.view.success\", \"size\":1695706 }\n"
      "{ \"screen\":\"FileBrowserViewController\", \"ts\":\"1335445652.90\", "
      "\"event\":\"screen.view\" }\n"
      "{ \"ts\":\"1335445653.12\", \"event\":\"metadata.load.start\", \"path\":\"/\" }\n"
      "{ \"ts\":\"1335445653.44\", \"event\":\"metadata.load.unchanged\", \"path\":\"/\" }\n";
  write_text(approot / "Library" / "Caches" / "Analytics.log", analytics);
  write_text(approot / "tmp" / "run.log",
             kv_log_text({{1335445639, "launch cold"}, {1335445641, "view 013.pdf"}}));
}

inline void gen_box_android(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::Box);
  bool v167 = c.spec.version == "1.6.7";

  // JSON metadata model, one record per remote file
  {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < 20; ++i) {
      nlohmann::json rec;
      rec["mFileName"] = ds.files[i].name;
      rec["mId"] = box_id(i);
      rec["mSha1"] = ds.files[i].sha1;
      rec["mSize"] = ds.files[i].size;
      rec["mCreated"] = i == 2 ? int64_t(1334914769) : created_ts(i);
      rec["mUpdated"] = i == 2 ? int64_t(1334914771) : modified_ts(i);
      rec["mThumbnail"] =
          "https://www.box.net/api/1.0/thumbnail/" + std::to_string(box_id(i)) + "/small";
      rec["mSmallThumbnail"] = rec["mThumbnail"];
      rec["mLargeThumbnail"] =
          "https://www.box.net/api/1.0/thumbnail/" + std::to_string(box_id(i)) + "/large";
      rec["mPreviewThumbnail"] = rec["mLargeThumbnail"];
      rec["mShared"] = false;
      rec["mSharedLink"] = "";
      rec["mParentFolderId"] = 0;
      rec["mPermissions"] = "gdcenopstuvh";
      arr.push_back(rec);
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
    write_text(c.internal / "files" / ("json_static_model_" + acct.email + "_0"), arr.dump(2));
  }

  write_text(c.internal / "shared_prefs" / "myPreference.xml",
             "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n"
             "<string name=\"authToken\">" + acct.auth_token + "</string>\n"
             "<string name=\"email\">" + acct.email + "</string>\n"
             "<boolean name=\"pinEnabled\" value=\"false\" />\n"
             "</map>\n");

  auto app_sd = c.sd / "Android" / "data" / "com.box.android";
  c.place_thumbs(app_sd / "cache" / "tempfiles" / "box_tmp_images", {0, 1, 2, 3});

  if (v167) {
    std::string dl = "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n";
    for (int i : {1, 5, 9, 13, 17})
      dl += "<long name=\"" + std::to_string(box_id(i)) + "\" value=\"" +
            std::to_string(saved_ts(i)) + "\" />\n";
    dl += "</map>\n";
    write_text(c.internal / "shared_prefs" / "Downloaded_Files.xml", dl);

    if (c.aps) {
      c.place(c.sd / "Box" / acct.email, {1, 5, 9, 13, 17}, RecoveryStatus::RecoveredIntact);
      // the viewed-or-manipulated set, cached under the remote id
      for (int i : {0, 1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19}) {
        write_file(app_sd / "cache" / "filecache" / std::to_string(box_id(i)),
                   ds.files[i].bytes);
        c.floor_status(i, RecoveryStatus::RecoveredIntact);
      }
      c.raw_filler_only = true;
    } else {
      c.set_carves({0, 1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19});
    }
  } else {
    std::string off = "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n";
    for (int i : {1, 5, 9, 13, 17})
      off += "<long name=\"" + std::to_string(box_id(i)) + "\" value=\"" +
             std::to_string(saved_ts(i)) + "\" />\n";
    off += "</map>\n";
    write_text(c.internal / "shared_prefs" / "offlineFileSharedPreferences.xml", off);

    std::string pages = "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n";
    for (int i : {12, 13, 15, 16, 17, 19})
      pages += "<int name=\"" + std::to_string(box_id(i)) + "\" value=\"" +
               std::to_string(3 + i % 9) + "\" />\n";
    pages += "</map>\n";
    write_text(c.internal / "shared_prefs" / "Preview_Num_Pages.xml", pages);

    if (c.aps) {
      c.place_previews(c.internal / "files" / "previews",
                       {0, 1, 3, 12, 13, 15, 16, 17, 19});
      c.place(c.internal / "cache" / "working", {4, 5, 7, 8, 9, 11},
              RecoveryStatus::RecoveredIntact);
      c.opaque_blobs(app_sd / "cache" / "dl_cache", 6);
      c.opaque_blobs(app_sd / "cache" / "dl_offline", 5);
      c.opaque_blobs(app_sd / "cache" / "previews", 9);
    } else {
      c.set_carves({7, 8, 9, 11});
    }
  }
}

inline void gen_box_ios(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::Box);
  auto approot = c.internal / "private" / "var" / "mobile" / "Applications" /
                 "A91B2C6E-55D0-4F0A-B7E3-6210F3C89A44";  // state-invariant artifacts

  {
    SqliteWriter db(approot / "Documents" / "BoxCoreDataStore.sqlite");
    db.exec(
        "CREATE TABLE ZBOXBASECOREDATA (Z_PK INTEGER PRIMARY KEY, ZBOXID INTEGER, ZNAME TEXT, "
        "ZSIZE INTEGER, ZSHA1 TEXT, ZCREATIONTIME REAL, ZUPDATED REAL, ZLASTDOWNLOADDATE REAL, "
        "ZFAVORITEOBJECT INTEGER, ZLOCALURLSTRING TEXT, ZSTREAMINGURLSTRING TEXT, "
        "ZLOCALSHA1 TEXT)");
    for (int i = 0; i < 20; ++i) {
      bool offline = i % 4 == 1;
      db.insert(
          "INSERT INTO ZBOXBASECOREDATA (ZBOXID, ZNAME, ZSIZE, ZSHA1, ZCREATIONTIME, ZUPDATED, "
          "ZLASTDOWNLOADDATE, ZFAVORITEOBJECT, ZLOCALURLSTRING, ZSTREAMINGURLSTRING, ZLOCALSHA1) "
          "VALUES (?,?,?,?,?,?,?,?,?,?,?)",
          {box_id(i), ds.files[i].name, int64_t(ds.files[i].size), ds.files[i].sha1,
           apple_secs(created_ts(i)), apple_secs(modified_ts(i)),
           offline ? SqliteWriter::Bind(apple_secs(saved_ts(i))) : SqliteWriter::Bind(nullptr),
           int64_t(offline ? 1 : 0),
           offline ? SqliteWriter::Bind(std::string("file://Documents/SavedFiles/") +
                                        ds.files[i].name)
                   : SqliteWriter::Bind(nullptr),
           std::string("https://www.box.net/api/1.0/download/") + acct.auth_token + "/" +
               std::to_string(box_id(i)),
           offline ? SqliteWriter::Bind(ds.files[i].sha1) : SqliteWriter::Bind(nullptr)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
    db.exec("CREATE TABLE ZBOXUSER (Z_PK INTEGER PRIMARY KEY, ZUSERNAME TEXT, "
            "ZEMAILADDRESS TEXT, ZAUTHTOKEN TEXT)");
    db.insert("INSERT INTO ZBOXUSER (ZUSERNAME, ZEMAILADDRESS, ZAUTHTOKEN) VALUES (?,?,?)",
              {acct.display_name, acct.email, acct.auth_token});
  }
  c.place(approot / "Documents" / "SavedFiles", {1, 5, 9, 13, 17},
          RecoveryStatus::RecoveredIntact);
  c.place_thumbs(approot / "Library" / "Caches" / "Thumbnails", {0, 1, 2, 3});
}

inline void gen_sugarsync_android(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::SugarSync);

  write_text(c.internal / "app_SugarSync" / "SugarSync" / "sc_appdata",
             "user.email=" + acct.email + "\n" +
             "user.id=" + acct.user_id + "\n" +
             "user.password.sha1=" + acct.password_hash + "\n" +
             "device.name=GT-I9300\n" +
             "sync.auto=false\n");
  write_text(c.internal / "app_SugarSync" / "SugarSync" / "log" / "sugarsync.log",
             kv_log_text({{1335445640, "service bind"},
                          {1335445642, "login ok uid=" + acct.user_id},
                          {1335445645, "offline sync 5 files"}}));
  {
    SqliteWriter db(c.internal / "databases" / "SugarSyncDB");
    db.exec("CREATE TABLE rec_to_offline_file_" + acct.user_id +
            " (name TEXT, saved_time INTEGER)");
    for (int i : {1, 5, 9, 13, 17}) {
      db.insert("INSERT INTO rec_to_offline_file_" + acct.user_id + " VALUES (?,?)",
                {ds.files[i].name, saved_ts(i)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  }

  c.place(c.sd / ".sugarsync", {12, 13, 15}, RecoveryStatus::RecoveredUnverified);
  if (c.aps)
    c.place(c.sd / ".httpfilecache", {0, 1, 3, 12, 15, 16, 19},
            RecoveryStatus::RecoveredUnverified);
  c.place_thumbs(c.sd / ".httpfilecache" / "thumbs", {0, 1, 2, 3});
  c.place(c.sd / "MySugarSyncFolders", {1, 5, 9, 13, 17}, RecoveryStatus::RecoveredUnverified);
  if (!c.aps) c.set_carves({0, 3, 16, 19});
}

inline void gen_sugarsync_ios(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::SugarSync);
  auto approot = c.internal / "private" / "var" / "mobile" / "Applications" /
                 "2E61A2F9-3FAB-4E07-9D25-1EBC02FD1C9A";

  if (c.aps)
    c.place(approot / "tmp" / "http_cache", {0, 1, 3, 8, 9, 11, 12, 13, 15, 16, 17, 19},
            RecoveryStatus::RecoveredUnverified);
  c.place(approot / "tmp" / "cache", {4, 5, 7}, RecoveryStatus::RecoveredUnverified);
  c.place(approot / "Documents" / "MyiPhone", {1, 5, 9, 13, 17},
          RecoveryStatus::RecoveredUnverified);
  write_text(approot / "Documents" / "ringo.appdata",
             "user.email=" + acct.email + "\nclient.platform=iPhone OS\n");
  {
    SqliteWriter db(approot / "Documents" / "Ringo.sqlite");
    db.exec("CREATE TABLE ZSYNCOBJECT (Z_PK INTEGER PRIMARY KEY, ZFILENAME TEXT, ZSIZE INTEGER, "
            "ZLASTMODIFIED REAL)");
    for (int i : {1, 5, 9, 13, 17}) {
      db.insert("INSERT INTO ZSYNCOBJECT (ZFILENAME, ZSIZE, ZLASTMODIFIED) VALUES (?,?,?)",
                {ds.files[i].name, int64_t(ds.files[i].size), apple_secs(modified_ts(i))});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  }
}

inline void gen_syncplicity_android(ScenarioCtx& c) {
  const auto& ds = c.ds;
  AccountFixture acct = account_fixture(Provider::Syncplicity);
  bool v17 = c.spec.version == "1.7";

  write_text(c.internal / "data" / "data" / "com.syncplicity" / "shared_prefs" /
                 "auth_prefs.xml",
             "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n"
             "<string name=\"email\">" + acct.email + "</string>\n"
             "<boolean name=\"remember\" value=\"true\" />\n"
             "</map>\n");
  write_text(c.internal / "data" / "data" / "com.syncplicity" / "shared_prefs" /
                 "file_cache_preferences17.deleted.xml",
             "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n<map>\n"
             "<long name=\"FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_VERSION_ID\" "
             "value=\"145789448\" />\n"
             "<string name=\"FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_NAME\">016.pdf</string>\n"
             "</map>\n");

  if (v17) {
    SqliteWriter db(c.internal / "databases" / "CacheDatabase.sqlite");
    db.exec("CREATE TABLE Files (fileId INTEGER PRIMARY KEY, name TEXT, length INTEGER, "
            "fileStatus INTEGER, thumbnailURL TEXT)");
    for (int i = 0; i < 20; ++i) {
      bool deleted = i % 4 == 3;
      db.insert("INSERT INTO Files (fileId, name, length, fileStatus, thumbnailURL) "
                "VALUES (?,?,?,?,?)",
                {int64_t(501000 + i), ds.files[i].name, int64_t(ds.files[i].size),
                 int64_t(deleted ? 0 : 1),
                 i < 4 ? SqliteWriter::Bind("https://syncplicity.example/thumb/" +
                                            std::to_string(501000 + i))
                       : SqliteWriter::Bind(nullptr)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  } else {
    SqliteWriter db(c.internal / "databases" / "VIRTUAL_FILE_SYSTEM.db");
    db.exec("CREATE TABLE Files (File_ID INTEGER PRIMARY KEY, File_Name TEXT, "
            "Is_Favorite INTEGER, Server_Length INTEGER, Local_Length INTEGER, "
            "Is_Deleted INTEGER, Thumbnail_URL TEXT)");
    for (int i = 0; i < 20; ++i) {
      bool deleted = i % 4 == 3;
      bool offline = i % 4 == 1;
      db.insert(
          "INSERT INTO Files (File_ID, File_Name, Is_Favorite, Server_Length, Local_Length, "
          "Is_Deleted, Thumbnail_URL) VALUES (?,?,?,?,?,?,?)",
          {int64_t(501000 + i), ds.files[i].name, int64_t(offline ? 1 : 0),
           int64_t(ds.files[i].size), deleted ? SqliteWriter::Bind(int64_t(0))
                                              : SqliteWriter::Bind(int64_t(ds.files[i].size)),
           int64_t(deleted ? 1 : 0),
           i < 4 ? SqliteWriter::Bind("https://syncplicity.example/thumb/" +
                                      std::to_string(501000 + i))
                 : SqliteWriter::Bind(nullptr)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
    db.exec("CREATE TABLE Files_and_Folders_to_Synchronize (Name TEXT)");
    for (int i : {1, 5, 9, 13, 17})
      db.insert("INSERT INTO Files_and_Folders_to_Synchronize VALUES (?)", {ds.files[i].name});
    write_text(c.internal / "app_log_syncplicity" / "00000000000000000000.log.gz.tmp",
               kv_log_text({{1335445640, "vfs mount"},
                            {1335445643, "decrypt batch 14 ok"},
                            {1335445648, "sync idle"}}));
  }

  if (v17) {
    c.place_thumbs(c.sd / "cache" / "cacheifu" / "image_cache", {0, 1, 2, 3});
    c.place(c.sd / "Syncplicity", {1, 5, 9, 13, 17}, RecoveryStatus::RecoveredUnverified);
    if (c.aps)
      c.opaque_blobs(c.sd / "cache" / "private_syncp_file_cache_v3" / "encrypted" / "8675309", 7);
    c.set_carves({16, 19});  // resident in unallocated space in every state
  } else {
    c.place_thumbs(c.sd / "cache" / "cachefu" / "image_cache", {0, 1, 2, 3});
    if (c.aps) {
      c.opaque_blobs(c.sd / "encrypted_storage", 14);
      c.place(c.sd / "temporary_decrypted_storage",
              {0, 1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17},
              RecoveryStatus::RecoveredUnverified);
    } else {
      c.place(c.sd / "temporary_decrypted_storage", {1, 5, 9, 13, 17},
              RecoveryStatus::RecoveredUnverified);
      c.set_carves({0, 3, 4, 7, 8, 11, 12, 15, 16});
    }
  }
}

inline void gen_syncplicity_ios(ScenarioCtx& c) {
  const auto& ds = c.ds;
  auto approot = c.internal / "private" / "var" / "mobile" / "Applications" /
                 "7D1FA145-3A02-4E5B-8E11-40C2A6F0B991";

  if (c.aps)
    c.place(approot / "Documents" / "cache", {0, 1, 3, 4, 5, 7, 8, 9, 12, 13, 15, 16, 17, 19},
            RecoveryStatus::RecoveredUnverified);
  {
    SqliteWriter db(approot / "Documents" / "syncplicity.sqlite");
    db.exec("CREATE TABLE ZFILES (Z_PK INTEGER PRIMARY KEY, ZFILEID INTEGER, ZFILENAME TEXT, "
            "ZEXT TEXT, ZLENGTH INTEGER, ZDELETED INTEGER, ZTHUMBNAILURL TEXT)");
    for (int i = 0; i < 20; ++i) {
      if (i == 3 || i == 7) continue;  // two deletions purged before the pull
      std::string ext = ds.files[i].name.substr(ds.files[i].name.find('.') + 1);
      db.insert("INSERT INTO ZFILES (ZFILEID, ZFILENAME, ZEXT, ZLENGTH, ZDELETED, ZTHUMBNAILURL) "
                "VALUES (?,?,?,?,?,?)",
                {int64_t(501000 + i), ds.files[i].name, ext, int64_t(ds.files[i].size),
                 int64_t(i % 4 == 3 ? 1 : 0),
                 i < 4 ? SqliteWriter::Bind("https://syncplicity.example/thumb/" +
                                            std::to_string(501000 + i))
                       : SqliteWriter::Bind(nullptr)});
      c.floor_status(i, RecoveryStatus::MetadataOnly);
    }
  }
  PlistDict prefs;
  prefs["AccountType"] = "Personal";
  prefs["FirstName"] = "Kim";
  prefs["LastName"] = "Cloud";
  prefs["PushEnabled"] = false;
  write_text(approot / "library" / "preferences" / "com.syncplicity.ios" / "syncplicity.plist",
             dump_plist_xml(PlistValue(prefs)));
  write_text(approot / "library" / "caches" / "syncplicity_0.log",
             kv_log_text({{1335445640, "startup"}, {1335445646, "cache fill 14 objects"}}));
}

}  // namespace gen

// Manifest of one generated scenario: identity, the dataset, and what a
// correct reconstruction reports.
inline nlohmann::json scenario_manifest(const ScenarioSpec& spec, const Dataset& ds,
                                        const std::map<std::string, RecoveryStatus>& expect) {
  nlohmann::json m;
  m["schema_version"] = "1";
  m["scenario"] = {{"provider", to_string(spec.provider)},
                   {"platform", to_string(spec.platform)},
                   {"app_version", spec.version},
                   {"device_state", to_string(spec.state)},
                   {"seed", spec.seed}};
  m["dataset"] = nlohmann::json::array();
  for (const auto& f : ds.files)
    m["dataset"].push_back(
        {{"name", f.name}, {"kind", f.kind}, {"size", f.size}, {"md5", f.md5}, {"sha1", f.sha1}});

  // version expectation: discriminable only when artifacts pin it
  bool ambiguous = (spec.provider == Provider::Dropbox && spec.platform == Platform::Android) ||
                   (spec.provider == Provider::SugarSync && spec.platform == Platform::Android);
  nlohmann::json exp;
  exp["app_version"] = ambiguous ? "" : spec.version;
  nlohmann::json cands = nlohmann::json::array();
  if (ambiguous)
    for (const auto& ca : cataloged_apps())
      if (ca.provider == spec.provider && ca.platform == spec.platform) cands.push_back(ca.version);
  exp["app_version_candidates"] = cands;

  gen::AccountFixture acct = gen::account_fixture(spec.provider);
  nlohmann::json ja;
  switch (spec.provider) {
    case Provider::Dropbox:
      ja["email"] = acct.email;
      if (spec.platform == Platform::Android) ja["display_name"] = acct.display_name;
      break;
    case Provider::Box:
      ja["email"] = acct.email;
      ja["auth_token"] = acct.auth_token;
      if (spec.platform == Platform::Ios) ja["display_name"] = acct.display_name;
      break;
    case Provider::SugarSync:
      ja["email"] = acct.email;
      if (spec.platform == Platform::Android) {
        ja["user_id"] = acct.user_id;
        ja["password_hash"] = acct.password_hash;
      }
      break;
    case Provider::Syncplicity:
      if (spec.platform == Platform::Android) ja["email"] = acct.email;
      else ja["display_name"] = acct.display_name;
      break;
  }
  exp["account"] = ja;

  nlohmann::json st;
  int recovered = 0;
  for (const auto& f : ds.files) {
    RecoveryStatus s = expect.at(f.name);
    st[f.name] = to_string(s);
    if (counts_as_recovered(s)) ++recovered;
  }
  exp["statuses"] = st;
  exp["recovered_count"] = recovered;
  m["expected"] = exp;
  return m;
}

// Writes internal/, sd/ (Android), raw.img (when the scenario leaves deleted
// data in unallocated space), and manifest.json under out_dir.
inline void generate_scenario(const ScenarioSpec& spec, const Dataset& ds,
                              const std::filesystem::path& out_dir) {
  if (!is_cataloged(spec.provider, spec.platform, spec.version))
    throw std::invalid_argument("not a cataloged app: " + std::string(to_string(spec.provider)) +
                                "/" + std::string(to_string(spec.platform)) + " " + spec.version);
  std::filesystem::create_directories(out_dir);
  gen::ScenarioCtx c(spec, ds, out_dir);

  if (spec.provider == Provider::Dropbox && spec.platform == Platform::Android)
    gen::gen_dropbox_android(c);
  else if (spec.provider == Provider::Dropbox)
    gen::gen_dropbox_ios(c);
  else if (spec.provider == Provider::Box && spec.platform == Platform::Android)
    gen::gen_box_android(c);
  else if (spec.provider == Provider::Box)
    gen::gen_box_ios(c);
  else if (spec.provider == Provider::SugarSync && spec.platform == Platform::Android)
    gen::gen_sugarsync_android(c);
  else if (spec.provider == Provider::SugarSync)
    gen::gen_sugarsync_ios(c);
  else if (spec.platform == Platform::Android)
    gen::gen_syncplicity_android(c);
  else
    gen::gen_syncplicity_ios(c);

  if (!c.carve_set.empty() || c.raw_filler_only) {
    std::vector<uint8_t> img;
    auto pad = [&](size_t n) {
      auto f = gen::filler(c.rng, n);
      img.insert(img.end(), f.begin(), f.end());
    };
    if (c.raw_filler_only) {
      pad(1536 * 1024);
    } else {
      for (int i : c.carve_set) {
        pad(32768 + c.rng() % 98304);
        img.insert(img.end(), ds.files[i].bytes.begin(), ds.files[i].bytes.end());
      }
      pad(65536);
    }
    gen::write_file(out_dir / "raw.img", img);
  }

  gen::write_text(out_dir / "manifest.json", scenario_manifest(spec, ds, c.expect).dump(2));
}

inline std::vector<ScenarioSpec> all_scenarios(uint64_t seed) {
  std::vector<ScenarioSpec> out;
  static const DeviceState states[4] = {DeviceState::ActivePowerState, DeviceState::CacheCleared,
                                        DeviceState::PoweredDown,
                                        DeviceState::CacheClearedPoweredDown};
  for (const auto& app : cataloged_apps())
    for (DeviceState st : states)
      out.push_back({app.provider, app.platform, app.version, st, seed});
  return out;
}

}  // namespace cloudsift
