#pragma once

// Reconstruction engine. Takes located app artifacts and assembles per-app
// account snapshots: file entries from metadata stores, recovered content
// from cache directories, carved objects from a raw flash image, account
// identifiers, and application event streams.
//
// Linking order for recovered content is fixed: name match against known
// entries, then content-hash match, then (carved objects only) unique-size
// match, and finally a synthetic entry named after the carve. Metadata never
// loses fields; columns without a schema slot land in extras verbatim.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudsift/carver.hpp"
#include "cloudsift/codecs.hpp"
#include "cloudsift/evidence_tree.hpp"
#include "cloudsift/locator.hpp"
#include "cloudsift/model.hpp"
#include "cloudsift/plist.hpp"
#include "cloudsift/sqlite_reader.hpp"

namespace cloudsift {

struct AnalyzeInput {
  const EvidenceTree* internal = nullptr;
  std::string internal_label = "internal";
  const EvidenceTree* sd = nullptr;
  std::string sd_label = "sd";
  const RawImage* raw = nullptr;
  const Registry* registry = nullptr;  // builtin catalog when null
};

struct InputRef {
  std::string label;
  std::string kind;  // internal_tree | sd_tree | raw_image
  std::string sha1;
};

struct AnalyzeResult {
  std::vector<InputRef> inputs;
  std::vector<AppSnapshot> snapshots;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

inline int count_recovered(const AppSnapshot& snap) {
  int n = 0;
  for (const auto& e : snap.entries)
    if (counts_as_recovered(e.status)) ++n;
  return n;
}

// Download URLs for the provider's classic v1 API are a pure function of the
// stored auth token and the numeric file id.
inline std::string reconstruct_box_url(const std::string& auth_token,
                                       const std::string& file_id) {
  if (auth_token.empty()) throw std::invalid_argument("auth token required");
  if (file_id.empty()) throw std::invalid_argument("file id required");
  return "https://www.box.net/api/1.0/download/" + auth_token + "/" + file_id;
}

namespace detail {

inline std::string basename_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

inline bool looks_like_email(const std::string& s) {
  auto at = s.find('@');
  if (at == std::string::npos || at == 0 || s.find('@', at + 1) != std::string::npos) return false;
  auto dot = s.find('.', at + 1);
  if (dot == std::string::npos || dot + 1 >= s.size()) return false;
  return s.find(' ') == std::string::npos;
}

inline bool looks_like_person_name(const std::string& s) {
  if (s.empty() || s.find(' ') == std::string::npos) return false;
  for (char ch : s) {
    bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || ch == ' ' || ch == '.' ||
              ch == '\'' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

inline void set_account_field(std::optional<std::string>& dst, const std::string& value,
                              const char* field, std::vector<std::string>& warnings) {
  if (value.empty()) return;
  if (!dst) {
    dst = value;
  } else if (*dst != value) {
    warnings.push_back(std::string("conflicting account ") + field + " ('" + *dst + "' vs '" +
                       value + "'); kept first");
  }
}

// --- sqlite row access ----------------------------------------------------

struct TableView {
  SqliteTableData table;
  const SqliteTableData* data = &table;
  std::map<std::string, size_t> col;

  explicit TableView(SqliteTableData t) : table(std::move(t)) {
    for (size_t i = 0; i < table.columns.size(); ++i) col[table.columns[i]] = i;
  }
  TableView(const TableView&) = delete;
  TableView& operator=(const TableView&) = delete;
  const SqliteValue* cell(const std::vector<SqliteValue>& row, const std::string& name) const {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return nullptr;
    return &row[it->second];
  }
  bool has(const std::string& name) const { return col.count(name) != 0; }
};

inline std::optional<std::string> sv_text(const SqliteValue* v) {
  if (!v) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  if (const auto* i = std::get_if<int64_t>(v)) return std::to_string(*i);
  return std::nullopt;
}

inline std::optional<int64_t> sv_int(const SqliteValue* v) {
  if (!v) return std::nullopt;
  if (const auto* i = std::get_if<int64_t>(v)) return *i;
  if (const auto* d = std::get_if<double>(v)) return static_cast<int64_t>(*d);
  if (const auto* s = std::get_if<std::string>(v)) {
    try {
      size_t used = 0;
      int64_t n = std::stoll(*s, &used);
      if (used == s->size()) return n;
    } catch (...) {
    }
  }
  return std::nullopt;
}

inline std::optional<double> sv_real(const SqliteValue* v) {
  if (!v) return std::nullopt;
  if (const auto* d = std::get_if<double>(v)) return *d;
  if (const auto* i = std::get_if<int64_t>(v)) return static_cast<double>(*i);
  return std::nullopt;
}

inline Scalar sv_scalar(const SqliteValue& v) {
  if (std::holds_alternative<std::nullptr_t>(v)) return nullptr;
  if (const auto* i = std::get_if<int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  const auto& blob = std::get<std::vector<uint8_t>>(v);
  if (blob.size() <= 64) return to_hex(blob);
  return "blob:" + std::to_string(blob.size()) + " bytes";
}

// Columns not consumed by the field map are preserved verbatim.
inline void stash_unmapped(CloudFileEntry& e, const TableView& t,
                           const std::vector<SqliteValue>& row,
                           const std::set<std::string>& consumed) {
  for (size_t i = 0; i < t.data->columns.size() && i < row.size(); ++i) {
    const std::string& c = t.data->columns[i];
    if (consumed.count(c)) continue;
    if (std::holds_alternative<std::nullptr_t>(row[i])) continue;
    e.extras.emplace_back(c, sv_scalar(row[i]));
  }
}

inline SnapshotEntry& upsert_entry(AppSnapshot& snap, const std::string& name,
                                   bool from_metadata) {
  if (auto* e = snap.find_entry(name)) {
    if (from_metadata) e->from_metadata = true;
    return *e;
  }
  SnapshotEntry e;
  e.entry.name = name;
  e.from_metadata = from_metadata;
  snap.entries.push_back(std::move(e));
  return snap.entries.back();
}

inline SnapshotEntry* find_by_remote_id(AppSnapshot& snap, const std::string& id) {
  for (auto& e : snap.entries)
    if (e.entry.remote_id && *e.entry.remote_id == id) return &e;
  return nullptr;
}

// registry format ids and the kv-log parser's dialect ids are separate
// namespaces; collapse the aliases here
inline std::string kv_dialect(const std::string& registry_format) {
  if (registry_format == "dropbox_ios_run_log") return "dropbox_ios_run";
  if (registry_format == "sugarsync_android_log") return "sugarsync_log";
  return registry_format;
}

// --- per-format decoders ---------------------------------------------------

inline void decode_dropbox_android_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                      const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("dropbox"));
  static const std::set<std::string> consumed = {"display_name", "local_hash",   "modified",
                                                 "last_modified", "is_favorite", "parent_path",
                                                 "_data"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "display_name"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto h = sv_text(t.cell(row, "local_hash")); h && !h->empty())
      e.hash = ContentHash{HashAlg::Md5, *h};
    if (auto v = sv_int(t.cell(row, "modified"))) e.created = unix_ts(double(*v));
    if (auto v = sv_int(t.cell(row, "last_modified"))) e.modified = unix_ts(double(*v));
    if (auto v = sv_int(t.cell(row, "is_favorite"))) e.favorite = *v != 0;
    if (auto v = sv_text(t.cell(row, "parent_path"))) e.extras.emplace_back("parent_path", *v);
    if (auto v = sv_text(t.cell(row, "_data"))) e.extras.emplace_back("_data", *v);
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_dropbox_android_prefs_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                            const std::string&) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("DropboxAccountPrefs"));
  // keys are build-specific and opaque; classify rows by value shape
  for (const auto& row : t.data->rows) {
    auto value = sv_text(t.cell(row, "value"));
    if (!value) continue;
    if (looks_like_email(*value))
      set_account_field(snap.account.email, *value, "email", snap.warnings);
    else if (looks_like_person_name(*value))
      set_account_field(snap.account.display_name, *value, "display_name", snap.warnings);
  }
}

inline void decode_dropbox_ios_cache_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                        const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("ZCACHEDFILE"));
  static const std::set<std::string> consumed = {"ZPATH", "ZSIZE", "ZFAVORITE",
                                                 "ZLASTVIEWEDDATE"};
  for (const auto& row : t.data->rows) {
    auto path = sv_text(t.cell(row, "ZPATH"));
    if (!path || path->empty()) continue;
    std::string name = basename_of(*path);
    auto& se = upsert_entry(snap, name, true);
    CloudFileEntry e;
    e.name = name;
    if (auto v = sv_int(t.cell(row, "ZSIZE"))) e.size_bytes = uint64_t(*v);
    if (auto v = sv_int(t.cell(row, "ZFAVORITE"))) e.favorite = *v != 0;
    if (auto v = sv_real(t.cell(row, "ZLASTVIEWEDDATE"))) e.last_viewed = apple_ts(*v);
    e.extras.emplace_back("ZPATH", *path);  // name mapping is lossy, keep the original
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_dropbox_ios_favorites(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                         const std::string& src) {
  PlistValue root = parse_plist(bytes);
  if (!root.is_array()) throw PlistError("favorites plist root is not an array");
  for (const auto& item : root.as_array()) {
    if (!item.is_dict()) continue;
    const PlistValue* name = item.find("name");
    if (!name || !name->is_string()) continue;
    auto& se = upsert_entry(snap, name->as_string(), true);
    CloudFileEntry e;
    e.name = name->as_string();
    e.favorite = true;
    if (const auto* v = item.find("size"); v && v->is_int()) e.size_bytes = uint64_t(v->as_int());
    if (const auto* v = item.find("modified"); v && v->is_date())
      e.modified = apple_ts(v->as_date().apple_seconds);
    if (const auto* v = item.find("deleted"); v && v->is_bool()) e.deleted_flag = v->as_bool();
    e.source_artifact = src;
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void plist_scan_emails(const PlistValue& v, std::vector<std::string>& out) {
  if (v.is_string()) {
    if (looks_like_email(v.as_string())) out.push_back(v.as_string());
  } else if (v.is_array()) {
    for (const auto& c : v.as_array()) plist_scan_emails(c, out);
  } else if (v.is_dict()) {
    for (const auto& [k, c] : v.as_dict()) plist_scan_emails(c, out);
  }
}

inline void decode_dropbox_ios_prefs(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                     const std::string&) {
  PlistValue root = parse_plist(bytes);
  std::vector<std::string> emails;
  plist_scan_emails(root, emails);
  for (const auto& e : emails) set_account_field(snap.account.email, e, "email", snap.warnings);
}

inline void decode_box_json_model(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                  const std::string& src) {
  JsonDoc doc = parse_json(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                            bytes.size()));
  for (const auto& w : doc.warnings) snap.warnings.push_back(src + ": " + w);
  if (!doc.root.is_array()) throw std::runtime_error("file model root is not an array");
  static const std::set<std::string> consumed = {"mFileName", "mId",      "mSha1",
                                                 "mSize",     "mCreated", "mUpdated",
                                                 "mThumbnail"};
  for (const auto& rec : doc.root.as_array()) {
    if (!rec.is_object()) continue;
    const JsonValue* fn = rec.find("mFileName");
    if (!fn || !fn->is_string()) continue;
    auto& se = upsert_entry(snap, fn->as_string(), true);
    CloudFileEntry e;
    e.name = fn->as_string();
    if (const auto* v = rec.find("mId"); v && v->is_int()) e.remote_id = std::to_string(v->as_int());
    if (const auto* v = rec.find("mSha1"); v && v->is_string())
      e.hash = ContentHash{HashAlg::Sha1, v->as_string()};
    if (const auto* v = rec.find("mSize"); v && v->is_int()) e.size_bytes = uint64_t(v->as_int());
    if (const auto* v = rec.find("mCreated"); v && v->is_int())
      e.created = unix_ts(double(v->as_int()));
    if (const auto* v = rec.find("mUpdated"); v && v->is_int())
      e.modified = unix_ts(double(v->as_int()));
    if (const auto* v = rec.find("mThumbnail"); v && v->is_string())
      e.thumbnail_url = v->as_string();
    for (const auto& [k, v] : rec.as_object())
      if (!consumed.count(k)) e.extras.emplace_back(k, json_to_scalar(v));
    e.source_artifact = src;
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_box_prefs_xml(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                 const std::string& src) {
  ParsedPrefs prefs = parse_shared_prefs(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), src);
  for (const auto& w : prefs.warnings) snap.warnings.push_back(w);
  for (const auto& p : prefs.entries) {
    if (p.name == "authToken")
      set_account_field(snap.account.auth_token, p.value, "auth_token", snap.warnings);
    else if (looks_like_email(p.value))
      set_account_field(snap.account.email, p.value, "email", snap.warnings);
  }
}

// <long name="<file id>" value="<unix seconds>"> rows marking files kept
// available offline
inline void decode_box_offline_xml(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                   const std::string& src) {
  ParsedPrefs prefs = parse_shared_prefs(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), src);
  for (const auto& w : prefs.warnings) snap.warnings.push_back(w);
  for (const auto& p : prefs.entries) {
    if (p.kind != PrefKind::Long) continue;
    SnapshotEntry* se = find_by_remote_id(snap, p.name);
    if (!se) {
      snap.notes.push_back("offline record in " + src + " references unknown file id " + p.name);
      continue;
    }
    se->entry.favorite = true;
    int64_t when = 0;
    try {
      when = std::stoll(p.value);
    } catch (...) {
      continue;
    }
    se->entry.extras.emplace_back("offline_saved_time", when);
  }
}

inline void decode_box_preview_pages(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                     const std::string& src) {
  ParsedPrefs prefs = parse_shared_prefs(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), src);
  for (const auto& p : prefs.entries) {
    if (p.kind != PrefKind::Int) continue;
    if (SnapshotEntry* se = find_by_remote_id(snap, p.name)) {
      try {
        se->entry.extras.emplace_back("preview_pages", int64_t(std::stoll(p.value)));
      } catch (...) {
      }
    }
  }
}

inline void decode_box_ios_coredata(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                    const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("ZBOXBASECOREDATA"));
  static const std::set<std::string> consumed = {"ZBOXID",        "ZNAME",   "ZSIZE",
                                                 "ZSHA1",         "ZCREATIONTIME",
                                                 "ZUPDATED",      "ZLASTDOWNLOADDATE",
                                                 "ZFAVORITEOBJECT"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "ZNAME"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto v = sv_int(t.cell(row, "ZBOXID"))) e.remote_id = std::to_string(*v);
    if (auto v = sv_int(t.cell(row, "ZSIZE"))) e.size_bytes = uint64_t(*v);
    if (auto h = sv_text(t.cell(row, "ZSHA1")); h && !h->empty())
      e.hash = ContentHash{HashAlg::Sha1, *h};
    if (auto v = sv_real(t.cell(row, "ZCREATIONTIME"))) e.created = apple_ts(*v);
    if (auto v = sv_real(t.cell(row, "ZUPDATED"))) e.modified = apple_ts(*v);
    if (auto v = sv_real(t.cell(row, "ZLASTDOWNLOADDATE"))) e.last_viewed = apple_ts(*v);
    if (auto v = sv_int(t.cell(row, "ZFAVORITEOBJECT"))) e.favorite = *v != 0;
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
  if (db.has_table("ZBOXUSER")) {
    TableView u(db.read_table("ZBOXUSER"));
    for (const auto& row : u.data->rows) {
      if (auto v = sv_text(u.cell(row, "ZUSERNAME")))
        set_account_field(snap.account.display_name, *v, "display_name", snap.warnings);
      if (auto v = sv_text(u.cell(row, "ZEMAILADDRESS")))
        set_account_field(snap.account.email, *v, "email", snap.warnings);
      if (auto v = sv_text(u.cell(row, "ZAUTHTOKEN")))
        set_account_field(snap.account.auth_token, *v, "auth_token", snap.warnings);
    }
  }
}

// java-properties style k=v lines
inline void decode_props_account(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                 const std::string&) {
  std::string text(bytes.begin(), bytes.end());
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "user.email")
      set_account_field(snap.account.email, value, "email", snap.warnings);
    else if (key == "user.id")
      set_account_field(snap.account.user_id, value, "user_id", snap.warnings);
    else if (key == "user.password.sha1")
      set_account_field(snap.account.password_hash, value, "password_hash", snap.warnings);
  }
}

inline void decode_sugarsync_android_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                        const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  static const std::string prefix = "rec_to_offline_file_";
  for (const auto& table : db.table_names()) {
    if (table.rfind(prefix, 0) != 0) continue;
    std::string uid = table.substr(prefix.size());
    if (!uid.empty()) set_account_field(snap.account.user_id, uid, "user_id", snap.warnings);
    TableView t(db.read_table(table));
    static const std::set<std::string> consumed = {"name", "saved_time"};
    for (const auto& row : t.data->rows) {
      auto name = sv_text(t.cell(row, "name"));
      if (!name || name->empty()) continue;
      auto& se = upsert_entry(snap, *name, true);
      CloudFileEntry e;
      e.name = *name;
      e.favorite = true;  // presence in the offline table is the favorite mark
      if (auto v = sv_int(t.cell(row, "saved_time")))
        e.extras.emplace_back("offline_saved_time", *v);
      e.source_artifact = src;
      stash_unmapped(e, t, row, consumed);
      merge_entry_fields(se.entry, e, &snap.warnings);
    }
  }
}

inline void decode_sugarsync_ios_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                    const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("ZSYNCOBJECT"));
  static const std::set<std::string> consumed = {"ZFILENAME", "ZSIZE", "ZLASTMODIFIED"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "ZFILENAME"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto v = sv_int(t.cell(row, "ZSIZE"))) e.size_bytes = uint64_t(*v);
    if (auto v = sv_real(t.cell(row, "ZLASTMODIFIED"))) e.modified = apple_ts(*v);
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_syncplicity_auth_prefs(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                          const std::string& src) {
  ParsedPrefs prefs = parse_shared_prefs(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), src);
  for (const auto& p : prefs.entries)
    if (p.name == "email" || looks_like_email(p.value))
      set_account_field(snap.account.email, p.value, "email", snap.warnings);
}

inline void decode_syncplicity_cache_prefs(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                           const std::string& src) {
  ParsedPrefs prefs = parse_shared_prefs(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), src);
  std::optional<std::string> last_name;
  std::optional<int64_t> last_version;
  for (const auto& p : prefs.entries) {
    if (p.name == "FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_NAME") last_name = p.value;
    if (p.name == "FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_VERSION_ID") {
      try {
        last_version = std::stoll(p.value);
      } catch (...) {
      }
    }
  }
  if (last_name && !last_name->empty()) {
    auto& se = upsert_entry(snap, *last_name, true);
    if (last_version)
      se.entry.extras.emplace_back("last_decrypted_version_id", *last_version);
    se.entry.source_artifact = se.entry.source_artifact.empty()
                                   ? src
                                   : se.entry.source_artifact;
    snap.notes.push_back("most recently decrypted file: " + *last_name);
  }
}

inline void decode_syncplicity_cache_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                        const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("Files"));
  static const std::set<std::string> consumed = {"fileId", "name", "length", "fileStatus",
                                                 "thumbnailURL"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "name"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto v = sv_int(t.cell(row, "fileId"))) e.remote_id = std::to_string(*v);
    if (auto v = sv_int(t.cell(row, "length"))) e.size_bytes = uint64_t(*v);
    if (auto v = sv_int(t.cell(row, "fileStatus"))) e.deleted_flag = *v == 0;
    if (auto v = sv_text(t.cell(row, "thumbnailURL")); v && !v->empty()) e.thumbnail_url = *v;
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_syncplicity_vfs_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                      const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("Files"));
  static const std::set<std::string> consumed = {"File_ID",      "File_Name", "Is_Favorite",
                                                 "Server_Length", "Is_Deleted",
                                                 "Thumbnail_URL"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "File_Name"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto v = sv_int(t.cell(row, "File_ID"))) e.remote_id = std::to_string(*v);
    if (auto v = sv_int(t.cell(row, "Is_Favorite"))) e.favorite = *v != 0;
    if (auto v = sv_int(t.cell(row, "Server_Length"))) e.size_bytes = uint64_t(*v);
    if (auto v = sv_int(t.cell(row, "Is_Deleted"))) e.deleted_flag = *v != 0;
    if (auto v = sv_text(t.cell(row, "Thumbnail_URL")); v && !v->empty()) e.thumbnail_url = *v;
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
  if (db.has_table("Files_and_Folders_to_Synchronize")) {
    TableView s(db.read_table("Files_and_Folders_to_Synchronize"));
    for (const auto& row : s.data->rows) {
      auto name = sv_text(s.cell(row, "Name"));
      if (!name || name->empty()) continue;
      auto& se = upsert_entry(snap, *name, true);
      se.entry.favorite = true;
    }
  }
}

inline void decode_syncplicity_ios_db(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                      const std::string& src) {
  SqliteDb db = SqliteDb::open(bytes);
  TableView t(db.read_table("ZFILES"));
  static const std::set<std::string> consumed = {"ZFILEID", "ZFILENAME", "ZLENGTH", "ZDELETED",
                                                 "ZTHUMBNAILURL"};
  for (const auto& row : t.data->rows) {
    auto name = sv_text(t.cell(row, "ZFILENAME"));
    if (!name || name->empty()) continue;
    auto& se = upsert_entry(snap, *name, true);
    CloudFileEntry e;
    e.name = *name;
    if (auto v = sv_int(t.cell(row, "ZFILEID"))) e.remote_id = std::to_string(*v);
    if (auto v = sv_int(t.cell(row, "ZLENGTH"))) e.size_bytes = uint64_t(*v);
    if (auto v = sv_int(t.cell(row, "ZDELETED"))) e.deleted_flag = *v != 0;
    if (auto v = sv_text(t.cell(row, "ZTHUMBNAILURL")); v && !v->empty()) e.thumbnail_url = *v;
    e.source_artifact = src;
    stash_unmapped(e, t, row, consumed);
    merge_entry_fields(se.entry, e, &snap.warnings);
  }
}

inline void decode_syncplicity_ios_prefs(AppSnapshot& snap, const std::vector<uint8_t>& bytes,
                                         const std::string&) {
  PlistValue root = parse_plist(bytes);
  if (!root.is_dict()) return;
  const PlistValue* first = root.find("FirstName");
  const PlistValue* last = root.find("LastName");
  if (first && first->is_string() && last && last->is_string())
    set_account_field(snap.account.display_name,
                      first->as_string() + " " + last->as_string(), "display_name",
                      snap.warnings);
  else if (first && first->is_string())
    set_account_field(snap.account.display_name, first->as_string(), "display_name",
                      snap.warnings);
}

inline void decode_artifact(AppSnapshot& snap, const std::string& format,
                            const std::vector<uint8_t>& bytes, const std::string& src) {
  std::string text;
  auto as_text = [&]() -> const std::string& {
    text.assign(bytes.begin(), bytes.end());
    return text;
  };
  if (format == "dropbox_android_db") decode_dropbox_android_db(snap, bytes, src);
  else if (format == "dropbox_android_prefs_db") decode_dropbox_android_prefs_db(snap, bytes, src);
  else if (format == "dropbox_ios_cache_db") decode_dropbox_ios_cache_db(snap, bytes, src);
  else if (format == "dropbox_ios_prefs_plist") decode_dropbox_ios_prefs(snap, bytes, src);
  else if (format == "dropbox_ios_favorites_plist") decode_dropbox_ios_favorites(snap, bytes, src);
  else if (format == "dropbox_ios_analytics_log") {
    ParsedEvents ev = parse_json_lines_log(as_text(), src);
    for (auto& e : ev.events) snap.events.push_back(std::move(e));
    for (auto& w : ev.warnings) snap.warnings.push_back(std::move(w));
  } else if (format == "dropbox_android_log" || format == "dropbox_ios_run_log" ||
             format == "sugarsync_android_log" || format == "syncplicity_android_log" ||
             format == "syncplicity_ios_log") {
    ParsedEvents ev = parse_kv_log(as_text(), kv_dialect(format), src);
    for (auto& e : ev.events) snap.events.push_back(std::move(e));
    for (auto& w : ev.warnings) snap.warnings.push_back(std::move(w));
  } else if (format == "box_android_json_model") decode_box_json_model(snap, bytes, src);
  else if (format == "box_android_prefs_xml") decode_box_prefs_xml(snap, bytes, src);
  else if (format == "box_android_downloads_xml" || format == "box_android_offline_prefs_xml")
    decode_box_offline_xml(snap, bytes, src);
  else if (format == "box_android_preview_pages_xml") decode_box_preview_pages(snap, bytes, src);
  else if (format == "box_ios_coredata_db") decode_box_ios_coredata(snap, bytes, src);
  else if (format == "sugarsync_android_appdata" || format == "sugarsync_ios_appdata")
    decode_props_account(snap, bytes, src);
  else if (format == "sugarsync_android_db") decode_sugarsync_android_db(snap, bytes, src);
  else if (format == "sugarsync_ios_db") decode_sugarsync_ios_db(snap, bytes, src);
  else if (format == "syncplicity_android_auth_prefs")
    decode_syncplicity_auth_prefs(snap, bytes, src);
  else if (format == "syncplicity_android_file_cache_prefs")
    decode_syncplicity_cache_prefs(snap, bytes, src);
  else if (format == "syncplicity_android_cache_db") decode_syncplicity_cache_db(snap, bytes, src);
  else if (format == "syncplicity_android_vfs_db") decode_syncplicity_vfs_db(snap, bytes, src);
  else if (format == "syncplicity_ios_db") decode_syncplicity_ios_db(snap, bytes, src);
  else if (format == "syncplicity_ios_prefs_plist") decode_syncplicity_ios_prefs(snap, bytes, src);
  else
    snap.warnings.push_back("no decoder for format '" + format + "' (" + src + ")");
}

// --- object staging --------------------------------------------------------

inline ObjectOrigin origin_for_role(SignatureRole r) {
  switch (r) {
    case SignatureRole::OfflineDir: return ObjectOrigin::OfflineDir;
    case SignatureRole::ThumbnailDir: return ObjectOrigin::ThumbnailDir;
    case SignatureRole::PreviewDir: return ObjectOrigin::PreviewDir;
    default: return ObjectOrigin::CachePath;
  }
}

// previews are renders of the original: strip the render extension when the
// stem still carries the source one
inline std::string object_link_name(const std::string& base, ObjectOrigin origin) {
  if (origin == ObjectOrigin::PreviewDir && base.size() > 4 &&
      base.compare(base.size() - 4, 4, ".png") == 0) {
    std::string stem = base.substr(0, base.size() - 4);
    if (stem.find('.') != std::string::npos) return stem;
  }
  return base;
}

struct StagedObject {
  RecoveredObject obj;
  std::string link_name;
};

inline void stage_tree_objects(AppSnapshot& snap, const AnalyzeInput& in,
                               const std::vector<SignatureHit>& hits,
                               std::vector<StagedObject>& out) {
  struct DirHit {
    const SignatureHit* hit;
    const EvidenceTree* tree;
  };
  std::vector<DirHit> dirs;
  for (const auto& h : hits) {
    if (!role_is_dir(h.sig.role)) continue;
    const EvidenceTree* tree = h.area == "sd" ? in.sd : in.internal;
    if (!tree) continue;
    if (h.sig.role == SignatureRole::EncryptedCacheDir) {
      size_t n = tree->files_under(h.path).size();
      if (n)
        snap.notes.push_back(std::to_string(n) + " opaque object(s) in encrypted cache '" +
                             h.path + "'; content is not recoverable without device keys");
      continue;
    }
    dirs.push_back({&h, tree});
  }
  // a file under several cataloged dirs belongs to the most specific one
  std::map<std::pair<std::string, std::string>, const DirHit*> best;
  for (const auto& d : dirs) {
    for (const auto* f : d.tree->files_under(d.hit->path)) {
      auto key = std::make_pair(d.hit->area, f->path);
      auto it = best.find(key);
      if (it == best.end() || d.hit->path.size() > it->second->hit->path.size()) best[key] = &d;
    }
  }
  for (const auto& [key, d] : best) {
    const auto& [area, path] = key;
    ObjectOrigin origin = origin_for_role(d->hit->sig.role);
    std::string base = basename_of(path);
    RecoveredObject obj = make_recovered_object(
        base, origin, (area == "sd" ? in.sd_label : in.internal_label) + ":" + path,
        d->tree->read_file(path));
    out.push_back({std::move(obj), object_link_name(base, origin)});
  }
}

inline void link_tree_objects(AppSnapshot& snap, std::vector<StagedObject>& staged) {
  for (auto& s : staged) {
    if (auto* e = snap.find_entry(s.link_name)) {
      e->objects.push_back(std::move(s.obj));
      continue;
    }
    SnapshotEntry* by_hash = nullptr;
    for (auto& e : snap.entries) {
      if (e.entry.hash && object_hash_matches(s.obj, *e.entry.hash)) {
        by_hash = &e;
        break;
      }
    }
    if (by_hash) {
      by_hash->objects.push_back(std::move(s.obj));
      continue;
    }
    auto& e = upsert_entry(snap, s.link_name, false);
    e.objects.push_back(std::move(s.obj));
  }
}

// carved objects carry no name; hash first, then a size shared with exactly
// one described file
inline bool link_carved_object(AppSnapshot& snap, const RecoveredObject& obj) {
  for (auto& e : snap.entries) {
    if (e.entry.hash && object_hash_matches(obj, *e.entry.hash)) {
      e.objects.push_back(obj);
      return true;
    }
  }
  SnapshotEntry* size_match = nullptr;
  for (auto& e : snap.entries) {
    if (!e.entry.size_bytes || *e.entry.size_bytes != obj.length) continue;
    if (size_match) return false;  // ambiguous
    size_match = &e;
  }
  if (size_match) {
    size_match->objects.push_back(obj);
    return true;
  }
  return false;
}

}  // namespace detail

inline AnalyzeResult analyze(const AnalyzeInput& in) {
  AnalyzeResult out;
  if (in.internal)
    out.inputs.push_back({in.internal_label, "internal_tree", in.internal->listing_sha1()});
  if (in.sd) out.inputs.push_back({in.sd_label, "sd_tree", in.sd->listing_sha1()});
  if (in.raw) out.inputs.push_back({in.raw->label, "raw_image", in.raw->sha1()});

  Registry builtin;
  const Registry& reg = in.registry ? *in.registry : (builtin = builtin_registry());
  LocateResult loc = locate_apps(in.internal, in.sd, reg);
  out.notes = loc.notes;

  std::vector<std::vector<detail::StagedObject>> staged(loc.apps.size());
  for (size_t a = 0; a < loc.apps.size(); ++a) {
    const DetectedApp& det = loc.apps[a];
    AppSnapshot snap;
    snap.identity = det.identity;
    snap.notes = det.notes;
    for (const auto& h : det.hits)
      snap.hits.push_back(
          {to_string(h.sig.role), h.sig.pattern, h.path, h.area, h.sig.id});

    for (const auto& h : det.hits) {
      if (role_is_dir(h.sig.role) || h.sig.format.empty()) continue;
      const EvidenceTree* tree = h.area == "sd" ? in.sd : in.internal;
      if (!tree) continue;
      try {
        detail::decode_artifact(snap, h.sig.format, tree->read_file(h.path), h.path);
      } catch (const std::exception& ex) {
        snap.warnings.push_back("failed to parse " + h.path + ": " + ex.what());
      }
    }
    // an email bound into a matched path corroborates the account
    for (const auto& h : det.hits) {
      auto it = h.bindings.find("EMAIL");
      if (it != h.bindings.end() && detail::looks_like_email(it->second))
        detail::set_account_field(snap.account.email, it->second, "email", snap.warnings);
    }

    detail::stage_tree_objects(snap, in, det.hits, staged[a]);
    out.snapshots.push_back(std::move(snap));
  }

  for (size_t a = 0; a < out.snapshots.size(); ++a)
    detail::link_tree_objects(out.snapshots[a], staged[a]);

  if (in.raw) {
    std::vector<RecoveredObject> carved = carve_to_objects(in.raw->bytes, in.raw->label);
    out.notes.push_back("raw image '" + in.raw->label + "': " + std::to_string(carved.size()) +
                        " object(s) carved from unallocated content");
    for (auto& obj : carved) {
      bool linked = false;
      for (auto& snap : out.snapshots)
        if (detail::link_carved_object(snap, obj)) linked = true;
      if (linked) continue;
      if (out.snapshots.size() == 1) {
        auto& snap = out.snapshots.front();
        SnapshotEntry e;
        e.entry.name = obj.logical_name;
        e.entry.synthetic_name = true;
        e.entry.size_bytes = obj.length;
        e.from_metadata = false;
        e.objects.push_back(std::move(obj));
        snap.entries.push_back(std::move(e));
      } else {
        out.notes.push_back("carved object " + obj.logical_name +
                            " could not be attributed to a detected app");
      }
    }
  }

  for (auto& snap : out.snapshots) {
    for (auto& e : snap.entries)
      e.status = classify_status(e.entry, e.objects, e.from_metadata, e.encrypted_mapped,
                                 &snap.warnings);
    std::sort(snap.entries.begin(), snap.entries.end(),
              [](const SnapshotEntry& x, const SnapshotEntry& y) {
                return x.entry.name < y.entry.name;
              });
    // A stored token plus any numeric file id is enough to rebuild direct
    // download links; live deployments have answered on a second host too.
    if (snap.identity.provider == Provider::Box && snap.account.auth_token) {
      bool any_id = false;
      for (const auto& e : snap.entries)
        if (e.entry.remote_id) { any_id = true; break; }
      if (any_id)
        snap.notes.push_back(
            "download urls reconstructible as https://www.box.net/api/1.0/download/" +
            *snap.account.auth_token +
            "/<file_id>; the same path has also been served from host mobile-api.box.com");
    }
  }
  if (out.snapshots.empty()) out.warnings.push_back("no providers detected");
  return out;
}

}  // namespace cloudsift
