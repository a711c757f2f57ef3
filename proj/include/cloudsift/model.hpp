#pragma once

// Core evidence model for reconstructing cloud-storage account state from
// smartphone artifacts: providers, device states, tagged timestamps, file
// entries, the recovery-status lattice and per-app snapshots.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/hash.hpp"

namespace cloudsift {

enum class Provider { Dropbox, Box, SugarSync, Syncplicity };
enum class Platform { Android, Ios };

inline const char* to_string(Provider p) {
  switch (p) {
    case Provider::Dropbox: return "dropbox";
    case Provider::Box: return "box";
    case Provider::SugarSync: return "sugarsync";
    case Provider::Syncplicity: return "syncplicity";
  }
  return "?";
}

inline const char* to_string(Platform p) {
  return p == Platform::Android ? "android" : "ios";
}

inline std::optional<Provider> parse_provider(const std::string& s) {
  if (s == "dropbox") return Provider::Dropbox;
  if (s == "box") return Provider::Box;
  if (s == "sugarsync") return Provider::SugarSync;
  if (s == "syncplicity") return Provider::Syncplicity;
  return std::nullopt;
}

inline std::optional<Platform> parse_platform(const std::string& s) {
  if (s == "android") return Platform::Android;
  if (s == "ios") return Platform::Ios;
  return std::nullopt;
}

// The app builds examined by the source experiments, one per device/provider.
struct CatalogedApp {
  Provider provider;
  Platform platform;
  const char* version;
};

inline const std::vector<CatalogedApp>& cataloged_apps() {
  static const std::vector<CatalogedApp> apps = {
      {Provider::Dropbox, Platform::Android, "2.1.3"},
      {Provider::Dropbox, Platform::Android, "2.2.2"},
      {Provider::Dropbox, Platform::Ios, "1.4.7"},
      {Provider::Box, Platform::Android, "1.6.7"},
      {Provider::Box, Platform::Android, "2.0.2"},
      {Provider::Box, Platform::Ios, "2.7.1"},
      {Provider::SugarSync, Platform::Android, "3.6"},
      {Provider::SugarSync, Platform::Android, "3.6.2"},
      {Provider::SugarSync, Platform::Ios, "3.0"},
      {Provider::Syncplicity, Platform::Android, "1.7"},
      {Provider::Syncplicity, Platform::Android, "2.1.1"},
      {Provider::Syncplicity, Platform::Ios, "1.6"},
  };
  return apps;
}

inline bool is_cataloged(Provider provider, Platform platform, const std::string& version) {
  for (const auto& a : cataloged_apps())
    if (a.provider == provider && a.platform == platform && version == a.version) return true;
  return false;
}

// version empty => unknown build; version_candidates lists cataloged versions
// whose path evidence was indistinguishable.
struct AppIdentity {
  Provider provider = Provider::Dropbox;
  Platform platform = Platform::Android;
  std::string version;
  std::vector<std::string> version_candidates;

  bool version_known() const { return !version.empty(); }
};

enum class DeviceState {
  ActivePowerState,
  CacheCleared,
  PoweredDown,
  CacheClearedPoweredDown,
};

inline const char* to_string(DeviceState s) {
  switch (s) {
    case DeviceState::ActivePowerState: return "active_power_state";
    case DeviceState::CacheCleared: return "cache_cleared";
    case DeviceState::PoweredDown: return "powered_down";
    case DeviceState::CacheClearedPoweredDown: return "cache_cleared_powered_down";
  }
  return "?";
}

inline std::optional<DeviceState> parse_device_state(const std::string& s) {
  if (s == "active_power_state" || s == "aps") return DeviceState::ActivePowerState;
  if (s == "cache_cleared" || s == "cc") return DeviceState::CacheCleared;
  if (s == "powered_down" || s == "pwd") return DeviceState::PoweredDown;
  if (s == "cache_cleared_powered_down" || s == "cc_pwd" || s == "cc+pwd")
    return DeviceState::CacheClearedPoweredDown;
  return std::nullopt;
}

// Powering the device down leaves no additional trace, so the two powered-down
// states collapse onto their powered-on counterparts.
inline DeviceState normalize_power(DeviceState s) {
  if (s == DeviceState::PoweredDown) return DeviceState::ActivePowerState;
  if (s == DeviceState::CacheClearedPoweredDown) return DeviceState::CacheCleared;
  return s;
}

enum class Epoch { UnixSeconds, AppleAbsoluteSeconds };

// Seconds between 1970-01-01 and 2001-01-01, both UTC midnights.
inline constexpr int64_t kAppleEpochOffset = 978307200;

struct TaggedTimestamp {
  Epoch epoch = Epoch::UnixSeconds;
  double value = 0;

  bool operator==(const TaggedTimestamp&) const = default;
};

inline double to_unix_seconds(const TaggedTimestamp& ts) {
  return ts.epoch == Epoch::UnixSeconds ? ts.value : ts.value + double(kAppleEpochOffset);
}

inline TaggedTimestamp unix_ts(double v) { return {Epoch::UnixSeconds, v}; }
inline TaggedTimestamp apple_ts(double v) { return {Epoch::AppleAbsoluteSeconds, v}; }

enum class HashAlg { Md5, Sha1 };

inline const char* to_string(HashAlg a) { return a == HashAlg::Md5 ? "md5" : "sha1"; }

// Lowercase hex digest tagged with its algorithm.
struct ContentHash {
  HashAlg alg = HashAlg::Md5;
  std::string hex;

  bool operator==(const ContentHash&) const = default;
};

inline std::optional<ContentHash> make_content_hash(HashAlg alg, std::string hex) {
  hex = detail::ascii_lower(std::move(hex));
  size_t want = alg == HashAlg::Md5 ? 32 : 40;
  if (hex.size() != want) return std::nullopt;
  for (char c : hex)
    if (detail::hex_nibble(c) < 0) return std::nullopt;
  return ContentHash{alg, std::move(hex)};
}

// Recovery strength lattice, weakest first. Thumbnail and preview renditions
// carry equal strength; ties prefer ThumbnailOnly.
enum class RecoveryStatus {
  NotObserved,
  EncryptedCacheOnly,
  MetadataOnly,
  ThumbnailOnly,
  PreviewOnly,
  CarvedDeleted,
  RecoveredUnverified,
  RecoveredIntact,
};

inline const char* to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::NotObserved: return "not_observed";
    case RecoveryStatus::EncryptedCacheOnly: return "encrypted_cache_only";
    case RecoveryStatus::MetadataOnly: return "metadata_only";
    case RecoveryStatus::ThumbnailOnly: return "thumbnail_only";
    case RecoveryStatus::PreviewOnly: return "preview_only";
    case RecoveryStatus::CarvedDeleted: return "carved_deleted";
    case RecoveryStatus::RecoveredUnverified: return "recovered_unverified";
    case RecoveryStatus::RecoveredIntact: return "recovered_intact";
  }
  return "?";
}

inline std::optional<RecoveryStatus> parse_recovery_status(const std::string& s) {
  for (RecoveryStatus v : {RecoveryStatus::NotObserved, RecoveryStatus::EncryptedCacheOnly,
                           RecoveryStatus::MetadataOnly, RecoveryStatus::ThumbnailOnly,
                           RecoveryStatus::PreviewOnly, RecoveryStatus::CarvedDeleted,
                           RecoveryStatus::RecoveredUnverified, RecoveryStatus::RecoveredIntact})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

inline int status_rank(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::NotObserved: return 0;
    case RecoveryStatus::EncryptedCacheOnly: return 1;
    case RecoveryStatus::MetadataOnly: return 2;
    case RecoveryStatus::ThumbnailOnly: return 3;
    case RecoveryStatus::PreviewOnly: return 3;
    case RecoveryStatus::CarvedDeleted: return 4;
    case RecoveryStatus::RecoveredUnverified: return 5;
    case RecoveryStatus::RecoveredIntact: return 6;
  }
  return 0;
}

inline RecoveryStatus status_max(RecoveryStatus a, RecoveryStatus b) {
  int ra = status_rank(a), rb = status_rank(b);
  if (ra != rb) return ra > rb ? a : b;
  if (a == b) return a;
  // equal rank, distinct values: thumbnail/preview tie
  return RecoveryStatus::ThumbnailOnly;
}

inline bool counts_as_recovered(RecoveryStatus s) {
  return s == RecoveryStatus::RecoveredIntact || s == RecoveryStatus::RecoveredUnverified ||
         s == RecoveryStatus::CarvedDeleted;
}

// Scalar value for log attributes and unmapped store columns.
using Scalar = std::variant<std::nullptr_t, bool, int64_t, double, std::string>;

using KvList = std::vector<std::pair<std::string, Scalar>>;

struct AccountInfo {
  std::optional<std::string> email;
  std::optional<std::string> display_name;
  std::optional<std::string> user_id;
  std::optional<std::string> auth_token;
  std::optional<std::string> password_hash;

  bool any() const {
    return email || display_name || user_id || auth_token || password_hash;
  }
};

// One file as described by whatever metadata survived. extras carries source
// columns with no schema slot, verbatim keys, nothing dropped.
struct CloudFileEntry {
  std::string name;
  bool synthetic_name = false;  // name derived from a carved object, not metadata
  std::optional<std::string> remote_id;
  std::optional<uint64_t> size_bytes;
  std::optional<ContentHash> hash;
  std::optional<TaggedTimestamp> created;
  std::optional<TaggedTimestamp> modified;
  std::optional<TaggedTimestamp> last_viewed;
  std::optional<bool> favorite;
  std::optional<bool> deleted_flag;
  std::optional<std::string> thumbnail_url;
  std::string source_artifact;
  KvList extras;
};

enum class ObjectOrigin { CachePath, OfflineDir, ThumbnailDir, PreviewDir, Carved };

inline const char* to_string(ObjectOrigin o) {
  switch (o) {
    case ObjectOrigin::CachePath: return "cache_path";
    case ObjectOrigin::OfflineDir: return "offline_dir";
    case ObjectOrigin::ThumbnailDir: return "thumbnail_dir";
    case ObjectOrigin::PreviewDir: return "preview_dir";
    case ObjectOrigin::Carved: return "carved";
  }
  return "?";
}

// Recovered bytes plus both digests. content may be dropped after hashing;
// the hashes and length always remain.
struct RecoveredObject {
  std::string logical_name;
  ObjectOrigin origin = ObjectOrigin::CachePath;
  std::optional<uint64_t> carve_offset;  // set iff origin == Carved
  std::string source_path;               // tree path or image label
  uint64_t length = 0;
  std::string md5;
  std::string sha1;
  std::shared_ptr<const std::vector<uint8_t>> content;
};

inline RecoveredObject make_recovered_object(std::string logical_name, ObjectOrigin origin,
                                             std::string source_path,
                                             std::vector<uint8_t> bytes,
                                             std::optional<uint64_t> carve_offset = std::nullopt) {
  RecoveredObject obj;
  obj.logical_name = std::move(logical_name);
  obj.origin = origin;
  obj.carve_offset = carve_offset;
  obj.source_path = std::move(source_path);
  obj.length = bytes.size();
  auto owned = std::make_shared<std::vector<uint8_t>>(std::move(bytes));
  obj.md5 = [&] {
    Md5 h;
    h.update(*owned);
    return h.hex_digest();
  }();
  obj.sha1 = [&] {
    Sha1 h;
    h.update(*owned);
    return h.hex_digest();
  }();
  obj.content = std::move(owned);
  return obj;
}

inline bool object_hash_matches(const RecoveredObject& obj, const ContentHash& h) {
  return h.alg == HashAlg::Md5 ? obj.md5 == h.hex : obj.sha1 == h.hex;
}

struct LogEvent {
  std::optional<TaggedTimestamp> timestamp;
  std::string event_kind;
  KvList attributes;  // verbatim source keys, source order
  std::string source;
};

// Where a signature hit came from: kept on the snapshot so reports can show
// which cataloged location produced each artifact.
struct HitRecord {
  std::string role;
  std::string pattern;
  std::string path;
  std::string area;
  std::string ref;
};

struct SnapshotEntry {
  CloudFileEntry entry;
  RecoveryStatus status = RecoveryStatus::NotObserved;
  std::vector<RecoveredObject> objects;
  bool from_metadata = false;   // some store/prefs row describes this file
  bool encrypted_mapped = false;  // known to reside in an encrypted cache
};

struct AppSnapshot {
  AppIdentity identity;
  AccountInfo account;
  std::vector<SnapshotEntry> entries;
  std::vector<LogEvent> events;
  std::vector<HitRecord> hits;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  SnapshotEntry* find_entry(const std::string& name) {
    for (auto& e : entries)
      if (e.entry.name == name) return &e;
    return nullptr;
  }
  const SnapshotEntry* find_entry(const std::string& name) const {
    for (const auto& e : entries)
      if (e.entry.name == name) return &e;
    return nullptr;
  }
};

namespace detail {

inline bool scalar_eq(const Scalar& a, const Scalar& b) { return a == b; }

template <typename T>
inline void merge_field(std::optional<T>& dst, const std::optional<T>& src, const char* field,
                        const std::string& name, std::vector<std::string>* warnings) {
  if (!src) return;
  if (!dst) {
    dst = src;
    return;
  }
  if (!(*dst == *src) && warnings) {
    warnings->push_back("conflicting values for '" + std::string(field) + "' on entry '" + name +
                        "' (kept first)");
  }
}

}  // namespace detail

// Field-wise merge of two descriptions of the same file. Non-null wins;
// conflicting non-null values keep the first and record a warning.
inline void merge_entry_fields(CloudFileEntry& dst, const CloudFileEntry& src,
                               std::vector<std::string>* warnings) {
  detail::merge_field(dst.remote_id, src.remote_id, "remote_id", dst.name, warnings);
  detail::merge_field(dst.size_bytes, src.size_bytes, "size_bytes", dst.name, warnings);
  detail::merge_field(dst.hash, src.hash, "hash", dst.name, warnings);
  detail::merge_field(dst.created, src.created, "created", dst.name, warnings);
  detail::merge_field(dst.modified, src.modified, "modified", dst.name, warnings);
  detail::merge_field(dst.last_viewed, src.last_viewed, "last_viewed", dst.name, warnings);
  detail::merge_field(dst.favorite, src.favorite, "favorite", dst.name, warnings);
  detail::merge_field(dst.deleted_flag, src.deleted_flag, "deleted_flag", dst.name, warnings);
  detail::merge_field(dst.thumbnail_url, src.thumbnail_url, "thumbnail_url", dst.name, warnings);
  if (dst.source_artifact.empty()) dst.source_artifact = src.source_artifact;
  else if (!src.source_artifact.empty() && src.source_artifact != dst.source_artifact)
    dst.source_artifact += ";" + src.source_artifact;
  for (const auto& [k, v] : src.extras) {
    bool have = false;
    for (const auto& [dk, dv] : dst.extras)
      if (dk == k) { have = true; break; }
    if (!have) dst.extras.emplace_back(k, v);
  }
}

// Strongest status supported by the evidence attached to an entry.
// RecoveredIntact requires a non-carved content object whose digest matches
// the metadata hash; a mismatch downgrades to RecoveredUnverified and warns.
inline RecoveryStatus classify_status(const CloudFileEntry& entry,
                                      const std::vector<RecoveredObject>& objects,
                                      bool from_metadata, bool encrypted_mapped,
                                      std::vector<std::string>* warnings = nullptr) {
  RecoveryStatus best = RecoveryStatus::NotObserved;
  if (encrypted_mapped) best = status_max(best, RecoveryStatus::EncryptedCacheOnly);
  if (from_metadata) best = status_max(best, RecoveryStatus::MetadataOnly);
  for (const auto& obj : objects) {
    RecoveryStatus s;
    switch (obj.origin) {
      case ObjectOrigin::ThumbnailDir: s = RecoveryStatus::ThumbnailOnly; break;
      case ObjectOrigin::PreviewDir: s = RecoveryStatus::PreviewOnly; break;
      case ObjectOrigin::Carved: s = RecoveryStatus::CarvedDeleted; break;
      case ObjectOrigin::CachePath:
      case ObjectOrigin::OfflineDir:
        if (entry.hash && object_hash_matches(obj, *entry.hash)) {
          s = RecoveryStatus::RecoveredIntact;
        } else {
          s = RecoveryStatus::RecoveredUnverified;
          if (entry.hash && warnings)
            warnings->push_back("digest mismatch between recovered content and metadata for '" +
                                entry.name + "' (" + obj.source_path + ")");
        }
        break;
      default: s = RecoveryStatus::NotObserved; break;
    }
    best = status_max(best, s);
  }
  return best;
}

}  // namespace cloudsift
