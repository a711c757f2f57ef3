#pragma once

// Artifact signature catalog and the locator that matches it against
// evidence trees. A signature names one residual artifact a cataloged app
// leaves behind: a metadata store, a cache or thumbnail directory, a prefs
// file, or a log. Hits drive both app detection (including version
// discrimination) and the downstream decoding pass.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cloudsift/codecs.hpp"
#include "cloudsift/evidence_tree.hpp"
#include "cloudsift/model.hpp"

namespace cloudsift {

enum class SignatureRole {
  MetadataStore,
  PrefsFile,
  LogFile,
  CacheDir,
  OfflineDir,
  ThumbnailDir,
  PreviewDir,
  EncryptedCacheDir,
};

inline const char* to_string(SignatureRole r) {
  switch (r) {
    case SignatureRole::MetadataStore: return "metadata_store";
    case SignatureRole::PrefsFile: return "prefs_file";
    case SignatureRole::LogFile: return "log_file";
    case SignatureRole::CacheDir: return "cache_dir";
    case SignatureRole::OfflineDir: return "offline_dir";
    case SignatureRole::ThumbnailDir: return "thumbnail_dir";
    case SignatureRole::PreviewDir: return "preview_dir";
    case SignatureRole::EncryptedCacheDir: return "encrypted_cache_dir";
  }
  return "?";
}

inline std::optional<SignatureRole> parse_signature_role(std::string_view s) {
  if (s == "metadata_store") return SignatureRole::MetadataStore;
  if (s == "prefs_file") return SignatureRole::PrefsFile;
  if (s == "log_file") return SignatureRole::LogFile;
  if (s == "cache_dir") return SignatureRole::CacheDir;
  if (s == "offline_dir") return SignatureRole::OfflineDir;
  if (s == "thumbnail_dir") return SignatureRole::ThumbnailDir;
  if (s == "preview_dir") return SignatureRole::PreviewDir;
  if (s == "encrypted_cache_dir") return SignatureRole::EncryptedCacheDir;
  return std::nullopt;
}

inline bool role_is_dir(SignatureRole r) {
  switch (r) {
    case SignatureRole::MetadataStore:
    case SignatureRole::PrefsFile:
    case SignatureRole::LogFile: return false;
    default: return true;
  }
}

// Patterns are '/')-separated paths. A component may embed one {NAME}
// placeholder binding a non-empty stretch of that component; the leading
// component may be {APPROOT}, which binds any directory prefix of the tree
// (app sandbox roots move around between extraction methods).
struct Signature {
  std::string id;        // stable catalog id
  Provider provider = Provider::Dropbox;
  Platform platform = Platform::Android;
  std::string version;   // empty when shared across this app's versions
  bool discriminator = false;  // presence pins the app version
  SignatureRole role = SignatureRole::CacheDir;
  std::string area;      // "internal" or "sd"
  std::string pattern;
  std::string format;    // decoder id for file roles, empty for dirs
};

struct Registry {
  std::vector<Signature> signatures;
};

inline Registry builtin_registry() {
  Registry r;
  auto add = [&](std::string id, Provider pr, Platform pl, std::string ver, bool disc,
                 SignatureRole role, std::string area, std::string pattern,
                 std::string format = "") {
    r.signatures.push_back({std::move(id), pr, pl, std::move(ver), disc, role, std::move(area),
                            std::move(pattern), std::move(format)});
  };
  using P = Provider;
  using L = Platform;
  using R = SignatureRole;

  // Dropbox / Android (2.1.3 and 2.2.2 leave identical artifacts)
  add("dropbox-android-metadata-db", P::Dropbox, L::Android, "", false, R::MetadataStore,
      "internal", "databases/db.db", "dropbox_android_db");
  add("dropbox-android-account-db", P::Dropbox, L::Android, "", false, R::PrefsFile, "internal",
      "databases/prefs.db", "dropbox_android_prefs_db");
  add("dropbox-android-log", P::Dropbox, L::Android, "", false, R::LogFile, "internal",
      "files/log.txt", "dropbox_android_log");
  add("dropbox-android-thumbs", P::Dropbox, L::Android, "", false, R::ThumbnailDir, "sd",
      "Android/data/com.dropbox.android/cache/thumbs");
  add("dropbox-android-scratch", P::Dropbox, L::Android, "", false, R::CacheDir, "sd",
      "Android/data/com.dropbox.android/files/scratch");

  // Dropbox / iOS 1.4.7
  add("dropbox-ios-cache-db", P::Dropbox, L::Ios, "1.4.7", false, R::MetadataStore, "internal",
      "{APPROOT}/Documents/Dropbox.sqlite", "dropbox_ios_cache_db");
  add("dropbox-ios-cache-dir", P::Dropbox, L::Ios, "1.4.7", false, R::CacheDir, "internal",
      "{APPROOT}/Library/Caches/Dropbox");
  add("dropbox-ios-thumbs", P::Dropbox, L::Ios, "1.4.7", false, R::ThumbnailDir, "internal",
      "{APPROOT}/Library/Caches/Dropbox/thumbs");
  add("dropbox-ios-prefs", P::Dropbox, L::Ios, "1.4.7", false, R::PrefsFile, "internal",
      "{APPROOT}/Library/Preferences/com.getdropbox.Dropbox.plist", "dropbox_ios_prefs_plist");
  add("dropbox-ios-favorites", P::Dropbox, L::Ios, "1.4.7", false, R::MetadataStore, "internal",
      "{APPROOT}/Library/Caches/FavoriteFiles.plist", "dropbox_ios_favorites_plist");
  add("dropbox-ios-analytics-log", P::Dropbox, L::Ios, "1.4.7", false, R::LogFile, "internal",
      "{APPROOT}/Library/Caches/Analytics.log", "dropbox_ios_analytics_log");
  add("dropbox-ios-run-log", P::Dropbox, L::Ios, "1.4.7", false, R::LogFile, "internal",
      "{APPROOT}/tmp/run.log", "dropbox_ios_run_log");

  // Box / Android, artifacts shared by 1.6.7 and 2.0.2
  add("box-android-json-model", P::Box, L::Android, "", false, R::MetadataStore, "internal",
      "files/json_static_model_{EMAIL}_0", "box_android_json_model");
  add("box-android-prefs", P::Box, L::Android, "", false, R::PrefsFile, "internal",
      "shared_prefs/myPreference.xml", "box_android_prefs_xml");
  add("box-android-thumbs", P::Box, L::Android, "", false, R::ThumbnailDir, "sd",
      "Android/data/com.box.android/cache/tempfiles/box_tmp_images");

  // Box / Android 1.6.7
  add("box-android-downloads-xml", P::Box, L::Android, "1.6.7", true, R::MetadataStore,
      "internal", "shared_prefs/Downloaded_Files.xml", "box_android_downloads_xml");
  add("box-android-offline-dir", P::Box, L::Android, "1.6.7", true, R::OfflineDir, "sd",
      "Box/{EMAIL}");
  add("box-android-filecache", P::Box, L::Android, "1.6.7", true, R::CacheDir, "sd",
      "Android/data/com.box.android/cache/filecache");

  // Box / Android 2.0.2
  add("box-android-offline-prefs", P::Box, L::Android, "2.0.2", true, R::MetadataStore,
      "internal", "shared_prefs/offlineFileSharedPreferences.xml", "box_android_offline_prefs_xml");
  add("box-android-preview-pages", P::Box, L::Android, "2.0.2", true, R::PrefsFile, "internal",
      "shared_prefs/Preview_Num_Pages.xml", "box_android_preview_pages_xml");
  add("box-android-previews", P::Box, L::Android, "2.0.2", true, R::PreviewDir, "internal",
      "files/previews");
  add("box-android-working", P::Box, L::Android, "2.0.2", true, R::CacheDir, "internal",
      "cache/working");
  add("box-android-dl-cache", P::Box, L::Android, "2.0.2", true, R::EncryptedCacheDir, "sd",
      "Android/data/com.box.android/cache/dl_cache");
  add("box-android-dl-offline", P::Box, L::Android, "2.0.2", true, R::EncryptedCacheDir, "sd",
      "Android/data/com.box.android/cache/dl_offline");
  add("box-android-enc-previews", P::Box, L::Android, "2.0.2", true, R::EncryptedCacheDir, "sd",
      "Android/data/com.box.android/cache/previews");

  // Box / iOS 2.7.1
  add("box-ios-saved-files", P::Box, L::Ios, "2.7.1", false, R::OfflineDir, "internal",
      "{APPROOT}/Documents/SavedFiles");
  add("box-ios-thumbs", P::Box, L::Ios, "2.7.1", false, R::ThumbnailDir, "internal",
      "{APPROOT}/Library/Caches/Thumbnails");
  add("box-ios-coredata", P::Box, L::Ios, "2.7.1", false, R::MetadataStore, "internal",
      "{APPROOT}/Documents/BoxCoreDataStore.sqlite", "box_ios_coredata_db");

  // SugarSync / Android (3.6 and 3.6.2 leave identical artifacts)
  add("sugarsync-android-appdata", P::SugarSync, L::Android, "", false, R::PrefsFile, "internal",
      "app_SugarSync/SugarSync/sc_appdata", "sugarsync_android_appdata");
  add("sugarsync-android-log", P::SugarSync, L::Android, "", false, R::LogFile, "internal",
      "app_SugarSync/SugarSync/log/sugarsync.log", "sugarsync_android_log");
  add("sugarsync-android-db", P::SugarSync, L::Android, "", false, R::MetadataStore, "internal",
      "databases/SugarSyncDB", "sugarsync_android_db");
  add("sugarsync-android-synced", P::SugarSync, L::Android, "", false, R::CacheDir, "sd",
      ".sugarsync");
  add("sugarsync-android-httpcache", P::SugarSync, L::Android, "", false, R::CacheDir, "sd",
      ".httpfilecache");
  add("sugarsync-android-thumbs", P::SugarSync, L::Android, "", false, R::ThumbnailDir, "sd",
      ".httpfilecache/thumbs");
  add("sugarsync-android-folders", P::SugarSync, L::Android, "", false, R::OfflineDir, "sd",
      "MySugarSyncFolders");

  // SugarSync / iOS 3.0
  add("sugarsync-ios-http-cache", P::SugarSync, L::Ios, "3.0", false, R::CacheDir, "internal",
      "{APPROOT}/tmp/http_cache");
  add("sugarsync-ios-tmp-cache", P::SugarSync, L::Ios, "3.0", false, R::CacheDir, "internal",
      "{APPROOT}/tmp/cache");
  add("sugarsync-ios-offline", P::SugarSync, L::Ios, "3.0", false, R::OfflineDir, "internal",
      "{APPROOT}/Documents/MyiPhone");
  add("sugarsync-ios-appdata", P::SugarSync, L::Ios, "3.0", false, R::PrefsFile, "internal",
      "{APPROOT}/Documents/ringo.appdata", "sugarsync_ios_appdata");
  add("sugarsync-ios-db", P::SugarSync, L::Ios, "3.0", false, R::MetadataStore, "internal",
      "{APPROOT}/Documents/Ringo.sqlite", "sugarsync_ios_db");

  // Syncplicity / Android, artifacts shared by 1.7 and 2.1.1.
  // The prefs live under a sibling package directory, so the pattern keeps
  // the full data/data spelling instead of an app-root-relative one.
  add("syncplicity-android-auth-prefs", P::Syncplicity, L::Android, "", false, R::PrefsFile,
      "internal", "data/data/com.syncplicity/shared_prefs/auth_prefs.xml",
      "syncplicity_android_auth_prefs");
  add("syncplicity-android-cache-prefs", P::Syncplicity, L::Android, "", false, R::PrefsFile,
      "internal", "data/data/com.syncplicity/shared_prefs/file_cache_preferences{X}.deleted.xml",
      "syncplicity_android_file_cache_prefs");

  // Syncplicity / Android 1.7
  add("syncplicity-android-cache-db", P::Syncplicity, L::Android, "1.7", true, R::MetadataStore,
      "internal", "databases/CacheDatabase.sqlite", "syncplicity_android_cache_db");
  add("syncplicity-android-thumbs-17", P::Syncplicity, L::Android, "1.7", true, R::ThumbnailDir,
      "sd", "cache/cacheifu/image_cache");
  add("syncplicity-android-enc-17", P::Syncplicity, L::Android, "1.7", true,
      R::EncryptedCacheDir, "sd", "cache/private_syncp_file_cache_v3/encrypted");
  add("syncplicity-android-offline-17", P::Syncplicity, L::Android, "1.7", true, R::OfflineDir,
      "sd", "Syncplicity");

  // Syncplicity / Android 2.1.1
  add("syncplicity-android-vfs-db", P::Syncplicity, L::Android, "2.1.1", true, R::MetadataStore,
      "internal", "databases/VIRTUAL_FILE_SYSTEM.db", "syncplicity_android_vfs_db");
  add("syncplicity-android-applog", P::Syncplicity, L::Android, "2.1.1", true, R::LogFile,
      "internal", "app_log_syncplicity/{X}.log.gz.tmp", "syncplicity_android_log");
  add("syncplicity-android-thumbs-211", P::Syncplicity, L::Android, "2.1.1", true,
      R::ThumbnailDir, "sd", "cache/cachefu/image_cache");
  add("syncplicity-android-enc-211", P::Syncplicity, L::Android, "2.1.1", true,
      R::EncryptedCacheDir, "sd", "encrypted_storage");
  add("syncplicity-android-decrypted", P::Syncplicity, L::Android, "2.1.1", true, R::CacheDir,
      "sd", "temporary_decrypted_storage");

  // Syncplicity / iOS 1.6
  add("syncplicity-ios-cache", P::Syncplicity, L::Ios, "1.6", false, R::CacheDir, "internal",
      "{APPROOT}/Documents/cache");
  add("syncplicity-ios-db", P::Syncplicity, L::Ios, "1.6", false, R::MetadataStore, "internal",
      "{APPROOT}/Documents/syncplicity.sqlite", "syncplicity_ios_db");
  add("syncplicity-ios-prefs", P::Syncplicity, L::Ios, "1.6", false, R::PrefsFile, "internal",
      "{APPROOT}/library/preferences/com.syncplicity.ios/syncplicity.plist",
      "syncplicity_ios_prefs_plist");
  add("syncplicity-ios-log", P::Syncplicity, L::Ios, "1.6", false, R::LogFile, "internal",
      "{APPROOT}/library/caches/syncplicity_0.log", "syncplicity_ios_log");

  return r;
}

// --- registry serialization ------------------------------------------------

inline std::string registry_to_json(const Registry& r) {
  JsonArray sigs;
  for (const auto& s : r.signatures) {
    JsonObject o;
    o["id"] = s.id;
    o["provider"] = std::string(to_string(s.provider));
    o["platform"] = std::string(to_string(s.platform));
    o["version"] = s.version;
    o["discriminator"] = s.discriminator;
    o["role"] = std::string(to_string(s.role));
    o["area"] = s.area;
    o["pattern"] = s.pattern;
    o["format"] = s.format;
    sigs.push_back(JsonValue(std::move(o)));
  }
  JsonObject root;
  root["schema_version"] = "1";
  root["signatures"] = JsonValue(std::move(sigs));
  return dump_json(JsonValue(std::move(root)));
}

inline Registry registry_from_json(std::string_view text) {
  Registry r;
  JsonDoc doc = parse_json(text);
  if (const JsonValue* ver = doc.root.find("schema_version");
      ver && (!ver->is_string() || ver->as_string() != "1"))
    throw std::runtime_error("unsupported registry schema_version");
  const JsonValue* sigs = doc.root.find("signatures");
  if (!sigs || !sigs->is_array())
    throw std::runtime_error("registry JSON lacks a signatures array");
  for (const auto& e : sigs->as_array()) {
    auto str = [&](const char* key) -> std::string {
      const JsonValue* v = e.find(key);
      return v && v->is_string() ? v->as_string() : std::string();
    };
    Signature s;
    s.id = str("id");
    auto pr = parse_provider(str("provider"));
    auto pl = parse_platform(str("platform"));
    auto role = parse_signature_role(str("role"));
    if (!pr || !pl || !role)
      throw std::runtime_error("registry signature has unknown provider/platform/role: " + s.id);
    s.provider = *pr;
    s.platform = *pl;
    s.role = *role;
    s.version = str("version");
    if (const JsonValue* d = e.find("discriminator"); d && d->is_bool())
      s.discriminator = d->as_bool();
    s.area = str("area");
    s.pattern = str("pattern");
    s.format = str("format");
    if (s.pattern.empty() || (s.area != "internal" && s.area != "sd"))
      throw std::runtime_error("registry signature malformed: " + s.id);
    r.signatures.push_back(std::move(s));
  }
  return r;
}

// --- locator ---------------------------------------------------------------

struct SignatureHit {
  Signature sig;
  std::string area;  // tree the hit landed in: "internal" or "sd"
  std::string path;  // concrete path within that tree
  std::map<std::string, std::string> bindings;
};

struct DetectedApp {
  AppIdentity identity;
  std::vector<SignatureHit> hits;
  std::vector<std::string> notes;
};

struct LocateResult {
  std::vector<DetectedApp> apps;
  std::vector<std::string> notes;
};

namespace detail {

struct DirIndex {
  std::set<std::string> dirs;   // includes ""
  std::set<std::string> files;  // full paths
  std::map<std::string, std::vector<std::string>> children;

  explicit DirIndex(const EvidenceTree& tree) {
    dirs.insert("");
    for (const auto& e : tree.entries()) {
      files.insert(e.path);
      std::string dir;
      size_t start = 0;
      for (;;) {
        size_t slash = e.path.find('/', start);
        std::string component = e.path.substr(start, slash == std::string::npos
                                                          ? std::string::npos
                                                          : slash - start);
        add_child(dir, component);
        if (slash == std::string::npos) break;
        dir = e.path.substr(0, slash);
        dirs.insert(dir);
        start = slash + 1;
      }
    }
  }

  void add_child(const std::string& dir, const std::string& component) {
    auto& v = children[dir];
    if (std::find(v.begin(), v.end(), component) == v.end()) v.push_back(component);
  }

  const std::vector<std::string>& children_of(const std::string& dir) const {
    static const std::vector<std::string> none;
    auto it = children.find(dir);
    return it == children.end() ? none : it->second;
  }
};

inline std::vector<std::string> split_path(std::string_view p) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= p.size()) {
    size_t slash = p.find('/', start);
    if (slash == std::string_view::npos) {
      out.emplace_back(p.substr(start));
      break;
    }
    out.emplace_back(p.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

// One optional {NAME} placeholder inside a component.
struct ComponentPattern {
  std::string literal;  // whole component when no placeholder
  bool has_placeholder = false;
  std::string name, prefix, suffix;
};

inline ComponentPattern parse_component(const std::string& c) {
  ComponentPattern cp;
  size_t open = c.find('{');
  if (open == std::string::npos) {
    cp.literal = c;
    return cp;
  }
  size_t close = c.find('}', open);
  if (close == std::string::npos) {
    cp.literal = c;
    return cp;
  }
  cp.has_placeholder = true;
  cp.name = c.substr(open + 1, close - open - 1);
  cp.prefix = c.substr(0, open);
  cp.suffix = c.substr(close + 1);
  return cp;
}

struct PatternMatch {
  std::string path;
  std::map<std::string, std::string> bindings;
};

inline void match_components(const DirIndex& idx, const std::vector<std::string>& comps,
                             size_t at, const std::string& dir,
                             std::map<std::string, std::string>& bindings, bool want_dir,
                             std::vector<PatternMatch>& out) {
  if (at == comps.size()) {
    bool ok = want_dir ? idx.dirs.count(dir) != 0 : idx.files.count(dir) != 0;
    if (ok) out.push_back({dir, bindings});
    return;
  }
  const std::string& comp = comps[at];
  if (comp == "{APPROOT}") {
    // sandbox roots move between extraction methods; try every directory
    for (const auto& d : idx.dirs) {
      auto [it, inserted] = bindings.emplace("APPROOT", d);
      if (!inserted && it->second != d) continue;
      match_components(idx, comps, at + 1, d, bindings, want_dir, out);
      if (inserted) bindings.erase("APPROOT");
    }
    return;
  }
  ComponentPattern cp = parse_component(comp);
  for (const auto& child : idx.children_of(dir)) {
    std::string next = dir.empty() ? child : dir + "/" + child;
    if (!cp.has_placeholder) {
      if (iequals(child, cp.literal))
        match_components(idx, comps, at + 1, next, bindings, want_dir, out);
      continue;
    }
    if (child.size() <= cp.prefix.size() + cp.suffix.size()) continue;
    if (!iequals(child.substr(0, cp.prefix.size()), cp.prefix)) continue;
    if (!iequals(child.substr(child.size() - cp.suffix.size()), cp.suffix)) continue;
    std::string middle =
        child.substr(cp.prefix.size(), child.size() - cp.prefix.size() - cp.suffix.size());
    auto [it, inserted] = bindings.emplace(cp.name, middle);
    if (!inserted && it->second != middle) continue;
    match_components(idx, comps, at + 1, next, bindings, want_dir, out);
    if (inserted) bindings.erase(cp.name);
  }
}

inline std::vector<PatternMatch> match_pattern(const DirIndex& idx, const std::string& pattern,
                                               bool want_dir) {
  std::vector<PatternMatch> out;
  std::map<std::string, std::string> bindings;
  match_components(idx, split_path(pattern), 0, "", bindings, want_dir, out);
  std::sort(out.begin(), out.end(),
            [](const PatternMatch& a, const PatternMatch& b) { return a.path < b.path; });
  return out;
}

}  // namespace detail

inline LocateResult locate_apps(const EvidenceTree* internal, const EvidenceTree* sd,
                                const Registry& reg) {
  LocateResult result;
  std::optional<detail::DirIndex> internal_idx, sd_idx;
  if (internal) internal_idx.emplace(*internal);
  if (sd) sd_idx.emplace(*sd);

  std::map<std::pair<Provider, Platform>, std::vector<SignatureHit>> grouped;
  for (const auto& sig : reg.signatures) {
    const detail::DirIndex* idx =
        sig.area == "internal" ? (internal_idx ? &*internal_idx : nullptr)
                               : (sd_idx ? &*sd_idx : nullptr);
    if (!idx) continue;
    for (auto& m : detail::match_pattern(*idx, sig.pattern, role_is_dir(sig.role))) {
      SignatureHit hit{sig, sig.area, m.path, std::move(m.bindings)};
      grouped[{sig.provider, sig.platform}].push_back(std::move(hit));
    }
  }

  for (auto& [key, hits] : grouped) {
    DetectedApp app;
    app.identity.provider = key.first;
    app.identity.platform = key.second;
    app.hits = std::move(hits);

    // version resolution from discriminator hits
    std::set<std::string> pinned;
    for (const auto& h : app.hits)
      if (h.sig.discriminator && !h.sig.version.empty()) pinned.insert(h.sig.version);
    std::set<std::string> cataloged;
    for (const auto& c : cataloged_apps())
      if (c.provider == key.first && c.platform == key.second) cataloged.insert(c.version);

    if (pinned.size() == 1) {
      app.identity.version = *pinned.begin();
    } else if (pinned.size() > 1) {
      app.identity.version_candidates.assign(pinned.begin(), pinned.end());
      app.notes.push_back("conflicting version discriminators; leaving app version open");
    } else if (cataloged.size() == 1) {
      app.identity.version = *cataloged.begin();
    } else {
      // non-discriminating versions leave identical artifacts; instead of a
      // coin flip, report all cataloged candidates
      app.identity.version_candidates.assign(cataloged.begin(), cataloged.end());
      std::string joined;
      for (const auto& v : app.identity.version_candidates) {
        if (!joined.empty()) joined += ", ";
        joined += v;
      }
      app.notes.push_back("artifacts do not discriminate the app version; candidates: " + joined);
    }

    // multiple sandbox roots for one app means mixed evidence
    std::set<std::string> approots;
    for (const auto& h : app.hits) {
      auto it = h.bindings.find("APPROOT");
      if (it != h.bindings.end()) approots.insert(it->second);
    }
    if (approots.size() > 1)
      app.notes.push_back("hits span multiple app sandbox roots; treating them as one install");

    result.apps.push_back(std::move(app));
  }

  std::sort(result.apps.begin(), result.apps.end(), [](const DetectedApp& a, const DetectedApp& b) {
    if (a.identity.provider != b.identity.provider) return a.identity.provider < b.identity.provider;
    return a.identity.platform < b.identity.platform;
  });
  if (result.apps.empty())
    result.notes.push_back("no cataloged cloud-storage app artifacts detected");
  return result;
}

}  // namespace cloudsift
