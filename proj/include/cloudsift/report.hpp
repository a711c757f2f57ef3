#pragma once

// Report serialization. The JSON document is the canonical output: keys are
// emitted sorted, enums in snake_case, and the only run-dependent field is
// sidecar.generated_at, so two runs over identical evidence produce identical
// bytes once the sidecar is set aside. The text format is a projection of the
// same document, never a second source of truth.

#include <ctime>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloudsift/analyzers.hpp"
#include "cloudsift/detail/calendar.hpp"
#include "cloudsift/merge.hpp"
#include "cloudsift/model.hpp"

namespace cloudsift {

inline constexpr const char* kToolName = "cloudsift";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

namespace detail {

inline const char* epoch_name(Epoch e) {
  return e == Epoch::UnixSeconds ? "unix_seconds" : "apple_absolute_seconds";
}

inline nlohmann::json scalar_json(const Scalar& s) {
  if (std::holds_alternative<std::nullptr_t>(s)) return nullptr;
  if (const auto* b = std::get_if<bool>(&s)) return *b;
  if (const auto* i = std::get_if<int64_t>(&s)) return *i;
  if (const auto* d = std::get_if<double>(&s)) return *d;
  return std::get<std::string>(s);
}

inline Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_null()) return nullptr;
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<int64_t>();
  if (j.is_number()) return j.get<double>();
  return j.get<std::string>();
}

inline nlohmann::json ts_json(const TaggedTimestamp& ts) {
  return {{"epoch", epoch_name(ts.epoch)},
          {"value", ts.value},
          {"unix", to_unix_seconds(ts)}};
}

inline TaggedTimestamp ts_from_json(const nlohmann::json& j) {
  TaggedTimestamp ts;
  ts.epoch = j.value("epoch", "unix_seconds") == std::string("apple_absolute_seconds")
                 ? Epoch::AppleAbsoluteSeconds
                 : Epoch::UnixSeconds;
  ts.value = j.value("value", 0.0);
  return ts;
}

inline nlohmann::json entry_json(const SnapshotEntry& se) {
  nlohmann::json j;
  const CloudFileEntry& e = se.entry;
  j["name"] = e.name;
  j["synthetic_name"] = e.synthetic_name;
  j["status"] = to_string(se.status);
  j["from_metadata"] = se.from_metadata;
  if (se.encrypted_mapped) j["encrypted_mapped"] = true;
  if (e.remote_id) j["remote_id"] = *e.remote_id;
  if (e.size_bytes) j["size_bytes"] = *e.size_bytes;
  if (e.hash) j["hash"] = {{"alg", to_string(e.hash->alg)}, {"hex", e.hash->hex}};
  if (e.created) j["created"] = ts_json(*e.created);
  if (e.modified) j["modified"] = ts_json(*e.modified);
  if (e.last_viewed) j["last_viewed"] = ts_json(*e.last_viewed);
  if (e.favorite) j["favorite"] = *e.favorite;
  if (e.deleted_flag) j["deleted_flag"] = *e.deleted_flag;
  if (e.thumbnail_url) j["thumbnail_url"] = *e.thumbnail_url;
  if (!e.source_artifact.empty()) j["source_artifact"] = e.source_artifact;
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [k, v] : e.extras) extras[k] = scalar_json(v);
  j["extras"] = extras;
  nlohmann::json objs = nlohmann::json::array();
  for (const auto& o : se.objects) {
    nlohmann::json jo = {{"logical_name", o.logical_name}, {"origin", to_string(o.origin)},
                         {"source", o.source_path},        {"length", o.length},
                         {"md5", o.md5},                   {"sha1", o.sha1}};
    if (o.carve_offset) jo["carve_offset"] = *o.carve_offset;
    objs.push_back(jo);
  }
  j["objects"] = objs;
  return j;
}

inline SnapshotEntry entry_from_json(const nlohmann::json& j) {
  SnapshotEntry se;
  CloudFileEntry& e = se.entry;
  e.name = j.value("name", "");
  e.synthetic_name = j.value("synthetic_name", false);
  if (auto s = parse_recovery_status(j.value("status", "not_observed"))) se.status = *s;
  se.from_metadata = j.value("from_metadata", false);
  se.encrypted_mapped = j.value("encrypted_mapped", false);
  if (j.contains("remote_id")) e.remote_id = j["remote_id"].get<std::string>();
  if (j.contains("size_bytes")) e.size_bytes = j["size_bytes"].get<uint64_t>();
  if (j.contains("hash")) {
    ContentHash h;
    h.alg = j["hash"].value("alg", "md5") == std::string("sha1") ? HashAlg::Sha1 : HashAlg::Md5;
    h.hex = j["hash"].value("hex", "");
    e.hash = h;
  }
  if (j.contains("created")) e.created = ts_from_json(j["created"]);
  if (j.contains("modified")) e.modified = ts_from_json(j["modified"]);
  if (j.contains("last_viewed")) e.last_viewed = ts_from_json(j["last_viewed"]);
  if (j.contains("favorite")) e.favorite = j["favorite"].get<bool>();
  if (j.contains("deleted_flag")) e.deleted_flag = j["deleted_flag"].get<bool>();
  if (j.contains("thumbnail_url")) e.thumbnail_url = j["thumbnail_url"].get<std::string>();
  e.source_artifact = j.value("source_artifact", "");
  if (j.contains("extras"))
    for (const auto& [k, v] : j["extras"].items()) e.extras.emplace_back(k, scalar_from_json(v));
  if (j.contains("objects")) {
    for (const auto& jo : j["objects"]) {
      RecoveredObject o;
      o.logical_name = jo.value("logical_name", "");
      std::string origin = jo.value("origin", "cache_path");
      for (ObjectOrigin c : {ObjectOrigin::CachePath, ObjectOrigin::OfflineDir,
                             ObjectOrigin::ThumbnailDir, ObjectOrigin::PreviewDir,
                             ObjectOrigin::Carved})
        if (origin == to_string(c)) o.origin = c;
      o.source_path = jo.value("source", "");
      o.length = jo.value("length", uint64_t(0));
      o.md5 = jo.value("md5", "");
      o.sha1 = jo.value("sha1", "");
      if (jo.contains("carve_offset")) o.carve_offset = jo["carve_offset"].get<uint64_t>();
      se.objects.push_back(std::move(o));
    }
  }
  return se;
}

inline nlohmann::json account_json(const AccountInfo& a) {
  nlohmann::json j = nlohmann::json::object();
  if (a.email) j["email"] = *a.email;
  if (a.display_name) j["display_name"] = *a.display_name;
  if (a.user_id) j["user_id"] = *a.user_id;
  if (a.auth_token) j["auth_token"] = *a.auth_token;
  if (a.password_hash) j["password_hash"] = *a.password_hash;
  return j;
}

inline AccountInfo account_from_json(const nlohmann::json& j) {
  AccountInfo a;
  if (j.contains("email")) a.email = j["email"].get<std::string>();
  if (j.contains("display_name")) a.display_name = j["display_name"].get<std::string>();
  if (j.contains("user_id")) a.user_id = j["user_id"].get<std::string>();
  if (j.contains("auth_token")) a.auth_token = j["auth_token"].get<std::string>();
  if (j.contains("password_hash")) a.password_hash = j["password_hash"].get<std::string>();
  return a;
}

}  // namespace detail

inline nlohmann::json snapshot_to_json(const AppSnapshot& s) {
  nlohmann::json j;
  j["provider"] = to_string(s.identity.provider);
  j["platform"] = to_string(s.identity.platform);
  j["app_version"] = s.identity.version;
  j["app_version_candidates"] = s.identity.version_candidates;
  j["account"] = detail::account_json(s.account);
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& h : s.hits)
    hits.push_back({{"role", h.role},
                    {"pattern", h.pattern},
                    {"path", h.path},
                    {"area", h.area},
                    {"ref", h.ref}});
  j["hits"] = hits;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : s.entries) entries.push_back(detail::entry_json(e));
  j["entries"] = entries;
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : s.events) {
    nlohmann::json je;
    je["kind"] = ev.event_kind;
    je["source"] = ev.source;
    if (ev.timestamp) je["ts"] = detail::ts_json(*ev.timestamp);
    nlohmann::json attrs = nlohmann::json::object();
    for (const auto& [k, v] : ev.attributes) attrs[k] = detail::scalar_json(v);
    je["attributes"] = attrs;
    events.push_back(je);
  }
  j["events"] = events;
  j["recovered_count"] = count_recovered(s);
  j["warnings"] = s.warnings;
  j["notes"] = s.notes;
  return j;
}

inline AppSnapshot snapshot_from_json(const nlohmann::json& j) {
  AppSnapshot s;
  if (auto p = parse_provider(j.value("provider", ""))) s.identity.provider = *p;
  else throw std::runtime_error("snapshot has no valid provider");
  if (auto p = parse_platform(j.value("platform", ""))) s.identity.platform = *p;
  s.identity.version = j.value("app_version", "");
  if (j.contains("app_version_candidates"))
    for (const auto& c : j["app_version_candidates"])
      s.identity.version_candidates.push_back(c.get<std::string>());
  if (j.contains("account")) s.account = detail::account_from_json(j["account"]);
  if (j.contains("entries"))
    for (const auto& je : j["entries"]) s.entries.push_back(detail::entry_from_json(je));
  if (j.contains("hits"))
    for (const auto& jh : j["hits"])
      s.hits.push_back({jh.value("role", ""), jh.value("pattern", ""), jh.value("path", ""),
                        jh.value("area", ""), jh.value("ref", "")});
  if (j.contains("events")) {
    for (const auto& je : j["events"]) {
      LogEvent ev;
      ev.event_kind = je.value("kind", "");
      ev.source = je.value("source", "");
      if (je.contains("ts")) ev.timestamp = detail::ts_from_json(je["ts"]);
      if (je.contains("attributes"))
        for (const auto& [k, v] : je["attributes"].items())
          ev.attributes.emplace_back(k, detail::scalar_from_json(v));
      s.events.push_back(std::move(ev));
    }
  }
  if (j.contains("warnings"))
    for (const auto& w : j["warnings"]) s.warnings.push_back(w.get<std::string>());
  if (j.contains("notes"))
    for (const auto& n : j["notes"]) s.notes.push_back(n.get<std::string>());
  return s;
}

inline nlohmann::json merged_to_json(const MergedProvider& m) {
  nlohmann::json j;
  j["provider"] = to_string(m.provider);
  j["sources"] = m.sources;
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& id : m.identities)
    ids.push_back({{"provider", to_string(id.provider)},
                   {"platform", to_string(id.platform)},
                   {"app_version", id.version},
                   {"app_version_candidates", id.version_candidates}});
  j["identities"] = ids;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["synthetic"] = e.synthetic;
    if (e.synthetic) je["content_key"] = e.content_key;
    je["status"] = to_string(e.status);
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [label, st] : e.per_source) per[label] = to_string(st);
    je["per_source"] = per;
    if (e.hash_conflict) je["hash_conflict"] = true;
    if (e.merged.hash)
      je["hash"] = {{"alg", to_string(e.merged.hash->alg)}, {"hex", e.merged.hash->hex}};
    if (e.merged.size_bytes) je["size_bytes"] = *e.merged.size_bytes;
    entries.push_back(je);
  }
  j["entries"] = entries;
  j["recovered_count"] = merged_recovered_count(m);
  j["warnings"] = m.warnings;
  return j;
}

struct ReportOptions {
  std::string generated_at;  // ISO-8601; empty means "now"
};

inline nlohmann::json report_to_json(const AnalyzeResult& r, const ReportOptions& opt = {}) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : r.inputs)
    inputs.push_back({{"label", in.label}, {"kind", in.kind}, {"sha1", in.sha1}});
  j["inputs"] = inputs;
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : r.snapshots) snaps.push_back(snapshot_to_json(s));
  j["snapshots"] = snaps;
  j["warnings"] = r.warnings;
  j["notes"] = r.notes;
  std::string when = opt.generated_at;
  if (when.empty()) when = detail::format_iso8601_utc(int64_t(std::time(nullptr)));
  j["sidecar"] = {{"generated_at", when}};
  return j;
}

inline nlohmann::json merge_report_to_json(const std::vector<nlohmann::json>& input_reports,
                                           const std::vector<std::string>& labels,
                                           const ReportOptions& opt = {}) {
  if (input_reports.size() != labels.size())
    throw std::invalid_argument("one label per input report required");
  std::vector<std::pair<std::string, AppSnapshot>> snaps;
  nlohmann::json inputs = nlohmann::json::array();
  std::vector<std::string> warnings;
  for (size_t i = 0; i < input_reports.size(); ++i) {
    const nlohmann::json& rep = input_reports[i];
    if (rep.value("schema_version", "") != std::string(kReportSchemaVersion))
      throw std::runtime_error("unsupported report schema_version in input " + labels[i]);
    inputs.push_back({{"label", labels[i]}, {"kind", "report"}, {"sha1", ""}});
    if (!rep.contains("snapshots")) continue;
    for (const auto& js : rep["snapshots"]) snaps.emplace_back(labels[i], snapshot_from_json(js));
  }
  auto merged = merge_snapshots(snaps);

  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["inputs"] = inputs;
  nlohmann::json jm = nlohmann::json::array();
  for (const auto& m : merged) jm.push_back(merged_to_json(m));
  j["merged"] = jm;
  j["warnings"] = warnings;
  j["notes"] = nlohmann::json::array();
  std::string when = opt.generated_at;
  if (when.empty()) when = detail::format_iso8601_utc(int64_t(std::time(nullptr)));
  j["sidecar"] = {{"generated_at", when}};
  return j;
}

// --- text projection -------------------------------------------------------

namespace detail {

inline void text_snapshot(std::string& out, const nlohmann::json& s) {
  out += "app: " + s.value("provider", "?") + " / " + s.value("platform", "?");
  std::string ver = s.value("app_version", "");
  if (!ver.empty()) {
    out += "  version " + ver;
  } else {
    out += "  version unknown";
    if (s.contains("app_version_candidates") && !s["app_version_candidates"].empty()) {
      out += " (candidates:";
      for (const auto& c : s["app_version_candidates"]) out += " " + c.get<std::string>();
      out += ")";
    }
  }
  out += "\n";
  if (s.contains("account") && !s["account"].empty()) {
    out += "  account:";
    for (const auto& [k, v] : s["account"].items()) out += " " + k + "=" + v.get<std::string>();
    out += "\n";
  }
  size_t n = s.contains("entries") ? s["entries"].size() : 0;
  out += "  files: " + std::to_string(n) + " described, " +
         std::to_string(s.value("recovered_count", 0)) + " with recovered content\n";
  if (s.contains("entries")) {
    for (const auto& e : s["entries"]) {
      out += "    " + e.value("name", "?") + "  " + e.value("status", "?");
      if (e.contains("size_bytes"))
        out += "  " + std::to_string(e["size_bytes"].get<uint64_t>()) + " bytes";
      if (e.value("synthetic_name", false)) out += "  (carved, name assigned)";
      out += "\n";
    }
  }
  if (s.contains("events") && !s["events"].empty())
    out += "  events: " + std::to_string(s["events"].size()) + "\n";
  if (s.contains("notes"))
    for (const auto& note : s["notes"]) out += "  note: " + note.get<std::string>() + "\n";
  if (s.contains("warnings"))
    for (const auto& w : s["warnings"]) out += "  warning: " + w.get<std::string>() + "\n";
}

}  // namespace detail

inline std::string report_to_text(const nlohmann::json& j) {
  std::string out;
  out += std::string(kToolName) + " report (schema " + j.value("schema_version", "?") + ")\n";
  if (j.contains("inputs")) {
    out += "inputs:\n";
    for (const auto& in : j["inputs"]) {
      out += "  " + in.value("kind", "?") + "  " + in.value("label", "?");
      std::string sha = in.value("sha1", "");
      if (!sha.empty()) out += "  sha1=" + sha;
      out += "\n";
    }
  }
  if (j.contains("snapshots")) {
    for (const auto& s : j["snapshots"]) {
      out += "\n";
      detail::text_snapshot(out, s);
    }
  }
  if (j.contains("merged")) {
    for (const auto& m : j["merged"]) {
      out += "\nmerged view: " + m.value("provider", "?") + " (";
      bool first = true;
      for (const auto& src : m["sources"]) {
        if (!first) out += ", ";
        out += src.get<std::string>();
        first = false;
      }
      out += ")\n";
      out += "  files with recovered content across devices: " +
             std::to_string(m.value("recovered_count", 0)) + "\n";
      for (const auto& e : m["entries"]) {
        out += "    " + e.value("name", "?") + "  " + e.value("status", "?");
        if (e.value("hash_conflict", false)) out += "  [hash conflict]";
        out += "\n";
      }
      for (const auto& w : m["warnings"]) out += "  warning: " + w.get<std::string>() + "\n";
    }
  }
  if (j.contains("notes"))
    for (const auto& note : j["notes"]) out += "note: " + note.get<std::string>() + "\n";
  if (j.contains("warnings"))
    for (const auto& w : j["warnings"]) out += "warning: " + w.get<std::string>() + "\n";
  return out;
}

}  // namespace cloudsift
