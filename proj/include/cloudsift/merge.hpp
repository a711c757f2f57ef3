#pragma once

// Cross-device union. Snapshots of the same provider account taken from
// different devices combine into one view: named entries unify by file name,
// synthetic carved entries unify by content digest, and each file's status is
// the strongest any device observed. Two devices reporting the same name with
// different content hashes is a real conflict: both variants are kept and
// flagged rather than silently picking one.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cloudsift/model.hpp"

namespace cloudsift {

struct MergedEntry {
  std::string name;
  bool synthetic = false;
  std::string content_key;  // digest key for synthetic entries, empty otherwise
  RecoveryStatus status = RecoveryStatus::NotObserved;
  std::vector<std::pair<std::string, RecoveryStatus>> per_source;  // label -> status
  CloudFileEntry merged;
  bool hash_conflict = false;
};

struct MergedProvider {
  Provider provider = Provider::Dropbox;
  std::vector<std::string> sources;
  std::vector<AppIdentity> identities;
  std::vector<MergedEntry> entries;
  std::vector<std::string> warnings;
};

// Distinct files with recovered content: conflict variants of one name count
// once, synthetic entries count per distinct digest.
inline int merged_recovered_count(const MergedProvider& m) {
  std::map<std::string, bool> by_key;
  for (const auto& e : m.entries) {
    std::string key = e.synthetic ? "#" + e.content_key : e.name;
    by_key[key] = by_key[key] || counts_as_recovered(e.status);
  }
  int n = 0;
  for (const auto& [k, rec] : by_key)
    if (rec) ++n;
  return n;
}

namespace detail {

inline std::string synthetic_key(const SnapshotEntry& e) {
  for (const auto& obj : e.objects)
    if (!obj.sha1.empty()) return obj.sha1;
  return e.entry.name;  // no content survived; degrade to the given name
}

// display name for a unified synthetic entry: carve offsets differ between
// images, the digest does not
inline std::string synthetic_display_name(const SnapshotEntry& e, const std::string& key) {
  std::string prefix = e.entry.name;
  auto us = prefix.find('_');
  if (us != std::string::npos) prefix.resize(us);
  if (prefix.empty()) prefix = "carved";
  return prefix + "_" + key.substr(0, 12);
}

inline void fold_entry(MergedProvider& m, const std::string& label, const SnapshotEntry& se) {
  if (se.entry.synthetic_name) {
    std::string key = synthetic_key(se);
    for (auto& me : m.entries) {
      if (me.synthetic && me.content_key == key) {
        me.status = status_max(me.status, se.status);
        me.per_source.emplace_back(label, se.status);
        return;
      }
    }
    MergedEntry me;
    me.name = synthetic_display_name(se, key);
    me.synthetic = true;
    me.content_key = key;
    me.status = se.status;
    me.per_source.emplace_back(label, se.status);
    me.merged = se.entry;
    me.merged.name = me.name;
    m.entries.push_back(std::move(me));
    return;
  }

  // named entry: variants of one name are separated only by conflicting hashes
  std::vector<MergedEntry*> variants;
  for (auto& me : m.entries)
    if (!me.synthetic && me.name == se.entry.name) variants.push_back(&me);
  for (auto* me : variants) {
    bool compatible = !me->merged.hash || !se.entry.hash || *me->merged.hash == *se.entry.hash;
    if (!compatible) continue;
    me->status = status_max(me->status, se.status);
    me->per_source.emplace_back(label, se.status);
    merge_entry_fields(me->merged, se.entry, nullptr);
    return;
  }
  MergedEntry me;
  me.name = se.entry.name;
  me.status = se.status;
  me.per_source.emplace_back(label, se.status);
  me.merged = se.entry;
  if (!variants.empty()) {
    me.hash_conflict = true;
    for (auto* v : variants) v->hash_conflict = true;
    m.warnings.push_back("devices disagree on content hash for '" + se.entry.name +
                         "'; variants kept separately");
  }
  m.entries.push_back(std::move(me));
}

}  // namespace detail

// Inputs are (device label, snapshot) pairs; output is one union per provider,
// providers in catalog order.
inline std::vector<MergedProvider> merge_snapshots(
    const std::vector<std::pair<std::string, AppSnapshot>>& inputs) {
  std::vector<MergedProvider> out;
  for (Provider p : {Provider::Dropbox, Provider::Box, Provider::SugarSync,
                     Provider::Syncplicity}) {
    MergedProvider m;
    m.provider = p;
    for (const auto& [label, snap] : inputs) {
      if (snap.identity.provider != p) continue;
      m.sources.push_back(label);
      m.identities.push_back(snap.identity);
      for (const auto& se : snap.entries) detail::fold_entry(m, label, se);
    }
    if (m.sources.empty()) continue;
    std::sort(m.entries.begin(), m.entries.end(), [](const MergedEntry& a, const MergedEntry& b) {
      if (a.synthetic != b.synthetic) return !a.synthetic;
      if (a.name != b.name) return a.name < b.name;
      return a.content_key < b.content_key;
    });
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace cloudsift
