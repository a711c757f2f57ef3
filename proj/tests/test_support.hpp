// Shared fixtures for the test binaries.
#pragma once

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudsift/analyzers.hpp"
#include "cloudsift/corpus_gen.hpp"

namespace testsup {

// Self-deleting scratch directory.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 1000; ++i) {
      auto cand = base / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(cand, ec)) {
        path = cand;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir for " + tag);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string str() const { return path.string(); }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void spill(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

// Strongest status witnessed for a dataset file: the entry carrying its name,
// or any entry owning content whose MD5 equals the file's. Unattributed carves
// land under synthetic names, so plain name lookup undercounts.
inline cloudsift::RecoveryStatus observed_status(const cloudsift::AppSnapshot& snap,
                                                 const cloudsift::DatasetFile& f) {
  using namespace cloudsift;
  RecoveryStatus st = RecoveryStatus::NotObserved;
  for (const auto& e : snap.entries) {
    bool owns = e.entry.name == f.name;
    for (const auto& o : e.objects)
      if (o.md5 == f.md5) owns = true;
    if (owns) st = status_max(st, e.status);
  }
  return st;
}

// Generate, analyze with role-stable labels, clean up the tree.
inline cloudsift::AnalyzeResult analyze_scenario(const cloudsift::ScenarioSpec& spec,
                                                 const cloudsift::Dataset& ds,
                                                 const std::filesystem::path& dir,
                                                 bool keep = false) {
  using namespace cloudsift;
  generate_scenario(spec, ds, dir.string());
  EvidenceTree internal = EvidenceTree::open_tree((dir / "internal").string());
  std::optional<EvidenceTree> sd;
  if (std::filesystem::exists(dir / "sd")) sd = EvidenceTree::open_tree((dir / "sd").string());
  std::optional<RawImage> raw;
  if (std::filesystem::exists(dir / "raw.img")) {
    raw = RawImage::open_image((dir / "raw.img").string());
    raw->label = "raw.img";
  }
  AnalyzeInput in;
  in.internal = &internal;
  if (sd) in.sd = &*sd;
  if (raw) in.raw = &*raw;
  AnalyzeResult res = analyze(in);
  if (!keep) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  return res;
}

}  // namespace testsup
