#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "cloudsift/carver.hpp"
#include "cloudsift/corpus_gen.hpp"
#include "cloudsift/evidence_tree.hpp"
#include "cloudsift/sqlite_reader.hpp"
#include "test_support.hpp"

using namespace cloudsift;
namespace fs = std::filesystem;

TEST_CASE("dataset carries the frozen catalog") {
  auto ds = build_dataset(1);
  REQUIRE(ds.files.size() == 20);

  CHECK(ds.files[0].name == "001.jpg");
  CHECK(ds.files[2].name == "003.jpg");
  CHECK(ds.files[2].size == 102448);
  CHECK(ds.files[4].name == "005.mp3");
  CHECK(ds.files[12].name == "013.pdf");
  CHECK(ds.files[12].size == 1695706);
  CHECK(ds.files[19].name == "020.docx");

  const char* kinds[] = {"viewed", "offline", "no_manipulation", "deleted"};
  for (int i = 0; i < 20; ++i) {
    CHECK(ds.files[i].kind == kinds[i % 4]);
    CHECK(ds.files[i].bytes.size() == ds.files[i].size);
    CHECK(ds.files[i].md5 == md5_hex(ds.files[i].bytes));
    CHECK(ds.files[i].sha1 == sha1_hex(ds.files[i].bytes));
  }
}

TEST_CASE("dataset bytes are a pure function of the seed") {
  auto a = build_dataset(77);
  auto b = build_dataset(77);
  auto c = build_dataset(78);
  for (int i = 0; i < 20; ++i) {
    CHECK(a.files[i].md5 == b.files[i].md5);
    CHECK(a.files[i].size == c.files[i].size);  // catalog is seed-independent
  }
  bool any_differs = false;
  for (int i = 0; i < 20; ++i) any_differs |= a.files[i].md5 != c.files[i].md5;
  CHECK(any_differs);
}

TEST_CASE("every dataset file survives a carve round trip on its own") {
  auto ds = build_dataset(5);
  for (const auto& f : ds.files) {
    auto carved = carve_image(f.bytes);
    REQUIRE(carved.size() == 1);
    CHECK(carved[0].offset == 0);
    CHECK(carved[0].length == f.size);
    CHECK(carved[0].md5 == f.md5);
  }
}

TEST_CASE("scenario catalog covers twelve apps in four states") {
  auto specs = all_scenarios(9);
  CHECK(specs.size() == 48);
  std::set<std::string> apps;
  std::set<DeviceState> states;
  for (const auto& s : specs) {
    apps.insert(to_string(s.provider) + std::string("/") + to_string(s.platform) + "/" +
                s.version);
    states.insert(s.state);
  }
  CHECK(apps.size() == 12);
  CHECK(states.size() == 4);
}

TEST_CASE("generated android tree holds offline copies, thumbnails, and carvable residue") {
  auto ds = build_dataset(31);
  ScenarioSpec spec{Provider::Dropbox, Platform::Android, "2.1.3",
                    DeviceState::ActivePowerState, 31};
  testsup::TempDir tmp("corpusgen");
  generate_scenario(spec, ds, tmp.path);

  auto sd = EvidenceTree::open_tree(tmp.path / "sd");
  auto hit = sd.resolve("Android/data/com.dropbox.android/files/scratch/013.pdf");
  REQUIRE(hit.has_value());
  CHECK(md5_hex(sd.read_file(*hit)) == ds.files[12].md5);

  auto thumb = sd.resolve("Android/data/com.dropbox.android/cache/thumbs/001.jpg");
  REQUIRE(thumb.has_value());
  CHECK(sd.read_file(*thumb).size() != ds.files[0].size);  // reduced copy, not the original

  auto raw = RawImage::open_image(tmp.path / "raw.img");
  std::set<std::string> carved_md5;
  for (const auto& f : carve_image(raw.bytes)) carved_md5.insert(f.md5);
  CHECK(carved_md5.count(ds.files[15].md5) == 1);  // 016.pdf
  CHECK(carved_md5.count(ds.files[19].md5) == 1);  // 020.docx
}

TEST_CASE("cache-cleared ios tree keeps only pinned files in the cache db and dir") {
  auto ds = build_dataset(32);
  ScenarioSpec spec{Provider::Dropbox, Platform::Ios, "1.4.7", DeviceState::CacheCleared, 32};
  testsup::TempDir tmp("corpusgen");
  generate_scenario(spec, ds, tmp.path);

  auto tree = EvidenceTree::open_tree(tmp.path / "internal");
  std::string db_path, cache_dir;
  for (const auto& e : tree.entries()) {
    if (e.path.ends_with("Documents/Dropbox.sqlite")) db_path = e.path;
    auto at = e.path.find("Library/Caches/Dropbox/");
    if (at != std::string::npos && cache_dir.empty())
      cache_dir = e.path.substr(0, at) + "Library/Caches/Dropbox";
  }
  REQUIRE(!db_path.empty());
  REQUIRE(!cache_dir.empty());

  auto db = SqliteDb::open(tree.read_file(db_path));
  auto t = db.read_table("ZCACHEDFILE");
  REQUIRE(t.rows.size() == 5);
  size_t path_col = 0, size_col = 0;
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == "ZPATH") path_col = i;
    if (t.columns[i] == "ZSIZE") size_col = i;
  }
  bool saw_002 = false;
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[path_col]) == "/002.jpg") {
      saw_002 = true;
      CHECK(std::get<int64_t>(row[size_col]) == 6265);
    }
  }
  CHECK(saw_002);

  auto cached = tree.files_under(cache_dir);
  std::set<std::string> names;
  for (const auto* e : cached) names.insert(fs::path(e->path).filename().string());
  CHECK(names == std::set<std::string>{"002.jpg", "006.mp3", "010.mp4", "014.pdf", "018.docx"});
}

TEST_CASE("cache-cleared syncplicity leaves decrypted copies of pinned files only") {
  auto ds = build_dataset(33);
  ScenarioSpec spec{Provider::Syncplicity, Platform::Android, "2.1.1",
                    DeviceState::CacheCleared, 33};
  testsup::TempDir tmp("corpusgen");
  generate_scenario(spec, ds, tmp.path);

  auto sd = EvidenceTree::open_tree(tmp.path / "sd");
  auto under = sd.files_under("temporary_decrypted_storage");
  std::set<std::string> basenames;
  for (const auto* e : under) basenames.insert(fs::path(e->path).filename().string());
  CHECK(basenames ==
        std::set<std::string>{"002.jpg", "006.mp3", "010.mp4", "014.pdf", "018.docx"});
  for (const auto* e : under) {
    auto name = fs::path(e->path).filename().string();
    for (const auto& f : ds.files)
      if (f.name == name) CHECK(md5_hex(sd.read_file(e->path)) == f.md5);
  }
}

TEST_CASE("manifest records the dataset and a per-file expectation") {
  auto ds = build_dataset(34);
  ScenarioSpec spec{Provider::Box, Platform::Android, "1.6.7",
                    DeviceState::ActivePowerState, 34};
  testsup::TempDir tmp("corpusgen");
  generate_scenario(spec, ds, tmp.path);

  auto m = nlohmann::json::parse(testsup::slurp(tmp.path / "manifest.json"));
  CHECK(m.at("schema_version") == "1");
  CHECK(m.at("scenario").at("provider") == "box");
  CHECK(m.at("scenario").at("device_state") == "active_power_state");

  REQUIRE(m.at("dataset").size() == 20);
  CHECK(m.at("dataset")[2].at("name") == "003.jpg");
  CHECK(m.at("dataset")[2].at("md5") == ds.files[2].md5);

  const auto& exp = m.at("expected");
  CHECK(exp.at("statuses").size() == 20);
  int counted = 0;
  for (const auto& [name, st] : exp.at("statuses").items()) {
    auto parsed = parse_recovery_status(st.get<std::string>());
    REQUIRE(parsed.has_value());
    if (counts_as_recovered(*parsed)) ++counted;
  }
  CHECK(exp.at("recovered_count").get<int>() == counted);
}

TEST_CASE("uncataloged app version is refused") {
  auto ds = build_dataset(35);
  ScenarioSpec spec{Provider::Dropbox, Platform::Android, "9.9.9",
                    DeviceState::ActivePowerState, 35};
  testsup::TempDir tmp("corpusgen");
  CHECK_THROWS(generate_scenario(spec, ds, tmp.path));
}
