#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "cloudsift/carver.hpp"
#include "cloudsift/corpus_gen.hpp"
#include "cloudsift/hash.hpp"
#include "cloudsift/model.hpp"

using namespace cloudsift;

namespace {

// Filler bytes stay in [0x80, 0xfe]: no ASCII, no 0xff, so none of the
// carver's launch signatures can occur inside it even across extent seams.
std::vector<uint8_t> filler(size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0x80, 0xfe);
  std::vector<uint8_t> v(n);
  for (auto& b : v) b = static_cast<uint8_t>(d(rng));
  return v;
}

void append(std::vector<uint8_t>& dst, const std::vector<uint8_t>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

TEST_CASE("one object of each supported format carves byte-exact") {
  auto ds = build_dataset(99);
  std::mt19937_64 rng(7);

  // 001.jpg, 005.mp3, 009.mp4, 013.pdf, 017.docx: one per signature family.
  const std::vector<int> picks = {0, 4, 8, 12, 16};
  std::vector<uint8_t> image = filler(913, rng);
  std::map<uint64_t, int> planted;  // offset -> dataset index
  for (int i : picks) {
    planted[image.size()] = i;
    append(image, ds.files[i].bytes);
    append(image, filler(700 + 37 * i, rng));
  }

  auto carved = carve_image(image);
  REQUIRE(carved.size() == 5);

  std::set<std::string> types;
  for (const auto& f : carved) types.insert(f.type);
  CHECK(types == std::set<std::string>{"jpeg", "mp3", "mp4", "pdf", "zip"});

  for (const auto& f : carved) {
    REQUIRE(planted.count(f.offset) == 1);
    const auto& src = ds.files[planted[f.offset]];
    CHECK(f.length == src.size);
    CHECK(f.md5 == src.md5);
    CHECK(f.sha1 == src.sha1);
    CHECK(f.logical_name == f.type + "_" + std::to_string(f.offset));
  }
}

TEST_CASE("pdf embedded at a fixed offset is recovered intact") {
  auto ds = build_dataset(99);
  const auto& pdf = ds.files[15];  // 016.pdf
  std::mt19937_64 rng(11);

  std::vector<uint8_t> image = filler(4096, rng);
  append(image, pdf.bytes);
  append(image, filler(2048, rng));

  auto carved = carve_image(image);
  REQUIRE(carved.size() == 1);
  CHECK(carved[0].type == "pdf");
  CHECK(carved[0].offset == 4096);
  CHECK(carved[0].length == pdf.size);
  CHECK(carved[0].md5 == pdf.md5);
  std::vector<uint8_t> slice(image.begin() + 4096, image.begin() + 4096 + pdf.size);
  CHECK(slice == pdf.bytes);
}

TEST_CASE("empty and signature-free images carve nothing") {
  CHECK(carve_image({}).empty());

  std::mt19937_64 rng(13);
  auto junk = filler(1 << 20, rng);
  CHECK(carve_image(junk).empty());
}

TEST_CASE("all twenty dataset files carve out of one image") {
  auto ds = build_dataset(2026);
  std::mt19937_64 rng(17);

  std::vector<uint8_t> image = filler(101, rng);
  std::vector<uint64_t> offsets;
  for (const auto& f : ds.files) {
    offsets.push_back(image.size());
    append(image, f.bytes);
    append(image, filler(64 + (image.size() % 257), rng));
  }

  auto carved = carve_image(image);
  REQUIRE(carved.size() == ds.files.size());
  CHECK(std::is_sorted(carved.begin(), carved.end(),
                       [](const auto& a, const auto& b) { return a.offset < b.offset; }));

  std::map<std::string, int> per_type;
  for (size_t i = 0; i < carved.size(); ++i) {
    CHECK(carved[i].offset == offsets[i]);
    CHECK(carved[i].md5 == ds.files[i].md5);
    ++per_type[carved[i].type];
  }
  CHECK(per_type == std::map<std::string, int>{
                        {"jpeg", 4}, {"mp3", 4}, {"mp4", 4}, {"pdf", 4}, {"zip", 4}});
}

TEST_CASE("back-to-back objects of the same format both carve") {
  auto ds = build_dataset(99);
  const auto& a = ds.files[0];  // 001.jpg
  const auto& b = ds.files[1];  // 002.jpg

  std::vector<uint8_t> image;
  append(image, a.bytes);
  append(image, b.bytes);  // starts exactly where the first ends

  auto carved = carve_image(image);
  REQUIRE(carved.size() == 2);
  CHECK(carved[0].offset == 0);
  CHECK(carved[0].md5 == a.md5);
  CHECK(carved[1].offset == a.size);
  CHECK(carved[1].md5 == b.md5);
}

TEST_CASE("truncated object does not carve") {
  auto ds = build_dataset(99);
  std::vector<uint8_t> cut(ds.files[0].bytes.begin(), ds.files[0].bytes.end() - 2);
  CHECK(carve_image(cut).empty());
}

TEST_CASE("carve hits convert to recovered objects with provenance") {
  auto ds = build_dataset(99);
  const auto& mp3 = ds.files[4];  // 005.mp3
  std::mt19937_64 rng(19);

  std::vector<uint8_t> image = filler(333, rng);
  append(image, mp3.bytes);
  append(image, filler(100, rng));

  auto objs = carve_to_objects(image, "raw.img");
  REQUIRE(objs.size() == 1);
  CHECK(objs[0].origin == ObjectOrigin::Carved);
  CHECK(objs[0].logical_name == "mp3_333");
  CHECK(objs[0].source_path == "raw.img:333");
  REQUIRE(objs[0].carve_offset.has_value());
  CHECK(*objs[0].carve_offset == 333);
  CHECK(objs[0].length == mp3.size);
  CHECK(objs[0].md5 == mp3.md5);
  REQUIRE(objs[0].content);
  CHECK(md5_hex(*objs[0].content) == mp3.md5);
}
