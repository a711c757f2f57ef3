#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cloudsift/detail/bytes.hpp"
#include "cloudsift/plist.hpp"

using namespace cloudsift;

namespace {

std::vector<uint8_t> bytes_of(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

// Random documents exercising every node type, nested containers, and
// strings outside the ASCII plane.
PlistValue random_tree(std::mt19937_64& rng, int depth) {
  int pick = int(rng() % (depth > 0 ? 8 : 6));
  switch (pick) {
    case 0: return PlistValue(rng() % 2 == 0);
    case 1: return PlistValue(int64_t(rng()) - int64_t(rng()));
    case 2: return PlistValue(double(int64_t(rng() % 1000000)) / 8.0);
    case 3: {
      std::string s;
      size_t n = rng() % 20;
      for (size_t i = 0; i < n; ++i) {
        switch (rng() % 4) {
          case 0: s += char('a' + rng() % 26); break;
          case 1: s += "\xc3\xa9"; break;          // two-byte sequence
          case 2: s += "\xe6\xbc\xa2"; break;      // three-byte sequence
          default: s += "\xf0\x9f\x9a\x80"; break; // astral plane
        }
      }
      return PlistValue(std::move(s));
    }
    case 4: {
      PlistData d(rng() % 24);
      for (auto& b : d) b = uint8_t(rng());
      return PlistValue(std::move(d));
    }
    case 5: return PlistValue(PlistDate{double(int64_t(rng() % 2000000000) - 900000000)});
    case 6: {
      PlistArray a;
      size_t n = rng() % 5;
      for (size_t i = 0; i < n; ++i) a.push_back(random_tree(rng, depth - 1));
      return PlistValue(std::move(a));
    }
    default: {
      PlistDict d;
      size_t n = rng() % 5;
      for (size_t i = 0; i < n; ++i)
        d["k" + std::to_string(rng() % 100)] = random_tree(rng, depth - 1);
      return PlistValue(std::move(d));
    }
  }
}

}  // namespace

TEST_CASE("xml empty dict") {
  auto v = parse_plist(bytes_of("<plist version=\"1.0\"><dict/></plist>"));
  REQUIRE(v.is_dict());
  CHECK(v.as_dict().empty());
}

TEST_CASE("xml basic scalars") {
  auto v = parse_plist(bytes_of(
      "<plist><dict>"
      "<key>name</key><string>002.jpg</string>"
      "<key>size</key><integer>6265</integer>"
      "<key>deleted</key><false/>"
      "<key>ratio</key><real>0.5</real>"
      "</dict></plist>"));
  REQUIRE(v.is_dict());
  CHECK(v.find("name")->as_string() == "002.jpg");
  CHECK(v.find("size")->as_int() == 6265);
  CHECK(v.find("deleted")->as_bool() == false);
  CHECK(v.find("ratio")->as_real() == 0.5);
}

TEST_CASE("xml escapes round trip") {
  PlistDict d;
  d["weird"] = PlistValue(std::string("a<b&c>d\"e"));
  auto xml = dump_plist_xml(PlistValue(d));
  auto back = parse_plist(bytes_of(xml));
  CHECK(back.find("weird")->as_string() == "a<b&c>d\"e");
}

// Frozen output of a reference plist serializer for {"size": 471999}.
TEST_CASE("binary plist from a reference serializer") {
  auto blob = detail::from_hex(
      "62706c6973743030d101025473697a6512000733bf080b10000000000000010100000000000000030000"
      "0000000000000000000000000015");
  REQUIRE(blob.has_value());
  auto v = parse_plist(*blob);
  REQUIRE(v.is_dict());
  REQUIRE(v.find("size") != nullptr);
  CHECK(v.find("size")->as_int() == 471999);
}

TEST_CASE("binary round trip both directions") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    PlistValue tree = random_tree(rng, 3);
    auto bin = dump_plist_binary(tree);
    REQUIRE(bin.size() >= 8);
    CHECK(std::string(bin.begin(), bin.begin() + 8) == "bplist00");
    CHECK(parse_plist(bin) == tree);

    auto xml = dump_plist_xml(tree);
    CHECK(parse_plist(bytes_of(xml)) == tree);
  }
}

TEST_CASE("dates carry the apple epoch") {
  PlistDict d;
  d["modified"] = PlistValue(PlistDate{356607569.0});
  auto xml = dump_plist_xml(PlistValue(d));
  // 2001-01-01 plus 356607569 seconds
  CHECK(xml.find("2012-04-20T09:39:29Z") != std::string::npos);
  auto back = parse_plist(bytes_of(xml));
  CHECK(back.find("modified")->as_date().apple_seconds == 356607569.0);

  auto bin = dump_plist_binary(PlistValue(d));
  CHECK(parse_plist(bin).find("modified")->as_date().apple_seconds == 356607569.0);
}

TEST_CASE("malformed property lists are rejected") {
  CHECK_THROWS_AS(parse_plist(bytes_of("")), PlistError);
  CHECK_THROWS_AS(parse_plist(bytes_of("bplist00")), PlistError);
  CHECK_THROWS_AS(parse_plist(bytes_of("<plist><integer>txt</integer></plist>")), PlistError);
  CHECK_THROWS_AS(parse_plist(bytes_of("<plist><dict><key>a</key></dict></plist>")), PlistError);
}
