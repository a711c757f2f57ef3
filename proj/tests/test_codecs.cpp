#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <random>

#include "cloudsift/codecs.hpp"

using namespace cloudsift;

TEST_CASE("json integers parse exactly") {
  auto doc = parse_json(R"({"mId":2072716499,"mSize":102448})");
  CHECK(doc.warnings.empty());
  REQUIRE(doc.root.is_object());
  CHECK(doc.root.find("mId")->as_int() == 2072716499);
  CHECK(doc.root.find("mSize")->as_int() == 102448);
}

TEST_CASE("json corner cases") {
  CHECK(parse_json("[]").root.is_array());
  CHECK(parse_json("[]").root.as_array().empty());
  CHECK(parse_json("null").root.is_null());
  CHECK(parse_json("-0.5").root.as_double() == -0.5);
  CHECK(parse_json(R"("é🚀")").root.as_string() == "\xc3\xa9\xf0\x9f\x9a\x80");
  CHECK(parse_json("9223372036854775807").root.as_int() == INT64_MAX);
  CHECK_THROWS_AS(parse_json(""), JsonParseError);
  CHECK_THROWS_AS(parse_json("{"), JsonParseError);
  CHECK_THROWS_AS(parse_json("[1,]"), JsonParseError);
  CHECK_THROWS_AS(parse_json("tru"), JsonParseError);
}

// nlohmann's parser is the reference; random documents must agree after a
// round trip through our serializer.
TEST_CASE("json differential against reference parser") {
  std::mt19937_64 rng(7);
  std::function<nlohmann::json(int)> gen = [&](int depth) -> nlohmann::json {
    switch (rng() % (depth > 0 ? 7 : 5)) {
      case 0: return nullptr;
      case 1: return rng() % 2 == 0;
      case 2: return int64_t(rng()) - int64_t(rng());
      case 3: return double(int64_t(rng() % 100000)) / 16.0;
      case 4: {
        std::string s;
        size_t n = rng() % 12;
        for (size_t i = 0; i < n; ++i) {
          int c = int(rng() % 96);
          if (c < 90)
            s += char(' ' + c);
          else
            s += "\xe2\x98\x83";  // multi-byte
        }
        return s;
      }
      case 5: {
        nlohmann::json a = nlohmann::json::array();
        for (size_t i = 0, n = rng() % 4; i < n; ++i) a.push_back(gen(depth - 1));
        return a;
      }
      default: {
        nlohmann::json o = nlohmann::json::object();
        for (size_t i = 0, n = rng() % 4; i < n; ++i)
          o["k" + std::to_string(rng() % 50)] = gen(depth - 1);
        return o;
      }
    }
  };

  for (int trial = 0; trial < 80; ++trial) {
    nlohmann::json ref = gen(3);
    std::string text = ref.dump();
    auto mine = parse_json(text);
    CHECK(mine.warnings.empty());
    // reserialize and let the reference parse it back
    nlohmann::json again = nlohmann::json::parse(dump_json(mine.root));
    CHECK(again == ref);
  }
}

TEST_CASE("json lines events") {
  // first line as the cache client writes it
  std::string text =
      "{ \"retry\":0, \"favorite\":false, \"extension\":\"pdf\", \"id\":23, \"cached\":false, "
      "\"ts\":\"1335445641.29\", \"event\":\"file.view.start\", \"size\":1695706 }\n"
      "{\"event\":\"app.background\"}\n"
      "not json at all\n";
  auto parsed = parse_json_lines_log(text, "analytics");
  REQUIRE(parsed.events.size() == 2);

  const auto& ev = parsed.events[0];
  CHECK(ev.event_kind == "file.view.start");
  REQUIRE(ev.timestamp.has_value());
  CHECK(to_unix_seconds(*ev.timestamp) == 1335445641.29);
  bool saw_size = false;
  for (const auto& [k, v] : ev.attributes)
    if (k == "size") {
      saw_size = true;
      CHECK(std::get<int64_t>(v) == 1695706);
    }
  CHECK(saw_size);

  CHECK_FALSE(parsed.events[1].timestamp.has_value());
  REQUIRE(parsed.warnings.size() == 1);
  CHECK(parsed.warnings[0].find("line 3") != std::string::npos);

  CHECK(parse_json_lines_log("", "x").events.empty());
}

TEST_CASE("shared prefs documents") {
  SECTION("decrypted-file bookkeeping pair") {
    std::string xml =
        "<?xml version='1.0' encoding='utf-8' standalone='yes' ?>\n"
        "<map>\n"
        "<long name=\"FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_VERSION_ID\" "
        "value=\"145789448\" />\n"
        "<string name=\"FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_NAME\">016.pdf</string>\n"
        "</map>\n";
    auto prefs = parse_shared_prefs(xml);
    REQUIRE(prefs.entries.size() == 2);
    CHECK(prefs.entries[0].kind == PrefKind::Long);
    CHECK(prefs.entries[0].name == "FILE_CACHE_PREFERENCES_LAST_DECRYPTED_FILE_VERSION_ID");
    CHECK(prefs.entries[0].value == "145789448");
    CHECK(prefs.entries[1].kind == PrefKind::String);
    CHECK(prefs.entries[1].value == "016.pdf");
  }

  SECTION("empty map") {
    CHECK(parse_shared_prefs("<map/>").entries.empty());
  }

  SECTION("auth token entry") {
    std::string xml =
        "<map><string name=\"authToken\">u5es7xli4xejrh89kr6xu14tks6grjn3</string></map>";
    auto prefs = parse_shared_prefs(xml);
    REQUIRE(prefs.entries.size() == 1);
    CHECK(prefs.entries[0].kind == PrefKind::String);
    CHECK(prefs.entries[0].name == "authToken");
    CHECK(prefs.entries[0].value == "u5es7xli4xejrh89kr6xu14tks6grjn3");
  }

  SECTION("int and boolean") {
    auto prefs = parse_shared_prefs(
        "<map><int name=\"pages\" value=\"7\"/><boolean name=\"on\" value=\"true\"/></map>");
    REQUIRE(prefs.entries.size() == 2);
    CHECK(prefs.entries[0].kind == PrefKind::Int);
    CHECK(prefs.entries[1].kind == PrefKind::Boolean);
  }
}

TEST_CASE("timestamped text logs") {
  auto parsed = parse_kv_log("1335445000 account created\n", "dropbox_android_log", "log.txt");
  REQUIRE(parsed.events.size() == 1);
  CHECK(parsed.events[0].event_kind == "entry");
  REQUIRE(parsed.events[0].timestamp.has_value());
  CHECK(to_unix_seconds(*parsed.events[0].timestamp) == 1335445000.0);
  REQUIRE(parsed.events[0].attributes.size() == 1);
  CHECK(std::get<std::string>(parsed.events[0].attributes[0].second) == "account created");

  auto mixed = parse_kv_log("1335445001.5 user authenticating with the service\nfree text\n",
                            "sugarsync_log", "sugarsync.log");
  REQUIRE(mixed.events.size() == 2);
  CHECK(mixed.events[0].event_kind == "entry");
  CHECK(to_unix_seconds(*mixed.events[0].timestamp) == 1335445001.5);
  CHECK(mixed.events[1].event_kind == "raw");

  CHECK(parse_kv_log("", "syncplicity_ios_log", "x").events.empty());
  CHECK_THROWS(parse_kv_log("a\n", "nonsense_format", "x"));
}
