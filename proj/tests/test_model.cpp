#include <catch2/catch_amalgamated.hpp>

#include "cloudsift/hash.hpp"
#include "cloudsift/model.hpp"

using namespace cloudsift;

namespace {

const RecoveryStatus kAllStatuses[] = {
    RecoveryStatus::NotObserved,       RecoveryStatus::EncryptedCacheOnly,
    RecoveryStatus::MetadataOnly,      RecoveryStatus::ThumbnailOnly,
    RecoveryStatus::PreviewOnly,       RecoveryStatus::CarvedDeleted,
    RecoveryStatus::RecoveredUnverified, RecoveryStatus::RecoveredIntact,
};

RecoveredObject obj_with(ObjectOrigin origin, const std::string& body) {
  return make_recovered_object("o", origin, "src",
                               std::vector<uint8_t>(body.begin(), body.end()));
}

}  // namespace

TEST_CASE("status lattice is a commutative idempotent monoid") {
  for (auto a : kAllStatuses) {
    CHECK(status_max(a, a) == a);
    CHECK(status_max(a, RecoveryStatus::NotObserved) == a);
    for (auto b : kAllStatuses) {
      CHECK(status_max(a, b) == status_max(b, a));
      for (auto c : kAllStatuses)
        CHECK(status_max(status_max(a, b), c) == status_max(a, status_max(b, c)));
    }
  }
  // the one equal-rank tie resolves to the thumbnail side
  CHECK(status_max(RecoveryStatus::ThumbnailOnly, RecoveryStatus::PreviewOnly) ==
        RecoveryStatus::ThumbnailOnly);
}

TEST_CASE("recovered family") {
  CHECK(counts_as_recovered(RecoveryStatus::RecoveredIntact));
  CHECK(counts_as_recovered(RecoveryStatus::RecoveredUnverified));
  CHECK(counts_as_recovered(RecoveryStatus::CarvedDeleted));
  CHECK_FALSE(counts_as_recovered(RecoveryStatus::ThumbnailOnly));
  CHECK_FALSE(counts_as_recovered(RecoveryStatus::PreviewOnly));
  CHECK_FALSE(counts_as_recovered(RecoveryStatus::MetadataOnly));
  CHECK_FALSE(counts_as_recovered(RecoveryStatus::EncryptedCacheOnly));
  CHECK_FALSE(counts_as_recovered(RecoveryStatus::NotObserved));
}

TEST_CASE("status strings round trip") {
  for (auto s : kAllStatuses) {
    auto parsed = parse_recovery_status(to_string(s));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == s);
  }
}

TEST_CASE("device state power normalization") {
  CHECK(normalize_power(DeviceState::PoweredDown) == DeviceState::ActivePowerState);
  CHECK(normalize_power(DeviceState::CacheClearedPoweredDown) == DeviceState::CacheCleared);
  CHECK(normalize_power(DeviceState::ActivePowerState) == DeviceState::ActivePowerState);
  CHECK(normalize_power(DeviceState::CacheCleared) == DeviceState::CacheCleared);
  CHECK(parse_device_state("aps") == DeviceState::ActivePowerState);
  CHECK(parse_device_state("cc_pwd") == DeviceState::CacheClearedPoweredDown);
  CHECK(parse_device_state("active_power_state") == DeviceState::ActivePowerState);
}

TEST_CASE("app catalog") {
  const auto& apps = cataloged_apps();
  CHECK(apps.size() == 12);
  int android = 0, ios = 0;
  for (const auto& a : apps) (a.platform == Platform::Android ? android : ios)++;
  CHECK(android == 8);
  CHECK(ios == 4);
  CHECK(is_cataloged(Provider::Dropbox, Platform::Android, "2.1.3"));
  CHECK(is_cataloged(Provider::Syncplicity, Platform::Ios, "1.6"));
  CHECK_FALSE(is_cataloged(Provider::Dropbox, Platform::Android, "9.9"));
}

TEST_CASE("content hash verification") {
  std::string body = "some cached file content";
  auto obj = obj_with(ObjectOrigin::CachePath, body);
  ContentHash good{HashAlg::Md5, md5_hex(body)};
  CHECK(object_hash_matches(obj, good));

  std::string flipped = body;
  flipped[0] ^= 1;
  ContentHash bad{HashAlg::Md5, md5_hex(flipped)};
  CHECK_FALSE(object_hash_matches(obj, bad));

  ContentHash sha{HashAlg::Sha1, sha1_hex(body)};
  CHECK(object_hash_matches(obj, sha));
}

TEST_CASE("status classification") {
  std::string body = "file thirteen body";

  SECTION("cache object with matching metadata digest") {
    CloudFileEntry e;
    e.name = "013.pdf";
    e.hash = ContentHash{HashAlg::Md5, md5_hex(body)};
    auto o = obj_with(ObjectOrigin::CachePath, body);
    CHECK(classify_status(e, {o}, true, false) == RecoveryStatus::RecoveredIntact);
  }

  SECTION("digest mismatch downgrades and warns") {
    CloudFileEntry e;
    e.name = "013.pdf";
    e.hash = ContentHash{HashAlg::Md5, md5_hex(std::string("other"))};
    auto o = obj_with(ObjectOrigin::OfflineDir, body);
    std::vector<std::string> warnings;
    CHECK(classify_status(e, {o}, true, false, &warnings) ==
          RecoveryStatus::RecoveredUnverified);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("digest mismatch") != std::string::npos);
  }

  SECTION("content without any metadata digest stays unverified") {
    CloudFileEntry e;
    e.name = "004.jpg";
    auto o = obj_with(ObjectOrigin::CachePath, body);
    CHECK(classify_status(e, {o}, false, false) == RecoveryStatus::RecoveredUnverified);
  }

  SECTION("thumbnail only") {
    CloudFileEntry e;
    e.name = "003.jpg";
    auto o = obj_with(ObjectOrigin::ThumbnailDir, body);
    CHECK(classify_status(e, {o}, true, false) == RecoveryStatus::ThumbnailOnly);
  }

  SECTION("metadata only") {
    CloudFileEntry e;
    e.name = "007.mp3";
    CHECK(classify_status(e, {}, true, false) == RecoveryStatus::MetadataOnly);
  }

  SECTION("nothing at all") {
    CloudFileEntry e;
    e.name = "ghost";
    CHECK(classify_status(e, {}, false, false) == RecoveryStatus::NotObserved);
  }

  SECTION("encrypted cache floor loses to real evidence") {
    CloudFileEntry e;
    e.name = "012.mp4";
    CHECK(classify_status(e, {}, false, true) == RecoveryStatus::EncryptedCacheOnly);
    CHECK(classify_status(e, {}, true, true) == RecoveryStatus::MetadataOnly);
  }

  SECTION("carved object marks deletion, strongest object wins") {
    CloudFileEntry e;
    e.name = "016.pdf";
    e.hash = ContentHash{HashAlg::Md5, md5_hex(body)};
    auto carved = make_recovered_object("pdf_100", ObjectOrigin::Carved, "raw:100",
                                        std::vector<uint8_t>(body.begin(), body.end()), 100);
    CHECK(classify_status(e, {carved}, true, false) == RecoveryStatus::CarvedDeleted);
    auto cache = obj_with(ObjectOrigin::CachePath, body);
    CHECK(classify_status(e, {carved, cache}, true, false) == RecoveryStatus::RecoveredIntact);
  }
}

TEST_CASE("entry field merging keeps first on conflict") {
  CloudFileEntry a, b;
  a.name = b.name = "002.jpg";
  a.size_bytes = 6265;
  b.size_bytes = 9999;
  b.favorite = true;
  b.remote_id = "r1";
  std::vector<std::string> warnings;
  merge_entry_fields(a, b, &warnings);
  CHECK(a.size_bytes == 6265);
  CHECK(a.favorite == true);
  CHECK(a.remote_id == "r1");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("size_bytes") != std::string::npos);
}

TEST_CASE("timestamp tagging") {
  auto t = apple_ts(356713169.0);
  CHECK(t.epoch == Epoch::AppleAbsoluteSeconds);
  CHECK(to_unix_seconds(t) == 356713169.0 + 978307200.0);
  auto u = unix_ts(1334914769.0);
  CHECK(to_unix_seconds(u) == 1334914769.0);
}
