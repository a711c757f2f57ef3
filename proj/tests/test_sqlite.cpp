#include <catch2/catch_amalgamated.hpp>
#include <sqlite3.h>

#include <random>
#include <string>
#include <vector>

#include "cloudsift/sqlite_reader.hpp"
#include "sqlite_oracle.hpp"
#include "test_support.hpp"

using namespace cloudsift;
using sqloracle::exec_or_die;
using testsup::TempDir;

TEST_CASE("differential against the stock library") {
  TempDir td("sqldiff");
  std::mt19937_64 rng(20260822);
  for (int trial = 0; trial < 12; ++trial) {
    auto p = td.path / ("db" + std::to_string(trial) + ".sqlite");
    sqloracle::make_random_db(p, rng);
    CHECK(sqloracle::compare_db_to_oracle(p) == "");
  }
}

TEST_CASE("schema listing") {
  TempDir td("sqlschema");
  auto p = td.path / "one.sqlite";
  sqlite3* db = nullptr;
  REQUIRE(sqlite3_open(p.string().c_str(), &db) == SQLITE_OK);
  exec_or_die(db, "PRAGMA journal_mode=MEMORY");
  exec_or_die(db, "CREATE TABLE dropbox (_id INTEGER PRIMARY KEY, display_name TEXT)");
  exec_or_die(db, "INSERT INTO dropbox VALUES (1, '001.jpg')");
  sqlite3_close(db);

  std::string raw = testsup::slurp(p);
  auto mine = SqliteDb::open(std::vector<uint8_t>(raw.begin(), raw.end()));
  CHECK(mine.has_table("dropbox"));
  auto t = mine.read_table("dropbox");
  REQUIRE(t.rows.size() == 1);
  // rowid alias column reads back through the key itself
  CHECK(std::get<int64_t>(t.rows[0][0]) == 1);
  CHECK(std::get<std::string>(t.rows[0][1]) == "001.jpg");
}

TEST_CASE("malformed database bytes are rejected") {
  CHECK_THROWS(SqliteDb::open({}));
  std::vector<uint8_t> junk(100, 0x41);
  CHECK_THROWS(SqliteDb::open(junk));
}

TEST_CASE("unsupported variants are rejected loudly") {
  TempDir td("sqlvariants");

  SECTION("utf-16 encoding") {
    auto p = td.path / "u16.sqlite";
    sqlite3* db = nullptr;
    REQUIRE(sqlite3_open(p.string().c_str(), &db) == SQLITE_OK);
    exec_or_die(db, "PRAGMA encoding='UTF-16le'");
    exec_or_die(db, "PRAGMA journal_mode=MEMORY");
    exec_or_die(db, "CREATE TABLE t (a)");
    exec_or_die(db, "INSERT INTO t VALUES ('x')");
    sqlite3_close(db);
    std::string raw = testsup::slurp(p);
    CHECK_THROWS(SqliteDb::open(std::vector<uint8_t>(raw.begin(), raw.end())));
  }

  SECTION("without rowid table") {
    auto p = td.path / "worid.sqlite";
    sqlite3* db = nullptr;
    REQUIRE(sqlite3_open(p.string().c_str(), &db) == SQLITE_OK);
    exec_or_die(db, "PRAGMA journal_mode=MEMORY");
    exec_or_die(db, "CREATE TABLE t (k TEXT PRIMARY KEY, v) WITHOUT ROWID");
    exec_or_die(db, "INSERT INTO t VALUES ('a', 1)");
    sqlite3_close(db);
    std::string raw = testsup::slurp(p);
    bool rejected = false;
    try {
      auto mine = SqliteDb::open(std::vector<uint8_t>(raw.begin(), raw.end()));
      mine.read_table("t");
    } catch (const std::exception&) {
      rejected = true;
    }
    CHECK(rejected);
  }
}
