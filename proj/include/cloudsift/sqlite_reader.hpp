#pragma once

// Native reader for SQLite v3 database files. App caches frequently ship as
// SQLite stores; reading them without the library keeps the decoder usable on
// partial filesystem dumps and makes its output checkable against the stock
// library in tests.
//
// Supported: rollback-journal databases, UTF-8 text, rowid tables (including
// INTEGER PRIMARY KEY aliases), overflow chains, interior/leaf table b-trees.
// Rejected with distinct errors: WAL-mode files, UTF-16 encodings, and
// WITHOUT ROWID tables.

#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cloudsift/detail/bytes.hpp"

namespace cloudsift {

struct SqliteError : std::runtime_error {
  explicit SqliteError(const std::string& msg) : std::runtime_error(msg) {}
};

using SqliteValue =
    std::variant<std::nullptr_t, int64_t, double, std::string, std::vector<uint8_t>>;

struct SqliteTableData {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<SqliteValue>> rows;  // rowid order
};

namespace detail {

// Column list out of a CREATE TABLE statement. Tolerates quoted identifiers
// ("x", 'x', `x`, [x]), type names, column constraints, and trailing table
// constraints. Returns names plus the index of an INTEGER PRIMARY KEY column
// (rowid alias) when one is declared.
struct ParsedSchema {
  std::vector<std::string> columns;
  std::optional<size_t> ipk_column;
  bool without_rowid = false;
};

inline ParsedSchema parse_create_table(const std::string& sql) {
  ParsedSchema out;
  size_t open = sql.find('(');
  if (open == std::string::npos) throw SqliteError("CREATE TABLE without column list: " + sql);

  // matching close paren at depth 0
  size_t depth = 0, close = std::string::npos;
  char quote = 0;
  for (size_t i = open; i < sql.size(); ++i) {
    char c = sql[i];
    if (quote) {
      if (quote == '[' ? c == ']' : c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`' || c == '[') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) {
        close = i;
        break;
      }
    }
  }
  if (close == std::string::npos) throw SqliteError("unbalanced parens in CREATE TABLE: " + sql);

  std::string tail = sql.substr(close + 1);
  std::string tail_up;
  for (char c : tail) tail_up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (tail_up.find("WITHOUT") != std::string::npos && tail_up.find("ROWID") != std::string::npos)
    out.without_rowid = true;

  // split the body on top-level commas
  std::string body = sql.substr(open + 1, close - open - 1);
  std::vector<std::string> defs;
  std::string cur;
  depth = 0;
  quote = 0;
  for (char c : body) {
    if (quote) {
      cur.push_back(c);
      if (quote == '[' ? c == ']' : c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`' || c == '[') {
      quote = c;
      cur.push_back(c);
    } else if (c == '(') {
      ++depth;
      cur.push_back(c);
    } else if (c == ')') {
      --depth;
      cur.push_back(c);
    } else if (c == ',' && depth == 0) {
      defs.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) defs.push_back(cur);

  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };

  static const std::set<std::string> table_constraint_heads = {"PRIMARY", "UNIQUE", "CHECK",
                                                              "FOREIGN", "CONSTRAINT"};
  for (auto& raw : defs) {
    std::string def = trim(raw);
    if (def.empty()) continue;
    std::string name;
    size_t rest_at = 0;
    if (def[0] == '"' || def[0] == '\'' || def[0] == '`' || def[0] == '[') {
      char endq = def[0] == '[' ? ']' : def[0];
      size_t end = def.find(endq, 1);
      if (end == std::string::npos) throw SqliteError("unterminated identifier in: " + def);
      name = def.substr(1, end - 1);
      rest_at = end + 1;
    } else {
      size_t end = 0;
      while (end < def.size() && (std::isalnum(static_cast<unsigned char>(def[end])) ||
                                  def[end] == '_' || def[end] == '$'))
        ++end;
      name = def.substr(0, end);
      rest_at = end;
    }
    std::string head_up;
    for (char c : name) head_up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (table_constraint_heads.count(head_up)) continue;

    std::string rest_up;
    for (size_t i = rest_at; i < def.size(); ++i)
      rest_up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(def[i]))));
    // rowid alias requires the declared type INTEGER and a column-level
    // PRIMARY KEY without DESC ordering
    if (rest_up.find("PRIMARY") != std::string::npos && rest_up.find("KEY") != std::string::npos &&
        rest_up.find("DESC") == std::string::npos) {
      size_t tpos = rest_up.find_first_not_of(" \t\r\n");
      if (tpos != std::string::npos && rest_up.compare(tpos, 7, "INTEGER") == 0) {
        size_t after = tpos + 7;
        if (after >= rest_up.size() || !std::isalnum(static_cast<unsigned char>(rest_up[after])))
          out.ipk_column = out.columns.size();
      }
    }
    out.columns.push_back(name);
  }
  if (out.columns.empty()) throw SqliteError("no columns found in CREATE TABLE: " + sql);
  return out;
}

}  // namespace detail

class SqliteDb {
 public:
  static SqliteDb open(std::vector<uint8_t> bytes) {
    SqliteDb db;
    db.bytes_ = std::move(bytes);
    db.parse_header();
    db.load_master();
    return db;
  }

  std::vector<std::string> table_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : tables_) out.push_back(name);
    return out;
  }

  bool has_table(const std::string& name) const { return tables_.count(name) != 0; }

  const std::string& create_sql(const std::string& name) const {
    return master_entry(name).sql;
  }

  SqliteTableData read_table(const std::string& name) const {
    const MasterEntry& me = master_entry(name);
    detail::ParsedSchema schema = detail::parse_create_table(me.sql);
    if (schema.without_rowid)
      throw SqliteError("WITHOUT ROWID table not supported: " + name);
    SqliteTableData out;
    out.name = name;
    out.columns = schema.columns;
    walk_table(me.rootpage, [&](int64_t rowid, std::span<const uint8_t> record) {
      std::vector<SqliteValue> row = decode_record(record);
      if (row.size() < out.columns.size()) row.resize(out.columns.size());  // added columns
      row.resize(out.columns.size());
      if (schema.ipk_column && *schema.ipk_column < row.size())
        row[*schema.ipk_column] = rowid;
      out.rows.push_back(std::move(row));
    });
    return out;
  }

  uint32_t page_size() const { return page_size_; }

 private:
  struct MasterEntry {
    uint32_t rootpage = 0;
    std::string sql;
  };

  void parse_header() {
    static const char magic[] = "SQLite format 3";
    if (bytes_.size() < 100 || std::memcmp(bytes_.data(), magic, 16) != 0)
      throw SqliteError("not an SQLite v3 database");
    uint32_t ps = detail::read_be16(bytes_.data() + 16);
    page_size_ = ps == 1 ? 65536 : ps;
    if (page_size_ < 512 || (page_size_ & (page_size_ - 1)) != 0)
      throw SqliteError("invalid page size");
    uint8_t read_version = bytes_[19];
    if (read_version == 2)
      throw SqliteError("WAL-mode database: apply the -wal checkpoint before reading");
    if (read_version != 1) throw SqliteError("unknown file read version");
    reserved_ = bytes_[20];
    usable_ = page_size_ - reserved_;
    if (usable_ < 480) throw SqliteError("usable page size too small");
    uint32_t enc = detail::read_be32(bytes_.data() + 56);
    if (enc == 2 || enc == 3)
      throw SqliteError("UTF-16 text encoding not supported; re-encode as UTF-8");
    if (enc != 1 && enc != 0) throw SqliteError("unknown text encoding");
    npages_ = static_cast<uint32_t>(bytes_.size() / page_size_);
    if (npages_ == 0) throw SqliteError("truncated database file");
  }

  std::span<const uint8_t> page(uint32_t pgno) const {
    if (pgno == 0 || pgno > npages_) throw SqliteError("page number out of range");
    return {bytes_.data() + size_t(pgno - 1) * page_size_, page_size_};
  }

  // Table b-tree walk in key order; emits (rowid, full payload).
  template <typename Fn>
  void walk_table(uint32_t rootpage, Fn&& fn) const {
    std::set<uint32_t> visited;
    walk_page(rootpage, fn, visited);
  }

  template <typename Fn>
  void walk_page(uint32_t pgno, Fn&& fn, std::set<uint32_t>& visited) const {
    if (!visited.insert(pgno).second) throw SqliteError("cycle in b-tree pages");
    std::span<const uint8_t> pg = page(pgno);
    size_t hdr = pgno == 1 ? 100 : 0;
    uint8_t type = pg[hdr];
    if (type == 0x05) {
      uint16_t ncells = detail::read_be16(pg.data() + hdr + 3);
      uint32_t right = detail::read_be32(pg.data() + hdr + 8);
      size_t ptrs = hdr + 12;
      for (uint16_t i = 0; i < ncells; ++i) {
        size_t cell = detail::read_be16(pg.data() + ptrs + i * 2);
        if (cell + 4 > pg.size()) throw SqliteError("cell pointer out of range");
        walk_page(detail::read_be32(pg.data() + cell), fn, visited);
      }
      walk_page(right, fn, visited);
    } else if (type == 0x0d) {
      uint16_t ncells = detail::read_be16(pg.data() + hdr + 3);
      size_t ptrs = hdr + 8;
      for (uint16_t i = 0; i < ncells; ++i) {
        size_t cell = detail::read_be16(pg.data() + ptrs + i * 2);
        read_leaf_cell(pg, cell, fn);
      }
    } else {
      throw SqliteError("unexpected page type in table b-tree");
    }
  }

  template <typename Fn>
  void read_leaf_cell(std::span<const uint8_t> pg, size_t cell, Fn&& fn) const {
    size_t pos = cell;
    auto payload_len = detail::read_varint(pg, &pos);
    auto rowid = detail::read_varint(pg, &pos);
    if (!payload_len || !rowid) throw SqliteError("bad varint in leaf cell");
    uint64_t P = *payload_len;
    uint64_t U = usable_;
    uint64_t X = U - 35;
    if (P <= X) {
      if (pos + P > pg.size()) throw SqliteError("payload exceeds page");
      fn(static_cast<int64_t>(*rowid), pg.subspan(pos, P));
      return;
    }
    // spilled payload: K bytes local, remainder on an overflow chain
    uint64_t M = (U - 12) * 32 / 255 - 23;
    uint64_t K = M + (P - M) % (U - 4);
    uint64_t local = K <= X ? K : M;
    if (pos + local + 4 > pg.size()) throw SqliteError("spilled payload exceeds page");
    std::vector<uint8_t> payload;
    payload.reserve(P);
    payload.insert(payload.end(), pg.begin() + pos, pg.begin() + pos + local);
    uint32_t next = detail::read_be32(pg.data() + pos + local);
    std::set<uint32_t> seen;
    while (payload.size() < P) {
      if (next == 0) throw SqliteError("overflow chain ended early");
      if (!seen.insert(next).second) throw SqliteError("cycle in overflow chain");
      std::span<const uint8_t> opg = page(next);
      next = detail::read_be32(opg.data());
      uint64_t take = std::min<uint64_t>(usable_ - 4, P - payload.size());
      payload.insert(payload.end(), opg.begin() + 4, opg.begin() + 4 + take);
    }
    fn(static_cast<int64_t>(*rowid), std::span<const uint8_t>(payload));
  }

  std::vector<SqliteValue> decode_record(std::span<const uint8_t> rec) const {
    size_t pos = 0;
    auto hdr_len = detail::read_varint(rec, &pos);
    if (!hdr_len || *hdr_len > rec.size()) throw SqliteError("bad record header length");
    std::vector<uint64_t> serials;
    while (pos < *hdr_len) {
      auto st = detail::read_varint(rec, &pos);
      if (!st) throw SqliteError("bad serial type varint");
      serials.push_back(*st);
    }
    if (pos != *hdr_len) throw SqliteError("record header length mismatch");
    std::vector<SqliteValue> row;
    row.reserve(serials.size());
    size_t data = *hdr_len;
    for (uint64_t st : serials) {
      switch (st) {
        case 0: row.emplace_back(nullptr); break;
        case 1: row.emplace_back(read_int(rec, data, 1)); break;
        case 2: row.emplace_back(read_int(rec, data, 2)); break;
        case 3: row.emplace_back(read_int(rec, data, 3)); break;
        case 4: row.emplace_back(read_int(rec, data, 4)); break;
        case 5: row.emplace_back(read_int(rec, data, 6)); break;
        case 6: row.emplace_back(read_int(rec, data, 8)); break;
        case 7: {
          if (data + 8 > rec.size()) throw SqliteError("float past record end");
          uint64_t raw = 0;
          for (int i = 0; i < 8; ++i) raw = (raw << 8) | rec[data + i];
          double d;
          std::memcpy(&d, &raw, 8);
          row.emplace_back(d);
          data += 8;
          break;
        }
        case 8: row.emplace_back(int64_t{0}); break;
        case 9: row.emplace_back(int64_t{1}); break;
        case 10:
        case 11: throw SqliteError("reserved serial type in record");
        default: {
          uint64_t n = (st - (st % 2 == 0 ? 12 : 13)) / 2;
          if (data + n > rec.size()) throw SqliteError("value past record end");
          if (st % 2 == 0) {
            row.emplace_back(std::vector<uint8_t>(rec.begin() + data, rec.begin() + data + n));
          } else {
            row.emplace_back(std::string(rec.begin() + data, rec.begin() + data + n));
          }
          data += n;
        }
      }
    }
    return row;
  }

  int64_t read_int(std::span<const uint8_t> rec, size_t& data, unsigned n) const {
    if (data + n > rec.size()) throw SqliteError("integer past record end");
    // sign-extend from the top bit of the first byte
    int64_t v = static_cast<int8_t>(rec[data]);
    for (unsigned i = 1; i < n; ++i) v = (v << 8) | rec[data + i];
    data += n;
    return v;
  }

  void load_master() {
    // sqlite_master: (type, name, tbl_name, rootpage, sql) rooted at page 1
    walk_table(1, [&](int64_t, std::span<const uint8_t> record) {
      std::vector<SqliteValue> row = decode_record(record);
      if (row.size() < 5) return;
      const auto* type = std::get_if<std::string>(&row[0]);
      const auto* name = std::get_if<std::string>(&row[1]);
      const auto* root = std::get_if<int64_t>(&row[3]);
      const auto* sql = std::get_if<std::string>(&row[4]);
      if (!type || *type != "table" || !name || !root || !sql) return;
      tables_[*name] = MasterEntry{static_cast<uint32_t>(*root), *sql};
    });
  }

  const MasterEntry& master_entry(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw SqliteError("no such table: " + name);
    return it->second;
  }

  std::vector<uint8_t> bytes_;
  uint32_t page_size_ = 0;
  uint32_t usable_ = 0;
  uint32_t npages_ = 0;
  uint8_t reserved_ = 0;
  std::map<std::string, MasterEntry> tables_;
};

}  // namespace cloudsift
