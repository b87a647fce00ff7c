#include <sqlite3.h>

#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evkg/error.hpp"
#include "evkg/ids.hpp"
#include "evkg/store.hpp"

namespace evkg {

namespace {

using json = nlohmann::json;

std::string weight_column(size_t type_index) {
  std::string col = "w_";
  for (char c : std::string(kRelTypeNames[type_index])) {
    if (c == '-') c = '_';
    col += (char)std::tolower((unsigned char)c);
  }
  return col;
}

class Db {
 public:
  explicit Db(const std::string& path, bool writable) {
    int flags = writable ? SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE
                         : SQLITE_OPEN_READONLY;
    if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error("sqlite open " + path + ": " + msg);
    }
  }
  ~Db() { sqlite3_close(db_); }
  Db(const Db&) = delete;
  Db& operator=(const Db&) = delete;

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error("sqlite exec: " + msg);
    }
  }

  sqlite3* get() { return db_; }

 private:
  sqlite3* db_ = nullptr;
};

class Stmt {
 public:
  Stmt(Db& db, const std::string& sql) : db_(db.get()) {
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
      throw Error(std::string("sqlite prepare: ") + sqlite3_errmsg(db_));
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  void bind(int i, const std::string& s) {
    check(sqlite3_bind_text(stmt_, i, s.c_str(), (int)s.size(),
                            SQLITE_TRANSIENT));
  }
  void bind(int i, double v) { check(sqlite3_bind_double(stmt_, i, v)); }

  // True while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }
  void run() {
    if (step()) throw Error("sqlite statement returned unexpected rows");
    reset();
  }
  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  std::string text(int col) {
    const unsigned char* p = sqlite3_column_text(stmt_, col);
    return p ? (const char*)p : "";
  }
  double real(int col) { return sqlite3_column_double(stmt_, col); }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK)
      throw Error(std::string("sqlite bind: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_ = nullptr;
  sqlite3_stmt* stmt_ = nullptr;
};

std::string strings_json(const std::vector<std::string>& v) {
  return json(v).dump();
}

std::vector<std::string> strings_from_json(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& e : json::parse(s)) out.push_back(e.get<std::string>());
  return out;
}

}  // namespace

void save_sqlite(const KgStore& store, const std::string& path) {
  std::string tmp = path + ".tmp";
  std::filesystem::remove(tmp);
  {
    Db db(tmp, /*writable=*/true);

    std::string rel_params;
    for (size_t i = 0; i < (size_t)kRelTypeCount; ++i) rel_params += ", ?";
    db.exec(
        "CREATE TABLE Eventualities ("
        "eid TEXT PRIMARY KEY, pattern TEXT NOT NULL, canonical TEXT NOT NULL,"
        "verbs TEXT NOT NULL, skeleton TEXT NOT NULL, skel TEXT NOT NULL,"
        "words TEXT NOT NULL, pos TEXT NOT NULL, ner TEXT NOT NULL,"
        "deps TEXT NOT NULL, frequency REAL NOT NULL);");
    db.exec(
        "CREATE TABLE Concepts ("
        "cid TEXT PRIMARY KEY, words TEXT NOT NULL, pattern TEXT NOT NULL,"
        "weight REAL NOT NULL, instances TEXT NOT NULL);");
    std::string rel_schema =
        "CREATE TABLE Relations ("
        "rid TEXT PRIMARY KEY, head TEXT NOT NULL, tail TEXT NOT NULL,"
        "head_kind TEXT NOT NULL, tail_kind TEXT NOT NULL";
    for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
      rel_schema += ", " + weight_column(i) + " REAL NOT NULL DEFAULT 0";
    rel_schema += ");";
    db.exec(rel_schema);

    db.exec("BEGIN;");

    Stmt ev(db,
            "INSERT INTO Eventualities (eid, pattern, canonical, verbs, "
            "skeleton, skel, words, pos, ner, deps, frequency) "
            "VALUES (?,?,?,?,?,?,?,?,?,?,?);");
    for (const auto& [eid, rec] : store.eventualities()) {
      json deps = json::array();
      for (const auto& d : rec.deps)
        deps.push_back(json::array({d[0], d[1], d[2]}));
      ev.bind(1, rec.eid);
      ev.bind(2, rec.pattern);
      ev.bind(3, rec.canonical);
      ev.bind(4, strings_json(rec.verbs));
      ev.bind(5, strings_json(rec.skeleton));
      ev.bind(6, json(rec.skel).dump());
      ev.bind(7, strings_json(rec.words));
      ev.bind(8, strings_json(rec.pos));
      ev.bind(9, strings_json(rec.ner));
      ev.bind(10, deps.dump());
      ev.bind(11, rec.frequency);
      ev.run();
    }

    Stmt co(db,
            "INSERT INTO Concepts (cid, words, pattern, weight, instances) "
            "VALUES (?,?,?,?,?);");
    for (const auto& [cid, rec] : store.concepts()) {
      json insts = json::array();
      for (const auto& [eid, prob] : rec.instances)
        insts.push_back(json::array({eid, prob}));
      co.bind(1, rec.cid);
      co.bind(2, strings_json(rec.words));
      co.bind(3, rec.pattern);
      co.bind(4, rec.weight);
      co.bind(5, insts.dump());
      co.run();
    }

    std::string rel_sql =
        "INSERT INTO Relations (rid, head, tail, head_kind, tail_kind";
    for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
      rel_sql += ", " + weight_column(i);
    rel_sql += ") VALUES (?,?,?,?,?" + rel_params + ");";
    Stmt re(db, rel_sql);
    for (const auto& [rid, rec] : store.relations()) {
      re.bind(1, rec.rid);
      re.bind(2, rec.head_id);
      re.bind(3, rec.tail_id);
      re.bind(4, std::string(1, node_kind_code(rec.head_kind)));
      re.bind(5, std::string(1, node_kind_code(rec.tail_kind)));
      for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
        re.bind(6 + (int)i, rec.weights[i]);
      re.run();
    }

    db.exec("COMMIT;");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("rename " + tmp + " -> " + path + ": " + ec.message());
}

KgStore load_sqlite(const std::string& path) {
  if (!std::filesystem::exists(path)) throw Error("no such file: " + path);
  Db db(path, /*writable=*/false);
  KgStore store;

  Stmt ev(db,
          "SELECT eid, pattern, canonical, verbs, skeleton, skel, words, pos,"
          " ner, deps, frequency FROM Eventualities ORDER BY eid;");
  while (ev.step()) {
    EventualityRecord rec;
    rec.eid = ev.text(0);
    rec.pattern = ev.text(1);
    rec.canonical = ev.text(2);
    rec.verbs = strings_from_json(ev.text(3));
    rec.skeleton = strings_from_json(ev.text(4));
    for (const auto& v : json::parse(ev.text(5)))
      rec.skel.push_back(v.get<int>());
    rec.words = strings_from_json(ev.text(6));
    rec.pos = strings_from_json(ev.text(7));
    rec.ner = strings_from_json(ev.text(8));
    for (const auto& d : json::parse(ev.text(9)))
      rec.deps.push_back({d.at(0).get<std::string>(),
                          d.at(1).get<std::string>(),
                          d.at(2).get<std::string>()});
    rec.frequency = ev.real(10);
    store.upsert_eventuality_record(rec);
  }

  Stmt co(db,
          "SELECT cid, words, pattern, weight, instances FROM Concepts "
          "ORDER BY cid;");
  while (co.step()) {
    ConceptRecord rec;
    rec.cid = co.text(0);
    rec.words = strings_from_json(co.text(1));
    rec.pattern = co.text(2);
    rec.weight = co.real(3);
    for (const auto& inst : json::parse(co.text(4)))
      rec.instances[inst.at(0).get<std::string>()] = inst.at(1).get<double>();
    store.upsert_concept_record(rec);
  }

  std::string rel_sql = "SELECT rid, head, tail, head_kind, tail_kind";
  for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
    rel_sql += ", " + weight_column(i);
  rel_sql += " FROM Relations ORDER BY rid;";
  Stmt re(db, rel_sql);
  while (re.step()) {
    RelationRecord rec;
    rec.rid = re.text(0);
    rec.head_id = re.text(1);
    rec.tail_id = re.text(2);
    rec.head_kind = node_kind_from_code(re.text(3).at(0));
    rec.tail_kind = node_kind_from_code(re.text(4).at(0));
    for (size_t i = 0; i < (size_t)kRelTypeCount; ++i)
      rec.weights[i] = re.real(5 + (int)i);
    if (rec.rid != rid_of(rec.head_id, rec.tail_id))
      throw Error("rid does not match endpoints for " + rec.rid);
    store.upsert_relation_record(rec);
  }
  return store;
}

}  // namespace evkg
