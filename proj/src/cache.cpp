#include "archfs/cache.hpp"

#include <sqlite3.h>

#include <cassert>
#include <chrono>

#include "archfs/error.hpp"

namespace archfs {

namespace {

int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

[[noreturn]] void storage_error(sqlite3 *db, const std::string &what) {
  std::string msg = what;
  if (db) {
    msg += ": ";
    msg += sqlite3_errmsg(db);
  }
  throw ArchiveError(ErrorKind::Storage, msg);
}

// Small RAII wrapper over sqlite3_stmt.
class Stmt {
public:
  Stmt(sqlite3 *db, const char *sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      storage_error(db, "prepare failed");
    }
  }
  ~Stmt() { sqlite3_finalize(stmt_); }

  Stmt &bind_text(int i, const std::string &s) {
    sqlite3_bind_text(stmt_, i, s.data(), int(s.size()), SQLITE_STATIC);
    return *this;
  }
  Stmt &bind_blob(int i, std::string_view b) {
    sqlite3_bind_blob64(stmt_, i, b.data(), b.size(), SQLITE_STATIC);
    return *this;
  }
  Stmt &bind_int(int i, int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  // Returns true while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    storage_error(db_, "step failed");
  }
  std::string column_bytes(int i) {
    const void *p = sqlite3_column_blob(stmt_, i);
    int n = sqlite3_column_bytes(stmt_, i);
    return std::string(static_cast<const char *>(p), size_t(n));
  }
  std::string column_text(int i) {
    const unsigned char *p = sqlite3_column_text(stmt_, i);
    int n = sqlite3_column_bytes(stmt_, i);
    return std::string(reinterpret_cast<const char *>(p), size_t(n));
  }
  int64_t column_int(int i) { return sqlite3_column_int64(stmt_, i); }

private:
  sqlite3 *db_;
  sqlite3_stmt *stmt_ = nullptr;
};

}  // namespace

KvStore::KvStore(const std::filesystem::path &file) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  int rc = sqlite3_open_v2(
      file.c_str(), &db_,
      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
      nullptr);
  if (rc != SQLITE_OK) storage_error(db_, "cannot open " + file.string());
  sqlite3_busy_timeout(db_, 10000);
  exec("PRAGMA journal_mode=WAL");
  exec("PRAGMA synchronous=NORMAL");
  exec(
      "CREATE TABLE IF NOT EXISTS records ("
      "  key TEXT PRIMARY KEY,"
      "  payload BLOB NOT NULL,"
      "  length INTEGER NOT NULL,"
      "  inserted_at INTEGER NOT NULL)");
}

KvStore::~KvStore() {
  if (db_) sqlite3_close(db_);
}

void KvStore::exec(const char *sql) {
  char *err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "exec failed";
    sqlite3_free(err);
    throw ArchiveError(ErrorKind::Storage, msg);
  }
}

std::optional<std::string> KvStore::get(const std::string &key) {
  std::lock_guard lk(mu_);
  Stmt st(db_, "SELECT payload, length FROM records WHERE key = ?1");
  st.bind_text(1, key);
  if (!st.step()) return std::nullopt;
  std::string payload = st.column_bytes(0);
  if (int64_t(payload.size()) != st.column_int(1)) {
    throw ArchiveError(ErrorKind::Storage, "length mismatch reading " + key);
  }
  return payload;
}

bool KvStore::contains(const std::string &key) {
  std::lock_guard lk(mu_);
  Stmt st(db_, "SELECT 1 FROM records WHERE key = ?1");
  st.bind_text(1, key);
  return st.step();
}

void KvStore::put(const std::string &key, std::string_view payload,
                  int64_t inserted_at_ms) {
#ifndef NDEBUG
  if (auto existing = get(key)) {
    assert(*existing == payload && "immutable cache record rewritten");
  }
#endif
  std::lock_guard lk(mu_);
  Stmt st(db_,
          "INSERT INTO records (key, payload, length, inserted_at) "
          "VALUES (?1, ?2, ?3, ?4) ON CONFLICT(key) DO NOTHING");
  st.bind_text(1, key)
      .bind_blob(2, payload)
      .bind_int(3, int64_t(payload.size()))
      .bind_int(4, inserted_at_ms >= 0 ? inserted_at_ms : now_ms());
  st.step();
}

bool KvStore::erase(const std::string &key) {
  std::lock_guard lk(mu_);
  Stmt st(db_, "DELETE FROM records WHERE key = ?1");
  st.bind_text(1, key);
  st.step();
  return sqlite3_changes(db_) > 0;
}

size_t KvStore::purge_all() {
  std::lock_guard lk(mu_);
  Stmt st(db_, "DELETE FROM records");
  st.step();
  return size_t(sqlite3_changes(db_));
}

size_t KvStore::purge_before(int64_t cutoff_ms) {
  std::lock_guard lk(mu_);
  Stmt st(db_, "DELETE FROM records WHERE inserted_at < ?1");
  st.bind_int(1, cutoff_ms);
  st.step();
  return size_t(sqlite3_changes(db_));
}

std::vector<std::string> KvStore::keys() {
  std::lock_guard lk(mu_);
  Stmt st(db_, "SELECT key FROM records ORDER BY key");
  std::vector<std::string> out;
  while (st.step()) out.push_back(st.column_text(0));
  return out;
}

size_t KvStore::size() {
  std::lock_guard lk(mu_);
  Stmt st(db_, "SELECT COUNT(*) FROM records");
  st.step();
  return size_t(st.column_int(0));
}

CacheStores::CacheStores(const std::filesystem::path &d, size_t limit)
    : dir(d),
      blob_size_limit(limit),
      blobs(d / "blobs.db"),
      metadata(d / "metadata.db") {}

size_t CacheStores::purge_all() {
  return blobs.purge_all() + metadata.purge_all();
}

size_t CacheStores::purge_before(int64_t cutoff_ms) {
  return blobs.purge_before(cutoff_ms) + metadata.purge_before(cutoff_ms);
}

DirentryCache::DirentryCache(size_t capacity)
    : capacity_(capacity ? capacity : 1) {}

DirentryCache::Entries DirentryCache::get(const std::string &key) {
  std::lock_guard lk(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return lru_.front().second;
}

void DirentryCache::put(const std::string &key, Entries entries) {
  std::lock_guard lk(mu_);
  auto it = index_.find(key);
  if (it != index_.end()) {
    it->second->second = std::move(entries);
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  lru_.emplace_front(key, std::move(entries));
  index_[key] = lru_.begin();
  if (lru_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
}

void DirentryCache::erase(const std::string &key) {
  std::lock_guard lk(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return;
  lru_.erase(it->second);
  index_.erase(it);
}

size_t DirentryCache::size() const {
  std::lock_guard lk(mu_);
  return lru_.size();
}

}  // namespace archfs
