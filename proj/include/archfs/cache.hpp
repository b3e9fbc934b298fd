#pragma once

#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "archfs/types.hpp"

struct sqlite3;

namespace archfs {

// One persistent cache: a single-file transactional key/value store
// (SQLite). Safe for concurrent readers and writers; every put commits
// before returning, so records survive a daemon restart or crash.
class KvStore {
public:
  explicit KvStore(const std::filesystem::path &file);
  ~KvStore();

  KvStore(const KvStore &) = delete;
  KvStore &operator=(const KvStore &) = delete;

  std::optional<std::string> get(const std::string &key);
  bool contains(const std::string &key);
  // inserted_at_ms defaults to the current wall clock. Re-putting an
  // existing key is a no-op: cached payloads are immutable by construction
  // (content addressing), which debug builds assert.
  void put(const std::string &key, std::string_view payload,
           int64_t inserted_at_ms = -1);
  bool erase(const std::string &key);
  size_t purge_all();
  size_t purge_before(int64_t cutoff_ms);
  std::vector<std::string> keys();
  size_t size();

private:
  void exec(const char *sql);
  sqlite3 *db_ = nullptr;
  std::mutex mu_;
};

// Blob + metadata caches living in one cache directory.
struct CacheStores {
  CacheStores(const std::filesystem::path &dir, size_t blob_size_limit);

  std::filesystem::path dir;
  size_t blob_size_limit;  // blobs above this are never cached
  KvStore blobs;           // key: cnt swhid -> raw bytes
  KvStore metadata;        // key: swhid | origin:<url> | history:<swhid>

  size_t purge_all();
  size_t purge_before(int64_t cutoff_ms);
};

// In-memory LRU of directory listings, so hot directories never touch
// SQLite. Internally synchronized.
class DirentryCache {
public:
  using Entries = std::shared_ptr<const std::vector<DirEntry>>;

  explicit DirentryCache(size_t capacity);

  Entries get(const std::string &key);
  void put(const std::string &key, Entries entries);
  void erase(const std::string &key);
  size_t size() const;

private:
  size_t capacity_;
  mutable std::mutex mu_;
  std::list<std::pair<std::string, Entries>> lru_;  // front = most recent
  std::unordered_map<std::string,
                     std::list<std::pair<std::string, Entries>>::iterator>
      index_;
};

}  // namespace archfs
