#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <random>

#include "archfs/cache.hpp"

using namespace archfs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("archfs-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("put then get returns identical bytes; fresh cache misses") {
  TempDir tmp;
  KvStore store(tmp.path / "x.db");
  CHECK(!store.get("swh:1:cnt:" + std::string(40, 'a')).has_value());
  std::string payload = std::string("bytes\0with\0nul", 14);
  store.put("k1", payload);
  auto back = store.get("k1");
  REQUIRE(back.has_value());
  CHECK(*back == payload);
}

TEST_CASE("records survive reopening the same file") {
  TempDir tmp;
  {
    KvStore store(tmp.path / "x.db");
    store.put("persist", "still here");
  }
  KvStore store(tmp.path / "x.db");
  CHECK(store.get("persist") == std::string("still here"));
}

TEST_CASE("re-putting a key is a no-op") {
  TempDir tmp;
  KvStore store(tmp.path / "x.db");
  store.put("k", "same", 100);
  store.put("k", "same", 200);
  CHECK(store.get("k") == std::string("same"));
  CHECK(store.size() == 1);
  // the original insertion time is kept: purge_before(150) removes it
  CHECK(store.purge_before(150) == 1);
}

TEST_CASE("1000 random payloads round-trip byte-identical") {
  TempDir tmp;
  KvStore store(tmp.path / "x.db");
  std::mt19937_64 rng(77);
  std::map<std::string, std::string> model;
  for (int i = 0; i < 1000; ++i) {
    std::string key = "key-" + std::to_string(i);
    std::string payload;
    size_t len = rng() % 512;
    for (size_t k = 0; k < len; ++k) payload += char(rng() % 256);
    store.put(key, payload);
    model[key] = payload;
  }
  for (const auto &[k, v] : model) {
    auto got = store.get(k);
    REQUIRE(got.has_value());
    REQUIRE(*got == v);
  }
  CHECK(store.size() == 1000);
}

TEST_CASE("purge(all) and purge(before) behave like the timestamp oracle") {
  TempDir tmp;
  KvStore store(tmp.path / "x.db");
  std::map<std::string, int64_t> inserted;
  for (int i = 0; i < 50; ++i) {
    std::string key = "k" + std::to_string(i);
    store.put(key, "v", 1000 + i * 10);
    inserted[key] = 1000 + i * 10;
  }
  int64_t cutoff = 1230;
  size_t expect = 0;
  for (const auto &[k, t] : inserted) {
    if (t < cutoff) ++expect;
  }
  CHECK(store.purge_before(cutoff) == expect);
  for (const auto &[k, t] : inserted) {
    CHECK(store.get(k).has_value() == (t >= cutoff));
  }
  CHECK(store.purge_all() == 50 - expect);
  CHECK(store.size() == 0);
  CHECK(store.purge_all() == 0);  // purging an empty cache removes nothing
}

TEST_CASE("large payloads are accepted") {
  TempDir tmp;
  KvStore store(tmp.path / "big.db");
  std::string big(8 << 20, 'x');  // 8 MiB keeps the test quick
  store.put("big", big);
  auto back = store.get("big");
  REQUIRE(back.has_value());
  CHECK(back->size() == big.size());
}

TEST_CASE("direntry LRU: capacity bound and eviction order") {
  DirentryCache cache(3);
  auto entries = [](const std::string &name) {
    return std::make_shared<const std::vector<DirEntry>>(
        std::vector<DirEntry>{{name,
                               *Swhid::parse("swh:1:cnt:" + std::string(40, 'e')),
                               EntryPerm::File}});
  };
  cache.put("a", entries("a"));
  cache.put("b", entries("b"));
  cache.put("c", entries("c"));
  CHECK(cache.get("a") != nullptr);  // refresh a; b is now oldest
  cache.put("d", entries("d"));      // evicts b
  CHECK(cache.get("b") == nullptr);
  CHECK(cache.get("a") != nullptr);
  CHECK(cache.get("c") != nullptr);
  CHECK(cache.get("d") != nullptr);
  CHECK(cache.size() == 3);
}

TEST_CASE("direntry LRU: randomized ops match a model map") {
  // With capacity larger than the key universe, the cache must behave
  // exactly like a plain map: eviction never corrupts other keys.
  DirentryCache cache(64);
  std::map<std::string, std::string> model;  // key -> first entry name
  std::mt19937_64 rng(5);
  for (int step = 0; step < 5000; ++step) {
    std::string key = "k" + std::to_string(rng() % 40);
    if (rng() % 2) {
      std::string name = "n" + std::to_string(rng() % 1000);
      cache.put(key, std::make_shared<const std::vector<DirEntry>>(
                         std::vector<DirEntry>{
                             {name,
                              *Swhid::parse("swh:1:cnt:" + std::string(40, 'f')),
                              EntryPerm::File}}));
      model[key] = name;
    } else {
      auto got = cache.get(key);
      auto expect = model.find(key);
      if (expect == model.end()) {
        REQUIRE(got == nullptr);
      } else {
        REQUIRE(got != nullptr);
        REQUIRE(got->at(0).name == expect->second);
      }
    }
  }
}
