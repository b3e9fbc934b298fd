#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "archfs/fixture.hpp"

namespace archfs {

enum class Endpoint {
  ContentRaw,
  Directory,
  Revision,
  Release,
  Snapshot,
  OriginVisits,
  Search,
  Graph,
};

struct RequestRecord {
  Endpoint endpoint;
  std::string path;
  std::chrono::steady_clock::time_point at;
};

struct MockOptions {
  size_t page_size = 1000;       // directory/snapshot page size
  bool graph_enabled = true;     // serve /graph/visit/nodes
  std::string required_token;    // when set, requests must carry it
};

// Hermetic archive server speaking the protocol in docs/protocol.md over a
// FixtureArchive. Thread-safe; serves concurrent requests.
class MockArchiveServer {
public:
  explicit MockArchiveServer(FixtureArchive archive, MockOptions opts = {});
  ~MockArchiveServer();

  MockArchiveServer(const MockArchiveServer &) = delete;
  MockArchiveServer &operator=(const MockArchiveServer &) = delete;

  std::string base_url() const;  // http://127.0.0.1:<port>/api/1
  int port() const { return port_; }
  void stop();

  const FixtureArchive &archive() const;

  // Fault injection.
  void set_delay(Endpoint ep, std::chrono::milliseconds d);
  // The next `count` requests to `ep` answer `status` instead; 429 responses
  // carry a Retry-After header of retry_after_s seconds.
  void fail_next(Endpoint ep, int count, int status, int retry_after_s = 0);

  // Request log, for timeline assertions in tests.
  std::vector<RequestRecord> log() const;
  size_t count(Endpoint ep) const;
  void clear_log();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace archfs
