#pragma once

#include <chrono>
#include <memory>

#include "archfs/archive_source.hpp"

namespace archfs {

struct ClientOptions {
  std::string base_url;  // e.g. "http://127.0.0.1:8000/api/1"
  std::string auth_token;  // attached as "Authorization: Bearer <token>"
  int retries = 3;  // extra attempts on transport errors / 429
  std::chrono::milliseconds backoff_base{100};
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds request_timeout{30000};
  int pool_size = 8;  // persistent connections kept to the backend
};

// Typed client for the archive REST protocol (docs/protocol.md).
// Shareable across threads: requests are dispatched over a bounded pool of
// persistent HTTP connections, so one slow transfer does not stall
// unrelated operations.
class HttpArchiveClient : public ArchiveSource {
public:
  explicit HttpArchiveClient(ClientOptions opts);
  ~HttpArchiveClient() override;

  std::string get_blob(const Swhid &id) override;
  std::unique_ptr<DirectoryPager> list_directory(const Swhid &id) override;
  RevisionMeta get_revision(const Swhid &id) override;
  ReleaseMeta get_release(const Swhid &id) override;
  SnapshotBranches get_snapshot(const Swhid &id) override;
  std::vector<OriginVisit> get_origin_visits(const std::string &url) override;
  std::vector<std::string> search_origins(const std::string &pattern,
                                          int limit) override;
  std::vector<Swhid> history(const Swhid &id) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// An ArchiveSource whose every operation fails with Transport. Stands in
// for the network when exercising offline behavior.
class OfflineSource : public ArchiveSource {
public:
  std::string get_blob(const Swhid &) override { fail(); }
  std::unique_ptr<DirectoryPager> list_directory(const Swhid &) override {
    fail();
  }
  RevisionMeta get_revision(const Swhid &) override { fail(); }
  ReleaseMeta get_release(const Swhid &) override { fail(); }
  SnapshotBranches get_snapshot(const Swhid &) override { fail(); }
  std::vector<OriginVisit> get_origin_visits(const std::string &) override {
    fail();
  }
  std::vector<std::string> search_origins(const std::string &, int) override {
    fail();
  }
  std::vector<Swhid> history(const Swhid &) override { fail(); }

private:
  [[noreturn]] static void fail();
};

}  // namespace archfs
