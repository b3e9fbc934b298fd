#pragma once

#include <memory>
#include <string>
#include <vector>

#include "archfs/types.hpp"

namespace archfs {

// Pull iterator over one paginated directory listing.
class DirectoryPager {
public:
  virtual ~DirectoryPager() = default;
  // Appends the next page of entries to `out`; false when exhausted.
  virtual bool next_page(std::vector<DirEntry> &out) = 0;
};

// The archive operations the filesystem is built on. Implemented by the
// HTTP client, by the caching decorator, and by test stubs.
class ArchiveSource {
public:
  virtual ~ArchiveSource() = default;

  virtual std::string get_blob(const Swhid &id) = 0;
  virtual std::unique_ptr<DirectoryPager> list_directory(const Swhid &id) = 0;
  virtual RevisionMeta get_revision(const Swhid &id) = 0;
  virtual ReleaseMeta get_release(const Swhid &id) = 0;
  virtual SnapshotBranches get_snapshot(const Swhid &id) = 0;
  virtual std::vector<OriginVisit> get_origin_visits(const std::string &url) = 0;
  virtual std::vector<std::string> search_origins(const std::string &pattern,
                                                  int limit) = 0;
  // Every revision reachable from `id` via parent edges, excluding `id`,
  // in history order (see history.hpp).
  virtual std::vector<Swhid> history(const Swhid &id) = 0;

  // Convenience: drains list_directory.
  std::vector<DirEntry> read_directory(const Swhid &id);
};

}  // namespace archfs
