#pragma once

#include <memory>

#include "archfs/archive_source.hpp"
#include "archfs/cache.hpp"

namespace archfs {

// Cache-through decorator over any ArchiveSource. Blob bytes land in the
// blob store (subject to the admission limit), every metadata document in
// the metadata store as its canonical JSON, so previously visited objects
// stay navigable with the backend unreachable.
//
// Metadata keys: the canonical SWHID for object documents,
// "origin:<url>" for visit lists, "history:<swhid>" for ancestor lists.
class CachingArchive : public ArchiveSource {
public:
  CachingArchive(std::shared_ptr<ArchiveSource> inner,
                 std::shared_ptr<CacheStores> stores,
                 std::shared_ptr<DirentryCache> direntries);

  std::string get_blob(const Swhid &id) override;
  std::unique_ptr<DirectoryPager> list_directory(const Swhid &id) override;
  RevisionMeta get_revision(const Swhid &id) override;
  ReleaseMeta get_release(const Swhid &id) override;
  SnapshotBranches get_snapshot(const Swhid &id) override;
  std::vector<OriginVisit> get_origin_visits(const std::string &url) override;
  std::vector<std::string> search_origins(const std::string &pattern,
                                          int limit) override;
  std::vector<Swhid> history(const Swhid &id) override;

  // Full listing with direntry-cache participation; lookups use this.
  std::shared_ptr<const std::vector<DirEntry>> read_directory_cached(
      const Swhid &id);

  // Canonical metadata document for any object, as exposed by the virtual
  // "<swhid>.json" files. For cnt objects this is a small synthesized
  // {id, length} document.
  std::string metadata_document(const Swhid &id);

  CacheStores &stores() { return *stores_; }
  DirentryCache &direntries() { return *direntries_; }

  // Drops every cached record derived from this object. Returns true if
  // anything was removed.
  bool purge_object(const Swhid &id);

private:
  std::string cached_doc(const std::string &key, const std::string &path_hint);

  std::shared_ptr<ArchiveSource> inner_;
  std::shared_ptr<CacheStores> stores_;
  std::shared_ptr<DirentryCache> direntries_;
};

}  // namespace archfs
