#include "archfs/caching_archive.hpp"

#include "archfs/codec.hpp"
#include "archfs/error.hpp"

namespace archfs {

namespace {

json parse_doc(const std::string &bytes, const std::string &key) {
  try {
    return json::parse(bytes);
  } catch (const json::exception &e) {
    throw ArchiveError(ErrorKind::Storage,
                       "corrupt cached document " + key + ": " + e.what());
  }
}

// Streams entries from the inner pager and commits the full listing to the
// caches once (and only once) the last page has been seen.
class CachingPager : public DirectoryPager {
public:
  CachingPager(CachingArchive &outer, std::unique_ptr<DirectoryPager> inner,
               Swhid id, CacheStores &stores, DirentryCache &direntries)
      : outer_(outer),
        inner_(std::move(inner)),
        id_(std::move(id)),
        stores_(stores),
        direntries_(direntries) {}

  bool next_page(std::vector<DirEntry> &out) override {
    std::vector<DirEntry> page;
    if (!inner_->next_page(page)) {
      if (!committed_) {
        commit();
        committed_ = true;
      }
      return false;
    }
    seen_.insert(seen_.end(), page.begin(), page.end());
    out.insert(out.end(), page.begin(), page.end());
    return true;
  }

private:
  void commit() {
    json arr = json::array();
    for (const auto &e : seen_) arr.push_back(to_json(e));
    stores_.metadata.put(id_.to_string(), canonical_dump(arr));
    direntries_.put(id_.to_string(),
                    std::make_shared<const std::vector<DirEntry>>(
                        std::move(seen_)));
  }

  CachingArchive &outer_;
  std::unique_ptr<DirectoryPager> inner_;
  Swhid id_;
  CacheStores &stores_;
  DirentryCache &direntries_;
  std::vector<DirEntry> seen_;
  bool committed_ = false;
};

class VectorPager : public DirectoryPager {
public:
  explicit VectorPager(std::shared_ptr<const std::vector<DirEntry>> entries)
      : entries_(std::move(entries)) {}
  bool next_page(std::vector<DirEntry> &out) override {
    if (done_) return false;
    done_ = true;
    out.insert(out.end(), entries_->begin(), entries_->end());
    return true;
  }

private:
  std::shared_ptr<const std::vector<DirEntry>> entries_;
  bool done_ = false;
};

}  // namespace

CachingArchive::CachingArchive(std::shared_ptr<ArchiveSource> inner,
                               std::shared_ptr<CacheStores> stores,
                               std::shared_ptr<DirentryCache> direntries)
    : inner_(std::move(inner)),
      stores_(std::move(stores)),
      direntries_(std::move(direntries)) {}

std::string CachingArchive::get_blob(const Swhid &id) {
  const std::string key = id.to_string();
  if (auto hit = stores_->blobs.get(key)) return std::move(*hit);
  std::string bytes = inner_->get_blob(id);
  if (bytes.size() <= stores_->blob_size_limit) {
    stores_->blobs.put(key, bytes);
  }
  return bytes;
}

std::unique_ptr<DirectoryPager> CachingArchive::list_directory(
    const Swhid &id) {
  const std::string key = id.to_string();
  if (auto hot = direntries_->get(key)) {
    return std::make_unique<VectorPager>(std::move(hot));
  }
  if (auto doc = stores_->metadata.get(key)) {
    auto entries = std::make_shared<std::vector<DirEntry>>();
    for (const auto &e : parse_doc(*doc, key)) {
      entries->push_back(dir_entry_from_json(e));
    }
    direntries_->put(key, entries);
    return std::make_unique<VectorPager>(std::move(entries));
  }
  return std::make_unique<CachingPager>(*this, inner_->list_directory(id), id,
                                        *stores_, *direntries_);
}

std::shared_ptr<const std::vector<DirEntry>>
CachingArchive::read_directory_cached(const Swhid &id) {
  const std::string key = id.to_string();
  if (auto hot = direntries_->get(key)) return hot;
  auto entries = std::make_shared<std::vector<DirEntry>>(read_directory(id));
  // list_directory committed the listing to the direntry cache on
  // exhaustion; reuse its copy if present to keep one shared instance.
  if (auto hot = direntries_->get(key)) return hot;
  direntries_->put(key, entries);
  return entries;
}

std::string CachingArchive::cached_doc(const std::string &key,
                                       const std::string &) {
  if (auto hit = stores_->metadata.get(key)) return std::move(*hit);
  return {};
}

RevisionMeta CachingArchive::get_revision(const Swhid &id) {
  const std::string key = id.to_string();
  if (auto doc = stores_->metadata.get(key)) {
    return revision_from_json(parse_doc(*doc, key));
  }
  RevisionMeta meta = inner_->get_revision(id);
  stores_->metadata.put(key, canonical_dump(to_json(meta)));
  return meta;
}

ReleaseMeta CachingArchive::get_release(const Swhid &id) {
  const std::string key = id.to_string();
  if (auto doc = stores_->metadata.get(key)) {
    return release_from_json(parse_doc(*doc, key));
  }
  ReleaseMeta meta = inner_->get_release(id);
  stores_->metadata.put(key, canonical_dump(to_json(meta)));
  return meta;
}

SnapshotBranches CachingArchive::get_snapshot(const Swhid &id) {
  const std::string key = id.to_string();
  if (auto doc = stores_->metadata.get(key)) {
    return snapshot_from_json(parse_doc(*doc, key));
  }
  SnapshotBranches snap = inner_->get_snapshot(id);
  stores_->metadata.put(key, canonical_dump(to_json(snap)));
  return snap;
}

std::vector<OriginVisit> CachingArchive::get_origin_visits(
    const std::string &url) {
  const std::string key = "origin:" + url;
  auto decode = [&](const json &doc) {
    std::vector<OriginVisit> visits;
    for (const auto &v : doc.at("visits")) visits.push_back(visit_from_json(v));
    return visits;
  };
  if (auto doc = stores_->metadata.get(key)) {
    return decode(parse_doc(*doc, key));
  }
  std::vector<OriginVisit> visits = inner_->get_origin_visits(url);
  json arr = json::array();
  for (const auto &v : visits) arr.push_back(to_json(v));
  stores_->metadata.put(key,
                        canonical_dump(json{{"url", url}, {"visits", arr}}));
  return visits;
}

std::vector<std::string> CachingArchive::search_origins(
    const std::string &pattern, int limit) {
  return inner_->search_origins(pattern, limit);  // thin pass-through
}

std::vector<Swhid> CachingArchive::history(const Swhid &id) {
  const std::string key = "history:" + id.to_string();
  if (auto doc = stores_->metadata.get(key)) {
    std::vector<Swhid> out;
    for (const auto &s : parse_doc(*doc, key).at("nodes")) {
      auto nid = Swhid::parse(s.get<std::string>());
      if (!nid) {
        throw ArchiveError(ErrorKind::Storage, "corrupt history record " + key);
      }
      out.push_back(*nid);
    }
    return out;
  }
  std::vector<Swhid> out = inner_->history(id);
  json arr = json::array();
  for (const auto &n : out) arr.push_back(n.to_string());
  stores_->metadata.put(key, canonical_dump(json{{"nodes", arr}}));
  return out;
}

std::string CachingArchive::metadata_document(const Swhid &id) {
  switch (id.type) {
    case ObjectType::Content: {
      std::string bytes = get_blob(id);
      return canonical_dump(
          json{{"id", id.to_string()}, {"length", bytes.size()}});
    }
    case ObjectType::Directory: {
      auto entries = read_directory_cached(id);
      json arr = json::array();
      for (const auto &e : *entries) arr.push_back(to_json(e));
      return canonical_dump(arr);
    }
    case ObjectType::Revision:
      return canonical_dump(to_json(get_revision(id)));
    case ObjectType::Release:
      return canonical_dump(to_json(get_release(id)));
    case ObjectType::Snapshot:
      return canonical_dump(to_json(get_snapshot(id)));
  }
  throw ArchiveError(ErrorKind::NotFound, "unknown object type");
}

bool CachingArchive::purge_object(const Swhid &id) {
  const std::string key = id.to_string();
  bool removed = false;
  removed |= stores_->blobs.erase(key);
  removed |= stores_->metadata.erase(key);
  removed |= stores_->metadata.erase("history:" + key);
  direntries_->erase(key);
  return removed;
}

}  // namespace archfs
