#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "archfs/swhid.hpp"
#include "archfs/timeutil.hpp"

namespace archfs {

enum class EntryPerm : uint8_t {
  File,
  ExecutableFile,
  Symlink,
  Subdirectory,
  SubmoduleRevision,
};

const char *perm_tag(EntryPerm p);  // "file", "exec", "symlink", "dir", "rev"
std::optional<EntryPerm> parse_perm_tag(std::string_view tag);

// One entry of an archived source tree. Names are raw bytes (no '/' or NUL);
// they are not assumed to be valid UTF-8.
struct DirEntry {
  std::string name;
  Swhid target;
  EntryPerm perm = EntryPerm::File;

  bool operator==(const DirEntry &) const = default;
};

struct PersonDate {
  std::string name;
  std::string email;
};

struct RevisionMeta {
  Swhid id;            // type rev
  Swhid tree;          // type dir
  std::vector<Swhid> parents;  // type rev, order preserved
  PersonDate author;
  PersonDate committer;
  OffsetTime author_date;
  OffsetTime committer_date;
  std::string message;  // raw bytes
};

struct ReleaseMeta {
  Swhid id;      // type rel
  std::string name;
  Swhid target;  // any object type
  std::string message;  // raw bytes
  OffsetTime date;
};

struct SnapshotBranches {
  Swhid id;  // type snp
  // Branch names are raw bytes and may contain '/'.
  std::map<std::string, Swhid> branches;
  std::map<std::string, std::string> aliases;  // name -> aliased branch name
};

// Follows alias links until a concrete branch is reached. Returns nullopt on
// unknown names, chains longer than max_depth, or cycles.
std::optional<Swhid> resolve_branch(const SnapshotBranches &snap,
                                    const std::string &name,
                                    int max_depth = 16);

struct OriginVisit {
  std::string origin_url;
  OffsetTime date;
  std::optional<Swhid> snapshot;  // absent for failed crawls
};

}  // namespace archfs
