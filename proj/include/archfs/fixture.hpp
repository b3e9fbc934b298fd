#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "archfs/types.hpp"

namespace archfs {

// In-memory archive used by the mock server. Doubles as the manifest that
// test oracles compare against: whatever is in here is the expected truth.
struct FixtureArchive {
  std::map<std::string, std::string> blobs;              // swhid -> bytes
  std::map<std::string, std::vector<DirEntry>> dirs;     // swhid -> entries
  std::map<std::string, RevisionMeta> revisions;
  std::map<std::string, ReleaseMeta> releases;
  std::map<std::string, SnapshotBranches> snapshots;
  std::map<std::string, std::vector<OriginVisit>> origins;  // url -> visits

  // Builder helpers; identifiers are derived deterministically from the
  // id_seed and an internal counter unless an explicit one is given.
  uint64_t id_seed = 0;
  uint64_t id_counter = 0;

  Swhid add_blob(std::string bytes);
  Swhid add_dir(std::vector<DirEntry> entries);
  Swhid add_revision(Swhid tree, std::vector<Swhid> parents,
                     OffsetTime author_date, OffsetTime committer_date,
                     std::string message, PersonDate author = {"A. Hacker", "a@example.org"},
                     PersonDate committer = {"C. Ommitter", "c@example.org"});
  Swhid add_release(std::string name, Swhid target, OffsetTime date,
                    std::string message);
  Swhid add_snapshot(std::map<std::string, Swhid> branches,
                     std::map<std::string, std::string> aliases = {});
  void add_origin(const std::string &url, std::vector<OriginVisit> visits);

  Swhid fresh_id(ObjectType type);

  size_t object_count() const {
    return blobs.size() + dirs.size() + revisions.size() + releases.size() +
           snapshots.size();
  }

  // Checks Merkle well-formedness: every referenced target exists, revision
  // trees exist, parent edges are acyclic. Throws std::logic_error otherwise.
  void validate() const;

  // All revisions reachable from `id` via parent edges, excluding `id`
  // itself, unordered. Brute-force reference used by test oracles.
  std::vector<Swhid> reachable_parents(const Swhid &id) const;
};

struct FixtureSpec {
  uint64_t seed = 0;
  int commit_count = 1;
  double merge_probability = 0.0;  // chance a commit gets a second parent
  // Explicit extra parent edges: commit index -> earlier commit index.
  std::vector<std::pair<int, int>> forced_merges;
  int dir_fanout = 0;        // entries per generated directory
  int blob_count = 0;        // shared blob pool size
  size_t blob_min = 4;       // blob size range, bytes
  size_t blob_max = 96;
  int origin_count = 0;
  bool date_collisions = true;  // force some equal committer instants
};

// Deterministic in spec.seed: the same spec always yields the same archive,
// byte for byte.
FixtureArchive generate_fixture(const FixtureSpec &spec);

// Hand-written mini archive: hello-world blob, a three-commit history with
// one release, a snapshot with nested branch names and an alias, and an
// origin with two same-day visits plus a failed one.
FixtureArchive golden_archive();

// Stable identifiers of golden objects, for tests and docs.
namespace golden {
extern const char *kHelloBlob;      // "hello\n"
extern const char *kHelloC;         // hello.c
extern const char *kEmptyBlob;
extern const char *kRootDir;        // tree of the head commit
extern const char *kCommit1;        // root commit
extern const char *kCommit2;
extern const char *kCommit3;        // head
extern const char *kRelease;        // v1.0 -> head
extern const char *kSnapshot;
extern const char *kOriginUrl;      // https://example.org/linux
}  // namespace golden

}  // namespace archfs
