#include "archfs/fixture.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace archfs {

namespace {

// splitmix64; stable across platforms, unlike std distributions.
uint64_t mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() { return state = mix(state); }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  double unit() { return double(next() >> 11) / double(1ULL << 53); }
};

std::string hex40(uint64_t a, uint64_t b, uint64_t c) {
  static const char *digits = "0123456789abcdef";
  std::string out;
  out.reserve(40);
  auto push = [&](uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
      out += digits[(v >> (60 - 4 * i)) & 0xf];
    }
  };
  push(a, 16);
  push(b, 16);
  push(c, 8);
  return out;
}

}  // namespace

Swhid FixtureArchive::fresh_id(ObjectType type) {
  for (;;) {
    uint64_t n = ++id_counter;
    uint64_t base = mix(id_seed ^ (uint64_t(type) << 56) ^ n);
    Swhid id{type, hex40(mix(base), mix(base + 1), mix(base + 2))};
    std::string key = id.to_string();
    bool taken = blobs.count(key) || dirs.count(key) || revisions.count(key) ||
                 releases.count(key) || snapshots.count(key);
    if (!taken) return id;
  }
}

Swhid FixtureArchive::add_blob(std::string bytes) {
  Swhid id = fresh_id(ObjectType::Content);
  blobs[id.to_string()] = std::move(bytes);
  return id;
}

Swhid FixtureArchive::add_dir(std::vector<DirEntry> entries) {
  Swhid id = fresh_id(ObjectType::Directory);
  dirs[id.to_string()] = std::move(entries);
  return id;
}

Swhid FixtureArchive::add_revision(Swhid tree, std::vector<Swhid> parents,
                                   OffsetTime author_date,
                                   OffsetTime committer_date,
                                   std::string message, PersonDate author,
                                   PersonDate committer) {
  Swhid id = fresh_id(ObjectType::Revision);
  RevisionMeta m;
  m.id = id;
  m.tree = tree;
  m.parents = std::move(parents);
  m.author = std::move(author);
  m.committer = std::move(committer);
  m.author_date = author_date;
  m.committer_date = committer_date;
  m.message = std::move(message);
  revisions[id.to_string()] = std::move(m);
  return id;
}

Swhid FixtureArchive::add_release(std::string name, Swhid target,
                                  OffsetTime date, std::string message) {
  Swhid id = fresh_id(ObjectType::Release);
  releases[id.to_string()] =
      ReleaseMeta{id, std::move(name), target, std::move(message), date};
  return id;
}

Swhid FixtureArchive::add_snapshot(std::map<std::string, Swhid> branches,
                                   std::map<std::string, std::string> aliases) {
  Swhid id = fresh_id(ObjectType::Snapshot);
  snapshots[id.to_string()] =
      SnapshotBranches{id, std::move(branches), std::move(aliases)};
  return id;
}

void FixtureArchive::add_origin(const std::string &url,
                                std::vector<OriginVisit> visits) {
  for (auto &v : visits) v.origin_url = url;
  origins[url] = std::move(visits);
}

void FixtureArchive::validate() const {
  auto exists = [&](const Swhid &id) {
    const std::string key = id.to_string();
    switch (id.type) {
      case ObjectType::Content: return blobs.count(key) > 0;
      case ObjectType::Directory: return dirs.count(key) > 0;
      case ObjectType::Revision: return revisions.count(key) > 0;
      case ObjectType::Release: return releases.count(key) > 0;
      case ObjectType::Snapshot: return snapshots.count(key) > 0;
    }
    return false;
  };
  auto require = [&](bool ok, const std::string &what) {
    if (!ok) throw std::logic_error("fixture ill-formed: " + what);
  };

  for (const auto &[id, entries] : dirs) {
    std::set<std::string> names;
    for (const auto &e : entries) {
      require(names.insert(e.name).second, "duplicate name in " + id);
      require(exists(e.target), "dangling dir entry target " + e.target.to_string());
      if (e.perm == EntryPerm::Subdirectory) {
        require(e.target.type == ObjectType::Directory, "subdir perm vs type");
      } else if (e.perm == EntryPerm::SubmoduleRevision) {
        require(e.target.type == ObjectType::Revision, "submodule perm vs type");
      } else {
        require(e.target.type == ObjectType::Content, "file perm vs type");
      }
    }
  }
  for (const auto &[id, m] : revisions) {
    require(exists(m.tree), "revision tree missing for " + id);
    for (const auto &p : m.parents) {
      require(exists(p), "revision parent missing for " + id);
    }
  }
  for (const auto &[id, m] : releases) {
    require(exists(m.target), "release target missing for " + id);
  }
  for (const auto &[id, s] : snapshots) {
    for (const auto &[name, target] : s.branches) {
      require(exists(target), "branch target missing in " + id);
    }
    for (const auto &[name, to] : s.aliases) {
      require(resolve_branch(s, name).has_value(), "alias unresolved in " + id);
    }
  }
  for (const auto &[url, visits] : origins) {
    for (const auto &v : visits) {
      if (v.snapshot) require(exists(*v.snapshot), "visit snapshot missing");
    }
  }

  // Parent edges must be acyclic. Iterative DFS with tricolor marking.
  std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
  for (const auto &[start, meta] : revisions) {
    (void)meta;
    if (color[start]) continue;
    std::vector<std::pair<std::string, size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto &[cur, idx] = stack.back();
      const auto &parents = revisions.at(cur).parents;
      if (idx >= parents.size()) {
        color[cur] = 2;
        stack.pop_back();
        continue;
      }
      std::string next = parents[idx++].to_string();
      if (color[next] == 1) throw std::logic_error("fixture ill-formed: parent cycle");
      if (color[next] == 0) {
        color[next] = 1;
        stack.emplace_back(next, 0);
      }
    }
  }
}

std::vector<Swhid> FixtureArchive::reachable_parents(const Swhid &id) const {
  std::set<std::string> seen;
  std::vector<std::string> todo{id.to_string()};
  while (!todo.empty()) {
    std::string cur = todo.back();
    todo.pop_back();
    auto it = revisions.find(cur);
    if (it == revisions.end()) continue;
    for (const auto &p : it->second.parents) {
      if (seen.insert(p.to_string()).second) todo.push_back(p.to_string());
    }
  }
  seen.erase(id.to_string());
  std::vector<Swhid> out;
  for (const auto &s : seen) out.push_back(*Swhid::parse(s));
  return out;
}

FixtureArchive generate_fixture(const FixtureSpec &spec) {
  FixtureArchive a;
  a.id_seed = spec.seed;
  Rng rng(mix(spec.seed ^ 0xa5c0ffeeULL));

  // Shared blob pool. Contents are printable and deterministic.
  std::vector<Swhid> blob_pool;
  for (int i = 0; i < spec.blob_count; ++i) {
    size_t len = spec.blob_min;
    if (spec.blob_max > spec.blob_min) {
      len += rng.below(spec.blob_max - spec.blob_min + 1);
    }
    std::string bytes;
    bytes.reserve(len);
    for (size_t k = 0; k < len; ++k) {
      bytes += char('a' + rng.below(26));
    }
    blob_pool.push_back(a.add_blob(std::move(bytes)));
  }
  if (blob_pool.empty()) blob_pool.push_back(a.add_blob(""));

  // One directory per commit, sharing subdirectories of earlier commits.
  std::vector<Swhid> dir_pool;
  std::vector<Swhid> rev_chain;
  int64_t t = 1577836800;  // 2020-01-01T00:00:00Z
  static const int32_t offsets[] = {0, 60, -300, 330};

  auto make_symlink_blob = [&]() {
    // Symlink entries point at a blob whose content is the link text.
    std::string text = "target-" + std::to_string(rng.below(1000));
    return a.add_blob(std::move(text));
  };

  auto make_dir = [&](int commit_index) {
    std::vector<DirEntry> entries;
    std::set<std::string> used;
    int fanout = std::max(spec.dir_fanout, 1);
    for (int k = 0; k < fanout; ++k) {
      std::string name = "f" + std::to_string(k);
      uint64_t pick = rng.below(100);
      if (pick < 55 || dir_pool.empty()) {
        entries.push_back({name, blob_pool[rng.below(blob_pool.size())],
                           rng.below(5) == 0 ? EntryPerm::ExecutableFile
                                             : EntryPerm::File});
      } else if (pick < 70) {
        entries.push_back({"ln" + std::to_string(k), make_symlink_blob(),
                           EntryPerm::Symlink});
      } else if (pick < 95 || rev_chain.empty()) {
        entries.push_back({"d" + std::to_string(k),
                           dir_pool[rng.below(dir_pool.size())],
                           EntryPerm::Subdirectory});
      } else {
        entries.push_back({"sub" + std::to_string(k),
                           rev_chain[rng.below(rev_chain.size())],
                           EntryPerm::SubmoduleRevision});
      }
    }
    (void)commit_index;
    return a.add_dir(std::move(entries));
  };

  std::set<std::pair<int, int>> forced(spec.forced_merges.begin(),
                                       spec.forced_merges.end());
  for (int i = 0; i < spec.commit_count; ++i) {
    Swhid tree = make_dir(i);
    dir_pool.push_back(tree);

    std::vector<Swhid> parents;
    if (i > 0) parents.push_back(rev_chain[i - 1]);
    for (const auto &[at, from] : forced) {
      if (at == i && from >= 0 && from < i) parents.push_back(rev_chain[from]);
    }
    if (i > 1 && spec.merge_probability > 0 &&
        rng.unit() < spec.merge_probability) {
      Swhid extra = rev_chain[rng.below(i - 1)];
      if (std::find(parents.begin(), parents.end(), extra) == parents.end()) {
        parents.push_back(extra);
      }
    }

    // Occasionally keep the committer instant of the previous commit so the
    // ordering tiebreak is exercised.
    bool collide = spec.date_collisions && i > 0 && rng.below(10) == 0;
    if (!collide) t += 3600 + int64_t(rng.below(86400));
    OffsetTime cdate{t, offsets[rng.below(4)]};
    OffsetTime adate{t - int64_t(rng.below(7200)), offsets[rng.below(4)]};
    rev_chain.push_back(a.add_revision(tree, parents, adate, cdate,
                                       "commit " + std::to_string(i) + "\n"));
  }

  if (!rev_chain.empty()) {
    Swhid head = rev_chain.back();
    OffsetTime rel_date{t + 60, 0};
    Swhid rel = a.add_release("v1.0", head, rel_date, "release v1.0\n");
    std::map<std::string, Swhid> branches{
        {"refs/heads/main", head},
        {"refs/tags/v1.0", rel},
    };
    if (rev_chain.size() > 1) {
      branches["refs/heads/dev"] = rev_chain[rng.below(rev_chain.size())];
    }
    Swhid snp = a.add_snapshot(branches, {{"HEAD", "refs/heads/main"}});

    for (int i = 0; i < spec.origin_count; ++i) {
      std::string url = "https://example.org/project-" + std::to_string(i);
      std::vector<OriginVisit> visits;
      int n = 1 + int(rng.below(3));
      int64_t vt = t + 86400;
      for (int k = 0; k < n; ++k) {
        visits.push_back({url, OffsetTime{vt, 0}, snp});
        vt += 86400 * (1 + int64_t(rng.below(30)));
      }
      a.add_origin(url, std::move(visits));
    }
  }

  a.validate();
  return a;
}

namespace golden {
const char *kHelloBlob = "swh:1:cnt:aa01aa01aa01aa01aa01aa01aa01aa01aa01aa01";
const char *kHelloC    = "swh:1:cnt:bb02bb02bb02bb02bb02bb02bb02bb02bb02bb02";
const char *kEmptyBlob = "swh:1:cnt:cc03cc03cc03cc03cc03cc03cc03cc03cc03cc03";
const char *kRootDir   = "swh:1:dir:dd04dd04dd04dd04dd04dd04dd04dd04dd04dd04";
const char *kCommit1   = "swh:1:rev:1e051e051e051e051e051e051e051e051e051e05";
const char *kCommit2   = "swh:1:rev:2f062f062f062f062f062f062f062f062f062f06";
const char *kCommit3   = "swh:1:rev:3a073a073a073a073a073a073a073a073a073a07";
const char *kRelease   = "swh:1:rel:4b084b084b084b084b084b084b084b084b084b08";
const char *kSnapshot  = "swh:1:snp:5c095c095c095c095c095c095c095c095c095c09";
const char *kOriginUrl = "https://example.org/linux";
}  // namespace golden

FixtureArchive golden_archive() {
  FixtureArchive a;
  a.id_seed = 0x601d;

  auto id = [](const char *s) { return *Swhid::parse(s); };
  const char *kScript  = "swh:1:cnt:6d0a6d0a6d0a6d0a6d0a6d0a6d0a6d0a6d0a6d0a";
  const char *kLink    = "swh:1:cnt:7e0b7e0b7e0b7e0b7e0b7e0b7e0b7e0b7e0b7e0b";
  const char *kWeird   = "swh:1:cnt:8f0c8f0c8f0c8f0c8f0c8f0c8f0c8f0c8f0c8f0c";
  const char *kSubDir  = "swh:1:dir:9a0d9a0d9a0d9a0d9a0d9a0d9a0d9a0d9a0d9a0d";
  const char *kDir1    = "swh:1:dir:0be10be10be10be10be10be10be10be10be10be1";
  const char *kDir2    = "swh:1:dir:1cf21cf21cf21cf21cf21cf21cf21cf21cf21cf2";

  a.blobs[golden::kHelloBlob] = "hello\n";
  a.blobs[golden::kHelloC] =
      "#include <stdio.h>\n\nint main(void) {\n"
      "  printf(\"Hello, World!\\n\");\n  return 0;\n}\n";
  a.blobs[golden::kEmptyBlob] = "";
  a.blobs[kScript] = "#!/bin/sh\necho hi\n";
  a.blobs[kLink] = "hello.txt";  // symlink target text
  a.blobs[kWeird] = "caf\xc3\xa9 content\n";

  // "caf\xe9" is deliberately not valid UTF-8.
  a.dirs[kSubDir] = {
      {std::string("caf\xe9"), id(kWeird), EntryPerm::File},
  };
  a.dirs[kDir1] = {
      {"hello.txt", id(golden::kHelloBlob), EntryPerm::File},
  };
  a.dirs[kDir2] = {
      {"hello.c", id(golden::kHelloC), EntryPerm::File},
      {"hello.txt", id(golden::kHelloBlob), EntryPerm::File},
  };
  a.dirs[golden::kRootDir] = {
      {"empty", id(golden::kEmptyBlob), EntryPerm::File},
      {"hello-link", id(kLink), EntryPerm::Symlink},
      {"hello.c", id(golden::kHelloC), EntryPerm::File},
      {"hello.txt", id(golden::kHelloBlob), EntryPerm::File},
      {"run.sh", id(kScript), EntryPerm::ExecutableFile},
      {"sub", id(kSubDir), EntryPerm::Subdirectory},
  };

  auto t = [](const char *s) { return *parse_rfc3339(s); };
  PersonDate alice{"Alice Maintainer", "alice@example.org"};
  RevisionMeta c1;
  c1.id = id(golden::kCommit1);
  c1.tree = id(kDir1);
  c1.author = c1.committer = alice;
  c1.author_date = c1.committer_date = t("2024-01-01T09:00:00+01:00");
  c1.message = "initial import\n";
  a.revisions[golden::kCommit1] = c1;

  RevisionMeta c2 = c1;
  c2.id = id(golden::kCommit2);
  c2.tree = id(kDir2);
  c2.parents = {id(golden::kCommit1)};
  c2.author_date = c2.committer_date = t("2024-01-02T12:30:00+00:00");
  c2.message = "add hello.c\n";
  a.revisions[golden::kCommit2] = c2;

  RevisionMeta c3 = c1;
  c3.id = id(golden::kCommit3);
  c3.tree = id(golden::kRootDir);
  c3.parents = {id(golden::kCommit2)};
  c3.author_date = c3.committer_date = t("2024-01-03T20:15:00-05:00");
  c3.message = "flesh out the tree\n";
  a.revisions[golden::kCommit3] = c3;

  a.releases[golden::kRelease] =
      ReleaseMeta{id(golden::kRelease), "v1.0", id(golden::kCommit3),
                  "first stable release\n", t("2024-01-04T00:00:00+00:00")};

  a.snapshots[golden::kSnapshot] = SnapshotBranches{
      id(golden::kSnapshot),
      {
          {"refs/heads/feature/x", id(golden::kCommit2)},
          {"refs/heads/main", id(golden::kCommit3)},
          {"refs/tags/v1.0", id(golden::kRelease)},
      },
      {{"HEAD", "refs/heads/main"}},
  };

  a.origins[golden::kOriginUrl] = {
      {golden::kOriginUrl, t("2024-01-01T10:00:00+00:00"), id(golden::kSnapshot)},
      {golden::kOriginUrl, t("2024-01-01T18:00:00+00:00"), id(golden::kSnapshot)},
      {golden::kOriginUrl, t("2024-02-05T03:00:00+00:00"), std::nullopt},
  };

  a.validate();
  return a;
}

}  // namespace archfs
