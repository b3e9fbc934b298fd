#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "archfs/codec.hpp"
#include "archfs/fixture.hpp"

using namespace archfs;

TEST_CASE("generation is deterministic in the seed") {
  FixtureSpec spec;
  spec.seed = 42;
  spec.commit_count = 20;
  spec.merge_probability = 0.3;
  spec.dir_fanout = 4;
  spec.blob_count = 10;
  spec.origin_count = 2;

  FixtureArchive a = generate_fixture(spec);
  FixtureArchive b = generate_fixture(spec);
  CHECK(a.blobs == b.blobs);
  CHECK(a.dirs.size() == b.dirs.size());
  for (const auto &[k, v] : a.dirs) {
    REQUIRE(b.dirs.count(k));
    CHECK(v == b.dirs.at(k));
  }
  CHECK(a.revisions.size() == b.revisions.size());
  for (const auto &[k, v] : a.revisions) {
    REQUIRE(b.revisions.count(k));
    CHECK(canonical_dump(to_json(v)) == canonical_dump(to_json(b.revisions.at(k))));
  }

  FixtureSpec other = spec;
  other.seed = 43;
  FixtureArchive c = generate_fixture(other);
  CHECK(c.blobs != a.blobs);
}

TEST_CASE("a 50-commit chain has 50 revisions and 49 parent edges") {
  FixtureSpec spec;
  spec.seed = 7;
  spec.commit_count = 50;
  spec.dir_fanout = 2;
  spec.blob_count = 5;

  FixtureArchive a = generate_fixture(spec);
  CHECK(a.revisions.size() == 50);
  size_t edges = 0;
  for (const auto &[id, m] : a.revisions) edges += m.parents.size();
  CHECK(edges == 49);
}

TEST_CASE("forced merges add the requested parent edges") {
  FixtureSpec spec;
  spec.seed = 7;
  spec.commit_count = 50;
  spec.dir_fanout = 2;
  spec.blob_count = 5;
  spec.forced_merges = {{25, 10}};

  FixtureArchive a = generate_fixture(spec);
  size_t edges = 0;
  size_t merge_commits = 0;
  for (const auto &[id, m] : a.revisions) {
    edges += m.parents.size();
    if (m.parents.size() > 1) ++merge_commits;
  }
  CHECK(edges == 50);
  CHECK(merge_commits == 1);
}

TEST_CASE("the default spec is a single root commit over an empty tree") {
  FixtureArchive a = generate_fixture(FixtureSpec{});
  CHECK(a.revisions.size() == 1);
  const RevisionMeta &root = a.revisions.begin()->second;
  CHECK(root.parents.empty());
}

TEST_CASE("generated archives are well-formed") {
  for (uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    FixtureSpec spec;
    spec.seed = seed;
    spec.commit_count = 30;
    spec.merge_probability = 0.4;
    spec.dir_fanout = 5;
    spec.blob_count = 8;
    spec.origin_count = 1;
    CHECK_NOTHROW(generate_fixture(spec));  // validate() runs inside
  }
}

TEST_CASE("reachability oracle on a hand-built diamond") {
  FixtureArchive a;
  a.id_seed = 5;
  Swhid tree = a.add_dir({});
  OffsetTime t0{1000, 0};
  Swhid root = a.add_revision(tree, {}, t0, t0, "root\n");
  Swhid left = a.add_revision(tree, {root}, {2000, 0}, {2000, 0}, "left\n");
  Swhid right = a.add_revision(tree, {root}, {3000, 0}, {3000, 0}, "right\n");
  Swhid merge =
      a.add_revision(tree, {left, right}, {4000, 0}, {4000, 0}, "merge\n");
  a.validate();

  auto reach = a.reachable_parents(merge);
  CHECK(reach.size() == 3);
  auto none = a.reachable_parents(root);
  CHECK(none.empty());
}

TEST_CASE("golden archive shape") {
  FixtureArchive g = golden_archive();
  CHECK(g.revisions.size() == 3);
  CHECK(g.releases.size() == 1);
  CHECK(g.snapshots.size() == 1);
  CHECK(g.origins.size() == 1);
  CHECK(g.blobs.at(golden::kHelloBlob) == "hello\n");
  CHECK(g.blobs.at(golden::kEmptyBlob).empty());
  CHECK(g.revisions.at(golden::kCommit1).parents.empty());
  CHECK(g.revisions.at(golden::kCommit3).parents.size() == 1);

  const auto &snap = g.snapshots.at(golden::kSnapshot);
  CHECK(snap.branches.count("refs/heads/feature/x"));
  CHECK(snap.aliases.at("HEAD") == "refs/heads/main");

  // one deliberately non-UTF-8 entry name exists somewhere in the tree
  bool found_binary_name = false;
  for (const auto &[id, entries] : g.dirs) {
    for (const auto &e : entries) {
      if (!is_valid_utf8(e.name)) found_binary_name = true;
    }
  }
  CHECK(found_binary_name);
}
