#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "archfs/swhid.hpp"

using namespace archfs;

namespace {

std::string random_valid_swhid(std::mt19937_64 &rng) {
  static const char *types[] = {"cnt", "dir", "rev", "rel", "snp"};
  static const char *hexd = "0123456789abcdef";
  std::string s = "swh:1:";
  s += types[rng() % 5];
  s += ':';
  for (int i = 0; i < 40; ++i) s += hexd[rng() % 16];
  return s;
}

}  // namespace

TEST_CASE("parses canonical identifiers") {
  auto id = Swhid::parse("swh:1:cnt:c839dea9e8e6f0528b468214348fee8669b305b2");
  REQUIRE(id.has_value());
  CHECK(id->type == ObjectType::Content);
  CHECK(id->hash == "c839dea9e8e6f0528b468214348fee8669b305b2");

  auto rev = Swhid::parse("swh:1:rev:9d76c0b163675505d1a901e5fe5249a2c55609bc");
  REQUIRE(rev.has_value());
  CHECK(rev->type == ObjectType::Revision);

  auto snp = Swhid::parse("swh:1:snp:2ca5d6eff8f04a671c0d5b13646cede522c64b7d");
  REQUIRE(snp.has_value());
  CHECK(snp->to_string() ==
        "swh:1:snp:2ca5d6eff8f04a671c0d5b13646cede522c64b7d");
}

TEST_CASE("rejects bad fields with the offending part identified") {
  SwhidError err;
  CHECK(!Swhid::parse("swh:2:cnt:" + std::string(40, '0'), &err));
  CHECK(err == SwhidError::BadVersion);

  CHECK(!Swhid::parse("git:1:cnt:" + std::string(40, '0'), &err));
  CHECK(err == SwhidError::BadNamespace);

  CHECK(!Swhid::parse("swh:1:xyz:" + std::string(40, '0'), &err));
  CHECK(err == SwhidError::BadType);

  CHECK(!Swhid::parse("swh:1:cnt:zzz", &err));
  CHECK(err == SwhidError::BadHash);

  // canonical form only: uppercase hex and whitespace are not identifiers
  CHECK(!Swhid::parse("swh:1:cnt:C839DEA9E8E6F0528B468214348FEE8669B305B2", &err));
  CHECK(err == SwhidError::BadHash);
  CHECK(!Swhid::parse(" swh:1:cnt:c839dea9e8e6f0528b468214348fee8669b305b2"));
  CHECK(!Swhid::parse("swh:1:cnt:c839dea9e8e6f0528b468214348fee8669b305b2 "));

  // qualified identifiers get their own error
  CHECK(!Swhid::parse("swh:1:cnt:" + std::string(40, 'a') +
                          ";origin=https://example.org",
                      &err));
  CHECK(err == SwhidError::Qualified);
}

TEST_CASE("shard prefixes") {
  Swhid rev{ObjectType::Revision,
            "0018f7700bf8004dcbdef028a7f1024fc4c16ef4"};
  CHECK(rev.shard_prefix(2) == "00");
  CHECK(rev.shard_prefix(40) == rev.hash);
  Swhid jq{ObjectType::Revision, "9d76c0b163675505d1a901e5fe5249a2c55609bc"};
  CHECK(jq.shard_prefix(2) == "9d");
}

TEST_CASE("parse/format round trip, 10^4 random identifiers") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    std::string s = random_valid_swhid(rng);
    auto id = Swhid::parse(s);
    REQUIRE(id.has_value());
    REQUIRE(id->to_string() == s);
    auto again = Swhid::parse(id->to_string());
    REQUIRE(again.has_value());
    REQUIRE(*again == *id);
  }
}

TEST_CASE("single-character mutations into invalid alphabet are rejected") {
  std::mt19937_64 rng(7);
  static const std::string bad_chars = "GHIJKLMNOPQRSTUVWXYZ!@# /\\\t%:;.";
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    std::string s = random_valid_swhid(rng);
    size_t pos = 10 + rng() % 40;  // inside the hash
    char replacement = bad_chars[rng() % bad_chars.size()];
    if (s[pos] == replacement) continue;
    std::string mutated = s;
    mutated[pos] = replacement;
    CAPTURE(mutated);
    REQUIRE(!Swhid::parse(mutated));
    ++checked;

    // also mutate length: drop or duplicate one hash character
    std::string shorter = s.substr(0, s.size() - 1);
    REQUIRE(!Swhid::parse(shorter));
    std::string longer = s + s.back();
    REQUIRE(!Swhid::parse(longer));
  }
  CHECK(checked > 300);
}
