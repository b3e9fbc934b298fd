#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "archfs/codec.hpp"
#include "archfs/percent.hpp"
#include "archfs/timeutil.hpp"

using namespace archfs;

TEST_CASE("percent encoding of origin URLs") {
  CHECK(percent_encode("https://github.com/torvalds/linux") ==
        "https%3A%2F%2Fgithub.com%2Ftorvalds%2Flinux");
  CHECK(percent_encode("a b?c") == "a%20b%3Fc");
  CHECK(percent_encode("safe-._~09AZaz") == "safe-._~09AZaz");

  auto back = percent_decode("https%3A%2F%2Fgithub.com%2Ftorvalds%2Flinux");
  REQUIRE(back.has_value());
  CHECK(*back == "https://github.com/torvalds/linux");

  CHECK(!percent_decode("bad%zz"));
  CHECK(!percent_decode("trailing%2"));
  CHECK(!percent_decode("trailing%"));
  CHECK(percent_decode("%2f") == std::string("/"));  // lowercase hex accepted
}

TEST_CASE("percent round trip on random byte strings") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    size_t len = rng() % 24;
    for (size_t k = 0; k < len; ++k) raw += char(rng() % 256);
    auto decoded = percent_decode(percent_encode(raw));
    REQUIRE(decoded.has_value());
    REQUIRE(*decoded == raw);
  }
}

TEST_CASE("rfc3339 parsing and formatting") {
  auto t = parse_rfc3339("2020-03-02T23:02:42+01:00");
  REQUIRE(t.has_value());
  CHECK(format_rfc3339(*t) == "2020-03-02T23:02:42+01:00");
  // 23:02:42 at +01:00 is 22:02:42 UTC
  auto utc = parse_rfc3339("2020-03-02T22:02:42Z");
  REQUIRE(utc.has_value());
  CHECK(utc->epoch_s == t->epoch_s);
  CHECK(format_rfc3339(*utc) == "2020-03-02T22:02:42+00:00");

  auto neg = parse_rfc3339("1979-05-02T23:26:55-05:00");
  REQUIRE(neg.has_value());
  CHECK(format_rfc3339(*neg) == "1979-05-02T23:26:55-05:00");

  CHECK(!parse_rfc3339("not a date"));
  CHECK(!parse_rfc3339("2020-13-02T00:00:00Z"));
}

TEST_CASE("utc calendar bucketing ignores the recorded offset") {
  // 2020-01-08T00:35:55+01:00 is 2020-01-07T23:35:55 UTC
  auto t = parse_rfc3339("2020-01-08T00:35:55+01:00");
  REQUIRE(t.has_value());
  CalendarDate d = utc_date(*t);
  CHECK(d.year == 2020);
  CHECK(d.month == 1);
  CHECK(d.day == 7);
  CHECK(utc_date_string(*t) == "2020-01-07");
}

TEST_CASE("byte strings survive the wire codec") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    size_t len = rng() % 32;
    for (size_t k = 0; k < len; ++k) raw += char(rng() % 256);
    json v = bytes_to_json(raw);
    REQUIRE(bytes_from_json(v) == raw);
    // the encoded form must itself serialize (valid UTF-8 throughout)
    REQUIRE_NOTHROW((void)v.dump());
  }
  CHECK(bytes_to_json("plain ascii").is_string());
  CHECK(bytes_to_json("caf\xe9").is_object());  // latin-1, not UTF-8
}

TEST_CASE("base64 corners") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foo") == "Zm9v");
  CHECK(base64_decode("Zm9v") == std::string("foo"));
  CHECK(!base64_decode("Zm9"));
  CHECK(!base64_decode("Z=9v"));
}

TEST_CASE("revision documents round trip") {
  RevisionMeta m;
  m.id = *Swhid::parse("swh:1:rev:" + std::string(40, 'a'));
  m.tree = *Swhid::parse("swh:1:dir:" + std::string(40, 'b'));
  m.parents = {*Swhid::parse("swh:1:rev:" + std::string(40, 'c')),
               *Swhid::parse("swh:1:rev:" + std::string(40, 'd'))};
  m.author = {"Alice", "alice@example.org"};
  m.committer = {"Bob", "bob@example.org"};
  m.author_date = *parse_rfc3339("2021-06-01T10:00:00+02:00");
  m.committer_date = *parse_rfc3339("2021-06-01T11:30:00+02:00");
  m.message = std::string("binary \xff\x00 message", 18);

  RevisionMeta back = revision_from_json(to_json(m));
  CHECK(back.id == m.id);
  CHECK(back.tree == m.tree);
  CHECK(back.parents == m.parents);
  CHECK(back.author.name == m.author.name);
  CHECK(back.committer_date == m.committer_date);
  CHECK(back.message == m.message);

  // parent order is preserved as sent
  CHECK(back.parents[0].hash == std::string(40, 'c'));
  CHECK(back.parents[1].hash == std::string(40, 'd'));
}

TEST_CASE("snapshot alias chains are bounded") {
  SnapshotBranches s;
  s.id = *Swhid::parse("swh:1:snp:" + std::string(40, '1'));
  s.branches["refs/heads/main"] =
      *Swhid::parse("swh:1:rev:" + std::string(40, '2'));
  s.aliases["HEAD"] = "refs/heads/main";
  CHECK(resolve_branch(s, "HEAD") == s.branches["refs/heads/main"]);
  CHECK(resolve_branch(s, "refs/heads/main").has_value());
  CHECK(!resolve_branch(s, "missing"));

  s.aliases["a"] = "b";
  s.aliases["b"] = "a";
  CHECK(!resolve_branch(s, "a"));  // cycle

  // decoding a snapshot document with a cyclic alias fails
  json doc = to_json(s);
  CHECK_THROWS(snapshot_from_json(doc));
}
