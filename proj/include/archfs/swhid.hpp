#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace archfs {

enum class ObjectType : uint8_t { Content, Directory, Revision, Release, Snapshot };

const char *type_tag(ObjectType t);  // "cnt", "dir", ...
std::optional<ObjectType> parse_type_tag(std::string_view tag);

enum class SwhidError {
  BadNamespace,  // does not start with "swh:"
  BadVersion,    // scheme version is not "1"
  BadType,       // unknown object type tag
  BadHash,       // hash is not 40 lowercase hex digits
  Qualified,     // trailing ";qualifier=..." present; not accepted in paths
};

// Persistent identifier of one archived object: swh:1:<type>:<40 hex>.
// Only the canonical lowercase serialization is accepted.
struct Swhid {
  ObjectType type = ObjectType::Content;
  std::string hash;  // exactly 40 chars of [0-9a-f]

  static std::optional<Swhid> parse(std::string_view s, SwhidError *err = nullptr);
  std::string to_string() const;

  // First n hex characters of the hash; used for shard directory names.
  std::string shard_prefix(size_t n) const { return hash.substr(0, n); }

  bool operator==(const Swhid &) const = default;
  auto operator<=>(const Swhid &) const = default;
};

inline bool is_hex_lower(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

}  // namespace archfs
