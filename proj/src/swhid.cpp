#include "archfs/swhid.hpp"

namespace archfs {

const char *type_tag(ObjectType t) {
  switch (t) {
    case ObjectType::Content: return "cnt";
    case ObjectType::Directory: return "dir";
    case ObjectType::Revision: return "rev";
    case ObjectType::Release: return "rel";
    case ObjectType::Snapshot: return "snp";
  }
  return "?";
}

std::optional<ObjectType> parse_type_tag(std::string_view tag) {
  if (tag == "cnt") return ObjectType::Content;
  if (tag == "dir") return ObjectType::Directory;
  if (tag == "rev") return ObjectType::Revision;
  if (tag == "rel") return ObjectType::Release;
  if (tag == "snp") return ObjectType::Snapshot;
  return std::nullopt;
}

std::optional<Swhid> Swhid::parse(std::string_view s, SwhidError *err) {
  auto fail = [&](SwhidError e) -> std::optional<Swhid> {
    if (err) *err = e;
    return std::nullopt;
  };

  // Qualified forms (";origin=..." etc.) are rejected outright: path
  // components and cache keys use core identifiers only.
  if (s.find(';') != std::string_view::npos) return fail(SwhidError::Qualified);

  if (s.substr(0, 4) != "swh:") return fail(SwhidError::BadNamespace);
  s.remove_prefix(4);

  size_t colon = s.find(':');
  if (colon == std::string_view::npos) return fail(SwhidError::BadVersion);
  if (s.substr(0, colon) != "1") return fail(SwhidError::BadVersion);
  s.remove_prefix(colon + 1);

  colon = s.find(':');
  if (colon == std::string_view::npos) return fail(SwhidError::BadType);
  auto type = parse_type_tag(s.substr(0, colon));
  if (!type) return fail(SwhidError::BadType);
  s.remove_prefix(colon + 1);

  if (s.size() != 40) return fail(SwhidError::BadHash);
  for (char c : s) {
    if (!is_hex_lower(c)) return fail(SwhidError::BadHash);
  }
  return Swhid{*type, std::string(s)};
}

std::string Swhid::to_string() const {
  std::string out = "swh:1:";
  out += type_tag(type);
  out += ':';
  out += hash;
  return out;
}

}  // namespace archfs
