#include "archfs/codec.hpp"

#include "archfs/error.hpp"

namespace archfs {

namespace {

const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

[[noreturn]] void bad(const std::string &what) {
  throw ArchiveError(ErrorKind::Transport, "malformed document: " + what);
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8) |
                 uint8_t(bytes[i + 2]);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
    out += kB64Alphabet[v & 63];
    i += 3;
  }
  size_t rem = bytes.size() - i;
  if (rem == 1) {
    uint32_t v = uint8_t(bytes[i]) << 16;
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += "==";
  } else if (rem == 2) {
    uint32_t v = (uint8_t(bytes[i]) << 16) | (uint8_t(bytes[i + 1]) << 8);
    out += kB64Alphabet[(v >> 18) & 63];
    out += kB64Alphabet[(v >> 12) & 63];
    out += kB64Alphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) return std::nullopt;
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) return std::nullopt;
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) return std::nullopt;  // '=' only at the end
      int d = val(c);
      if (d < 0) return std::nullopt;
      v = (v << 6) | uint32_t(d);
    }
    out += char((v >> 16) & 0xff);
    if (pad < 2) out += char((v >> 8) & 0xff);
    if (pad < 1) out += char(v & 0xff);
  }
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  size_t i = 0;
  while (i < bytes.size()) {
    uint8_t c = bytes[i];
    size_t len;
    uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > bytes.size()) return false;
    for (size_t k = 1; k < len; ++k) {
      uint8_t cc = bytes[i + k];
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // overlongs, surrogates, out of range
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len;
  }
  return true;
}

json bytes_to_json(std::string_view bytes) {
  if (is_valid_utf8(bytes)) return std::string(bytes);
  return json{{"b64", base64_encode(bytes)}};
}

std::string bytes_from_json(const json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("b64") && v["b64"].is_string()) {
    auto decoded = base64_decode(v["b64"].get<std::string>());
    if (!decoded) bad("invalid base64 payload");
    return *decoded;
  }
  bad("expected string or {\"b64\": ...}");
}

Swhid swhid_field(const json &j, const char *field) {
  if (!j.contains(field) || !j[field].is_string()) {
    bad(std::string("missing identifier field '") + field + "'");
  }
  auto id = Swhid::parse(j[field].get<std::string>());
  if (!id) bad(std::string("invalid identifier in '") + field + "'");
  return *id;
}

OffsetTime time_field(const json &j, const char *field) {
  if (!j.contains(field) || !j[field].is_string()) {
    bad(std::string("missing timestamp field '") + field + "'");
  }
  auto t = parse_rfc3339(j[field].get<std::string>());
  if (!t) bad(std::string("invalid timestamp in '") + field + "'");
  return *t;
}

const char *perm_tag(EntryPerm p) {
  switch (p) {
    case EntryPerm::File: return "file";
    case EntryPerm::ExecutableFile: return "exec";
    case EntryPerm::Symlink: return "symlink";
    case EntryPerm::Subdirectory: return "dir";
    case EntryPerm::SubmoduleRevision: return "rev";
  }
  return "?";
}

std::optional<EntryPerm> parse_perm_tag(std::string_view tag) {
  if (tag == "file") return EntryPerm::File;
  if (tag == "exec") return EntryPerm::ExecutableFile;
  if (tag == "symlink") return EntryPerm::Symlink;
  if (tag == "dir") return EntryPerm::Subdirectory;
  if (tag == "rev") return EntryPerm::SubmoduleRevision;
  return std::nullopt;
}

std::optional<Swhid> resolve_branch(const SnapshotBranches &snap,
                                    const std::string &name, int max_depth) {
  std::string cur = name;
  for (int i = 0; i <= max_depth; ++i) {
    auto b = snap.branches.find(cur);
    if (b != snap.branches.end()) return b->second;
    auto a = snap.aliases.find(cur);
    if (a == snap.aliases.end()) return std::nullopt;
    cur = a->second;
  }
  return std::nullopt;  // chain too deep or cyclic
}

json to_json(const DirEntry &e) {
  return json{{"name", bytes_to_json(e.name)},
              {"target", e.target.to_string()},
              {"perm", perm_tag(e.perm)}};
}

DirEntry dir_entry_from_json(const json &j) {
  if (!j.is_object()) bad("directory entry is not an object");
  DirEntry e;
  if (!j.contains("name")) bad("directory entry without name");
  e.name = bytes_from_json(j["name"]);
  if (e.name.empty() || e.name.find('/') != std::string::npos ||
      e.name.find('\0') != std::string::npos) {
    bad("illegal bytes in entry name");
  }
  e.target = swhid_field(j, "target");
  if (!j.contains("perm") || !j["perm"].is_string()) bad("entry without perm");
  auto p = parse_perm_tag(j["perm"].get<std::string>());
  if (!p) bad("unknown perm tag");
  e.perm = *p;
  return e;
}

json to_json(const RevisionMeta &m) {
  return json{{"id", m.id.to_string()},
              {"tree", m.tree.to_string()},
              {"parents",
               [&] {
                 json a = json::array();
                 for (const auto &p : m.parents) a.push_back(p.to_string());
                 return a;
               }()},
              {"author", {{"name", bytes_to_json(m.author.name)},
                          {"email", bytes_to_json(m.author.email)}}},
              {"committer", {{"name", bytes_to_json(m.committer.name)},
                             {"email", bytes_to_json(m.committer.email)}}},
              {"date", format_rfc3339(m.author_date)},
              {"committer_date", format_rfc3339(m.committer_date)},
              {"message", bytes_to_json(m.message)}};
}

RevisionMeta revision_from_json(const json &j) {
  if (!j.is_object()) bad("revision document is not an object");
  RevisionMeta m;
  m.id = swhid_field(j, "id");
  m.tree = swhid_field(j, "tree");
  if (m.id.type != ObjectType::Revision) bad("revision id has wrong type");
  if (m.tree.type != ObjectType::Directory) bad("revision tree is not a dir");
  if (!j.contains("parents") || !j["parents"].is_array()) bad("parents missing");
  for (const auto &p : j["parents"]) {
    auto id = Swhid::parse(p.get<std::string>());
    if (!id || id->type != ObjectType::Revision) bad("bad parent identifier");
    m.parents.push_back(*id);
  }
  auto person = [&](const char *field) -> PersonDate {
    if (!j.contains(field) || !j[field].is_object()) bad("missing person field");
    PersonDate p;
    p.name = bytes_from_json(j[field]["name"]);
    p.email = bytes_from_json(j[field]["email"]);
    return p;
  };
  m.author = person("author");
  m.committer = person("committer");
  m.author_date = time_field(j, "date");
  m.committer_date = time_field(j, "committer_date");
  if (!j.contains("message")) bad("message missing");
  m.message = bytes_from_json(j["message"]);
  return m;
}

json to_json(const ReleaseMeta &m) {
  return json{{"id", m.id.to_string()},
              {"name", bytes_to_json(m.name)},
              {"target", m.target.to_string()},
              {"message", bytes_to_json(m.message)},
              {"date", format_rfc3339(m.date)}};
}

ReleaseMeta release_from_json(const json &j) {
  if (!j.is_object()) bad("release document is not an object");
  ReleaseMeta m;
  m.id = swhid_field(j, "id");
  if (m.id.type != ObjectType::Release) bad("release id has wrong type");
  m.name = bytes_from_json(j.value("name", json("")));
  m.target = swhid_field(j, "target");
  if (!j.contains("message")) bad("message missing");
  m.message = bytes_from_json(j["message"]);
  m.date = time_field(j, "date");
  return m;
}

json to_json(const SnapshotBranches &s) {
  json arr = json::array();
  for (const auto &[name, target] : s.branches) {
    arr.push_back(json{{"name", bytes_to_json(name)},
                       {"target", target.to_string()}});
  }
  for (const auto &[name, to] : s.aliases) {
    arr.push_back(json{{"name", bytes_to_json(name)},
                       {"alias", bytes_to_json(to)}});
  }
  return json{{"id", s.id.to_string()}, {"branches", arr}};
}

SnapshotBranches snapshot_from_json(const json &j) {
  if (!j.is_object()) bad("snapshot document is not an object");
  SnapshotBranches s;
  s.id = swhid_field(j, "id");
  if (s.id.type != ObjectType::Snapshot) bad("snapshot id has wrong type");
  if (!j.contains("branches") || !j["branches"].is_array()) bad("branches missing");
  for (const auto &b : j["branches"]) {
    std::string name = bytes_from_json(b.at("name"));
    if (b.contains("alias")) {
      s.aliases[name] = bytes_from_json(b["alias"]);
    } else {
      s.branches[name] = swhid_field(b, "target");
    }
  }
  // Enforce the alias-chain bound up front: a snapshot with unresolvable
  // aliases is treated as a malformed document.
  for (const auto &[name, to] : s.aliases) {
    (void)to;
    if (!resolve_branch(s, name)) bad("alias chain unresolvable: " + name);
  }
  return s;
}

json to_json(const OriginVisit &v) {
  json j{{"origin", v.origin_url}, {"date", format_rfc3339(v.date)}};
  j["snapshot"] = v.snapshot ? json(v.snapshot->to_string()) : json(nullptr);
  return j;
}

OriginVisit visit_from_json(const json &j) {
  if (!j.is_object()) bad("visit document is not an object");
  OriginVisit v;
  if (!j.contains("origin") || !j["origin"].is_string()) bad("origin missing");
  v.origin_url = j["origin"].get<std::string>();
  v.date = time_field(j, "date");
  if (j.contains("snapshot") && !j["snapshot"].is_null()) {
    auto id = Swhid::parse(j["snapshot"].get<std::string>());
    if (!id || id->type != ObjectType::Snapshot) bad("bad snapshot identifier");
    v.snapshot = *id;
  }
  return v;
}

std::string canonical_dump(const json &j) {
  return j.dump(2) + "\n";
}

}  // namespace archfs
