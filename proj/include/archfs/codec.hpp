#pragma once

#include <nlohmann/json.hpp>

#include "archfs/types.hpp"

// Wire/document codec shared by the HTTP client, the mock server, and the
// metadata cache, so all three agree on one canonical JSON form
// (see docs/protocol.md).
//
// Byte-string fields (entry names, branch names, commit messages) are plain
// JSON strings when the bytes are valid UTF-8 and {"b64": "<base64>"}
// objects otherwise.

namespace archfs {

using json = nlohmann::json;

std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

bool is_valid_utf8(std::string_view bytes);

json bytes_to_json(std::string_view bytes);
// Throws ArchiveError(Transport) on malformed values.
std::string bytes_from_json(const json &v);

json to_json(const DirEntry &e);
json to_json(const RevisionMeta &m);
json to_json(const ReleaseMeta &m);
json to_json(const SnapshotBranches &s);  // full branch list, no paging
json to_json(const OriginVisit &v);

// All decoders throw ArchiveError(Transport) on schema violations.
DirEntry dir_entry_from_json(const json &j);
RevisionMeta revision_from_json(const json &j);
ReleaseMeta release_from_json(const json &j);
SnapshotBranches snapshot_from_json(const json &j);
OriginVisit visit_from_json(const json &j);

Swhid swhid_field(const json &j, const char *field);
OffsetTime time_field(const json &j, const char *field);

// Canonical document bytes as cached and exposed via the *.json virtual
// files: indented dump with sorted keys and a trailing newline.
std::string canonical_dump(const json &j);

}  // namespace archfs
