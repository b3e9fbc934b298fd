#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace archfs {

// RFC 3986 percent-encoding. Everything outside the unreserved set
// (ALPHA / DIGIT / "-" / "." / "_" / "~") is encoded as %XX uppercase.
std::string percent_encode(std::string_view raw);

// Strict decoding: rejects stray '%' and non-hex escape digits.
std::optional<std::string> percent_decode(std::string_view encoded);

}  // namespace archfs
