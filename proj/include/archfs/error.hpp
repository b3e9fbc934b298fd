#pragma once

#include <stdexcept>
#include <string>

namespace archfs {

enum class ErrorKind {
  NotFound,     // object/origin absent from the archive
  Transport,    // network, HTTP, or malformed-response failure
  RateLimited,  // HTTP 429; retry_after_s carries the server hint
  BadPattern,   // invalid search pattern
  Storage,      // local cache I/O failure
};

class ArchiveError : public std::runtime_error {
public:
  ArchiveError(ErrorKind kind, std::string message, int retry_after_s = 0)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        retry_after_s_(retry_after_s) {}

  ErrorKind kind() const { return kind_; }
  int retry_after_s() const { return retry_after_s_; }

private:
  ErrorKind kind_;
  int retry_after_s_;
};

inline const char *to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::RateLimited: return "rate_limited";
    case ErrorKind::BadPattern: return "bad_pattern";
    case ErrorKind::Storage: return "storage";
  }
  return "unknown";
}

}  // namespace archfs
