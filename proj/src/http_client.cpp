#include "archfs/http_client.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

#include <httplib.h>

#include "archfs/codec.hpp"
#include "archfs/error.hpp"
#include "archfs/history.hpp"
#include "archfs/percent.hpp"

namespace archfs {

namespace {

struct WireResponse {
  int status = 0;
  std::string body;
  std::string retry_after;
};

}  // namespace

struct HttpArchiveClient::Impl {
  ClientOptions opts;
  std::string host_base;     // "http://host:port"
  std::string path_prefix;   // "/api/1"

  // Fixed-size pool of keep-alive connections, checked out per request.
  std::mutex pool_mu;
  std::condition_variable pool_cv;
  std::vector<std::unique_ptr<httplib::Client>> pool;

  explicit Impl(ClientOptions o) : opts(std::move(o)) {
    const std::string &url = opts.base_url;
    size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
      throw ArchiveError(ErrorKind::Transport, "bad base url: " + url);
    }
    size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) {
      host_base = url;
    } else {
      host_base = url.substr(0, path);
      path_prefix = url.substr(path);
      while (!path_prefix.empty() && path_prefix.back() == '/') {
        path_prefix.pop_back();
      }
    }
    for (int i = 0; i < std::max(1, opts.pool_size); ++i) {
      pool.push_back(make_conn());
    }
  }

  std::unique_ptr<httplib::Client> make_conn() {
    auto c = std::make_unique<httplib::Client>(host_base);
    c->set_keep_alive(true);
    c->set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
                                  opts.connect_timeout)
                                  .count(),
                              (opts.connect_timeout.count() % 1000) * 1000);
    auto rt = std::chrono::duration_cast<std::chrono::seconds>(opts.request_timeout);
    c->set_read_timeout(rt.count(), (opts.request_timeout.count() % 1000) * 1000);
    c->set_write_timeout(rt.count(), (opts.request_timeout.count() % 1000) * 1000);
    if (!opts.auth_token.empty()) {
      c->set_default_headers({{"Authorization", "Bearer " + opts.auth_token}});
    }
    return c;
  }

  struct Lease {
    Impl *impl;
    std::unique_ptr<httplib::Client> conn;
    ~Lease() {
      std::lock_guard lk(impl->pool_mu);
      impl->pool.push_back(std::move(conn));
      impl->pool_cv.notify_one();
    }
  };

  Lease acquire() {
    std::unique_lock lk(pool_mu);
    pool_cv.wait(lk, [&] { return !pool.empty(); });
    auto conn = std::move(pool.back());
    pool.pop_back();
    return Lease{this, std::move(conn)};
  }

  // One GET with the retry policy: transport errors and 5xx retried with
  // exponential backoff, 429 retried after the server's Retry-After hint.
  // All other statuses are returned to the caller for interpretation.
  WireResponse get(const std::string &path) {
    std::string full = path_prefix + path;
    std::string last_error = "transport failure";
    for (int attempt = 0;; ++attempt) {
      bool retryable;
      {
        auto lease = acquire();
        httplib::Result result = lease.conn->Get(full);
        if (result) {
          int status = result->status;
          if (status == 429) {
            if (attempt >= opts.retries) {
              int hint = 0;
              try {
                hint = std::stoi(result->get_header_value("Retry-After"));
              } catch (...) {
              }
              throw ArchiveError(ErrorKind::RateLimited,
                                 "rate limited by " + host_base, hint);
            }
            int wait_s = 0;
            try {
              wait_s = std::stoi(result->get_header_value("Retry-After"));
            } catch (...) {
            }
            if (wait_s > 0) {
              std::this_thread::sleep_for(std::chrono::seconds(wait_s));
            }
            continue;
          }
          if (status >= 500 && status != 501) {
            last_error = "server error " + std::to_string(status);
            retryable = true;
          } else {
            WireResponse out;
            out.status = status;
            out.body = result->body;
            out.retry_after = result->get_header_value("Retry-After");
            if (status == 200) {
              std::string declared = result->get_header_value("Content-Length");
              if (!declared.empty() &&
                  std::stoull(declared) != out.body.size()) {
                throw ArchiveError(ErrorKind::Transport,
                                   "declared length mismatch on " + full);
              }
            }
            return out;
          }
        } else {
          last_error = httplib::to_string(result.error());
          retryable = true;
        }
      }
      if (retryable) {
        if (attempt >= opts.retries) {
          throw ArchiveError(ErrorKind::Transport,
                             "GET " + full + ": " + last_error);
        }
        auto delay = opts.backoff_base * (1LL << attempt);
        std::this_thread::sleep_for(delay);
      }
    }
  }

  json get_json(const std::string &path) {
    WireResponse r = get(path);
    interpret_status(r, path);
    try {
      return json::parse(r.body);
    } catch (const json::exception &e) {
      throw ArchiveError(ErrorKind::Transport,
                         "unparsable response for " + path + ": " + e.what());
    }
  }

  void interpret_status(const WireResponse &r, const std::string &path) {
    if (r.status == 200) return;
    if (r.status == 404) {
      throw ArchiveError(ErrorKind::NotFound, "not in archive: " + path);
    }
    if (r.status == 400) {
      throw ArchiveError(ErrorKind::BadPattern, "rejected request: " + path);
    }
    throw ArchiveError(ErrorKind::Transport, "HTTP " + std::to_string(r.status) +
                                                 " for " + path);
  }
};

namespace {

class HttpDirectoryPager : public DirectoryPager {
public:
  HttpDirectoryPager(HttpArchiveClient::Impl &impl, std::string id)
      : impl_(impl), id_(std::move(id)) {}

  bool next_page(std::vector<DirEntry> &out) override {
    if (done_) return false;
    std::string path = "/directory/" + id_;
    if (!next_token_.empty()) path += "?page_token=" + next_token_;
    json doc = impl_.get_json(path);
    if (!doc.contains("entries") || !doc["entries"].is_array()) {
      throw ArchiveError(ErrorKind::Transport, "malformed directory page");
    }
    for (const auto &e : doc["entries"]) {
      out.push_back(dir_entry_from_json(e));
    }
    if (doc.contains("next") && doc["next"].is_string()) {
      next_token_ = doc["next"].get<std::string>();
    } else {
      done_ = true;
    }
    return true;
  }

private:
  HttpArchiveClient::Impl &impl_;
  std::string id_;
  std::string next_token_;
  bool done_ = false;
};

}  // namespace

HttpArchiveClient::HttpArchiveClient(ClientOptions opts)
    : impl_(std::make_unique<Impl>(std::move(opts))) {}

HttpArchiveClient::~HttpArchiveClient() = default;

std::string HttpArchiveClient::get_blob(const Swhid &id) {
  WireResponse r = impl_->get("/content/raw/" + id.to_string());
  impl_->interpret_status(r, "/content/raw/" + id.to_string());
  return std::move(r.body);
}

std::unique_ptr<DirectoryPager> HttpArchiveClient::list_directory(
    const Swhid &id) {
  return std::make_unique<HttpDirectoryPager>(*impl_, id.to_string());
}

RevisionMeta HttpArchiveClient::get_revision(const Swhid &id) {
  return revision_from_json(impl_->get_json("/revision/" + id.to_string()));
}

ReleaseMeta HttpArchiveClient::get_release(const Swhid &id) {
  return release_from_json(impl_->get_json("/release/" + id.to_string()));
}

SnapshotBranches HttpArchiveClient::get_snapshot(const Swhid &id) {
  // Branch pages are stitched here; callers always see the whole map.
  SnapshotBranches out;
  out.id = id;
  std::string token;
  for (;;) {
    std::string path = "/snapshot/" + id.to_string();
    if (!token.empty()) path += "?page_token=" + token;
    json doc = impl_->get_json(path);
    json page{{"id", doc.at("id")}, {"branches", doc.at("branches")}};
    SnapshotBranches part = snapshot_from_json(page);
    out.branches.merge(part.branches);
    for (auto &[k, v] : part.aliases) out.aliases[k] = v;
    if (doc.contains("next") && doc["next"].is_string()) {
      token = doc["next"].get<std::string>();
    } else {
      break;
    }
  }
  // Full-map alias check (page-local checks may lack the target branch).
  for (const auto &[name, to] : out.aliases) {
    (void)to;
    if (!resolve_branch(out, name)) {
      throw ArchiveError(ErrorKind::Transport,
                         "snapshot alias unresolvable: " + name);
    }
  }
  return out;
}

std::vector<OriginVisit> HttpArchiveClient::get_origin_visits(
    const std::string &url) {
  json doc =
      impl_->get_json("/origin/" + percent_encode(url) + "/visits");
  if (!doc.contains("visits") || !doc["visits"].is_array()) {
    throw ArchiveError(ErrorKind::Transport, "malformed visit list");
  }
  std::vector<OriginVisit> visits;
  for (const auto &v : doc["visits"]) visits.push_back(visit_from_json(v));
  std::stable_sort(visits.begin(), visits.end(),
                   [](const OriginVisit &a, const OriginVisit &b) {
                     return a.date.epoch_s < b.date.epoch_s;
                   });
  return visits;
}

std::vector<std::string> HttpArchiveClient::search_origins(
    const std::string &pattern, int limit) {
  if (pattern.empty()) {
    throw ArchiveError(ErrorKind::BadPattern, "empty search pattern");
  }
  json doc = impl_->get_json("/origin/search?q=" + percent_encode(pattern) +
                             "&limit=" + std::to_string(std::max(1, limit)));
  std::vector<std::string> out;
  for (const auto &r : doc.at("results")) out.push_back(r.get<std::string>());
  return out;
}

std::vector<Swhid> HttpArchiveClient::history(const Swhid &id) {
  WireResponse r = impl_->get("/graph/visit/nodes/" + id.to_string());
  if (r.status == 200) {
    json doc;
    try {
      doc = json::parse(r.body);
    } catch (const json::exception &) {
      throw ArchiveError(ErrorKind::Transport, "unparsable graph response");
    }
    std::vector<HistoryNode> nodes;
    for (const auto &n : doc.at("nodes")) {
      Swhid nid = swhid_field(n, "id");
      if (nid == id) continue;  // visit includes the start node
      nodes.push_back({nid, time_field(n, "committer_date").epoch_s});
    }
    // The graph service makes no ordering promise; always re-sort.
    sort_history(nodes);
    std::vector<Swhid> out;
    out.reserve(nodes.size());
    for (auto &n : nodes) out.push_back(std::move(n.id));
    return out;
  }
  if (r.status == 404) {
    throw ArchiveError(ErrorKind::NotFound, "no such revision: " + id.to_string());
  }
  // Graph traversal not deployed on this backend; one call per commit.
  return walk_parents(*this, id);
}

void OfflineSource::fail() {
  throw ArchiveError(ErrorKind::Transport, "network disabled");
}

}  // namespace archfs
