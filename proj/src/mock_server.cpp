#include "archfs/mock_server.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "archfs/codec.hpp"
#include "archfs/percent.hpp"

namespace archfs {

namespace {

void send_error(httplib::Response &res, int status, const std::string &kind,
                const std::string &message) {
  res.status = status;
  res.set_content(json{{"error", kind}, {"message", message}}.dump(),
                  "application/json");
}

}  // namespace

struct MockArchiveServer::Impl {
  FixtureArchive archive;
  MockOptions opts;
  httplib::Server server;
  std::thread thread;

  mutable std::mutex mu;
  std::vector<RequestRecord> log;
  std::map<Endpoint, std::chrono::milliseconds> delays;
  struct Fault {
    int remaining = 0;
    int status = 500;
    int retry_after_s = 0;
  };
  std::map<Endpoint, Fault> faults;

  // Returns false if the request was already answered (auth or fault).
  bool enter(Endpoint ep, const httplib::Request &req, httplib::Response &res) {
    std::chrono::milliseconds delay{0};
    {
      std::lock_guard lk(mu);
      log.push_back({ep, req.path, std::chrono::steady_clock::now()});
      auto d = delays.find(ep);
      if (d != delays.end()) delay = d->second;
    }
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    if (!opts.required_token.empty()) {
      if (req.get_header_value("Authorization") !=
          "Bearer " + opts.required_token) {
        send_error(res, 401, "unauthorized", "missing or wrong token");
        return false;
      }
    }
    {
      std::lock_guard lk(mu);
      auto f = faults.find(ep);
      if (f != faults.end() && f->second.remaining > 0) {
        --f->second.remaining;
        if (f->second.status == 429) {
          res.set_header("Retry-After", std::to_string(f->second.retry_after_s));
          send_error(res, 429, "rate_limited", "slow down");
        } else {
          send_error(res, f->second.status, "injected", "injected failure");
        }
        return false;
      }
    }
    return true;
  }

  size_t page_start(const httplib::Request &req) const {
    if (!req.has_param("page_token")) return 0;
    try {
      return std::stoull(req.get_param_value("page_token"));
    } catch (...) {
      return 0;
    }
  }

  void route();
};

void MockArchiveServer::Impl::route() {
  const std::string base = "/api/1";

  server.Get(base + R"(/content/raw/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::ContentRaw, req, res)) return;
               auto it = archive.blobs.find(req.matches[1]);
               if (it == archive.blobs.end()) {
                 return send_error(res, 404, "not_found", "no such content");
               }
               res.set_content(it->second, "application/octet-stream");
             });

  server.Get(base + R"(/directory/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Directory, req, res)) return;
               auto it = archive.dirs.find(req.matches[1]);
               if (it == archive.dirs.end()) {
                 return send_error(res, 404, "not_found", "no such directory");
               }
               const auto &entries = it->second;
               size_t start = page_start(req);
               size_t end = std::min(entries.size(), start + opts.page_size);
               json out{{"id", std::string(req.matches[1])}};
               json arr = json::array();
               for (size_t i = start; i < end; ++i) {
                 arr.push_back(to_json(entries[i]));
               }
               out["entries"] = std::move(arr);
               out["next"] = end < entries.size()
                                 ? json(std::to_string(end))
                                 : json(nullptr);
               res.set_content(out.dump(), "application/json");
             });

  server.Get(base + R"(/revision/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Revision, req, res)) return;
               auto it = archive.revisions.find(req.matches[1]);
               if (it == archive.revisions.end()) {
                 return send_error(res, 404, "not_found", "no such revision");
               }
               res.set_content(to_json(it->second).dump(), "application/json");
             });

  server.Get(base + R"(/release/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Release, req, res)) return;
               auto it = archive.releases.find(req.matches[1]);
               if (it == archive.releases.end()) {
                 return send_error(res, 404, "not_found", "no such release");
               }
               res.set_content(to_json(it->second).dump(), "application/json");
             });

  server.Get(base + R"(/snapshot/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Snapshot, req, res)) return;
               auto it = archive.snapshots.find(req.matches[1]);
               if (it == archive.snapshots.end()) {
                 return send_error(res, 404, "not_found", "no such snapshot");
               }
               json full = to_json(it->second);
               const json &all = full["branches"];
               size_t start = page_start(req);
               size_t end = std::min(all.size(), start + opts.page_size);
               json out{{"id", full["id"]}};
               json arr = json::array();
               for (size_t i = start; i < end; ++i) arr.push_back(all[i]);
               out["branches"] = std::move(arr);
               out["next"] =
                   end < all.size() ? json(std::to_string(end)) : json(nullptr);
               res.set_content(out.dump(), "application/json");
             });

  // The origin URL arrives percent-encoded as one path component, but
  // httplib hands us the decoded path; (.+) is greedy so a decoded URL
  // containing "/visits" still splits at the final occurrence.
  server.Get(base + R"(/origin/(.+)/visits)",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::OriginVisits, req, res)) return;
               std::string url = req.matches[1];
               auto it = archive.origins.find(url);
               if (it == archive.origins.end()) {
                 return send_error(res, 404, "not_found", "unknown origin");
               }
               json visits = json::array();
               for (const auto &v : it->second) visits.push_back(to_json(v));
               res.set_content(
                   json{{"url", url}, {"visits", visits}}.dump(),
                   "application/json");
             });

  server.Get(base + R"(/origin/search)",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Search, req, res)) return;
               std::string q = req.get_param_value("q");
               if (q.empty()) {
                 return send_error(res, 400, "bad_pattern", "empty pattern");
               }
               size_t limit = 100;
               if (req.has_param("limit")) {
                 try {
                   limit = std::stoull(req.get_param_value("limit"));
                 } catch (...) {
                 }
               }
               json results = json::array();
               for (const auto &[url, visits] : archive.origins) {
                 (void)visits;
                 if (url.find(q) != std::string::npos) {
                   results.push_back(url);
                   if (results.size() >= limit) break;
                 }
               }
               res.set_content(json{{"results", results}}.dump(),
                               "application/json");
             });

  server.Get(base + R"(/graph/visit/nodes/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               if (!enter(Endpoint::Graph, req, res)) return;
               if (!opts.graph_enabled) {
                 return send_error(res, 501, "graph_unavailable",
                                   "graph traversal not deployed");
               }
               std::string key = req.matches[1];
               auto it = archive.revisions.find(key);
               if (it == archive.revisions.end()) {
                 return send_error(res, 404, "not_found", "no such revision");
               }
               // BFS over parent edges, discovery order, start included.
               json nodes = json::array();
               std::vector<std::string> queue{key};
               std::map<std::string, bool> seen{{key, true}};
               for (size_t i = 0; i < queue.size(); ++i) {
                 const RevisionMeta &m = archive.revisions.at(queue[i]);
                 nodes.push_back(
                     json{{"id", queue[i]},
                          {"committer_date", format_rfc3339(m.committer_date)}});
                 for (const auto &p : m.parents) {
                   std::string pk = p.to_string();
                   if (!seen[pk]) {
                     seen[pk] = true;
                     queue.push_back(pk);
                   }
                 }
               }
               res.set_content(json{{"nodes", nodes}}.dump(),
                               "application/json");
             });
}

MockArchiveServer::MockArchiveServer(FixtureArchive archive, MockOptions opts)
    : impl_(std::make_unique<Impl>()) {
  impl_->archive = std::move(archive);
  impl_->opts = std::move(opts);
  impl_->route();
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock server: cannot bind a port");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockArchiveServer::~MockArchiveServer() { stop(); }

void MockArchiveServer::stop() {
  if (impl_ && impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

std::string MockArchiveServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/api/1";
}

const FixtureArchive &MockArchiveServer::archive() const {
  return impl_->archive;
}

void MockArchiveServer::set_delay(Endpoint ep, std::chrono::milliseconds d) {
  std::lock_guard lk(impl_->mu);
  impl_->delays[ep] = d;
}

void MockArchiveServer::fail_next(Endpoint ep, int count, int status,
                                  int retry_after_s) {
  std::lock_guard lk(impl_->mu);
  impl_->faults[ep] = {count, status, retry_after_s};
}

std::vector<RequestRecord> MockArchiveServer::log() const {
  std::lock_guard lk(impl_->mu);
  return impl_->log;
}

size_t MockArchiveServer::count(Endpoint ep) const {
  std::lock_guard lk(impl_->mu);
  size_t n = 0;
  for (const auto &r : impl_->log) {
    if (r.endpoint == ep) ++n;
  }
  return n;
}

void MockArchiveServer::clear_log() {
  std::lock_guard lk(impl_->mu);
  impl_->log.clear();
}

}  // namespace archfs
