#include "archfs/history.hpp"

#include <algorithm>
#include <set>

namespace archfs {

std::vector<DirEntry> ArchiveSource::read_directory(const Swhid &id) {
  std::vector<DirEntry> out;
  auto pager = list_directory(id);
  while (pager->next_page(out)) {
  }
  return out;
}

void sort_history(std::vector<HistoryNode> &nodes) {
  std::sort(nodes.begin(), nodes.end(), history_order_less);
}

std::vector<Swhid> walk_parents(ArchiveSource &source, const Swhid &id) {
  std::vector<HistoryNode> nodes;
  std::set<std::string> seen{id.to_string()};
  std::vector<Swhid> queue{id};
  for (size_t i = 0; i < queue.size(); ++i) {
    RevisionMeta meta = source.get_revision(queue[i]);
    if (i > 0) {
      nodes.push_back({meta.id, meta.committer_date.epoch_s});
    }
    for (const auto &p : meta.parents) {
      if (seen.insert(p.to_string()).second) queue.push_back(p);
    }
  }
  sort_history(nodes);
  std::vector<Swhid> out;
  out.reserve(nodes.size());
  for (auto &n : nodes) out.push_back(std::move(n.id));
  return out;
}

}  // namespace archfs
