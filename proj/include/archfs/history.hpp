#pragma once

#include "archfs/archive_source.hpp"

namespace archfs {

struct HistoryNode {
  Swhid id;
  int64_t committer_epoch_s = 0;
};

// History order: newest committer instant first, equal instants broken by
// ascending hash. Gives every readdir of the history views a stable order.
inline bool history_order_less(const HistoryNode &a, const HistoryNode &b) {
  if (a.committer_epoch_s != b.committer_epoch_s) {
    return a.committer_epoch_s > b.committer_epoch_s;
  }
  return a.id.hash < b.id.hash;
}

void sort_history(std::vector<HistoryNode> &nodes);

// Reference traversal: repeated get_revision over parent edges, breadth
// first, then sorted. Same contract as ArchiveSource::history and usable
// against any source.
std::vector<Swhid> walk_parents(ArchiveSource &source, const Swhid &id);

}  // namespace archfs
