#include "coupling/partition.hpp"

#include <algorithm>

#include "coupling/errors.hpp"

namespace coupling {

Partition::Partition(int n, std::vector<std::vector<int>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  block_index_.assign(n_, -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto& blk = blocks_[b];
    if (blk.empty())
      raise(errc::precondition_failed, "partition blocks must be non-empty");
    std::sort(blk.begin(), blk.end());
    for (int s : blk) {
      if (s < 0 || s >= n_)
        raise(errc::out_of_range_symbol,
              "state " + std::to_string(s + 1) + " outside 1.." + std::to_string(n_));
      if (block_index_[s] != -1)
        raise(errc::precondition_failed,
              "state " + std::to_string(s + 1) + " appears in two blocks");
      block_index_[s] = static_cast<int>(b);
    }
  }
  for (int s = 0; s < n_; ++s)
    if (block_index_[s] == -1)
      raise(errc::precondition_failed,
            "state " + std::to_string(s + 1) + " missing from the partition");
  std::sort(blocks_.begin(), blocks_.end());
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (int s : blocks_[b]) block_index_[s] = static_cast<int>(b);
}

Partition Partition::singletons(int n) {
  std::vector<std::vector<int>> blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = {i};
  return Partition(n, std::move(blocks));
}

Partition Partition::whole(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return Partition(n, {all});
}

Partition Partition::from_equality_pattern(const std::vector<int>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<std::vector<int>> blocks;
  std::vector<int> label(n, -1);  // value -> block position
  for (int i = 0; i < n; ++i) {
    int v = values[i];
    if (label[v] < 0) {
      label[v] = static_cast<int>(blocks.size());
      blocks.push_back({});
    }
    blocks[label[v]].push_back(i);
  }
  return Partition(n, std::move(blocks));
}

}  // namespace coupling
