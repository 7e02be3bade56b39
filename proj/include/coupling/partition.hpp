#ifndef COUPLING_PARTITION_HPP
#define COUPLING_PARTITION_HPP

#include <compare>
#include <vector>

namespace coupling {

// Partition of {0,..,n-1} into labeled blocks, canonically ordered by least
// element (and sorted within blocks).  Houses both lumping partitions and
// coalescence classes.
class Partition {
 public:
  Partition(int n, std::vector<std::vector<int>> blocks);

  static Partition singletons(int n);
  static Partition whole(int n);
  // Blocks are the equality classes of `values` (values[i] == values[j]
  // puts i and j in one block).
  static Partition from_equality_pattern(const std::vector<int>& values);

  int n() const { return n_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int b) const { return blocks_[b]; }
  int block_of(int state) const { return block_index_[state]; }
  bool is_trivial() const { return size() == 1 || size() == n_; }

  auto operator<=>(const Partition& other) const {
    return blocks_ <=> other.blocks_;
  }
  bool operator==(const Partition& other) const {
    return blocks_ == other.blocks_;
  }

 private:
  int n_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_index_;
};

}  // namespace coupling

#endif
