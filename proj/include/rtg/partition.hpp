#pragma once

#include <compare>
#include <functional>
#include <string>
#include <vector>

namespace rtg {

// A partition of [n] = {1..n}. Blocks are ordered by least element and stored
// as a restricted growth string: rgs[i] is the block of label i+1.
class Partition {
 public:
  Partition() = default;
  Partition(int n, const std::vector<std::vector<int>>& blocks);

  static Partition trivial(int n);
  static Partition singletons(int n);
  // Any labelling of blocks; it gets canonicalised.
  static Partition from_block_ids(const std::vector<int>& ids);

  int n() const { return static_cast<int>(rgs_.size()); }
  int num_blocks() const { return k_; }
  bool is_trivial() const { return k_ <= 1; }

  // 0-based block index of label (1-based).
  int block_of(int label) const { return rgs_[label - 1]; }
  std::vector<int> block(int i) const;
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> sizes() const;
  int block_size(int i) const;
  const std::vector<int>& rgs() const { return rgs_; }

  // pi^[m]
  Partition restrict_to(int m) const;
  // Adds label n+1 to block i (0-based). i == num_blocks() opens a new block.
  Partition extended(int i) const;
  // Decreasing block sizes divided by n.
  std::vector<double> ranked_frequencies() const;

  std::string str() const;  // "{1,3}{2}"

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> rgs_;
  int k_ = 0;
};

// Parses "{1,3}{2}" (separators between blocks are ignored).
Partition parse_partition(const std::string& text);

// Relabels blocks of an arbitrary finite label set increasingly onto [m].
Partition relabel_increasing(const std::vector<std::vector<int>>& blocks);

// (#B_i / n) in block order.
std::vector<double> empirical_frequencies(const Partition& pi);
// Non-increasing rearrangement; entries must lie in [0,1].
std::vector<double> decreasing_rearrangement(std::vector<double> seq);

inline constexpr int kMaxEnumeratePartitions = 10;

// All partitions of [n] in restricted-growth order. Throws ResourceError for n > 10 unless forced.
void for_each_partition(int n, const std::function<void(const Partition&)>& fn, bool force = false);
std::vector<Partition> all_partitions(int n, bool force = false);
// Partitions with at least two blocks.
std::vector<Partition> nontrivial_partitions(int n, bool force = false);

}  // namespace rtg
