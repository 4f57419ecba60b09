#include "rtg/partition.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "rtg/error.hpp"

namespace rtg {

Partition::Partition(int n, const std::vector<std::vector<int>>& blocks) {
  if (n < 0) throw SpecError("partition size must be non-negative");
  std::vector<int> ids(static_cast<size_t>(n), -1);
  int b = 0;
  for (const auto& blk : blocks) {
    if (blk.empty()) throw SpecError("partition has an empty block");
    for (int x : blk) {
      if (x < 1 || x > n) throw SpecError("label " + std::to_string(x) + " outside [1," + std::to_string(n) + "]");
      if (ids[x - 1] != -1) throw SpecError("label " + std::to_string(x) + " appears twice");
      ids[x - 1] = b;
    }
    ++b;
  }
  for (int i = 0; i < n; ++i)
    if (ids[i] == -1) throw SpecError("label " + std::to_string(i + 1) + " missing from partition");
  *this = from_block_ids(ids);
}

Partition Partition::trivial(int n) {
  Partition p;
  p.rgs_.assign(static_cast<size_t>(n), 0);
  p.k_ = n > 0 ? 1 : 0;
  return p;
}

Partition Partition::singletons(int n) {
  Partition p;
  p.rgs_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p.rgs_[i] = i;
  p.k_ = n;
  return p;
}

Partition Partition::from_block_ids(const std::vector<int>& ids) {
  Partition p;
  p.rgs_.resize(ids.size());
  std::map<int, int> seen;
  for (size_t i = 0; i < ids.size(); ++i) {
    auto [it, fresh] = seen.emplace(ids[i], static_cast<int>(seen.size()));
    p.rgs_[i] = it->second;
  }
  p.k_ = static_cast<int>(seen.size());
  return p;
}

std::vector<int> Partition::block(int i) const {
  std::vector<int> out;
  for (int x = 0; x < n(); ++x)
    if (rgs_[x] == i) out.push_back(x + 1);
  return out;
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(static_cast<size_t>(k_));
  for (int x = 0; x < n(); ++x) out[rgs_[x]].push_back(x + 1);
  return out;
}

std::vector<int> Partition::sizes() const {
  std::vector<int> out(static_cast<size_t>(k_), 0);
  for (int b : rgs_) ++out[b];
  return out;
}

int Partition::block_size(int i) const { return static_cast<int>(std::count(rgs_.begin(), rgs_.end(), i)); }

Partition Partition::restrict_to(int m) const {
  if (m < 0 || m > n()) throw SpecError("restriction level outside [0,n]");
  Partition p;
  p.rgs_.assign(rgs_.begin(), rgs_.begin() + m);
  p.k_ = m == 0 ? 0 : *std::max_element(p.rgs_.begin(), p.rgs_.end()) + 1;
  return p;
}

Partition Partition::extended(int i) const {
  if (i < 0 || i > k_) throw SpecError("block index out of range");
  Partition p = *this;
  p.rgs_.push_back(i);
  if (i == k_) ++p.k_;
  return p;
}

std::vector<double> Partition::ranked_frequencies() const {
  auto s = sizes();
  std::sort(s.begin(), s.end(), std::greater<>());
  std::vector<double> out;
  for (int x : s) out.push_back(static_cast<double>(x) / n());
  return out;
}

std::string Partition::str() const {
  std::ostringstream os;
  for (const auto& b : blocks()) {
    os << '{';
    for (size_t j = 0; j < b.size(); ++j) os << (j ? "," : "") << b[j];
    os << '}';
  }
  if (n() == 0) os << "{}";
  return os.str();
}

Partition parse_partition(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::vector<int>* cur = nullptr;
  int n = 0;
  for (size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '{') {
      if (cur) throw SpecError("nested '{' in partition '" + text + "'");
      blocks.emplace_back();
      cur = &blocks.back();
      ++i;
    } else if (c == '}') {
      if (!cur) throw SpecError("unmatched '}' in partition '" + text + "'");
      cur = nullptr;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (!cur) throw SpecError("label outside a block in '" + text + "'");
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      int v = std::stoi(text.substr(i, j - i));
      cur->push_back(v);
      n = std::max(n, v);
      i = j;
    } else if (c == ',' || c == ' ' || c == '|' || c == ';') {
      ++i;
    } else {
      throw SpecError("unexpected character in partition '" + text + "'");
    }
  }
  if (cur) throw SpecError("unterminated block in '" + text + "'");
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](auto& b) { return b.empty(); }), blocks.end());
  int total = 0;
  for (auto& b : blocks) total += static_cast<int>(b.size());
  if (total != n) throw SpecError("partition '" + text + "' does not cover [1," + std::to_string(n) + "]");
  return Partition(n, blocks);
}

Partition relabel_increasing(const std::vector<std::vector<int>>& blocks) {
  std::vector<std::pair<int, int>> tagged;
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int x : blocks[b]) tagged.emplace_back(x, static_cast<int>(b));
  std::sort(tagged.begin(), tagged.end());
  for (size_t i = 1; i < tagged.size(); ++i)
    if (tagged[i].first == tagged[i - 1].first) throw SpecError("label repeated across blocks");
  std::vector<int> ids;
  ids.reserve(tagged.size());
  for (auto& t : tagged) ids.push_back(t.second);
  return Partition::from_block_ids(ids);
}

void for_each_partition(int n, const std::function<void(const Partition&)>& fn, bool force) {
  if (n < 1) throw SpecError("partition enumeration needs n >= 1");
  if (n > kMaxEnumeratePartitions && !force)
    throw ResourceError("enumerating partitions of [" + std::to_string(n) + "] exceeds the n <= 10 guard (use force)");
  std::vector<int> ids(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int k) {
    if (pos == n) {
      fn(Partition::from_block_ids(ids));
      return;
    }
    for (int b = 0; b <= k; ++b) {
      ids[pos] = b;
      rec(pos + 1, std::max(k, b + 1));
    }
  };
  rec(1, 1);
}

std::vector<Partition> all_partitions(int n, bool force) {
  std::vector<Partition> out;
  for_each_partition(n, [&](const Partition& p) { out.push_back(p); }, force);
  return out;
}

std::vector<Partition> nontrivial_partitions(int n, bool force) {
  std::vector<Partition> out;
  for_each_partition(
      n, [&](const Partition& p) {
        if (!p.is_trivial()) out.push_back(p);
      },
      force);
  return out;
}

std::vector<double> empirical_frequencies(const Partition& pi) {
  std::vector<double> f;
  for (int s : pi.sizes()) f.push_back(static_cast<double>(s) / pi.n());
  return f;
}

std::vector<double> decreasing_rearrangement(std::vector<double> seq) {
  for (double x : seq)
    if (!(x >= 0 && x <= 1)) throw SpecError("rearrangement entries must lie in [0,1]");
  std::sort(seq.begin(), seq.end(), std::greater<>());
  return seq;
}

}  // namespace rtg
