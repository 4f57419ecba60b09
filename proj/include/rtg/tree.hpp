#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rtg {

// Planted rooted tree: node 0 is the root, which has exactly one child.
// Leaves carry labels 1..n; other nodes have at least two children.
// Children are kept ordered by least leaf label.
class LabelledTree {
 public:
  struct Node {
    int parent = -1;
    std::vector<int> children;
    int label = 0;        // leaf label, 0 for inner nodes
    int leaves = 0;       // leaves below
    int min_label = 0;    // least leaf label below
    double length = 0.0;  // edge to parent
  };

  LabelledTree();  // the one-leaf tree T_1
  static LabelledTree single_leaf() { return LabelledTree(); }

  int root() const { return 0; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int v) const { return nodes_[v]; }
  int leaf_count() const { return nodes_[0].leaves; }
  bool is_leaf(int v) const { return v != 0 && nodes_[v].children.empty(); }
  // node id of the leaf with this label (-1 if absent)
  int leaf_node(int label) const;
  // first branch point (or the only leaf when n = 1)
  int top() const { return nodes_[0].children.front(); }

  // New leaf with the next label on the edge above v (v != root). Returns the leaf id.
  int insert_on_edge(int v);
  // New leaf with the next label attached to inner node v. Returns the leaf id.
  int attach_leaf(int v);

  void set_length(int v, double len) { nodes_[v].length = len; }

  // Removes the leaf with this label; labels above it shift down by one.
  // A parent left with one child is contracted (edge lengths add).
  LabelledTree without_leaf(int label) const;

  // Label sets of the children of v, in child order.
  std::vector<std::vector<int>> child_label_sets(int v) const;
  std::vector<int> labels_below(int v) const;

  // Edge count from root to the deepest leaf (T_1 has height 1).
  int height() const;
  // Sum of edge lengths along the heaviest root-leaf path.
  double timed_height() const;
  int depth_of_leaf(int label) const;

  // Canonical strings: equal iff the trees are equal as labelled (resp. unlabelled) trees.
  std::string canonical() const;
  std::string shape() const;

  bool check_invariants(std::string* why = nullptr) const;

  std::vector<Node>& raw_nodes() { return nodes_; }
  const std::vector<Node>& raw_nodes() const { return nodes_; }
  // rebuild leaves/min_label after direct edits
  void recompute();

 private:
  std::vector<Node> nodes_;
  void bump_ancestors(int v, int label);
};

class Partition;

// Label sets above the first branch point, as a partition of [n] (n >= 2).
Partition first_split(const LabelledTree& t);
// Span of the root and the leaves in B with unary vertices suppressed; labels are
// mapped onto [#B] increasingly.
LabelledTree reduced_subtree(const LabelledTree& t, std::vector<int> B);
// depth (edge count) of leaf i at index i - 1
std::vector<int> leaf_depths(const LabelledTree& t);

// Newick text. Without lengths: "((1,2),3);"; T_1 is written "(1);".
// With lengths every edge gets ":len", the root edge after the outer group.
std::string to_newick(const LabelledTree& t, bool lengths = false);
LabelledTree parse_newick(const std::string& text);

// Visits every tree in T_n (leaf-labelled, no unary inner nodes). Guarded at n <= 8.
inline constexpr int kMaxEnumerateTrees = 8;
void for_each_tree(int n, const std::function<void(const LabelledTree&)>& fn, bool force = false);
long count_trees(int n, bool force = false);

}  // namespace rtg
