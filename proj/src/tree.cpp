#include "rtg/tree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

#include "rtg/error.hpp"
#include "rtg/partition.hpp"

namespace rtg {

LabelledTree::LabelledTree() {
  nodes_.resize(2);
  nodes_[0].children = {1};
  nodes_[0].leaves = 1;
  nodes_[0].min_label = 1;
  nodes_[1].parent = 0;
  nodes_[1].label = 1;
  nodes_[1].leaves = 1;
  nodes_[1].min_label = 1;
}

int LabelledTree::leaf_node(int label) const {
  for (int v = 1; v < node_count(); ++v)
    if (nodes_[v].label == label && nodes_[v].children.empty()) return v;
  return -1;
}

void LabelledTree::bump_ancestors(int v, int) {
  for (int u = nodes_[v].parent; u != -1; u = nodes_[u].parent) ++nodes_[u].leaves;
}

int LabelledTree::insert_on_edge(int v) {
  if (v <= 0 || v >= node_count()) throw SpecError("insert_on_edge: bad node");
  const int label = leaf_count() + 1;
  const int p = nodes_[v].parent;
  const int w = node_count();
  const int leaf = w + 1;
  nodes_.emplace_back();
  nodes_.emplace_back();
  Node& W = nodes_[w];
  W.parent = p;
  W.children = {v, leaf};
  W.leaves = nodes_[v].leaves;
  W.min_label = nodes_[v].min_label;
  std::replace(nodes_[p].children.begin(), nodes_[p].children.end(), v, w);
  nodes_[v].parent = w;
  Node& L = nodes_[leaf];
  L.parent = w;
  L.label = label;
  L.leaves = 1;
  L.min_label = label;
  bump_ancestors(leaf, label);
  return leaf;
}

int LabelledTree::attach_leaf(int v) {
  if (v <= 0 || v >= node_count() || nodes_[v].children.empty()) throw SpecError("attach_leaf: needs an inner node");
  const int label = leaf_count() + 1;
  const int leaf = node_count();
  nodes_.emplace_back();
  Node& L = nodes_[leaf];
  L.parent = v;
  L.label = label;
  L.leaves = 1;
  L.min_label = label;
  nodes_[v].children.push_back(leaf);
  bump_ancestors(leaf, label);
  return leaf;
}

void LabelledTree::recompute() {
  // post-order without recursion
  std::vector<int> order;
  order.reserve(nodes_.size());
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : nodes_[v].children) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& x = nodes_[*it];
    if (x.children.empty() && *it != 0) {
      x.leaves = 1;
      x.min_label = x.label;
    } else {
      x.leaves = 0;
      x.min_label = 1 << 30;
      for (int c : x.children) {
        x.leaves += nodes_[c].leaves;
        x.min_label = std::min(x.min_label, nodes_[c].min_label);
      }
      std::sort(x.children.begin(), x.children.end(),
                [&](int a, int b) { return nodes_[a].min_label < nodes_[b].min_label; });
    }
  }
}

LabelledTree LabelledTree::without_leaf(int label) const {
  if (leaf_count() <= 1) throw SpecError("cannot remove the only leaf");
  int x = leaf_node(label);
  if (x < 0) throw SpecError("no leaf labelled " + std::to_string(label));
  std::vector<Node> ns = nodes_;
  std::vector<bool> dead(ns.size(), false);
  int p = ns[x].parent;
  auto& pc = ns[p].children;
  pc.erase(std::find(pc.begin(), pc.end(), x));
  dead[x] = true;
  if (p != 0 && pc.size() == 1) {
    int c = pc.front();
    int pp = ns[p].parent;
    ns[c].parent = pp;
    ns[c].length += ns[p].length;
    std::replace(ns[pp].children.begin(), ns[pp].children.end(), p, c);
    dead[p] = true;
  }
  std::vector<int> remap(ns.size(), -1);
  int next = 0;
  for (size_t v = 0; v < ns.size(); ++v)
    if (!dead[v]) remap[v] = next++;
  LabelledTree out;
  out.nodes_.assign(static_cast<size_t>(next), Node{});
  for (size_t v = 0; v < ns.size(); ++v) {
    if (dead[v]) continue;
    Node y = ns[v];
    y.parent = y.parent >= 0 ? remap[y.parent] : -1;
    for (int& c : y.children) c = remap[c];
    if (y.label > label) --y.label;
    out.nodes_[remap[v]] = std::move(y);
  }
  out.recompute();
  return out;
}

std::vector<int> LabelledTree::labels_below(int v) const {
  std::vector<int> out;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u != 0 && nodes_[u].children.empty()) out.push_back(nodes_[u].label);
    for (int c : nodes_[u].children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> LabelledTree::child_label_sets(int v) const {
  std::vector<std::vector<int>> out;
  for (int c : nodes_[v].children) out.push_back(labels_below(c));
  return out;
}

int LabelledTree::height() const {
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    if (v != 0 && nodes_[v].children.empty()) best = std::max(best, d);
    for (int c : nodes_[v].children) stack.emplace_back(c, d + 1);
  }
  return best;
}

double LabelledTree::timed_height() const {
  double best = 0;
  std::vector<std::pair<int, double>> stack{{0, 0.0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    if (v != 0 && nodes_[v].children.empty()) best = std::max(best, d);
    for (int c : nodes_[v].children) stack.emplace_back(c, d + nodes_[c].length);
  }
  return best;
}

int LabelledTree::depth_of_leaf(int label) const {
  int v = leaf_node(label);
  if (v < 0) throw SpecError("no leaf labelled " + std::to_string(label));
  int d = 0;
  for (; v != 0; v = nodes_[v].parent) ++d;
  return d;
}

namespace {

void canon_rec(const LabelledTree& t, int v, std::string& out) {
  const auto& x = t.node(v);
  if (x.children.empty()) {
    out += std::to_string(x.label);
    return;
  }
  out += '(';
  for (size_t i = 0; i < x.children.size(); ++i) {
    if (i) out += ',';
    canon_rec(t, x.children[i], out);
  }
  out += ')';
}

std::string shape_rec(const LabelledTree& t, int v) {
  const auto& x = t.node(v);
  if (x.children.empty()) return "*";
  std::vector<std::string> parts;
  for (int c : x.children) parts.push_back(shape_rec(t, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out + ")";
}

std::string fmt_len(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void newick_rec(const LabelledTree& t, int v, bool lengths, std::string& out) {
  const auto& x = t.node(v);
  if (x.children.empty()) {
    out += std::to_string(x.label);
  } else {
    out += '(';
    for (size_t i = 0; i < x.children.size(); ++i) {
      if (i) out += ',';
      newick_rec(t, x.children[i], lengths, out);
    }
    out += ')';
  }
  if (lengths) out += ":" + fmt_len(x.length);
}

}  // namespace

std::string LabelledTree::canonical() const {
  std::string out;
  canon_rec(*this, top(), out);
  return out;
}

std::string LabelledTree::shape() const { return shape_rec(*this, top()); }

bool LabelledTree::check_invariants(std::string* why) const {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (nodes_.empty() || nodes_[0].parent != -1) return fail("missing root");
  if (nodes_[0].children.size() != 1) return fail("root must have exactly one child");
  std::vector<int> labels;
  std::vector<bool> reached(nodes_.size(), false);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (reached[v]) return fail("cycle");
    reached[v] = true;
    const Node& x = nodes_[v];
    if (v != 0 && x.children.size() == 1) return fail("inner node with one child");
    if (v != 0 && x.children.empty()) labels.push_back(x.label);
    int prev = 0;
    for (int c : x.children) {
      if (nodes_[c].parent != v) return fail("parent link mismatch");
      if (nodes_[c].min_label <= prev) return fail("children not ordered by least label");
      prev = nodes_[c].min_label;
      stack.push_back(c);
    }
  }
  for (bool r : reached)
    if (!r) return fail("unreachable node");
  std::sort(labels.begin(), labels.end());
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != static_cast<int>(i) + 1) return fail("leaf labels are not 1..n");
  if (static_cast<int>(labels.size()) != nodes_[0].leaves) return fail("leaf counts stale");
  return true;
}

std::string to_newick(const LabelledTree& t, bool lengths) {
  std::string out;
  if (t.leaf_count() == 1) {
    out += '(';
    newick_rec(t, t.top(), lengths, out);
    out += ')';
  } else {
    newick_rec(t, t.top(), lengths, out);
  }
  return out + ";";
}

namespace {

struct PNode {
  int label = 0;
  double length = 0;
  std::vector<PNode> kids;
};

class NewickParser {
 public:
  explicit NewickParser(const std::string& s) : s_(s) {}
  PNode parse() {
    skip();
    PNode n = node();
    skip();
    if (pos_ >= s_.size() || s_[pos_] != ';') err("expected ';'");
    ++pos_;
    skip();
    if (pos_ != s_.size()) err("trailing text");
    return n;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  [[noreturn]] void err(const std::string& m) { throw SpecError("newick: " + m + " at offset " + std::to_string(pos_)); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  PNode node() {
    PNode n;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      for (;;) {
        n.kids.push_back(node());
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < s_.size() && s_[pos_] == ')') {
          ++pos_;
          break;
        }
        err("expected ',' or ')'");
      }
    } else {
      size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (b == pos_) err("expected a leaf label");
      n.label = std::stoi(s_.substr(b, pos_ - b));
      if (n.label < 1) err("leaf labels start at 1");
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == ':') {
      ++pos_;
      skip();
      const char* first = s_.data() + pos_;
      auto r = std::from_chars(first, s_.data() + s_.size(), n.length);
      if (r.ec != std::errc()) err("bad edge length");
      pos_ += static_cast<size_t>(r.ptr - first);
    }
    return n;
  }
};

void build(std::vector<LabelledTree::Node>& ns, const PNode& p, int parent) {
  int id = static_cast<int>(ns.size());
  ns.emplace_back();
  ns[id].parent = parent;
  ns[id].label = p.kids.empty() ? p.label : 0;
  ns[id].length = p.length;
  ns[parent].children.push_back(id);
  if (!p.kids.empty() && p.kids.size() < 2) throw SpecError("newick: inner node with a single child");
  for (const auto& k : p.kids) build(ns, k, id);
}

}  // namespace

LabelledTree parse_newick(const std::string& text) {
  PNode top = NewickParser(text).parse();
  LabelledTree t;
  auto& ns = t.raw_nodes();
  ns.assign(1, LabelledTree::Node{});
  if (top.kids.size() == 1 && top.kids[0].kids.empty()) {
    build(ns, top.kids[0], 0);  // "(1);"
  } else {
    if (top.kids.empty()) throw SpecError("newick: a bare leaf is written (1);");
    build(ns, top, 0);
  }
  t.recompute();
  std::string why;
  if (!t.check_invariants(&why)) throw SpecError("newick: " + why);
  return t;
}

void for_each_tree(int n, const std::function<void(const LabelledTree&)>& fn, bool force) {
  if (n < 1) throw SpecError("tree enumeration needs n >= 1");
  if (n > kMaxEnumerateTrees && !force)
    throw ResourceError("enumerating T_" + std::to_string(n) + " exceeds the n <= 8 guard (use force)");
  std::function<void(const LabelledTree&)> rec = [&](const LabelledTree& t) {
    if (t.leaf_count() == n) {
      fn(t);
      return;
    }
    for (int v = 1; v < t.node_count(); ++v) {
      LabelledTree u = t;
      u.insert_on_edge(v);
      rec(u);
    }
    for (int v = 1; v < t.node_count(); ++v) {
      if (t.node(v).children.empty()) continue;
      LabelledTree u = t;
      u.attach_leaf(v);
      rec(u);
    }
  };
  rec(LabelledTree());
}

long count_trees(int n, bool force) {
  long c = 0;
  for_each_tree(n, [&](const LabelledTree&) { ++c; }, force);
  return c;
}

Partition first_split(const LabelledTree& t) {
  if (t.leaf_count() < 2) throw SpecError("the one-leaf tree has no first branch point");
  return relabel_increasing(t.child_label_sets(t.top()));
}

LabelledTree reduced_subtree(const LabelledTree& t, std::vector<int> B) {
  if (B.empty()) throw SpecError("reduced subtree needs a non-empty label set");
  std::sort(B.begin(), B.end());
  B.erase(std::unique(B.begin(), B.end()), B.end());
  const int n = t.leaf_count();
  if (B.front() < 1 || B.back() > n) throw SpecError("label outside the tree");
  LabelledTree out = t;
  // drop from the top so that lower labels keep their numbers until the end
  for (int lab = n; lab >= 1; --lab)
    if (!std::binary_search(B.begin(), B.end(), lab)) out = out.without_leaf(lab);
  return out;
}

std::vector<int> leaf_depths(const LabelledTree& t) {
  std::vector<int> d(static_cast<size_t>(t.leaf_count()));
  for (int i = 1; i <= t.leaf_count(); ++i) d[i - 1] = t.depth_of_leaf(i);
  return d;
}

}  // namespace rtg
