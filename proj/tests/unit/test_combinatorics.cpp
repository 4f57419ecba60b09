#include <doctest.h>

#include <set>

#include "rtg/partition.hpp"
#include "rtg/random.hpp"
#include "rtg/tree.hpp"

using namespace rtg;

TEST_CASE("partition counts are Bell numbers") {
  const long bell[] = {0, 1, 2, 5, 15, 52, 203, 877};
  for (int n = 1; n <= 7; ++n) CHECK(static_cast<long>(all_partitions(n).size()) == bell[n]);
  CHECK(nontrivial_partitions(4).size() == 14);
}

TEST_CASE("partitions print and parse") {
  Partition p = parse_partition("{1,3}{2}{4}");
  CHECK(p.n() == 4);
  CHECK(p.num_blocks() == 3);
  CHECK(p.str() == "{1,3}{2}{4}");
  CHECK(parse_partition(p.str()).rgs() == p.rgs());
  CHECK(p.restrict_to(2).str() == "{1}{2}");
  CHECK(p.extended(0).str() == "{1,3,5}{2}{4}");
  CHECK(p.extended(1).str() == "{1,3}{2,5}{4}");
  CHECK(p.extended(3).str() == "{1,3}{2}{4}{5}");
  CHECK_THROWS(parse_partition("{1,2}{2}"));
}

TEST_CASE("decreasing rearrangement") {
  auto r = decreasing_rearrangement({0.1, 0.5, 0.2});
  REQUIRE(r.size() >= 3);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.2));
  CHECK(r[2] == doctest::Approx(0.1));
}

TEST_CASE("tree counts") {
  // rooted trees with n labelled leaves and no unary vertices below the root edge
  const long counts[] = {0, 1, 1, 4, 26, 236};
  for (int n = 1; n <= 5; ++n) CHECK(count_trees(n) == counts[n]);
}

TEST_CASE("every enumerated tree satisfies its invariants and round-trips through Newick") {
  for (int n = 1; n <= 5; ++n) {
    std::set<std::string> seen;
    for_each_tree(n, [&](const LabelledTree& t) {
      std::string why;
      CHECK_MESSAGE(t.check_invariants(&why), why);
      CHECK(t.leaf_count() == n);
      LabelledTree back = parse_newick(to_newick(t));
      CHECK(back.canonical() == t.canonical());
      seen.insert(t.canonical());
    });
    CHECK(static_cast<long>(seen.size()) == count_trees(n));
  }
}

TEST_CASE("one-leaf Newick") {
  CHECK(to_newick(LabelledTree::single_leaf()) == "(1);");
  CHECK(parse_newick("(1);").leaf_count() == 1);
}

TEST_CASE("first split and leaf removal") {
  LabelledTree t = parse_newick("((1,3),2);");
  CHECK(first_split(t).str() == "{1,3}{2}");
  CHECK(t.height() >= 2);
  LabelledTree u = t.without_leaf(3);
  CHECK(u.leaf_count() == 2);
  CHECK(first_split(u).str() == "{1}{2}");
  CHECK_THROWS(parse_newick("((1,2),2);"));
}

TEST_CASE("seed mixing gives distinct reproducible streams") {
  CHECK(mix_seed(1, 0) == mix_seed(1, 0));
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  Rng a(7), b(7);
  for (int i = 0; i < 5; ++i) CHECK(a.bits() == b.bits());
}
