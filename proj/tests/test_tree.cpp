#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "toporec/tree.hpp"

using namespace toporec;

namespace {

Tree path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Tree(n, e);
}

}  // namespace

TEST(Tree, RejectsBadEdgeSets) {
  EXPECT_THROW(Tree(3, {{0, 1}}), InvalidTree);
  EXPECT_THROW(Tree(3, {{0, 1}, {0, 1}}), InvalidTree);
  EXPECT_THROW(Tree(4, {{0, 1}, {1, 2}, {2, 0}}), InvalidTree);
  EXPECT_THROW(Tree(2, {{0, 0}}), InvalidTree);
  EXPECT_THROW(Tree(2, {{0, 5}}), InvalidTree);
}

TEST(Tree, PathCenterAndDiameter) {
  auto p5 = path(5);
  EXPECT_EQ(diameter(p5), 4u);
  EXPECT_FALSE(center(p5).is_edge());
  EXPECT_EQ(center(p5).node, 2u);

  auto p4 = path(4);
  EXPECT_EQ(diameter(p4), 3u);
  ASSERT_TRUE(center(p4).is_edge());
  EXPECT_EQ(center(p4).node, 1u);
  EXPECT_EQ(*center(p4).other, 2u);
}

TEST(Tree, RootAtStar) {
  Tree star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto rt = root_at(star, 3);
  EXPECT_EQ(rt.height, 2u);
  EXPECT_EQ(rt.subtree_size[0], 4u);
  EXPECT_EQ(rt.children[0], (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(rt.bfs_order, (std::vector<NodeId>{3, 0, 1, 2, 4}));
  EXPECT_THROW(root_at(star, 9), UnknownNode);
}

TEST(Tree, FileRoundTripAndErrors) {
  auto t = parse_tree("tree 4\n0 1\n1 2\n1 3\n");
  EXPECT_EQ(max_degree(t), 3u);
  EXPECT_EQ(parse_tree(format_tree(t)), t);
  EXPECT_THROW(parse_tree("graph 2\n0 1\n"), ParseError);
  EXPECT_THROW(parse_tree("tree 3\n0 1\n"), ParseError);
  EXPECT_THROW(parse_tree("tree 3\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_tree("tree 2\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(parse_tree("tree 2\n0 7\n"), ParseError);
}

// Center sits in the middle of every longest path; diameter agrees with all pairs.
TEST(TreeProperty, CenterAndDiameterOnRandomTrees) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rng() % 60;
    auto t = oracle::random_attachment_tree(n, rng);
    std::size_t d = oracle::diameter_all_pairs(t);
    ASSERT_EQ(diameter(t), d);
    auto c = center(t);
    auto dc = bfs_distances(t, c.node);
    std::size_t ecc = *std::max_element(dc.begin(), dc.end());
    if (c.is_edge()) {
      ASSERT_TRUE(t.adjacent(c.node, *c.other));
      ASSERT_EQ(d % 2, 1u);
      ASSERT_EQ(ecc, (d + 1) / 2);
      auto d2 = bfs_distances(t, *c.other);
      ASSERT_EQ(*std::max_element(d2.begin(), d2.end()), (d + 1) / 2);
    } else {
      ASSERT_EQ(d % 2, 0u);
      ASSERT_EQ(ecc, d / 2);
    }
  }
}

TEST(TreeProperty, RootedInvariants) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    auto t = oracle::random_attachment_tree(2 + rng() % 40, rng);
    NodeId r = static_cast<NodeId>(rng() % t.size());
    auto rt = root_at(t, r);
    ASSERT_EQ(rt.subtree_size[r], t.size());
    auto dist = bfs_distances(t, r);
    for (NodeId v = 0; v < t.size(); ++v) {
      ASSERT_EQ(rt.level[v], dist[v]);
      std::size_t s = 1;
      for (NodeId c : rt.children[v]) s += rt.subtree_size[c];
      ASSERT_EQ(rt.subtree_size[v], s);
      ASSERT_EQ(subtree_bfs(rt, v).size(), s);
    }
  }
}
