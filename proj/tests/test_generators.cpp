#include <gtest/gtest.h>

#include "oracles.hpp"
#include "toporec/generators.hpp"
#include "toporec/canonical.hpp"

using namespace toporec;

TEST(Generators, SplitMixReference) {
  // First outputs for seed 0 of the published SplitMix64.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(GeneratorsProperty, RandomTreesHitDeltaAndDiameter) {
  for (std::uint64_t delta : {2, 3, 4, 6, 8, 16, 32, 64})
    for (std::uint64_t d : {2, 3, 4, 5, 6, 8, 10, 16, 20})
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto t = random_tree(delta, d, seed);
        ASSERT_EQ(max_degree(t), delta) << delta << ' ' << d << ' ' << seed;
        ASSERT_EQ(oracle::diameter_all_pairs(t), d);
      }
  EXPECT_THROW(random_tree(1, 4, 1), InfeasibleParameters);
  EXPECT_THROW(random_tree(3, 1, 1), InfeasibleParameters);
}

TEST(Generators, Deterministic) {
  for (const auto& f : family_names()) {
    GenSpec g{f, 4, 16, 7, 3};
    auto a = generate(g), b = generate(g);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(format_tree(a[i]), format_tree(b[i])) << f;
  }
  EXPECT_NE(format_tree(random_tree(5, 8, 1)), format_tree(random_tree(5, 8, 2)));
  EXPECT_THROW(generate({"nope", 3, 4, 1, 1}), InfeasibleParameters);
}

TEST(Generators, FeasibilityFamily) {
  auto fam = family_feasibility(8);
  ASSERT_EQ(fam.size(), 4u);  // a carries 4..7 leaves
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& t = fam[i];
    EXPECT_EQ(diameter(t), 3u);
    EXPECT_EQ(t.degree(0), 8u);
    EXPECT_EQ(t.degree(1), 4 + i + 1);
    EXPECT_TRUE(t.adjacent(0, 1));
  }
  EXPECT_THROW(family_feasibility(2), InfeasibleParameters);
}

TEST(Generators, LowerBoundFamiliesHaveRequestedShape) {
  for (auto [d, delta] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{16, 3}, {16, 4}, {17, 4}, {20, 3}, {21, 3}})
    for (const auto& t : family_diam_lb(d, delta, 5, 3)) {
      EXPECT_EQ(max_degree(t), delta);
      EXPECT_EQ(diameter(t), d);
    }
  EXPECT_THROW(family_diam_lb(10, 3, 1, 1), InfeasibleParameters);
  EXPECT_THROW(family_diam_lb(40, 16, 1, 1), InfeasibleParameters);

  for (std::uint64_t delta : {3, 5, 16})
    for (std::uint64_t d : {4, 5, 9})
      for (const auto& t : family_deg_lb(delta, d, 3, 2)) {
        EXPECT_EQ(max_degree(t), delta);
        EXPECT_EQ(diameter(t), d);
      }

  for (std::uint64_t delta : {3, 5, 8})
    for (std::uint64_t d : {6, 7, 12, 18, 19})
      for (const auto& t : family_sticks(delta, d, 9, 3)) {
        EXPECT_EQ(max_degree(t), delta);
        EXPECT_EQ(diameter(t), d);
      }
  EXPECT_THROW(family_sticks(9, 12, 1, 1), InfeasibleParameters);
  EXPECT_THROW(family_sticks(4, 20, 1, 1), InfeasibleParameters);
}

TEST(Generators, EnumeratedFamilies) {
  auto lines = family_lines(9);
  ASSERT_EQ(lines.size(), 5u);
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(diameter(lines[i]), 5 + i);
  auto stars = family_stars(8);
  ASSERT_EQ(stars.size(), 4u);
  for (std::size_t i = 0; i < stars.size(); ++i) EXPECT_EQ(max_degree(stars[i]), 5 + i);
}

TEST(Generators, ShuffleKeepsShape) {
  SplitMix64 rng(4);
  auto t = random_tree(6, 9, 2);
  auto s = shuffle_ids(t, rng);
  EXPECT_TRUE(isomorphic(t, s));
}
