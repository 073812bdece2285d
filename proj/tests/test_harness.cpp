#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "toporec/runner.hpp"

using namespace toporec;

namespace {

std::vector<std::size_t> degree_sequence(const Tree& t) {
  std::vector<std::size_t> d;
  for (NodeId v = 0; v < t.size(); ++v) d.push_back(t.degree(v));
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<std::vector<BitString>> feasibility_labels(const std::vector<Tree>& fam, std::uint64_t delta) {
  std::vector<std::vector<BitString>> out;
  for (const auto& t : fam) {
    std::vector<BitString> ls;
    for (const auto& l : label_d3(t, delta).labels) ls.push_back(encode(l));
    out.push_back(ls);
  }
  return out;
}

}  // namespace

TEST(Harness, SiblingClashIsFlagged) {
  // Root 0 with children 1 and 2; both talk in round 1, only 1 talks in round 2.
  Tree t(3, {{0, 1}, {0, 2}});
  auto rt = root_at(t, 0);
  Transcript tr;
  tr.rounds.push_back({{1, 2}, {}});
  tr.rounds.push_back({{1}, {{0, 1}, {2, 1}}});
  auto rep = check_tr_delivery(tr, rt, 1, 2);
  EXPECT_EQ(rep.violations, 2u);
  EXPECT_TRUE(check_tr_delivery(tr, rt, 2, 2).clean());
}

TEST(Harness, CheckRunReportsMissingAndMisplaced) {
  Tree t(3, {{0, 1}, {1, 2}});
  auto copy = std::make_shared<const Tree>(t);
  std::vector<std::optional<NodeOutput>> outs = {NodeOutput{copy, 2}, NodeOutput{copy, 0}, std::nullopt};
  auto v = check_run(t, outs);
  EXPECT_TRUE(v.valid[0]);
  EXPECT_FALSE(v.valid[1]);
  EXPECT_EQ(v.missing, (std::vector<NodeId>{2}));
  EXPECT_FALSE(v.all_valid());
}

TEST(Harness, ViewsSeparateWithFullLabels) {
  for (std::uint64_t delta : {8, 16, 64}) {
    auto fam = family_feasibility(delta);
    EXPECT_FALSE(view_collision_search(fam, feasibility_labels(fam, delta)).has_value()) << delta;
  }
}

TEST(Harness, OneBitLabelsCollide) {
  auto fam = family_feasibility(64);
  auto full = feasibility_labels(fam, 64);
  std::vector<std::vector<BitString>> cut;
  for (const auto& ls : full) cut.push_back(truncate_labels(ls, 1));
  auto hit = view_collision_search(fam, cut);
  ASSERT_TRUE(hit.has_value());
  auto [i, j] = *hit;
  EXPECT_NE(degree_sequence(fam[i]), degree_sequence(fam[j]));
  EXPECT_EQ(view_of_root(fam[i], cut[i]), view_of_root(fam[j], cut[j]));
}

TEST(Harness, ViewIgnoresRepeatedLeafLabels) {
  auto t = d3_tree(3, 2);
  std::vector<BitString> ls = {"0", "1", "10", "10", "11", "0", "0"};
  auto v = view_of_root(t, ls);
  EXPECT_EQ(v.r_unique, (std::set<BitString>{"11"}));
  EXPECT_TRUE(v.a_unique.empty());
  EXPECT_THROW(view_of_root(Tree(3, {{0, 2}, {2, 1}}), {"0", "0", "0"}), UnsupportedShape);
}

TEST(Harness, CertificateExample) {
  auto c = pigeonhole_certificate(BigInt(1) << 36, 2);
  EXPECT_FALSE(c.separable);
  EXPECT_EQ(c.views_log2, 22);
  EXPECT_EQ(c.family_size, BigInt(1) << 35);
  EXPECT_THROW(pigeonhole_certificate(3, 2), std::invalid_argument);
}

// Against the bound computed as an explicit integer for small label lengths.
TEST(HarnessProperty, CertificateMatchesExplicitCount) {
  for (unsigned ell = 0; ell <= 5; ++ell)
    for (std::uint64_t delta : {4ull, 100ull, 1ull << 20, 1ull << 40, 1ull << 62}) {
      BigInt labels = BigInt(1) << (ell + 1);
      BigInt sets = BigInt(1) << (1u << (ell + 1));
      BigInt views = labels * sets * labels * sets;
      BigInt fam = BigInt(delta) - delta / 2;
      auto c = pigeonhole_certificate(delta, ell);
      ASSERT_EQ(c.family_size, fam);
      ASSERT_EQ(BigInt(1) << static_cast<unsigned>(c.views_log2), views);
      ASSERT_EQ(c.separable, views >= fam) << ell << ' ' << delta;
    }
  // Monotone in the label length.
  BigInt delta = BigInt(1) << 300;
  bool was = false;
  for (unsigned ell = 0; ell < 12; ++ell) {
    bool now = pigeonhole_certificate(delta, ell).separable;
    ASSERT_TRUE(!was || now);
    was = now;
  }
  EXPECT_TRUE(was);
}

TEST(Harness, Dispatch) {
  EXPECT_EQ(dispatch(line_tree(7)), Protocol::Line);
  EXPECT_EQ(dispatch(star_tree(5)), Protocol::Star);
  EXPECT_EQ(dispatch(d3_tree(2, 3)), Protocol::D3);
  EXPECT_EQ(dispatch(random_tree(3, 4, 1)), Protocol::Main);
  EXPECT_THROW(dispatch(Tree()), UnsupportedShape);
  EXPECT_EQ(protocol_from_name("d3"), Protocol::D3);
  EXPECT_THROW(protocol_from_name("x"), ParseError);
}

TEST(Harness, GivenLabelsAreUsed) {
  auto t = random_tree(5, 6, 4);
  auto l = label_tree(t);
  auto rep = run_tree(t, l.labels);
  EXPECT_TRUE(rep.pass());
  EXPECT_THROW(run_tree(t, std::vector<BitString>{l.labels[0]}), ParseError);
  auto mixed = l.labels;
  mixed[0] = encode(StructuredLabel{LabelKind::StarCenter, {}});
  EXPECT_THROW(run_tree(t, mixed), MalformedLabel);
}

TEST(Harness, OutputsFileRoundTrip) {
  auto t = random_tree(4, 5, 2);
  auto rep = run_tree(t);
  ASSERT_TRUE(rep.pass());
  std::stringstream ss;
  write_outputs(ss, rep.sim.outputs);
  auto back = read_outputs(ss, t.size());
  EXPECT_TRUE(check_run(t, back).all_valid());
  for (NodeId v = 0; v < t.size(); ++v) {
    EXPECT_EQ(*back[v]->tree, *rep.sim.outputs[v]->tree);
    EXPECT_EQ(back[v]->node, rep.sim.outputs[v]->node);
  }
  std::istringstream bad("O 0 3 0\n");
  EXPECT_THROW(read_outputs(bad, 2), ParseError);
  std::istringstream cyc("T 0 3 0-1 1-0\n");
  EXPECT_THROW(read_outputs(cyc, 3), ParseError);
}

TEST(Harness, RangeAndConfigParsing) {
  EXPECT_EQ(parse_range("1-3,8"), (std::vector<std::uint64_t>{1, 2, 3, 8}));
  EXPECT_THROW(parse_range("5-2"), ParseError);
  EXPECT_THROW(parse_range("a"), ParseError);
  std::istringstream in("# sweep\nfamily=random,stars\ndelta=3-4\ndelta=8\ndiameter=4 # inline\nseeds=1-2\nmax_rounds=5000\n");
  auto c = parse_batch_config(in);
  EXPECT_EQ(c.families, (std::vector<std::string>{"random", "stars"}));
  EXPECT_EQ(c.deltas, (std::vector<std::uint64_t>{3, 4, 8}));
  EXPECT_EQ(c.max_rounds, 5000u);
  std::istringstream unknown("colour=red\n");
  EXPECT_THROW(parse_batch_config(unknown), ParseError);
  std::istringstream fam("family=bogus\ndelta=3\ndiameter=4\nseeds=1\n");
  EXPECT_THROW(parse_batch_config(fam), ParseError);
  std::istringstream incomplete("delta=3\n");
  EXPECT_THROW(parse_batch_config(incomplete), ParseError);
}

TEST(Harness, BatchRowsAndDeterminism) {
  std::istringstream in("family=random\ndelta=3,4,5\ndiameter=4,5\nseeds=1-5\n");
  auto cfg = parse_batch_config(in);
  auto rows = run_batch(cfg);
  ASSERT_EQ(rows.size(), 30u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.valid) << r.problem;
    EXPECT_EQ(r.protocol, "main");
  }
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, run_batch(cfg));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "family,delta,diameter,n,seed,protocol,rounds,max_label_bits,valid");
}

TEST(Harness, BatchMixedFamilies) {
  std::istringstream in("family=feas,lines,stars,degLB,sticks\ndelta=3,8\ndiameter=6,7\nseeds=1-2\n");
  auto rows = run_batch(parse_batch_config(in));
  std::set<std::string> families;
  for (const auto& r : rows) {
    EXPECT_TRUE(r.valid) << r.family << ' ' << r.problem;
    families.insert(r.family);
  }
  EXPECT_EQ(families.size(), 5u);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.key() < y.key(); }));
}
