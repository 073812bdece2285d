#pragma once

// Seeded test trees: random trees with exact Δ and D, and the lower-bound
// families (feasibility, long-diameter, large-degree, sticks, lines, stars).

#include <cstdint>
#include <string>
#include <vector>

#include "toporec/tree.hpp"

namespace toporec {

/// SplitMix64. Fixed so corpora are reproducible across platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return UINT64_MAX; }

  /// Uniform-ish value in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  /// Value in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::uint64_t state_;
};

/// Grows a tree by appending nodes to a parent array.
class TreeBuilder {
 public:
  NodeId add_root() {
    parent_.push_back(static_cast<NodeId>(parent_.size()));
    return parent_.back();
  }
  NodeId add_child(NodeId p) {
    parent_.push_back(p);
    return static_cast<NodeId>(parent_.size() - 1);
  }
  void add_leaves(NodeId p, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) add_child(p);
  }
  /// Path of `length` edges hanging from p; returns the far end.
  NodeId add_path(NodeId p, std::uint64_t length) {
    for (std::uint64_t i = 0; i < length; ++i) p = add_child(p);
    return p;
  }
  std::size_t size() const { return parent_.size(); }
  Tree build() const { return Tree::from_parents(parent_); }

 private:
  std::vector<NodeId> parent_;
};

/// Relabels nodes by a seeded Fisher-Yates permutation.
inline Tree shuffle_ids(const Tree& t, SplitMix64& rng) {
  std::vector<NodeId> perm(t.size());
  for (NodeId i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<Edge> edges;
  for (auto [u, v] : t.edges()) edges.emplace_back(perm[u], perm[v]);
  return Tree(t.size(), edges);
}

/// Tree with diameter exactly D and maximum degree exactly Δ.
inline Tree random_tree(std::uint64_t delta, std::uint64_t D, std::uint64_t seed) {
  if (delta < 2 || D < 2) throw InfeasibleParameters("random_tree needs delta >= 2 and D >= 2");
  if (D > 100000 || delta > 100000) throw InfeasibleParameters("random_tree parameters too large");
  SplitMix64 rng(seed);
  const std::uint64_t bound = D / 2;  // allowed distance from the center (or own side's central node)
  std::vector<NodeId> parent;
  std::vector<std::uint64_t> dist, deg;
  auto add = [&](NodeId p, std::uint64_t d) {
    NodeId id = static_cast<NodeId>(parent.size());
    parent.push_back(p);
    dist.push_back(d);
    deg.push_back(p == id ? 0 : 1);
    if (p != id) ++deg[p];
    return id;
  };
  // Spine v_0..v_D, rooted at v_0 for the parent array.
  add(0, D / 2);
  for (std::uint64_t i = 1; i <= D; ++i) {
    std::uint64_t d = D % 2 == 0 ? (i > D / 2 ? i - D / 2 : D / 2 - i)
                                 : (i <= (D - 1) / 2 ? (D - 1) / 2 - i : i - (D + 1) / 2);
    add(static_cast<NodeId>(i - 1), d);
  }
  if (delta > 2) {
    NodeId hub = static_cast<NodeId>(rng.between(1, D - 1));
    while (deg[hub] < delta) add(hub, dist[hub] + 1);
    std::vector<NodeId> open;
    for (NodeId v = 0; v < parent.size(); ++v)
      if (deg[v] < delta && dist[v] < bound) open.push_back(v);
    std::uint64_t extra = rng.below(std::min<std::uint64_t>(2 * delta * bound, 400) + 1);
    for (std::uint64_t i = 0; i < extra && !open.empty(); ++i) {
      std::size_t at = rng.below(open.size());
      NodeId p = open[at];
      NodeId c = add(p, dist[p] + 1);
      if (deg[p] >= delta) {
        open[at] = open.back();
        open.pop_back();
      }
      if (dist[c] < bound) open.push_back(c);
    }
  }
  return shuffle_ids(Tree::from_parents(parent), rng);
}

/// Star centered at node 0 with Δ leaves; leaf 1 (a) gets i extra leaves,
/// for i = floor(Δ/2)..Δ-1.
inline std::vector<Tree> family_feasibility(std::uint64_t delta) {
  if (delta < 3) throw InfeasibleParameters("feasibility family needs delta >= 3");
  std::vector<Tree> out;
  for (std::uint64_t i = delta / 2; i <= delta - 1; ++i) {
    TreeBuilder b;
    NodeId r = b.add_root();
    NodeId a = b.add_child(r);
    b.add_leaves(r, delta - 1);
    b.add_leaves(a, i);
    out.push_back(b.build());
  }
  return out;
}

/// Pendant node on a deepest node, turning diameter D-1 into D.
inline Tree extend_diameter(const Tree& t) {
  auto far = bfs_distances(t, 0);
  NodeId a = detail::farthest(far);
  std::vector<Edge> edges = t.edges();
  edges.emplace_back(a, static_cast<NodeId>(t.size()));
  return Tree(t.size() + 1, edges);
}

/// Long-diameter family: line r..s1 of h1 nodes, then a (Δ-1)-ary tree of
/// height h2-1, two pendants and x_i in [0, Δ-1] leaves on the remaining
/// deepest nodes. h1 = floor((D + 4) / 10), h2 = D / 2.
inline std::vector<Tree> family_diam_lb(std::uint64_t D, std::uint64_t delta, std::uint64_t seed, std::size_t count) {
  if (delta < 3) throw InfeasibleParameters("diameter family needs delta >= 3");
  if (D < 16) throw InfeasibleParameters("diameter family needs D >= 16");
  const std::uint64_t De = D - D % 2, h1 = (De + 4) / 10, h2 = De / 2;
  double leaves = 1;
  for (std::uint64_t i = 0; i + 1 < h2; ++i) leaves *= static_cast<double>(delta - 1);
  if (leaves * delta > 50000) throw InfeasibleParameters("diameter family too large for these parameters");
  SplitMix64 rng(seed);
  std::vector<Tree> out;
  for (std::size_t s = 0; s < count; ++s) {
    TreeBuilder b;
    NodeId r = b.add_root();
    NodeId s1 = b.add_path(r, h1 - 1);
    NodeId s2 = b.add_child(s1);
    std::vector<NodeId> level{s2};
    for (std::uint64_t d = 1; d < h2; ++d) {
      std::vector<NodeId> next;
      for (NodeId u : level)
        for (std::uint64_t c = 0; c < delta - 1; ++c) next.push_back(b.add_child(u));
      level = std::move(next);
    }
    b.add_child(level.front());
    b.add_child(level.back());
    for (std::size_t i = 1; i + 1 < level.size(); ++i) b.add_leaves(level[i], rng.between(0, delta - 1));
    Tree t = b.build();
    out.push_back(D % 2 ? extend_diameter(t) : t);
  }
  return out;
}

/// Large-degree family: path r..s' of D-3 edges, s adjacent to s' with Δ-1
/// star leaves, each carrying x_i in [floor(Δ/2), Δ-1] leaves.
inline std::vector<Tree> family_deg_lb(std::uint64_t delta, std::uint64_t D, std::uint64_t seed, std::size_t count) {
  if (delta < 3 || D < 4) throw InfeasibleParameters("degree family needs delta >= 3 and D >= 4");
  if (delta > 2048) throw InfeasibleParameters("degree family too large");
  SplitMix64 rng(seed);
  std::vector<Tree> out;
  for (std::size_t i = 0; i < count; ++i) {
    TreeBuilder b;
    NodeId r = b.add_root();
    NodeId sp = b.add_path(r, D - 3);
    NodeId s = b.add_child(sp);
    for (std::uint64_t j = 0; j + 1 < delta; ++j) b.add_leaves(b.add_child(s), rng.between(delta / 2, delta - 1));
    out.push_back(b.build());
  }
  return out;
}

/// Sticks on a (Δ-1)-ary skeleton of height h = floor(D/6); each stick is a
/// path of g = D/2 - h edges with x_j in [0, Δ-2] leaves on its first g nodes.
inline std::vector<Tree> family_sticks(std::uint64_t delta, std::uint64_t D, std::uint64_t seed, std::size_t count) {
  if (delta < 3 || D < 6) throw InfeasibleParameters("sticks family needs delta >= 3 and D >= 6");
  if (delta > 8 || D > 19) throw InfeasibleParameters("sticks family limited to delta <= 8 and D <= 19");
  const std::uint64_t De = D - D % 2, h = De / 6, g = De / 2 - h;
  SplitMix64 rng(seed);
  std::vector<Tree> out;
  for (std::size_t s = 0; s < count; ++s) {
    TreeBuilder b;
    std::vector<NodeId> level{b.add_root()};
    for (std::uint64_t d = 0; d < h; ++d) {
      std::vector<NodeId> next;
      for (NodeId u : level)
        for (std::uint64_t c = 0; c < delta - 1; ++c) next.push_back(b.add_child(u));
      level = std::move(next);
    }
    // One forced full node keeps the maximum degree at exactly Δ.
    std::size_t forced_stick = rng.below(level.size());
    std::uint64_t forced_node = rng.below(g);
    for (std::size_t i = 0; i < level.size(); ++i) {
      NodeId at = level[i];
      for (std::uint64_t j = 0; j < g; ++j) {
        std::uint64_t x = i == forced_stick && j == forced_node ? delta - 2 : rng.between(0, delta - 2);
        b.add_leaves(at, x);
        at = b.add_child(at);
      }
    }
    Tree t = b.build();
    out.push_back(D % 2 ? extend_diameter(t) : t);
  }
  return out;
}

/// Lines of lengths floor(D/2)+1 .. D.
inline std::vector<Tree> family_lines(std::uint64_t D) {
  if (D < 2) throw InfeasibleParameters("lines family needs D >= 2");
  std::vector<Tree> out;
  for (std::uint64_t len = D / 2 + 1; len <= D; ++len) {
    TreeBuilder b;
    b.add_path(b.add_root(), len);
    out.push_back(b.build());
  }
  return out;
}

/// Stars of degree floor(Δ/2)+1 .. Δ.
inline std::vector<Tree> family_stars(std::uint64_t delta) {
  if (delta < 2) throw InfeasibleParameters("stars family needs delta >= 2");
  std::vector<Tree> out;
  for (std::uint64_t d = delta / 2 + 1; d <= delta; ++d) {
    TreeBuilder b;
    b.add_leaves(b.add_root(), d);
    out.push_back(b.build());
  }
  return out;
}

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"random", "feas", "diamLB", "degLB", "sticks", "lines", "stars"};
  return names;
}

struct GenSpec {
  std::string family = "random";
  std::uint64_t delta = 3, diameter = 4, seed = 1;
  std::size_t count = 1;
};

/// Trees for a GenSpec. Enumerated families (feas, lines, stars) ignore seed and count.
inline std::vector<Tree> generate(const GenSpec& g) {
  if (g.family == "random") {
    std::vector<Tree> out;
    for (std::size_t i = 0; i < g.count; ++i) out.push_back(random_tree(g.delta, g.diameter, g.seed + i));
    return out;
  }
  if (g.family == "feas") return family_feasibility(g.delta);
  if (g.family == "diamLB") return family_diam_lb(g.diameter, g.delta, g.seed, g.count);
  if (g.family == "degLB") return family_deg_lb(g.delta, g.diameter, g.seed, g.count);
  if (g.family == "sticks") return family_sticks(g.delta, g.diameter, g.seed, g.count);
  if (g.family == "lines") return family_lines(g.diameter);
  if (g.family == "stars") return family_stars(g.delta);
  throw InfeasibleParameters("unknown family '" + g.family + "'");
}

}  // namespace toporec
