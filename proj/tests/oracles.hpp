#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's canonical-form code.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "toporec/tree.hpp"

namespace oracle {

using toporec::Edge;
using toporec::NodeId;
using toporec::Tree;

inline std::vector<std::vector<bool>> adjacency(const Tree& t) {
  std::vector<std::vector<bool>> a(t.size(), std::vector<bool>(t.size(), false));
  for (auto [u, v] : t.edges()) a[u][v] = a[v][u] = true;
  return a;
}

/// True iff some bijection f with f(a_root) = b_root preserves adjacency.
/// Plain permutation search; only for tiny trees.
inline bool rooted_isomorphic(const Tree& a, NodeId a_root, const Tree& b, NodeId b_root) {
  if (a.size() != b.size()) return false;
  std::size_t n = a.size();
  auto A = adjacency(a), B = adjacency(b);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm[a_root] != b_root) continue;
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u)
      for (std::size_t v = u + 1; v < n && ok; ++v)
        if (A[u][v] != B[perm[u]][perm[v]]) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline bool isomorphic(const Tree& a, const Tree& b) {
  if (a.size() != b.size()) return false;
  for (NodeId v = 0; v < b.size(); ++v)
    if (rooted_isomorphic(a, 0, b, v)) return true;
  return false;
}

/// Tree from a Pruefer sequence over n = seq.size() + 2 nodes.
inline Tree from_pruefer(const std::vector<NodeId>& seq) {
  std::size_t n = seq.size() + 2;
  std::vector<int> degree(n, 1);
  for (NodeId x : seq) ++degree[x];
  std::vector<Edge> edges;
  for (NodeId x : seq) {
    for (NodeId leaf = 0; leaf < n; ++leaf)
      if (degree[leaf] == 1) {
        edges.emplace_back(leaf, x);
        --degree[leaf];
        --degree[x];
        break;
      }
  }
  NodeId u = n, w = n;
  for (NodeId v = 0; v < n; ++v)
    if (degree[v] == 1) (u == n ? u : w) = v;
  edges.emplace_back(u, w);
  return Tree(n, edges);
}

/// Every labeled tree on n nodes (n^(n-2) of them).
inline std::vector<Tree> all_labeled_trees(std::size_t n) {
  if (n == 1) return {Tree()};
  if (n == 2) return {Tree(2, {{0, 1}})};
  std::vector<Tree> out;
  std::vector<NodeId> seq(n - 2, 0);
  for (;;) {
    out.push_back(from_pruefer(seq));
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return out;
}

/// Number of unlabeled rooted trees with n nodes, by the Euler transform
/// recurrence a(n+1) = (1/n) sum_{k=1..n} (sum_{d|k} d a(d)) a(n-k+1).
inline std::vector<std::uint64_t> rooted_tree_counts(std::size_t max_n) {
  std::vector<std::uint64_t> a(max_n + 1, 0);
  if (max_n >= 1) a[1] = 1;
  for (std::size_t n = 1; n < max_n; ++n) {
    std::uint64_t sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      std::uint64_t s = 0;
      for (std::size_t d = 1; d <= k; ++d)
        if (k % d == 0) s += d * a[d];
      sum += s * a[n - k + 1];
    }
    a[n + 1] = sum / n;
  }
  return a;
}

/// Random tree by uniform parent attachment; node 0 is the first node.
inline Tree random_attachment_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<NodeId> parent(n, 0);
  for (NodeId v = 1; v < n; ++v) parent[v] = static_cast<NodeId>(rng() % v);
  return Tree::from_parents(parent);
}

/// Diameter by all-pairs search.
inline std::size_t diameter_all_pairs(const Tree& t) {
  std::size_t best = 0;
  for (NodeId s = 0; s < t.size(); ++s) {
    auto d = toporec::bfs_distances(t, s);
    best = std::max(best, *std::max_element(d.begin(), d.end()));
  }
  return best;
}

}  // namespace oracle
