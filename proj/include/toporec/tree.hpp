#pragma once

// Undirected trees, rooting, centers and the line-oriented tree file format.

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toporec/error.hpp"

namespace toporec {

using Edge = std::pair<NodeId, NodeId>;

/// An undirected tree on nodes 0..n-1. Construction validates that the edge
/// set is exactly a spanning tree.
class Tree {
 public:
  Tree() : Tree(1, {}) {}

  Tree(std::size_t n, const std::vector<Edge>& edges) : adj_(n) {
    if (n == 0) throw InvalidTree("tree must have at least one node");
    if (edges.size() != n - 1)
      throw InvalidTree("expected " + std::to_string(n - 1) + " edges, got " +
                        std::to_string(edges.size()));
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw InvalidTree("edge endpoint out of range");
      if (u == v) throw InvalidTree("self loop at node " + std::to_string(u));
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    // n-1 edges plus connectivity implies acyclic.
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : adj_[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != n) throw InvalidTree("graph is disconnected or contains a cycle");
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t i = 1; i < adj_[u].size(); ++i)
        if (adj_[u][i] == adj_[u][i - 1]) throw InvalidTree("duplicate edge");
  }

  /// Builds a tree from a parent array; parent[root] must be `root`.
  static Tree from_parents(const std::vector<NodeId>& parent) {
    std::vector<Edge> edges;
    edges.reserve(parent.empty() ? 0 : parent.size() - 1);
    for (NodeId v = 0; v < parent.size(); ++v)
      if (parent[v] != v) edges.emplace_back(parent[v], v);
    return Tree(parent.size(), edges);
  }

  std::size_t size() const { return adj_.size(); }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_.at(v); }
  std::size_t degree(NodeId v) const { return adj_.at(v).size(); }
  bool adjacent(NodeId u, NodeId v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Edges as (smaller, larger) pairs in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(size() - 1);
    for (NodeId u = 0; u < size(); ++u)
      for (NodeId v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool operator==(const Tree&) const = default;

 private:
  std::vector<std::vector<NodeId>> adj_;
};

inline std::size_t max_degree(const Tree& t) {
  std::size_t d = 0;
  for (NodeId v = 0; v < t.size(); ++v) d = std::max(d, t.degree(v));
  return d;
}

/// Hop distances from `source`.
inline std::vector<std::size_t> bfs_distances(const Tree& t, NodeId source) {
  std::vector<std::size_t> dist(t.size(), SIZE_MAX);
  std::queue<NodeId> q;
  dist.at(source) = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId w : t.neighbors(u))
      if (dist[w] == SIZE_MAX) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  return dist;
}

namespace detail {
inline NodeId farthest(const std::vector<std::size_t>& dist) {
  return static_cast<NodeId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}
}  // namespace detail

inline std::size_t diameter(const Tree& t) {
  auto d0 = bfs_distances(t, 0);
  auto d1 = bfs_distances(t, detail::farthest(d0));
  return *std::max_element(d1.begin(), d1.end());
}

/// Central node (even diameter) or central edge (odd diameter).
struct CenterResult {
  NodeId node;                   // the central node, or the smaller edge endpoint
  std::optional<NodeId> other;   // the larger edge endpoint for an odd diameter
  bool is_edge() const { return other.has_value(); }
};

inline CenterResult center(const Tree& t) {
  auto da = bfs_distances(t, 0);
  NodeId a = detail::farthest(da);
  auto db = bfs_distances(t, a);
  NodeId b = detail::farthest(db);
  auto dbb = bfs_distances(t, b);
  std::size_t d = db[b];
  // Nodes on the a-b path are exactly those with db + dbb == d.
  std::vector<NodeId> mids;
  for (NodeId v = 0; v < t.size(); ++v)
    if (db[v] + dbb[v] == d && (db[v] == d / 2 || db[v] == (d + 1) / 2)) mids.push_back(v);
  std::sort(mids.begin(), mids.end());
  if (d % 2 == 0) return {mids.front(), std::nullopt};
  return {mids[0], mids[1]};
}

/// A tree rooted at a chosen node. Children lists are in ascending id order.
struct RootedTree {
  Tree base;
  NodeId root = 0;
  std::vector<std::optional<NodeId>> parent;
  std::vector<std::vector<NodeId>> children;
  std::vector<std::size_t> level;
  std::vector<std::size_t> subtree_size;
  std::vector<NodeId> bfs_order;  // root first, children visited in ascending id order
  std::size_t height = 0;

  std::size_t size() const { return base.size(); }
  bool is_leaf(NodeId v) const { return children.at(v).empty(); }
};

inline RootedTree root_at(const Tree& t, NodeId r) {
  if (r >= t.size()) throw UnknownNode("node " + std::to_string(r) + " is not in the tree");
  RootedTree rt;
  rt.base = t;
  rt.root = r;
  std::size_t n = t.size();
  rt.parent.assign(n, std::nullopt);
  rt.children.assign(n, {});
  rt.level.assign(n, 0);
  rt.subtree_size.assign(n, 1);
  rt.bfs_order.reserve(n);
  std::vector<char> seen(n, 0);
  seen[r] = 1;
  rt.bfs_order.push_back(r);
  for (std::size_t head = 0; head < rt.bfs_order.size(); ++head) {
    NodeId u = rt.bfs_order[head];
    for (NodeId w : t.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      rt.parent[w] = u;
      rt.level[w] = rt.level[u] + 1;
      rt.children[u].push_back(w);
      rt.bfs_order.push_back(w);
    }
  }
  for (auto it = rt.bfs_order.rbegin(); it != rt.bfs_order.rend(); ++it)
    if (rt.parent[*it]) rt.subtree_size[*rt.parent[*it]] += rt.subtree_size[*it];
  rt.height = *std::max_element(rt.level.begin(), rt.level.end());
  return rt;
}

/// Nodes of the subtree rooted at `v`, in breadth-first order.
inline std::vector<NodeId> subtree_bfs(const RootedTree& rt, NodeId v) {
  std::vector<NodeId> out{v};
  for (std::size_t head = 0; head < out.size(); ++head)
    for (NodeId c : rt.children.at(out[head])) out.push_back(c);
  return out;
}

// Tree file: "tree <n>" then n-1 lines "<u> <v>".

inline void write_tree(std::ostream& os, const Tree& t) {
  os << "tree " << t.size() << '\n';
  for (auto [u, v] : t.edges()) os << u << ' ' << v << '\n';
}

inline std::string format_tree(const Tree& t) {
  std::ostringstream os;
  write_tree(os, t);
  return os.str();
}

inline Tree read_tree(std::istream& is) {
  std::string word;
  long long n = 0;
  if (!(is >> word >> n) || word != "tree" || n < 1) throw ParseError("expected header 'tree <n>'");
  std::vector<Edge> edges;
  for (long long i = 0; i + 1 < n; ++i) {
    long long u = 0, v = 0;
    if (!(is >> u >> v)) throw ParseError("expected " + std::to_string(n - 1) + " edge lines");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge endpoint out of range");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  if (is >> word) throw ParseError("trailing content after edge list");
  try {
    return Tree(static_cast<std::size_t>(n), edges);
  } catch (const InvalidTree& e) {
    throw ParseError(std::string("invalid tree: ") + e.what());
  }
}

inline Tree parse_tree(const std::string& text) {
  std::istringstream is(text);
  return read_tree(is);
}

}  // namespace toporec
