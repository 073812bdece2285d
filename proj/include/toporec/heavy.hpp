#pragma once

// Heavy/light classification and core subtrees.

#include <bit>
#include <cstdint>
#include <vector>

#include "toporec/tree.hpp"

namespace toporec {

/// floor(log2 x) for x >= 1.
inline unsigned floor_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("floor_log2(0)");
  return static_cast<unsigned>(std::bit_width(x) - 1);
}

/// Number of bits in the binary representation of x (1 for x = 0).
inline unsigned bit_length(std::uint64_t x) { return x == 0 ? 1 : static_cast<unsigned>(std::bit_width(x)); }

/// Core size m = ceil((floor(log Δ) + 1) / 4).
inline std::size_t core_size(std::uint64_t delta) { return (floor_log2(delta) + 1 + 3) / 4; }

/// heavy[v] is true iff 4 * |T_v| >= floor(log Δ) + 1.
inline std::vector<bool> classify_heavy(const RootedTree& rt, std::uint64_t delta) {
  if (delta < 3) throw std::invalid_argument("classify_heavy needs delta >= 3");
  const std::uint64_t threshold = floor_log2(delta) + 1;
  std::vector<bool> heavy(rt.size());
  for (NodeId v = 0; v < rt.size(); ++v) heavy[v] = 4 * static_cast<std::uint64_t>(rt.subtree_size[v]) >= threshold;
  heavy[rt.root] = true;
  return heavy;
}

/// First m nodes of the breadth-first order of T_v. Position i (0-based) in
/// the result is the node's core id i + 1, so v itself has id 1.
inline std::vector<NodeId> core_subtree(const RootedTree& rt, NodeId v, std::size_t m) {
  if (rt.subtree_size.at(v) < m)
    throw std::invalid_argument("subtree of node " + std::to_string(v) + " has fewer than " + std::to_string(m) +
                                " nodes");
  std::vector<NodeId> out{v};
  for (std::size_t head = 0; head < out.size() && out.size() < m; ++head)
    for (NodeId c : rt.children[out[head]]) {
      if (out.size() == m) break;
      out.push_back(c);
    }
  out.resize(m);
  return out;
}

}  // namespace toporec
