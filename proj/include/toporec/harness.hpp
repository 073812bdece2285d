#pragma once

// Output verification, transcript invariants and the lower-bound checks for
// the feasibility family.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toporec/canonical.hpp"
#include "toporec/label_codec.hpp"
#include "toporec/radio.hpp"

namespace toporec {

struct RunVerdict {
  std::vector<bool> valid;     // per node
  std::vector<NodeId> missing;  // nodes without output
  bool all_valid() const {
    return missing.empty() && std::all_of(valid.begin(), valid.end(), [](bool b) { return b; });
  }
};

inline RunVerdict check_run(const Tree& tree, const std::vector<std::optional<NodeOutput>>& outputs) {
  if (outputs.size() != tree.size()) throw std::invalid_argument("one output slot per node expected");
  PlacementChecker checker(tree);
  RunVerdict v;
  v.valid.assign(tree.size(), false);
  for (NodeId u = 0; u < tree.size(); ++u) {
    if (!outputs[u] || !outputs[u]->tree) {
      v.missing.push_back(u);
      continue;
    }
    v.valid[u] = checker.valid(u, outputs[u]->tree, outputs[u]->node);
  }
  return v;
}

struct InvariantReport {
  std::size_t violations = 0;
  std::optional<std::string> first;

  void flag(std::string what) {
    if (!first) first = std::move(what);
    ++violations;
  }
  bool clean() const { return violations == 0; }
};

/// Every transmission by a non-root node in rounds [first, last] must be
/// delivered to its parent.
inline InvariantReport check_tr_delivery(const Transcript& tr, const RootedTree& rt, Round first, Round last) {
  InvariantReport rep;
  for (Round r = first; r <= last && r <= tr.rounds.size(); ++r) {
    const auto& rec = tr.at(r);
    for (NodeId v : rec.transmitters) {
      if (!rt.parent[v]) continue;
      NodeId p = *rt.parent[v];
      bool heard = std::any_of(rec.deliveries.begin(), rec.deliveries.end(),
                               [&](const auto& d) { return d.first == p && d.second == v; });
      if (!heard)
        rep.flag("round " + std::to_string(r) + ": parent " + std::to_string(p) + " missed node " +
                 std::to_string(v));
    }
  }
  return rep;
}

/// Transmitters of each round must share one residue of position mod 3.
/// `position[v]` is the 1-based place of v along the line.
inline InvariantReport check_mod3(const Transcript& tr, const std::vector<std::uint64_t>& position) {
  InvariantReport rep;
  for (Round r = 1; r <= tr.rounds.size(); ++r) {
    std::set<std::uint64_t> residues;
    for (NodeId v : tr.at(r).transmitters) residues.insert(position.at(v) % 3);
    if (residues.size() > 1) rep.flag("round " + std::to_string(r) + ": transmitters in several residues");
  }
  return rep;
}

// ---- feasibility family views ----

/// What the root of a feasibility tree can possibly learn: the labels of r
/// and a, plus the labels that occur exactly once among each side's leaves.
/// Repeated leaf labels transmit together or not at all, so r never hears them.
struct View {
  BitString r_label, a_label;
  std::set<BitString> r_unique, a_unique;
  auto operator<=>(const View&) const = default;
};

/// Feasibility trees put r at node 0 and a at node 1.
inline View view_of_root(const Tree& tree, const std::vector<BitString>& labels) {
  if (labels.size() != tree.size()) throw std::invalid_argument("one label per node expected");
  if (tree.size() < 3 || !tree.adjacent(0, 1)) throw UnsupportedShape("not a feasibility-family tree");
  View v{labels[0], labels[1], {}, {}};
  auto unique_side = [&](NodeId centre, NodeId other) {
    std::map<BitString, std::size_t> count;
    for (NodeId w : tree.neighbors(centre))
      if (w != other) ++count[labels[w]];
    std::set<BitString> out;
    for (const auto& [l, c] : count)
      if (c == 1) out.insert(l);
    return out;
  };
  v.r_unique = unique_side(0, 1);
  v.a_unique = unique_side(1, 0);
  return v;
}

/// Indices of two non-isomorphic trees whose root views coincide.
inline std::optional<std::pair<std::size_t, std::size_t>> view_collision_search(
    const std::vector<Tree>& trees, const std::vector<std::vector<BitString>>& labels) {
  if (trees.size() != labels.size()) throw std::invalid_argument("one labeling per tree expected");
  std::map<View, std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    auto& bucket = seen[view_of_root(trees[i], labels[i])];
    for (std::size_t j : bucket)
      if (!isomorphic(trees[i], trees[j])) return std::make_pair(j, i);
    bucket.push_back(i);
  }
  return std::nullopt;
}

/// First `bits` bits of every label.
inline std::vector<BitString> truncate_labels(const std::vector<BitString>& labels, std::size_t bits) {
  std::vector<BitString> out;
  for (const auto& l : labels) out.push_back(l.substr(0, bits));
  return out;
}

using BigInt = boost::multiprecision::cpp_int;

/// With labels of at most `ell` bits there are at most 2^(ell+1) labels and
/// 2^(2^(ell+1)) unique-label sets, so at most (2^(ell+1) * 2^(2^(ell+1)))^2
/// views. Kept as the exponent since the value itself can be astronomically large.
struct PigeonholeCertificate {
  BigInt views_log2;   // views bound = 2^views_log2
  BigInt family_size;  // number of feasibility trees
  bool separable = false;
};

inline PigeonholeCertificate pigeonhole_certificate(const BigInt& delta, unsigned ell) {
  if (delta < 4) throw std::invalid_argument("certificate needs delta >= 4");
  if (ell > 4000) throw std::invalid_argument("label length too large");
  PigeonholeCertificate c;
  BigInt sets_log2 = BigInt(1) << (ell + 1);
  c.views_log2 = 2 * (BigInt(ell + 1) + sets_log2);
  c.family_size = delta - delta / 2;
  // 2^e >= N  iff  e >= ceil(log2 N).
  BigInt ceil_log2 = 0;
  if (c.family_size > 1) {
    BigInt x = c.family_size - 1;
    ceil_log2 = boost::multiprecision::msb(x) + 1;
  }
  c.separable = c.views_log2 >= ceil_log2;
  return c;
}

}  // namespace toporec
