#pragma once

// AHU canonical forms, rooted-tree enumeration and placement checks.

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toporec/tree.hpp"

namespace toporec {

/// Balanced 0/1 encoding of a rooted tree: leaf is "01", an internal node is
/// "0" + sorted child forms + "1". Equal forms iff rooted-isomorphic.
struct CanonicalForm {
  std::string bits;

  std::size_t node_count() const { return bits.size() / 2; }
  auto operator<=>(const CanonicalForm&) const = default;
};

inline const CanonicalForm& leaf_form() {
  static const CanonicalForm leaf{"01"};
  return leaf;
}

/// Joins child forms (in any order) under a fresh root.
inline CanonicalForm join_forms(std::vector<std::string_view> children) {
  std::sort(children.begin(), children.end());
  std::size_t total = 2;
  for (auto c : children) total += c.size();
  CanonicalForm out;
  out.bits.reserve(total);
  out.bits.push_back('0');
  for (auto c : children) out.bits.append(c);
  out.bits.push_back('1');
  return out;
}

/// Forms of every subtree of `rt`.
inline std::vector<CanonicalForm> all_forms(const RootedTree& rt) {
  std::vector<CanonicalForm> forms(rt.size());
  for (auto it = rt.bfs_order.rbegin(); it != rt.bfs_order.rend(); ++it) {
    std::vector<std::string_view> kids;
    kids.reserve(rt.children[*it].size());
    for (NodeId c : rt.children[*it]) kids.push_back(forms[c].bits);
    forms[*it] = join_forms(std::move(kids));
  }
  return forms;
}

inline CanonicalForm ahu(const RootedTree& rt, NodeId v) {
  if (v >= rt.size()) throw UnknownNode("node " + std::to_string(v) + " is not in the tree");
  auto order = subtree_bfs(rt, v);
  std::unordered_map<NodeId, CanonicalForm> forms;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::vector<std::string_view> kids;
    for (NodeId c : rt.children[*it]) kids.push_back(forms.at(c).bits);
    forms[*it] = join_forms(std::move(kids));
  }
  return std::move(forms.at(v));
}

/// Parses a balanced form. Node ids are assigned in preorder (root = 0), so
/// the subtree of node i occupies a contiguous substring of the form.
struct FormLayout {
  RootedTree tree;
  std::vector<std::size_t> offset;  // start of each node's subtree form
  std::vector<std::size_t> length;  // length of each node's subtree form
};

inline FormLayout layout_form(std::string_view form) {
  if (form.size() < 2 || form.size() % 2 != 0) throw ParseError("canonical form has odd or tiny length");
  std::vector<NodeId> parent;
  std::vector<std::size_t> offset, length;
  std::vector<NodeId> stack;
  for (std::size_t i = 0; i < form.size(); ++i) {
    if (form[i] == '0') {
      NodeId id = static_cast<NodeId>(parent.size());
      if (stack.empty() && id != 0) throw ParseError("canonical form has several roots");
      parent.push_back(stack.empty() ? id : stack.back());
      offset.push_back(i);
      length.push_back(0);
      stack.push_back(id);
    } else if (form[i] == '1') {
      if (stack.empty()) throw ParseError("unbalanced canonical form");
      length[stack.back()] = i + 1 - offset[stack.back()];
      stack.pop_back();
    } else {
      throw ParseError("canonical form contains a non-binary character");
    }
  }
  if (!stack.empty()) throw ParseError("unbalanced canonical form");
  FormLayout out{root_at(Tree::from_parents(parent), 0), std::move(offset), std::move(length)};
  return out;
}

inline RootedTree tree_from_form(const CanonicalForm& form) { return layout_form(form.bits).tree; }

/// Shared dictionary mapping sorted child-class lists to small integers, so
/// trees processed with the same interner get comparable class ids.
class ClassInterner {
 public:
  std::uint32_t intern(std::vector<std::uint32_t> key) {
    auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<std::uint32_t>(ids_.size()));
    return it->second;
  }

 private:
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids_;
};

inline std::vector<std::uint32_t> class_ids(const RootedTree& rt, ClassInterner& interner) {
  std::vector<std::uint32_t> cls(rt.size());
  for (auto it = rt.bfs_order.rbegin(); it != rt.bfs_order.rend(); ++it) {
    std::vector<std::uint32_t> key;
    key.reserve(rt.children[*it].size());
    for (NodeId c : rt.children[*it]) key.push_back(cls[c]);
    std::sort(key.begin(), key.end());
    cls[*it] = interner.intern(std::move(key));
  }
  return cls;
}

/// True iff some isomorphism from `t` onto `t_out` maps `v` to `v_out`.
inline bool placement_valid(const Tree& t, NodeId v, const Tree& t_out, NodeId v_out) {
  if (t.size() != t_out.size()) return false;
  if (v >= t.size() || v_out >= t_out.size()) return false;
  return ahu(root_at(t, v), v) == ahu(root_at(t_out, v_out), v_out);
}

/// Form of an unrooted tree: rooted at its center, with a central edge
/// subdivided by an extra node. Equal iff the trees are isomorphic.
inline CanonicalForm unrooted_form(const Tree& t) {
  auto c = center(t);
  if (!c.is_edge()) return ahu(root_at(t, c.node), c.node);
  std::vector<Edge> edges = t.edges();
  NodeId mid = static_cast<NodeId>(t.size());
  std::erase(edges, Edge{c.node, *c.other});
  edges.emplace_back(c.node, mid);
  edges.emplace_back(mid, *c.other);
  return ahu(root_at(Tree(t.size() + 1, edges), mid), mid);
}

inline bool isomorphic(const Tree& a, const Tree& b) {
  return a.size() == b.size() && unrooted_form(a) == unrooted_form(b);
}

/// Batch form of placement_valid for one fixed input tree.
///
/// Automorphisms of a tree fix its center, so rooting at the center (or at
/// the midpoint of the central edge) reduces the unrooted question to rooted
/// orbits: two nodes are equivalent iff the class sequences on their root
/// paths agree. Each node gets an interned id for that sequence.
class PlacementChecker {
 public:
  explicit PlacementChecker(const Tree& t) : tree_size_(t.size()), own_(signatures(t)) {}

  /// The checker keeps `t_out` alive and caches its signatures, so repeated
  /// queries against one shared output tree cost O(1) each.
  bool valid(NodeId v, const std::shared_ptr<const Tree>& t_out, NodeId v_out) {
    if (!t_out || t_out->size() != tree_size_ || v >= tree_size_ || v_out >= t_out->size()) return false;
    auto it = cache_.find(t_out.get());
    if (it == cache_.end()) it = cache_.emplace(t_out.get(), std::make_pair(t_out, signatures(*t_out))).first;
    return own_[v] == it->second.second[v_out];
  }

  bool valid(NodeId v, const Tree& t_out, NodeId v_out) {
    if (t_out.size() != tree_size_ || v >= tree_size_ || v_out >= t_out.size()) return false;
    return own_[v] == signatures(t_out)[v_out];
  }

 private:
  std::vector<std::uint32_t> signatures(const Tree& t) {
    auto c = center(t);
    std::size_t n = t.size();
    std::vector<Edge> edges = t.edges();
    NodeId root = c.node;
    if (c.is_edge()) {
      NodeId mid = static_cast<NodeId>(n);
      std::erase(edges, Edge{c.node, *c.other});
      edges.emplace_back(c.node, mid);
      edges.emplace_back(mid, *c.other);
      root = mid;
      ++n;
    }
    auto rt = root_at(Tree(n, edges), root);
    auto cls = class_ids(rt, classes_);
    std::vector<std::uint32_t> sig(n);
    for (NodeId u : rt.bfs_order) {
      std::uint32_t up = rt.parent[u] ? sig[*rt.parent[u]] + 1 : 0;
      auto [pos, inserted] =
          paths_.try_emplace({up, cls[u]}, static_cast<std::uint32_t>(paths_.size()));
      sig[u] = pos->second;
    }
    sig.resize(t.size());
    return sig;
  }

  std::size_t tree_size_;
  ClassInterner classes_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> paths_;
  std::vector<std::uint32_t> own_;
  std::map<const Tree*, std::pair<std::shared_ptr<const Tree>, std::vector<std::uint32_t>>> cache_;
};

/// All rooted-isomorphism classes of sizes 1..k, grouped by size and sorted
/// by canonical form inside each size. Position in the sequence is 1-based.
class RootedTreeSequence {
 public:
  RootedTreeSequence() = default;

  explicit RootedTreeSequence(std::size_t max_size) {
    std::set<CanonicalForm> level;
    if (max_size >= 1) level.insert(leaf_form());
    for (std::size_t size = 1; size <= max_size; ++size) {
      for (const auto& f : level) {
        index_.emplace(f.bits, forms_.size() + 1);
        forms_.push_back(f);
      }
      counts_.push_back(level.size());
      if (size == max_size) break;
      std::set<CanonicalForm> next;
      for (const auto& f : level) {
        auto rt = tree_from_form(f);
        for (NodeId v = 0; v < rt.size(); ++v) {
          std::vector<NodeId> parent(rt.size() + 1);
          for (NodeId u = 0; u < rt.size(); ++u) parent[u] = rt.parent[u].value_or(u);
          parent[rt.size()] = v;
          auto grown = root_at(Tree::from_parents(parent), 0);
          next.insert(ahu(grown, 0));
        }
      }
      level = std::move(next);
    }
  }

  std::size_t size() const { return forms_.size(); }
  const CanonicalForm& at(std::size_t one_based) const { return forms_.at(one_based - 1); }
  const std::vector<CanonicalForm>& forms() const { return forms_; }
  /// Number of classes with exactly i nodes, i = 1..max_size.
  std::size_t count_of_size(std::size_t i) const { return i == 0 || i > counts_.size() ? 0 : counts_[i - 1]; }

  std::size_t index_of(const CanonicalForm& f) const {
    auto it = index_.find(f.bits);
    if (it == index_.end()) throw IndexNotFound("rooted tree with " + std::to_string(f.node_count()) +
                                                " nodes is not in the sequence");
    return it->second;
  }

 private:
  std::vector<CanonicalForm> forms_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline RootedTreeSequence enumerate_rooted_trees(std::size_t max_size) { return RootedTreeSequence(max_size); }

inline std::size_t index_in_sequence(const RootedTreeSequence& seq, const RootedTree& rt, NodeId v) {
  return seq.index_of(ahu(rt, v));
}

/// Walks down `t_r` from its root, choosing at each step the smallest-id
/// child whose subtree form matches the next chain entry.
inline NodeId place_self(const RootedTree& t_r, std::span<const CanonicalForm> chain) {
  auto forms = all_forms(t_r);
  if (chain.empty() || forms[t_r.root] != chain.front()) throw NoMatch("chain does not start at the root form");
  NodeId at = t_r.root;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    auto& kids = t_r.children[at];
    auto hit = std::find_if(kids.begin(), kids.end(), [&](NodeId c) { return forms[c] == chain[i]; });
    if (hit == kids.end()) throw NoMatch("no child matches chain entry " + std::to_string(i));
    at = *hit;
  }
  return at;
}

/// A tree given by its canonical form, with the form substring of every node
/// kept for placement lookups. Node ids are preorder positions in the form.
class PlacementIndex {
 public:
  explicit PlacementIndex(CanonicalForm form)
      : form_(std::move(form)),
        layout_(layout_form(form_.bits)),
        tree_(std::make_shared<const Tree>(layout_.tree.base)) {}

  const CanonicalForm& form() const { return form_; }
  const RootedTree& rooted() const { return layout_.tree; }
  const std::shared_ptr<const Tree>& tree() const { return tree_; }
  NodeId root() const { return 0; }

  std::string_view form_of(NodeId v) const {
    return std::string_view(form_.bits).substr(layout_.offset.at(v), layout_.length.at(v));
  }

  /// One step of place_self: the smallest-id child of `parent` whose subtree
  /// has form `own`.
  NodeId place_step(NodeId parent, std::string_view own) const {
    for (NodeId c : layout_.tree.children.at(parent))
      if (layout_.length[c] == own.size() && form_of(c) == own) return c;
    throw NoMatch("no child of node " + std::to_string(parent) + " matches the given subtree");
  }

 private:
  CanonicalForm form_;
  FormLayout layout_;
  std::shared_ptr<const Tree> tree_;
};

}  // namespace toporec
