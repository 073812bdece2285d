#pragma once

// Labeling scheme for trees with Δ >= 3 and D >= 4: seven markers plus the
// chunked fields L0..L5 (and a leaf flag).

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "toporec/bits.hpp"
#include "toporec/canonical.hpp"
#include "toporec/heavy.hpp"
#include "toporec/label_codec.hpp"

namespace toporec {

struct SchemeParams {
  std::uint64_t delta = 0;
  std::size_t m = 0;
  std::shared_ptr<const RootedTreeSequence> seq;  // sizes 1..m-1
  std::size_t q = 0;
  std::uint64_t epoch = 0;  // E
};

inline std::shared_ptr<const RootedTreeSequence> shared_sequence(std::size_t max_size) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const RootedTreeSequence>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[max_size];
  if (!slot) slot = std::make_shared<const RootedTreeSequence>(max_size);
  return slot;
}

inline SchemeParams derive_params(std::uint64_t delta) {
  if (delta < 3) throw std::invalid_argument("main scheme needs delta >= 3");
  SchemeParams p;
  p.delta = delta;
  p.m = core_size(delta);
  p.seq = shared_sequence(p.m - 1);
  p.q = p.seq->size();
  p.epoch = std::max<std::uint64_t>(2 * delta, delta + p.q * p.m + 1);
  return p;
}

struct IdChunk {
  std::uint64_t id = 0;
  BitString chunk;
  bool operator==(const IdChunk&) const = default;
};

struct MainLabel {
  std::array<bool, 7> M{};
  std::optional<IdChunk> L0, L1;
  bool L2 = false;
  std::optional<IdChunk> L3, L4;
  BitString L5;
  bool leaf = false;  // no children; lets leaves skip the downward relay
  bool operator==(const MainLabel&) const = default;
};

inline StructuredLabel to_structured(const MainLabel& l) {
  StructuredLabel s{LabelKind::MainScheme, {}};
  BitString markers;
  for (bool b : l.M) markers.push_back(b);
  s.fields.push_back(markers);
  auto pair = [&](const std::optional<IdChunk>& f) {
    s.fields.push_back(f ? binary(f->id) : BitString());
    s.fields.push_back(f ? f->chunk : BitString());
  };
  pair(l.L0);
  pair(l.L1);
  s.fields.push_back(l.L2 ? BitString("1") : BitString());
  pair(l.L3);
  pair(l.L4);
  s.fields.push_back(l.L5);
  s.fields.push_back(l.leaf ? BitString("1") : BitString());
  return s;
}

inline MainLabel main_label_from(const StructuredLabel& s) {
  if (s.kind != LabelKind::MainScheme || s.fields.size() != 12) throw MalformedLabel("not a main-scheme label");
  MainLabel l;
  if (s.fields[0].size() != 7) throw MalformedLabel("marker field must have 7 bits");
  for (std::size_t i = 0; i < 7; ++i) l.M[i] = s.fields[0][i] == '1';
  auto pair = [&](std::size_t at) -> std::optional<IdChunk> {
    const auto& id = s.fields[at];
    const auto& ch = s.fields[at + 1];
    if (id.empty() != ch.empty()) throw MalformedLabel("id/chunk pair half present");
    if (id.empty()) return std::nullopt;
    if (ch.size() > 4) throw MalformedLabel("chunk longer than 4 bits");
    auto v = to_uint(id);
    if (v == 0) throw MalformedLabel("chunk id must be positive");
    return IdChunk{v, ch};
  };
  l.L0 = pair(1);
  l.L1 = pair(3);
  auto flag = [](const BitString& b, const char* what) {
    if (b.empty()) return false;
    if (b == BitString("1")) return true;
    throw MalformedLabel(std::string("bad ") + what + " flag");
  };
  l.L2 = flag(s.fields[5], "L2");
  l.L3 = pair(6);
  l.L4 = pair(8);
  l.L5 = s.fields[10];
  if (l.L5.empty() || to_uint(l.L5) == 0) throw MalformedLabel("L5 must hold a positive core size");
  l.leaf = flag(s.fields[11], "leaf");
  return l;
}

inline BitString encode(const MainLabel& l) { return encode(to_structured(l)); }

struct GroundTruth {
  NodeId root = 0;
  NodeId deepest_leaf = 0;  // carries marker 1
  std::vector<bool> heavy;
  std::map<NodeId, std::uint64_t> t;
  std::map<NodeId, std::uint64_t> z;
  std::map<NodeId, std::vector<NodeId>> cores;  // T'_v in core-id order
};

struct MainScheme {
  RootedTree rt;
  std::vector<MainLabel> labels;
  SchemeParams params;
  GroundTruth truth;
};

/// Central node, or for a central edge the endpoint on the larger side (ties
/// to the smaller id).
inline NodeId choose_root(const Tree& tree) {
  auto c = center(tree);
  if (!c.is_edge()) return c.node;
  NodeId a = c.node, b = *c.other;
  auto from_a = root_at(tree, a);
  std::size_t side_b = from_a.subtree_size[b], side_a = tree.size() - side_b;
  if (side_a != side_b) return side_a > side_b ? a : b;
  return std::min(a, b);
}

/// Markers 0..6 for every node.
inline std::vector<std::array<bool, 7>> assign_markers(const RootedTree& rt, const std::vector<bool>& heavy,
                                                       std::size_t m, NodeId* deepest_out = nullptr) {
  std::vector<std::array<bool, 7>> M(rt.size());
  M[rt.root][0] = true;
  NodeId deepest = rt.root;
  for (NodeId v : rt.bfs_order)
    if (rt.level[v] == rt.height) {
      deepest = v;
      break;
    }
  M[deepest][1] = true;
  if (deepest_out) *deepest_out = deepest;
  for (NodeId u : core_subtree(rt, rt.root, m)) M[u][2] = true;
  for (NodeId v = 0; v < rt.size(); ++v) {
    M[v][heavy[v] ? 3 : 4] = true;
    if (heavy[v]) {
      bool all_light = std::none_of(rt.children[v].begin(), rt.children[v].end(), [&](NodeId c) { return heavy[c]; });
      if (all_light)
        for (NodeId u : core_subtree(rt, v, m)) M[u][5] = true;
    } else if (rt.parent[v] && heavy[*rt.parent[v]]) {
      for (NodeId u : subtree_bfs(rt, v)) M[u][6] = true;
    }
  }
  return M;
}

/// Transmission slots of heavy non-root nodes.
inline std::map<NodeId, std::uint64_t> assign_t(const RootedTree& rt, const std::vector<bool>& heavy) {
  std::map<NodeId, std::uint64_t> t;
  std::uint64_t next = 1;
  for (NodeId c : rt.children[rt.root])
    if (heavy[c]) t[c] = next++;
  for (NodeId v : rt.bfs_order) {
    if (v == rt.root || !heavy[v]) continue;
    std::vector<NodeId> hc;
    for (NodeId c : rt.children[v])
      if (heavy[c]) hc.push_back(c);
    if (hc.empty()) continue;
    std::uint64_t tv = t.at(v);
    t[hc[0]] = tv;
    std::uint64_t cand = 1;
    for (std::size_t j = 1; j < hc.size(); ++j) {
      if (cand == tv) ++cand;
      t[hc[j]] = cand++;
    }
  }
  return t;
}

/// Sequence index of T_v for every light node with a heavy parent.
inline std::map<NodeId, std::uint64_t> assign_z(const RootedTree& rt, const std::vector<bool>& heavy,
                                                const RootedTreeSequence& seq) {
  std::map<NodeId, std::uint64_t> z;
  for (NodeId v = 0; v < rt.size(); ++v)
    if (!heavy[v] && rt.parent[v] && heavy[*rt.parent[v]]) z[v] = index_in_sequence(seq, rt, v);
  return z;
}

inline MainScheme label_main(const Tree& tree) {
  const std::uint64_t delta = max_degree(tree);
  const std::size_t d = diameter(tree);
  if (delta < 3 || d < 4)
    throw UnsupportedShape("main scheme needs max degree >= 3 and diameter >= 4 (got " + std::to_string(delta) +
                           ", " + std::to_string(d) + ")");
  MainScheme out{root_at(tree, choose_root(tree)), {}, derive_params(delta), {}};
  const RootedTree& rt = out.rt;
  const std::size_t n = rt.size(), m = out.params.m;
  auto& truth = out.truth;
  truth.root = rt.root;
  truth.heavy = classify_heavy(rt, delta);
  const auto& heavy = truth.heavy;
  auto M = assign_markers(rt, heavy, m, &truth.deepest_leaf);
  truth.t = assign_t(rt, heavy);
  truth.z = assign_z(rt, heavy, *out.params.seq);

  out.labels.resize(n);
  auto& L = out.labels;
  const std::size_t width = floor_log2(delta) + 1;
  auto spread = [&](const std::vector<NodeId>& members, const BitString& s, std::size_t c,
                    std::optional<IdChunk> MainLabel::*field) {
    auto parts = chunk(s, c);
    if (parts.size() > members.size()) throw std::logic_error("more chunks than members");
    for (const auto& part : parts) L[members[part.index - 1]].*field = IdChunk{part.index, part.bits};
  };

  auto core_r = core_subtree(rt, rt.root, m);
  truth.cores[rt.root] = core_r;
  spread(core_r, binary_padded(delta, width), 4, &MainLabel::L0);

  for (NodeId v = 0; v < n; ++v) {
    L[v].M = M[v];
    L[v].L5 = binary(m);
    L[v].leaf = rt.is_leaf(v);
    if (!heavy[v]) continue;
    bool all_light = std::none_of(rt.children[v].begin(), rt.children[v].end(), [&](NodeId c) { return heavy[c]; });
    if (v != rt.root && all_light) {
      auto core = core_subtree(rt, v, m);
      truth.cores[v] = core;
      spread(core, binary_padded(truth.t.at(v), width), 4, &MainLabel::L1);
    }
    if (v != rt.root && *rt.parent[v] != rt.root && truth.t.at(*rt.parent[v]) == truth.t.at(v)) L[v].L2 = true;

    // Group light children by z; the first few of each group carry the group size.
    std::map<std::uint64_t, std::vector<NodeId>> groups;
    for (NodeId c : rt.children[v])
      if (!heavy[c]) groups[truth.z.at(c)].push_back(c);
    for (const auto& [zv, members] : groups) spread(members, binary(members.size()), 4, &MainLabel::L4);
  }

  for (const auto& [v, zv] : truth.z) {
    auto members = subtree_bfs(rt, v);
    std::size_t p = members.size();
    std::size_t len = std::max<std::size_t>(bit_length(zv), 2 * p - 1);
    if (len > 2 * p) throw std::logic_error("z index does not fit in 2p bits");
    spread(members, binary_padded(zv, len), 2, &MainLabel::L3);
  }
  return out;
}

inline std::vector<BitString> encode_all(const std::vector<MainLabel>& labels) {
  std::vector<BitString> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(encode(l));
  return out;
}

// Ground-truth sidecar: "t <node> <val>" and "z <node> <val>" lines.
inline void write_truth(std::ostream& os, const GroundTruth& g) {
  for (const auto& [v, t] : g.t) os << "t " << v << ' ' << t << '\n';
  for (const auto& [v, z] : g.z) os << "z " << v << ' ' << z << '\n';
}

}  // namespace toporec
