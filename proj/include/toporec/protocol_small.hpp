#pragma once

// Labels and node programs for diameter-3 trees and for stars.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "toporec/bits.hpp"
#include "toporec/heavy.hpp"
#include "toporec/label_codec.hpp"
#include "toporec/radio.hpp"

namespace toporec {

/// Chunk length max(1, floor(log log Δ)).
inline std::size_t small_chunk_length(std::uint64_t delta) {
  if (delta < 2) throw std::invalid_argument("chunk length needs delta >= 2");
  return std::max<std::size_t>(1, floor_log2(floor_log2(delta)));
}

/// (last_flag, B(i), b_i) labels spelling binary(k) over the first carriers;
/// the remaining nodes get `null_kind`.
inline std::vector<StructuredLabel> carrier_labels(std::uint64_t k, std::size_t count, std::size_t c,
                                                   LabelKind carrier_kind, LabelKind null_kind) {
  auto parts = chunk(binary(k), c);
  if (parts.size() > count) throw std::invalid_argument("not enough carriers for the chunks");
  std::vector<StructuredLabel> out(count, StructuredLabel{null_kind, {}});
  for (const auto& part : parts) {
    BitString last = part.index == parts.size() ? "1" : "0";
    out[part.index - 1] = {carrier_kind, {last, binary(part.index), part.bits}};
  }
  return out;
}

struct CarrierInfo {
  bool last;
  std::size_t index;
  BitString bits;
};

inline CarrierInfo carrier_info(const StructuredLabel& l) {
  if (l.fields.size() != 3) throw MalformedLabel("carrier label needs three fields");
  if (l.fields[0].size() != 1) throw MalformedLabel("last flag must be one bit");
  auto index = to_uint(l.fields[1]);
  if (index == 0) throw MalformedLabel("carrier index must be positive");
  if (l.fields[2].empty()) throw MalformedLabel("carrier chunk is empty");
  return {l.fields[0][0] == '1', index, l.fields[2]};
}

/// Collects carrier messages until the flagged last one.
class ChunkCollector {
 public:
  void add(const CarrierInfo& c) {
    if (value_) return;
    chunks_.push_back({c.index, c.bits});
    if (c.last) {
      count_ = c.index;
      value_ = to_uint(unchunk(chunks_));
    }
  }
  const std::optional<std::uint64_t>& value() const { return value_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<Chunk> chunks_;
  std::size_t count_ = 0;
  std::optional<std::uint64_t> value_;
};

// ---- diameter 3 ----

struct D3Scheme {
  NodeId root = 0, hub = 0;
  std::uint64_t delta = 0;
  std::size_t c = 0;
  std::uint64_t root_leaves = 0, hub_leaves = 0;  // k1, k2
  std::size_t p = 0, q = 0;                       // carrier counts
  std::vector<StructuredLabel> labels;
};

/// `delta` defaults to the tree's maximum degree and may be larger.
inline D3Scheme label_d3(const Tree& tree, std::optional<std::uint64_t> delta = std::nullopt) {
  if (diameter(tree) != 3) throw UnsupportedShape("diameter-3 scheme needs a tree of diameter exactly 3");
  std::uint64_t d = delta.value_or(max_degree(tree));
  if (d < std::max<std::uint64_t>(3, max_degree(tree))) throw UnsupportedShape("delta must be at least 3 and the max degree");
  auto cen = center(tree);
  NodeId a = cen.node, b = *cen.other;
  D3Scheme s;
  s.delta = d;
  s.c = small_chunk_length(d);
  s.root = tree.degree(a) != tree.degree(b) ? (tree.degree(a) > tree.degree(b) ? a : b) : std::min(a, b);
  s.hub = s.root == a ? b : a;
  s.labels.assign(tree.size(), {});
  s.labels[s.root] = {LabelKind::RootD3, {}};
  auto side = [&](NodeId centre, NodeId other) {
    std::vector<NodeId> leaves;
    for (NodeId w : tree.neighbors(centre))
      if (w != other) leaves.push_back(w);
    return leaves;
  };
  auto rl = side(s.root, s.hub), hl = side(s.hub, s.root);
  s.root_leaves = rl.size();
  s.hub_leaves = hl.size();
  auto rlab = carrier_labels(rl.size(), rl.size(), s.c, LabelKind::LeafD3, LabelKind::LeafD3Null);
  auto hlab = carrier_labels(hl.size(), hl.size(), s.c, LabelKind::LeafD3, LabelKind::LeafD3Null);
  s.p = chunk(binary(rl.size()), s.c).size();
  s.q = chunk(binary(hl.size()), s.c).size();
  for (std::size_t i = 0; i < rl.size(); ++i) s.labels[rl[i]] = rlab[i];
  for (std::size_t i = 0; i < hl.size(); ++i) s.labels[hl[i]] = hlab[i];
  s.labels[s.hub] = {LabelKind::HubD3, {binary(s.p)}};
  return s;
}

/// Root with y2 leaf children and one hub child carrying y1 leaves.
/// Node 0 is the root, node 1 the hub, then root leaves, then hub leaves.
inline Tree d3_tree(std::uint64_t y2, std::uint64_t y1) {
  std::vector<NodeId> parent{0, 0};
  for (std::uint64_t i = 0; i < y2; ++i) parent.push_back(0);
  for (std::uint64_t i = 0; i < y1; ++i) parent.push_back(1);
  return Tree::from_parents(parent);
}

enum class D3Role : std::uint8_t { Root, Hub, Leaf, Silent };

struct D3Message {
  struct Carrier {
    CarrierInfo info;
  };
  struct HubReport {
    std::uint64_t p, y1;
  };
  struct Topology {
    std::shared_ptr<const Tree> tree;
    std::uint64_t y2;
    bool from_root;
  };
  std::variant<Carrier, HubReport, Topology> body;
};

class D3Program {
 public:
  using Message = D3Message;

  explicit D3Program(const StructuredLabel& label) {
    switch (label.kind) {
      case LabelKind::RootD3: role_ = D3Role::Root; break;
      case LabelKind::HubD3:
        role_ = D3Role::Hub;
        if (label.fields.size() != 1) throw MalformedLabel("hub label needs one field");
        p_ = to_uint(label.fields[0]);
        break;
      case LabelKind::LeafD3:
        role_ = D3Role::Leaf;
        own_ = carrier_info(label);
        break;
      case LabelKind::LeafD3Null: role_ = D3Role::Silent; break;
      default: throw MalformedLabel(std::string("not a diameter-3 label: ") + kind_name(label.kind));
    }
  }

  std::optional<Message> decide(Round r) {
    if (violation_) return std::nullopt;
    if (own_ && r == own_->index) return Message{Message::Carrier{*own_}};
    if (pending_ && pending_->first == r) {
      auto m = std::move(pending_->second);
      pending_.reset();
      return m;
    }
    return std::nullopt;
  }

  void receive(Round r, const Message* msg) {
    if (violation_ || !msg) return;
    try {
      handle(r, *msg);
    } catch (const Error& e) {
      violation_ = e.what();
      output_.reset();
    }
  }

  const std::optional<NodeOutput>& output() const { return output_; }
  const std::optional<std::string>& violation() const { return violation_; }
  D3Role role() const { return role_; }
  const std::optional<std::uint64_t>& decoded() const { return collector_.value(); }

 private:
  void schedule(Round r, Message m) {
    if (pending_) throw ProtocolViolation("two transmissions scheduled");
    pending_.emplace(r, std::move(m));
  }

  void handle(Round r, const Message& msg) {
    if (const auto* c = std::get_if<Message::Carrier>(&msg.body)) {
      if (role_ != D3Role::Root && role_ != D3Role::Hub) return;
      collector_.add(c->info);
      if (role_ == D3Role::Hub && collector_.value())
        schedule(std::max<Round>(p_ + 1, collector_.count() + 1),
                 Message{Message::HubReport{p_, *collector_.value()}});
      return;
    }
    if (const auto* h = std::get_if<Message::HubReport>(&msg.body)) {
      if (role_ != D3Role::Root || output_) return;
      if (!collector_.value()) throw ProtocolViolation("hub report arrived before the root decoded its leaves");
      std::uint64_t y2 = *collector_.value();
      auto tree = std::make_shared<const Tree>(d3_tree(y2, h->y1));
      output_ = NodeOutput{tree, 0};
      schedule(r + 1, Message{Message::Topology{tree, y2, true}});
      return;
    }
    const auto& t = std::get<Message::Topology>(msg.body);
    if (output_) return;
    switch (role_) {
      case D3Role::Hub:
        if (!t.from_root) return;
        output_ = NodeOutput{t.tree, 1};
        schedule(r + 1, Message{Message::Topology{t.tree, t.y2, false}});
        break;
      case D3Role::Leaf:
      case D3Role::Silent:
        output_ = NodeOutput{t.tree, static_cast<NodeId>(t.from_root ? 2 : t.y2 + 2)};
        break;
      case D3Role::Root: break;
    }
  }

  D3Role role_ = D3Role::Silent;
  std::optional<CarrierInfo> own_;
  std::uint64_t p_ = 0;
  ChunkCollector collector_;
  std::optional<std::pair<Round, Message>> pending_;
  std::optional<NodeOutput> output_;
  std::optional<std::string> violation_;
};

static_assert(NodeProgram<D3Program>);

// ---- stars ----

struct StarScheme {
  NodeId center = 0;
  std::size_t c = 0, carriers = 0;
  std::vector<StructuredLabel> labels;
};

/// Labels for a star given as a tree (center = the node of max degree;
/// either end of a single edge).
inline StarScheme label_star(const Tree& tree, std::uint64_t delta) {
  std::size_t n = tree.size();
  if (n < 2 || diameter(tree) > 2) throw UnsupportedShape("star scheme needs a star");
  std::uint64_t k = n - 1;
  if (k > delta) throw UnsupportedShape("star has more than delta leaves");
  StarScheme s;
  for (NodeId v = 0; v < n; ++v)
    if (tree.degree(v) == k) {
      s.center = v;
      break;
    }
  s.c = small_chunk_length(std::max<std::uint64_t>(delta, 2));
  s.carriers = chunk(binary(k), s.c).size();
  auto lab = carrier_labels(k, k, s.c, LabelKind::StarLeaf, LabelKind::StarLeafNull);
  s.labels.assign(n, {LabelKind::StarCenter, {}});
  std::size_t i = 0;
  for (NodeId v = 0; v < n; ++v)
    if (v != s.center) s.labels[v] = lab[i++];
  return s;
}

/// Star with center 0 and leaves 1..k.
inline Tree star_tree(std::uint64_t k) {
  std::vector<NodeId> parent(k + 1, 0);
  return Tree::from_parents(parent);
}

struct StarMessage {
  std::optional<CarrierInfo> carrier;
  std::shared_ptr<const Tree> tree;  // set by the center
};

class StarProgram {
 public:
  using Message = StarMessage;

  explicit StarProgram(const StructuredLabel& label) {
    switch (label.kind) {
      case LabelKind::StarCenter: center_ = true; break;
      case LabelKind::StarLeaf: own_ = carrier_info(label); break;
      case LabelKind::StarLeafNull: break;
      default: throw MalformedLabel(std::string("not a star label: ") + kind_name(label.kind));
    }
  }

  std::optional<Message> decide(Round r) {
    if (own_ && r == own_->index) return Message{own_, nullptr};
    if (center_ && send_at_ == r) return Message{std::nullopt, output_->tree};
    return std::nullopt;
  }

  void receive(Round r, const Message* msg) {
    if (!msg || violation_) return;
    try {
      if (center_ && msg->carrier && !output_) {
        collector_.add(*msg->carrier);
        if (collector_.value()) {
          output_ = NodeOutput{std::make_shared<const Tree>(star_tree(*collector_.value())), 0};
          send_at_ = r + 1;
        }
      } else if (!center_ && msg->tree && !output_) {
        output_ = NodeOutput{msg->tree, 1};
      }
    } catch (const Error& e) {
      violation_ = e.what();
      output_.reset();
    }
  }

  const std::optional<NodeOutput>& output() const { return output_; }
  const std::optional<std::string>& violation() const { return violation_; }
  const std::optional<std::uint64_t>& decoded() const { return collector_.value(); }

 private:
  bool center_ = false;
  std::optional<CarrierInfo> own_;
  ChunkCollector collector_;
  std::optional<Round> send_at_;
  std::optional<NodeOutput> output_;
  std::optional<std::string> violation_;
};

static_assert(NodeProgram<StarProgram>);

}  // namespace toporec
