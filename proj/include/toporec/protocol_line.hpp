#pragma once

// Constant-length labels for lines. The line is cut into segments of
// L = 3 + floor(log k) nodes; inside a segment the labels spell k and the
// segment number, and positions come from the round a wave first arrives.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toporec/bits.hpp"
#include "toporec/heavy.hpp"
#include "toporec/label_codec.hpp"
#include "toporec/radio.hpp"

namespace toporec {

enum class LineMode : std::uint8_t { Tiny, Single, Multi };

struct LineParams {
  std::uint64_t k = 0;
  std::uint64_t seg = 0;    // L
  std::uint64_t n_seg = 0;  // floor(k / L)
  LineMode mode = LineMode::Tiny;
};

inline LineParams line_params(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("line length must be positive");
  LineParams p{k, 3 + floor_log2(k), 0, LineMode::Tiny};
  p.n_seg = k / p.seg;
  if (k <= 3) p.mode = LineMode::Tiny;
  else if (p.n_seg < 2) p.mode = LineMode::Single;
  else p.mode = LineMode::Multi;
  return p;
}

struct LineLabel {
  unsigned type = 3;  // alpha
  bool beta = false, gamma = false;
  unsigned delta = 0;  // position mod 3
  bool operator==(const LineLabel&) const = default;
};

inline StructuredLabel to_structured(const LineLabel& l) {
  return {LabelKind::Line,
          {binary_padded(l.type, 2), l.beta ? "1" : "0", l.gamma ? "1" : "0", binary_padded(l.delta, 2)}};
}

/// Tiny lines (k <= 3) get their length and position outright.
inline StructuredLabel tiny_label(std::uint64_t k, std::uint64_t pos) {
  return {LabelKind::LineTiny, {binary_padded(k, 2), binary_padded(pos - 1, 2)}};
}

/// Labels for positions 1..k+1 (result[i] belongs to v_{i+1}).
inline std::vector<StructuredLabel> label_line(std::uint64_t k) {
  auto p = line_params(k);
  std::vector<StructuredLabel> out;
  out.reserve(k + 1);
  if (p.mode == LineMode::Tiny) {
    for (std::uint64_t i = 1; i <= k + 1; ++i) out.push_back(tiny_label(k, i));
    return out;
  }
  std::vector<LineLabel> lab(k + 2);
  for (std::uint64_t i = 1; i <= k + 1; ++i) lab[i].delta = i % 3;
  const std::uint64_t L = p.seg, width = L - 2;
  const std::uint64_t segments = p.mode == LineMode::Single ? 1 : p.n_seg - 1;
  auto kb = binary_padded(k, width);
  for (std::uint64_t j = 0; j < segments; ++j) {
    auto jb = binary_padded(j, width);
    lab[j * L + 1].type = 1;
    for (std::uint64_t i = 1; i <= width; ++i) {
      auto& l = lab[j * L + 1 + i];
      l.type = 2;
      l.beta = kb[i - 1] == '1';
      l.gamma = jb[i - 1] == '1';
    }
    if (p.mode == LineMode::Multi) lab[(j + 1) * L].type = 0;
  }
  lab[k + 1].type = 0;
  for (std::uint64_t i = 1; i <= k + 1; ++i) out.push_back(to_structured(lab[i]));
  return out;
}

/// Nodes of a line in order from the smaller-id endpoint.
inline std::vector<NodeId> line_order(const Tree& tree) {
  if (max_degree(tree) > 2) throw UnsupportedShape("not a line");
  if (tree.size() == 1) return {0};
  NodeId start = 0;
  while (tree.degree(start) != 1) ++start;
  std::vector<NodeId> order{start};
  NodeId prev = start, at = tree.neighbors(start)[0];
  order.push_back(at);
  while (tree.degree(at) == 2) {
    NodeId next = tree.neighbors(at)[0] == prev ? tree.neighbors(at)[1] : tree.neighbors(at)[0];
    prev = at;
    at = next;
    order.push_back(at);
  }
  return order;
}

struct LineScheme {
  LineParams params;
  std::vector<NodeId> order;  // order[i] is v_{i+1}
  std::vector<StructuredLabel> labels;
};

inline LineScheme label_line_tree(const Tree& tree) {
  if (tree.size() < 2) throw UnsupportedShape("line needs at least two nodes");
  LineScheme s;
  s.order = line_order(tree);
  std::uint64_t k = tree.size() - 1;
  s.params = line_params(k);
  auto by_pos = label_line(k);
  s.labels.resize(tree.size());
  for (std::size_t i = 0; i < s.order.size(); ++i) s.labels[s.order[i]] = by_pos[i];
  return s;
}

/// Path 0 - 1 - ... - k; v_i is node i-1.
inline Tree line_tree(std::uint64_t k) {
  std::vector<NodeId> parent(k + 1);
  for (std::uint64_t i = 1; i <= k; ++i) parent[i] = static_cast<NodeId>(i - 1);
  return Tree::from_parents(parent);
}

struct LineMessage {
  struct Forward {
    BitString s, s2;  // bits of k and of j gathered so far
  };
  struct Backward {
    std::uint64_t k, j;
    unsigned e;
  };
  struct Tail {
    std::uint64_t k, pos;  // pos of the sender
  };
  std::variant<Forward, Backward, Tail> body;
};

class LineProgram {
 public:
  using Message = LineMessage;

  explicit LineProgram(const StructuredLabel& label) {
    if (label.kind == LabelKind::LineTiny) {
      if (label.fields.size() != 2) throw MalformedLabel("tiny line label needs two fields");
      auto k = to_uint(label.fields[0]), pos = to_uint(label.fields[1]) + 1;
      if (k == 0 || pos > k + 1) throw MalformedLabel("tiny line label out of range");
      out_tree(k, pos);
      return;
    }
    if (label.kind != LabelKind::Line || label.fields.size() != 4) throw MalformedLabel("not a line label");
    for (std::size_t i : {1, 2})
      if (label.fields[i].size() != 1) throw MalformedLabel("line bit fields must be one bit");
    lab_.type = static_cast<unsigned>(to_uint(label.fields[0]));
    lab_.beta = label.fields[1][0] == '1';
    lab_.gamma = label.fields[2][0] == '1';
    lab_.delta = static_cast<unsigned>(to_uint(label.fields[3]));
    if (lab_.type > 3 || lab_.delta > 2) throw MalformedLabel("line label out of range");
    if (lab_.type == 1) schedule(next_dedicated(0), Message{Message::Forward{}});
  }

  std::optional<Message> decide(Round r) {
    if (violation_ || !pending_ || pending_->first != r) return std::nullopt;
    auto m = std::move(pending_->second);
    pending_.reset();
    return m;
  }

  void receive(Round r, const Message* msg) {
    if (violation_ || !msg) return;
    try {
      handle(r, *msg);
    } catch (const Error& e) {
      violation_ = e.what();
      output_.reset();
      pending_.reset();
    }
  }

  const std::optional<NodeOutput>& output() const { return output_; }
  const std::optional<std::string>& violation() const { return violation_; }
  const LineLabel& label() const { return lab_; }
  std::optional<Round> first_forward_round() const { return r_v_; }

 private:
  Round next_dedicated(Round after) const {
    Round r = after + 1;
    while (r % 3 != lab_.delta) ++r;
    return r;
  }

  void schedule(Round r, Message m) {
    if (pending_) throw ProtocolViolation("two transmissions scheduled");
    pending_.emplace(r, std::move(m));
  }

  void out_tree(std::uint64_t k, std::uint64_t pos) {
    if (pos == 0 || pos > k + 1) throw ProtocolViolation("computed position outside the line");
    output_ = NodeOutput{std::make_shared<const Tree>(line_tree(k)), static_cast<NodeId>(pos - 1)};
  }

  // First positive round congruent to (position of the segment's type1 node) mod 3.
  static Round start_round(std::uint64_t k, std::uint64_t j) {
    std::uint64_t L = line_params(k).seg;
    Round r = 1;
    while (r % 3 != (j * L + 1) % 3) ++r;
    return r;
  }

  std::uint64_t position_from_wave(std::uint64_t k, std::uint64_t j) const {
    Round t0 = start_round(k, j);
    if (*r_v_ < t0) throw ProtocolViolation("forward wave arrived before its start");
    return j * line_params(k).seg + 1 + (*r_v_ - t0 + 1);
  }

  void handle(Round r, const Message& msg) {
    if (output_) return;
    if (const auto* f = std::get_if<Message::Forward>(&msg.body)) {
      if (r_v_) return;
      switch (lab_.type) {
        case 2:
          r_v_ = r;
          schedule(next_dedicated(r), Message{Message::Forward{f->s + BitString(lab_.beta ? "1" : "0"),
                                                               f->s2 + BitString(lab_.gamma ? "1" : "0")}});
          break;
        case 3:
          r_v_ = r;
          schedule(next_dedicated(r), msg);
          break;
        case 0: {
          if (f->s.empty()) return;  // the next segment's start signal
          r_v_ = r;
          if (f->s.size() != f->s2.size()) throw ProtocolViolation("k and j strings differ in length");
          std::uint64_t k = to_uint(f->s), j = to_uint(f->s2);
          if (bit_length(k) != f->s.size() || line_params(k).seg != f->s.size() + 2)
            throw ProtocolViolation("decoded k does not match the segment length");
          out_tree(k, position_from_wave(k, j));
          schedule(next_dedicated(r), Message{Message::Backward{k, j, lab_.delta}});
          break;
        }
        default: break;
      }
      return;
    }
    if (const auto* b = std::get_if<Message::Backward>(&msg.body)) {
      bool from_right = b->e == (lab_.delta + 1) % 3;
      bool from_left = (b->e + 1) % 3 == lab_.delta;
      if (lab_.type == 1) {
        if (!from_right) return;
        out_tree(b->k, b->j * line_params(b->k).seg + 1);
      } else if ((lab_.type == 2 || lab_.type == 3) && r_v_) {
        if (!from_right) return;
        out_tree(b->k, position_from_wave(b->k, b->j));
        schedule(next_dedicated(r), Message{Message::Backward{b->k, b->j, lab_.delta}});
      } else if (lab_.type == 3 && from_left) {
        // First node after the last full segment.
        std::uint64_t pos = (b->j + 1) * line_params(b->k).seg + 1;
        out_tree(b->k, pos);
        schedule(next_dedicated(r), Message{Message::Tail{b->k, pos}});
      }
      return;
    }
    const auto& t = std::get<Message::Tail>(msg.body);
    if (r_v_) return;
    if (lab_.type == 3) {
      out_tree(t.k, t.pos + 1);
      schedule(next_dedicated(r), Message{Message::Tail{t.k, t.pos + 1}});
    } else if (lab_.type == 0) {
      if (t.pos != t.k) throw ProtocolViolation("tail wave ended at the wrong position");
      out_tree(t.k, t.k + 1);
    }
  }

  LineLabel lab_;
  std::optional<Round> r_v_;
  std::optional<std::pair<Round, Message>> pending_;
  std::optional<NodeOutput> output_;
  std::optional<std::string> violation_;
};

static_assert(NodeProgram<LineProgram>);

}  // namespace toporec
