#pragma once

// Node program for the main scheme: parameter learning, slot learning,
// bottom-up subtree collection (T-R) and the final downward broadcast.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toporec/canonical.hpp"
#include "toporec/radio.hpp"
#include "toporec/round_robin.hpp"
#include "toporec/scheme_main.hpp"

namespace toporec {

enum class MainPhase : std::uint8_t { ParamRR, ParamDown, ParamUp, ParamFlood, SlotRR1, SlotRR2, TR, Final };

using MainRR = RoundRobin<MainLabel>;

struct MuMsg {
  std::uint64_t delta;
};
struct UpWaveMsg {
  std::size_t h, l;
};
struct MuPrimeMsg {
  std::size_t h;
};
struct TRMsg {
  MainLabel label;
  std::shared_ptr<const CanonicalForm> form;
  std::uint64_t C = 0;  // t_v for heavy senders, 0 for light ones
};

/// Subtree forms from the root down to the sender, as a shared linked list.
struct FormChain {
  std::shared_ptr<const CanonicalForm> form;
  std::shared_ptr<const FormChain> up;
  std::size_t length = 1;
};

inline std::vector<CanonicalForm> chain_forms(const FormChain* c) {
  std::vector<CanonicalForm> out;
  for (; c; c = c->up.get()) out.push_back(*c->form);
  std::reverse(out.begin(), out.end());
  return out;
}

struct FinalMsg {
  std::shared_ptr<const PlacementIndex> tree;  // T_r
  std::shared_ptr<const FormChain> chain;
  NodeId placed = 0;  // sender's own position in T_r
};

struct MainMessage {
  MainPhase phase;
  std::optional<std::size_t> sender_level;
  std::variant<MainRR::Message, MuMsg, UpWaveMsg, MuPrimeMsg, TRMsg, FinalMsg> body;
};

/// Rebuilds T_v from one epoch of child messages: light classes are
/// multiplied by the group size spelled out in their L4 chunks, heavy
/// children are attached as sent.
inline CanonicalForm aggregate_children(const std::vector<TRMsg>& received) {
  std::map<std::string, std::vector<Chunk>> light;
  std::vector<std::string_view> kids;
  for (const auto& msg : received) {
    if (!msg.form) throw ProtocolViolation("T-R message without a tree");
    if (msg.label.M[3]) {
      kids.push_back(msg.form->bits);
    } else {
      if (!msg.label.L4) throw ProtocolViolation("light T-R sender without an L4 term");
      light[msg.form->bits].push_back({msg.label.L4->id, msg.label.L4->chunk});
    }
  }
  std::vector<std::string> owned;
  for (auto& [form, chunks] : light) {
    std::uint64_t y = to_uint(unchunk(chunks));
    if (y == 0) throw ProtocolViolation("group size zero");
    for (std::uint64_t i = 0; i < y; ++i) kids.push_back(form);
  }
  return join_forms(std::move(kids));
}

class MainProgram {
 public:
  using Message = MainMessage;

  explicit MainProgram(MainLabel label) : label_(std::move(label)) {
    m_ = to_uint(label_.L5);
    if (m_ == 0) throw MalformedLabel("core size must be positive");
    if (label_.M[0]) level_ = 0;
    if (label_.M[2]) {
      if (!label_.L0) throw MalformedLabel("core member without L0 id");
      rr_param_.emplace(id_of(*label_.L0), m_, 1, label_);
    }
  }

  std::optional<Message> decide(Round r) {
    if (violation_) return std::nullopt;
    try {
      advance(r);
      std::optional<Message> out;
      auto rr_turn = [&](std::optional<MainRR>& rr, MainPhase phase) {
        if (!rr) return;
        if (auto m = rr->decide(r)) put(out, Message{phase, level_, std::move(*m)});
      };
      rr_turn(rr_param_, MainPhase::ParamRR);
      rr_turn(rr_slot1_, MainPhase::SlotRR1);
      rr_turn(rr_slot2_, MainPhase::SlotRR2);
      if (auto it = pending_.find(r); it != pending_.end()) {
        put(out, std::move(it->second));
        pending_.erase(it);
      }
      if (!pending_.empty() && pending_.begin()->first < r) throw ProtocolViolation("missed a scheduled transmission");
      if (out && (out->phase == MainPhase::ParamDown || out->phase == MainPhase::ParamUp ||
                  out->phase == MainPhase::ParamFlood))
        last_param_round_ = r;
      return out;
    } catch (const Error& e) {
      fail(e.what());
      return std::nullopt;
    }
  }

  void receive(Round r, const Message* msg) {
    if (violation_ || !msg) return;
    try {
      handle(r, *msg);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  const std::optional<NodeOutput>& output() const { return output_; }

  // Instrumentation.
  const std::optional<std::string>& violation() const { return violation_; }
  std::optional<std::uint64_t> learned_delta() const { return delta_; }
  std::optional<std::size_t> level() const { return level_; }
  std::optional<std::size_t> height() const { return h_; }
  std::optional<Round> height_learned_round() const { return h_round_; }
  std::optional<Round> last_param_round() const { return last_param_round_; }
  std::optional<std::uint64_t> t_value() const { return t_; }
  std::optional<std::uint64_t> z_value() const { return z_; }
  const std::shared_ptr<const CanonicalForm>& subtree_form() const { return form_; }
  std::optional<Round> subtree_form_round() const { return form_round_; }
  const MainLabel& label() const { return label_; }

  /// Derived schedule; valid once Δ and h are known.
  Round t0() const { return m_ * m_ + 3 * *h_; }
  Round t1() const { return t0() + 2 * m_ * m_; }
  Round epoch_len() const { return params_->epoch; }
  Round final_start() const { return t1() + 2 * *h_ * epoch_len() + 1; }

 private:
  static unsigned id_of(const IdChunk& c) {
    if (c.id == 0 || c.id > 64) throw MalformedLabel("member id out of range");
    return static_cast<unsigned>(c.id);
  }

  bool heavy() const { return label_.M[3]; }
  bool is_root() const { return label_.M[0]; }

  void fail(const std::string& why) {
    violation_ = why;
    pending_.clear();
    output_.reset();
  }

  static void put(std::optional<Message>& slot, Message m) {
    if (slot) throw ProtocolViolation("two transmissions scheduled for one round");
    slot = std::move(m);
  }

  void schedule(Round r, Message m) {
    if (!pending_.emplace(r, std::move(m)).second) throw ProtocolViolation("two transmissions scheduled for one round");
  }

  void learn_delta(std::uint64_t d) {
    if (delta_ && *delta_ != d) throw ProtocolViolation("conflicting values of delta");
    delta_ = d;
    if (!params_) params_ = derive_params(d);
    if (params_->m != m_) throw ProtocolViolation("L5 disagrees with delta");
  }

  void learn_h(std::size_t h, Round r) {
    if (h_) {
      if (*h_ != h) throw ProtocolViolation("conflicting values of h");
      return;
    }
    h_ = h;
    h_round_ = r;
    if (label_.L1) rr_slot1_.emplace(id_of(*label_.L1), m_, t0() + 1, label_);
    if (label_.L3) rr_slot2_.emplace(id_of(*label_.L3), m_, t0() + m_ * m_ + 1, label_);
  }

  static std::vector<Chunk> chunks_of(const MainRR::Knowledge& k, std::optional<IdChunk> MainLabel::*field) {
    std::vector<Chunk> out;
    for (const auto& [i, l] : k.labels)
      if (const auto& f = l.*field) out.push_back({f->id, f->chunk});
    return out;
  }

  // Round-driven bookkeeping: decode what the finished windows taught us and
  // schedule the transmissions that follow from it.
  void advance(Round r) {
    const Round mm = m_ * m_;
    if (is_root() && r == mm + 1 && !delta_) {
      learn_delta(to_uint(unchunk(chunks_of(rr_param_->knowledge(), &MainLabel::L0))));
      schedule(mm + 1, Message{MainPhase::ParamDown, 0, MuMsg{*delta_}});
    }
    if (!h_ || !params_) return;
    if (rr_slot1_ && !t_ && heavy() && label_.M[5] && !is_root() && r > t0() + mm) {
      if (rr_slot1_->id() != 1) throw ProtocolViolation("heavy node is not id 1 of its core");
      t_ = to_uint(unchunk(chunks_of(rr_slot1_->knowledge(), &MainLabel::L1)));
    }
    if (rr_slot2_ && !form_ && r > t1()) {
      const auto& k = rr_slot2_->knowledge();
      auto rt = knowledge_tree(k);
      form_ = std::make_shared<const CanonicalForm>(ahu(rt, rr_slot2_->id() - 1));
      form_round_ = t1();
      if (rr_slot2_->id() == 1) {
        z_ = to_uint(unchunk(chunks_of(k, &MainLabel::L3)));
        if (*z_ == 0 || *z_ > params_->q) throw ProtocolViolation("decoded z out of range");
        if (label_.L4) {
          Round at = t1() + 2 * (*h_ - *level_) * epoch_len() + epoch_len() + (*z_ - 1) * m_ + label_.L4->id;
          auto rep = std::make_shared<const CanonicalForm>(params_->seq->at(*z_));
          schedule(at, Message{MainPhase::TR, level_, TRMsg{label_, rep, 0}});
        }
      }
    }
    if (heavy() && !form_) {
      Round start = t1() + 2 * (*h_ - *level_) * epoch_len() + 1;
      if (r >= start) {
        form_ = std::make_shared<const CanonicalForm>(aggregate_children(tr_inbox_));
        form_round_ = start - 1;
        if (!is_root() && !t_) {
          for (const auto& msg : tr_inbox_)
            if (msg.label.M[3] && msg.label.L2) t_ = msg.C;
          if (!t_) throw ProtocolViolation("no heavy child carries the slot flag");
        }
        tr_inbox_.clear();
        if (is_root()) {
          auto index = std::make_shared<const PlacementIndex>(*form_);
          output_ = NodeOutput{index->tree(), index->root()};
          auto chain = std::make_shared<const FormChain>(FormChain{form_, nullptr, 1});
          schedule(r, Message{MainPhase::Final, level_, FinalMsg{index, chain, index->root()}});
        } else {
          schedule(start - 1 + *t_, Message{MainPhase::TR, level_, TRMsg{label_, form_, *t_}});
        }
      }
    }
  }

  void handle(Round r, const Message& msg) {
    const Round mm = m_ * m_;
    switch (msg.phase) {
      case MainPhase::ParamRR:
        if (rr_param_ && r <= mm) rr_param_->receive(r, std::get<MainRR::Message>(msg.body));
        return;
      case MainPhase::SlotRR1:
        if (rr_slot1_) rr_slot1_->receive(r, std::get<MainRR::Message>(msg.body));
        return;
      case MainPhase::SlotRR2:
        if (rr_slot2_) rr_slot2_->receive(r, std::get<MainRR::Message>(msg.body));
        return;
      case MainPhase::ParamDown: {
        if (level_ || r <= mm) return;
        level_ = r - mm;
        if (msg.sender_level && *msg.sender_level + 1 != *level_)
          throw ProtocolViolation("downward wave arrived out of step");
        learn_delta(std::get<MuMsg>(msg.body).delta);
        if (!label_.leaf) schedule(r + 1, Message{MainPhase::ParamDown, level_, MuMsg{*delta_}});
        if (label_.M[1]) {
          learn_h(*level_, r);
          schedule(r + 1, Message{MainPhase::ParamUp, level_, UpWaveMsg{*h_, *h_}});
        }
        return;
      }
      case MainPhase::ParamUp: {
        auto up = std::get<UpWaveMsg>(msg.body);
        if (!level_ || h_ || up.l != *level_ + 1) return;
        learn_h(up.h, r);
        if (is_root())
          schedule(r + 1, Message{MainPhase::ParamFlood, level_, MuPrimeMsg{up.h}});
        else
          schedule(r + 1, Message{MainPhase::ParamUp, level_, UpWaveMsg{up.h, *level_}});
        return;
      }
      case MainPhase::ParamFlood: {
        if (!level_ || flood_seen_ || !msg.sender_level || *msg.sender_level + 1 != *level_) return;
        flood_seen_ = true;
        auto h = std::get<MuPrimeMsg>(msg.body).h;
        learn_h(h, r);
        if (*level_ < h) schedule(r + 1, Message{MainPhase::ParamFlood, level_, MuPrimeMsg{h}});
        return;
      }
      case MainPhase::TR: {
        if (!heavy() || !h_ || !params_ || form_) return;
        if (!msg.sender_level || *msg.sender_level != *level_ + 1) return;
        if (r <= t1() || r >= final_start()) return;
        tr_inbox_.push_back(std::get<TRMsg>(msg.body));
        return;
      }
      case MainPhase::Final: {
        if (output_ || !level_ || !h_ || !msg.sender_level || *msg.sender_level + 1 != *level_) return;
        if (!form_) throw ProtocolViolation("final broadcast reached a node without its subtree");
        const auto& fin = std::get<FinalMsg>(msg.body);
        NodeId here = fin.tree->place_step(fin.placed, form_->bits);
        output_ = NodeOutput{fin.tree->tree(), here};
        if (*level_ < *h_) {
          auto chain = std::make_shared<const FormChain>(FormChain{form_, fin.chain, fin.chain->length + 1});
          schedule(r + 1, Message{MainPhase::Final, level_, FinalMsg{fin.tree, chain, here}});
        }
        return;
      }
    }
  }

  MainLabel label_;
  std::size_t m_ = 0;
  std::optional<MainRR> rr_param_, rr_slot1_, rr_slot2_;
  std::optional<std::uint64_t> delta_;
  std::optional<SchemeParams> params_;
  std::optional<std::size_t> level_, h_;
  std::optional<Round> h_round_, last_param_round_, form_round_;
  bool flood_seen_ = false;
  std::optional<std::uint64_t> t_, z_;
  std::shared_ptr<const CanonicalForm> form_;
  std::vector<TRMsg> tr_inbox_;
  std::map<Round, Message> pending_;
  std::optional<NodeOutput> output_;
  std::optional<std::string> violation_;
};

static_assert(NodeProgram<MainProgram>);

/// Completion bound 3m^2 + 4h + 2hE + 1.
inline Round main_round_bound(const SchemeParams& p, std::size_t h) {
  return 3 * p.m * p.m + 4 * h + 2 * h * p.epoch + 1;
}

}  // namespace toporec
