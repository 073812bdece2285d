#pragma once

// m^2-round gossip among at most m members with ids 1..m: member i speaks
// in the i-th round of each of m segments.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>

#include "toporec/tree.hpp"

namespace toporec {

template <class Payload>
struct RoundRobinKnowledge {
  std::map<unsigned, Payload> labels;         // id -> initial message
  std::set<std::pair<unsigned, unsigned>> edges;  // (smaller id, larger id)
};

template <class Payload>
struct RoundRobinMessage {
  unsigned sender = 0;
  std::shared_ptr<const RoundRobinKnowledge<Payload>> knowledge;
};

template <class Payload>
class RoundRobin {
 public:
  using Knowledge = RoundRobinKnowledge<Payload>;
  using Message = RoundRobinMessage<Payload>;

  RoundRobin(unsigned id, std::size_t m, Round first_round, Payload own) : id_(id), m_(m), start_(first_round) {
    if (m == 0 || id == 0 || id > m) throw ProtocolViolation("round-robin id out of range");
    known_.labels.emplace(id, std::move(own));
  }

  Round first_round() const { return start_; }
  Round last_round() const { return start_ + m_ * m_ - 1; }
  bool in_window(Round r) const { return r >= start_ && r <= last_round(); }

  std::optional<Message> decide(Round r) const {
    if (!in_window(r) || slot(r) != id_) return std::nullopt;
    if (segment(r) == 0) {
      Knowledge own;
      own.labels.emplace(id_, known_.labels.at(id_));
      return Message{id_, std::make_shared<const Knowledge>(std::move(own))};
    }
    return Message{id_, std::make_shared<const Knowledge>(known_)};
  }

  void receive(Round r, const Message& msg) {
    if (!in_window(r) || msg.sender != slot(r) || !msg.knowledge) return;
    // Heard j in j's own slot, so j is a neighbor.
    known_.edges.emplace(std::min(id_, msg.sender), std::max(id_, msg.sender));
    for (const auto& [i, p] : msg.knowledge->labels) known_.labels.try_emplace(i, p);
    known_.edges.insert(msg.knowledge->edges.begin(), msg.knowledge->edges.end());
  }

  const Knowledge& knowledge() const { return known_; }
  unsigned id() const { return id_; }

 private:
  std::size_t segment(Round r) const { return (r - start_) / m_; }
  unsigned slot(Round r) const { return static_cast<unsigned>((r - start_) % m_ + 1); }

  unsigned id_;
  std::size_t m_;
  Round start_;
  Knowledge known_;
};

/// Rooted tree spanned by the learned edges, rooted at id `root`. Node i of
/// the result is member id i + 1.
template <class Payload>
RootedTree knowledge_tree(const RoundRobinKnowledge<Payload>& k, unsigned root = 1) {
  std::size_t p = k.labels.size();
  for (const auto& [i, _] : k.labels)
    if (i == 0 || i > p) throw ProtocolViolation("member ids are not 1..p");
  std::vector<Edge> edges;
  for (auto [a, b] : k.edges) edges.emplace_back(a - 1, b - 1);
  try {
    return root_at(Tree(p, edges), root - 1);
  } catch (const InvalidTree& e) {
    throw ProtocolViolation(std::string("learned member topology is not a tree: ") + e.what());
  }
}

}  // namespace toporec
