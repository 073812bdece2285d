#pragma once

// Synchronous radio rounds: decide, then deliver to listeners with exactly
// one transmitting neighbor. No collision detection.

#include <concepts>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "toporec/heavy.hpp"
#include "toporec/tree.hpp"

namespace toporec {

/// What a node finally outputs: a copy of the network and its own position.
struct NodeOutput {
  std::shared_ptr<const Tree> tree;
  NodeId node = 0;
};

template <class P>
concept NodeProgram = requires(P p, const P cp, Round r, const typename P::Message* msg) {
  typename P::Message;
  { p.decide(r) } -> std::same_as<std::optional<typename P::Message>>;
  p.receive(r, msg);  // msg is null when nothing was heard
  { cp.output() } -> std::convertible_to<const std::optional<NodeOutput>&>;
};

struct RoundRecord {
  std::vector<NodeId> transmitters;                   // ascending
  std::vector<std::pair<NodeId, NodeId>> deliveries;  // (receiver, transmitter), ascending receiver
};

struct Transcript {
  std::vector<RoundRecord> rounds;                 // rounds[i] is round i + 1
  std::vector<std::optional<Round>> output_round;  // per node

  const RoundRecord& at(Round r) const { return rounds.at(r - 1); }
};

struct Metrics {
  Round completion_round = 0;  // max over nodes of the output round
  std::size_t transmissions = 0;
};

struct SimulationResult {
  std::vector<std::optional<NodeOutput>> outputs;
  Transcript transcript;
  Metrics metrics;
};

/// Generous cap: 16 (DΔ + (floor(log Δ) + 1)^2 + D + 64).
inline Round default_max_rounds(const Tree& t) {
  std::uint64_t delta = max_degree(t), d = diameter(t);
  std::uint64_t lg = delta == 0 ? 1 : floor_log2(delta) + 1;
  return 16 * (d * delta + lg * lg + d + 64);
}

template <NodeProgram P>
SimulationResult simulate(const Tree& tree, std::vector<P>& programs, Round max_rounds) {
  const std::size_t n = tree.size();
  if (programs.size() != n) throw std::invalid_argument("need exactly one program per node");
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  using Message = typename P::Message;

  SimulationResult res;
  res.outputs.assign(n, std::nullopt);
  res.transcript.output_round.assign(n, std::nullopt);
  std::vector<std::optional<Message>> sent(n);
  std::size_t have_output = 0;

  for (Round r = 1; r <= max_rounds; ++r) {
    RoundRecord rec;
    for (NodeId v = 0; v < n; ++v) {
      sent[v] = programs[v].decide(r);
      if (sent[v]) rec.transmitters.push_back(v);
    }
    for (NodeId v = 0; v < n; ++v) {
      if (sent[v]) continue;
      const Message* heard = nullptr;
      NodeId from = 0;
      int talking = 0;
      for (NodeId w : tree.neighbors(v))
        if (sent[w]) {
          from = w;
          if (++talking > 1) break;
        }
      if (talking == 1) {
        heard = &*sent[from];
        rec.deliveries.emplace_back(v, from);
      }
      programs[v].receive(r, heard);
    }
    res.metrics.transmissions += rec.transmitters.size();
    res.transcript.rounds.push_back(std::move(rec));

    for (NodeId v = 0; v < n; ++v) {
      const auto& out = programs[v].output();
      if (res.outputs[v]) {
        if (!out || out->tree != res.outputs[v]->tree || out->node != res.outputs[v]->node)
          throw ProtocolViolation("node " + std::to_string(v) + " changed its output");
      } else if (out) {
        res.outputs[v] = *out;
        res.transcript.output_round[v] = r;
        res.metrics.completion_round = r;
        ++have_output;
      }
    }
    if (have_output == n) return res;
  }
  std::vector<NodeId> missing;
  for (NodeId v = 0; v < n; ++v)
    if (!res.outputs[v]) missing.push_back(v);
  throw RoundLimitExceeded(max_rounds, std::move(missing));
}

/// Nodes whose information can have reached r by round tau: u belongs iff a
/// chain of deliveries u -> ... -> r exists with strictly increasing rounds,
/// all at most tau.
inline std::vector<NodeId> history_of(const Transcript& tr, const Tree& tree, NodeId r, Round tau) {
  if (r >= tree.size()) throw UnknownNode("node " + std::to_string(r) + " is not in the tree");
  constexpr Round kNever = 0;
  // leave[u]: latest round at which u can still pass information on to r.
  std::vector<Round> leave(tree.size(), kNever);
  Round last = std::min<Round>(tau, tr.rounds.size());
  leave[r] = last + 1;
  for (Round t = last; t >= 1; --t)
    for (auto [rx, tx] : tr.at(t).deliveries)
      if (leave[rx] > t && leave[tx] < t) leave[tx] = t;
  std::vector<NodeId> out;
  for (NodeId u = 0; u < tree.size(); ++u)
    if (leave[u] != kNever) out.push_back(u);
  return out;
}

// Transcript file: "R<round> T:<ids> D:<rx<-tx,...>" per round, then
// "OUT <node> <round>" per node that produced output.

inline void write_transcript(std::ostream& os, const Transcript& tr) {
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
    const auto& rec = tr.rounds[i];
    os << 'R' << i + 1 << " T:";
    for (std::size_t j = 0; j < rec.transmitters.size(); ++j) os << (j ? "," : "") << rec.transmitters[j];
    os << " D:";
    for (std::size_t j = 0; j < rec.deliveries.size(); ++j)
      os << (j ? "," : "") << rec.deliveries[j].first << "<-" << rec.deliveries[j].second;
    os << '\n';
  }
  for (std::size_t v = 0; v < tr.output_round.size(); ++v)
    if (tr.output_round[v]) os << "OUT " << v << ' ' << *tr.output_round[v] << '\n';
}

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline unsigned long long parse_uint(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("expected a number, got '" + s + "'");
  return std::stoull(s);
}
}  // namespace detail

inline Transcript read_transcript(std::istream& is, std::size_t n) {
  Transcript tr;
  tr.output_round.assign(n, std::nullopt);
  std::string line;
  auto node = [n](const std::string& s) {
    auto v = detail::parse_uint(s);
    if (v >= n) throw ParseError("transcript mentions unknown node " + s);
    return static_cast<NodeId>(v);
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head, t, d;
    ls >> head;
    if (head == "OUT") {
      std::string v, r;
      if (!(ls >> v >> r)) throw ParseError("bad OUT line: " + line);
      tr.output_round[node(v)] = detail::parse_uint(r);
      continue;
    }
    if (head.size() < 2 || head[0] != 'R' || detail::parse_uint(head.substr(1)) != tr.rounds.size() + 1)
      throw ParseError("rounds must be listed as R1, R2, ...: " + line);
    if (!(ls >> t) || t.rfind("T:", 0) != 0) throw ParseError("missing T: field: " + line);
    if (!(ls >> d) || d.rfind("D:", 0) != 0) throw ParseError("missing D: field: " + line);
    RoundRecord rec;
    for (const auto& id : detail::split(t.substr(2), ',')) rec.transmitters.push_back(node(id));
    for (const auto& pair : detail::split(d.substr(2), ',')) {
      auto arrow = pair.find("<-");
      if (arrow == std::string::npos) throw ParseError("bad delivery '" + pair + "'");
      rec.deliveries.emplace_back(node(pair.substr(0, arrow)), node(pair.substr(arrow + 2)));
    }
    tr.rounds.push_back(std::move(rec));
  }
  return tr;
}

/// Checks the collision rule against the tree: every delivery has an adjacent
/// transmitter that is the receiver's only transmitting neighbor, and every
/// listener with exactly one transmitting neighbor got a delivery.
inline std::optional<std::string> check_collision_rule(const Transcript& tr, const Tree& tree) {
  std::vector<char> talking(tree.size(), 0);
  for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
    const auto& rec = tr.rounds[i];
    for (NodeId v : rec.transmitters) talking[v] = 1;
    std::vector<std::optional<NodeId>> expected(tree.size());
    for (NodeId v = 0; v < tree.size(); ++v) {
      if (talking[v]) continue;
      int c = 0;
      for (NodeId w : tree.neighbors(v))
        if (talking[w]) {
          ++c;
          expected[v] = w;
        }
      if (c != 1) expected[v].reset();
    }
    std::size_t want = 0;
    for (auto& e : expected) want += e.has_value();
    std::string where = "round " + std::to_string(i + 1) + ": ";
    if (want != rec.deliveries.size()) return where + "delivery count does not match the collision rule";
    for (auto [rx, tx] : rec.deliveries)
      if (!expected[rx] || *expected[rx] != tx)
        return where + "delivery " + std::to_string(rx) + "<-" + std::to_string(tx) + " is impossible";
    for (NodeId v : rec.transmitters) talking[v] = 0;
  }
  return std::nullopt;
}

}  // namespace toporec
