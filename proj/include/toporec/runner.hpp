#pragma once

// End-to-end runs: protocol dispatch, labeling, simulation, verification,
// batch sweeps and the outputs file format.

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "toporec/generators.hpp"
#include "toporec/harness.hpp"
#include "toporec/protocol_line.hpp"
#include "toporec/protocol_main.hpp"
#include "toporec/protocol_small.hpp"

namespace toporec {

enum class Protocol : std::uint8_t { Main, D3, Star, Line };

inline const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Main: return "main";
    case Protocol::D3: return "d3";
    case Protocol::Star: return "star";
    case Protocol::Line: return "line";
  }
  return "?";
}

inline Protocol protocol_from_name(const std::string& s) {
  for (Protocol p : {Protocol::Main, Protocol::D3, Protocol::Star, Protocol::Line})
    if (s == protocol_name(p)) return p;
  throw ParseError("unknown protocol '" + s + "'");
}

/// Δ <= 2 -> line, D = 2 -> star, D = 3 -> d3, otherwise main.
inline Protocol dispatch(const Tree& tree) {
  if (tree.size() < 2) throw UnsupportedShape("trees need at least two nodes");
  if (max_degree(tree) <= 2) return Protocol::Line;
  std::size_t d = diameter(tree);
  if (d == 2) return Protocol::Star;
  if (d == 3) return Protocol::D3;
  return Protocol::Main;
}

/// Protocol implied by a label's kind.
inline Protocol protocol_of(const StructuredLabel& l) {
  switch (l.kind) {
    case LabelKind::MainScheme: return Protocol::Main;
    case LabelKind::RootD3:
    case LabelKind::HubD3:
    case LabelKind::LeafD3:
    case LabelKind::LeafD3Null: return Protocol::D3;
    case LabelKind::StarLeaf:
    case LabelKind::StarLeafNull:
    case LabelKind::StarCenter: return Protocol::Star;
    case LabelKind::Line:
    case LabelKind::LineTiny: return Protocol::Line;
  }
  throw MalformedLabel("unknown label kind");
}

struct Labeling {
  Protocol protocol = Protocol::Main;
  std::vector<BitString> labels;
  std::optional<MainScheme> main;  // kept for ground-truth checks
};

inline Labeling label_tree(const Tree& tree, std::optional<Protocol> forced = std::nullopt) {
  Labeling out;
  out.protocol = forced.value_or(dispatch(tree));
  auto encode_each = [&](const std::vector<StructuredLabel>& ls) {
    for (const auto& l : ls) out.labels.push_back(encode(l));
  };
  switch (out.protocol) {
    case Protocol::Main:
      out.main = label_main(tree);
      out.labels = encode_all(out.main->labels);
      break;
    case Protocol::D3: encode_each(label_d3(tree).labels); break;
    case Protocol::Star: encode_each(label_star(tree, max_degree(tree)).labels); break;
    case Protocol::Line: encode_each(label_line_tree(tree).labels); break;
  }
  return out;
}

inline Protocol protocol_of_labels(const std::vector<BitString>& labels) {
  if (labels.empty()) throw MalformedLabel("no labels");
  Protocol p = protocol_of(decode(labels[0]));
  for (const auto& l : labels)
    if (protocol_of(decode(l)) != p) throw MalformedLabel("labels mix several protocols");
  return p;
}

template <class P>
std::vector<P> build_programs(const std::vector<BitString>& labels) {
  std::vector<P> programs;
  programs.reserve(labels.size());
  for (const auto& l : labels) {
    if constexpr (std::is_same_v<P, MainProgram>)
      programs.emplace_back(main_label_from(decode(l)));
    else
      programs.emplace_back(decode(l));
  }
  return programs;
}

struct RunReport {
  Protocol protocol = Protocol::Main;
  std::size_t n = 0;
  std::uint64_t delta = 0, diameter = 0;
  Round rounds = 0;
  std::size_t max_label_bits = 0;
  RunVerdict verdict;
  std::vector<std::string> problems;  // failed invariants, violations, errors
  SimulationResult sim;

  bool pass() const { return problems.empty() && verdict.all_valid(); }
};

namespace detail {
template <class P>
void collect_violations(const std::vector<P>& programs, std::vector<std::string>& problems) {
  for (std::size_t v = 0; v < programs.size(); ++v)
    if (const auto& why = programs[v].violation()) {
      problems.push_back("node " + std::to_string(v) + ": " + *why);
      break;
    }
}
}  // namespace detail

/// Simulates `programs` and fills in outputs, verdicts and generic checks.
template <class P>
void run_programs(const Tree& tree, std::vector<P>& programs, Round max_rounds, RunReport& rep) {
  try {
    rep.sim = simulate(tree, programs, max_rounds);
    rep.rounds = rep.sim.metrics.completion_round;
    rep.verdict = check_run(tree, rep.sim.outputs);
  } catch (const RoundLimitExceeded& e) {
    rep.problems.push_back(e.what());
    rep.verdict.missing = e.missing;
  }
  detail::collect_violations(programs, rep.problems);
  if (auto bad = check_collision_rule(rep.sim.transcript, tree)) rep.problems.push_back(*bad);
}

/// Labels (or takes the given labels), simulates and verifies one tree.
inline RunReport run_tree(const Tree& tree, std::optional<std::vector<BitString>> given = std::nullopt,
                          std::optional<Protocol> forced = std::nullopt, std::optional<Round> max_rounds = std::nullopt) {
  RunReport rep;
  rep.n = tree.size();
  rep.delta = max_degree(tree);
  rep.diameter = diameter(tree);
  std::vector<BitString> labels;
  std::optional<MainScheme> scheme;
  if (given) {
    labels = std::move(*given);
    if (labels.size() != tree.size()) throw ParseError("label count does not match the tree");
    rep.protocol = protocol_of_labels(labels);
  } else {
    auto l = label_tree(tree, forced);
    rep.protocol = l.protocol;
    labels = std::move(l.labels);
    scheme = std::move(l.main);
  }
  rep.max_label_bits = scheme_length(labels);
  Round cap = max_rounds.value_or(default_max_rounds(tree));
  switch (rep.protocol) {
    case Protocol::Main: {
      auto programs = build_programs<MainProgram>(labels);
      run_programs(tree, programs, cap, rep);
      if (!scheme) scheme = label_main(tree);  // checks need the rooted tree
      const auto& p0 = programs[scheme->rt.root];
      if (p0.height() && p0.learned_delta()) {
        auto tr = check_tr_delivery(rep.sim.transcript, scheme->rt, p0.t1() + 1, p0.final_start() - 1);
        if (!tr.clean()) rep.problems.push_back("T-R delivery: " + *tr.first);
        Round bound = main_round_bound(scheme->params, scheme->rt.height);
        if (rep.rounds > bound) rep.problems.push_back("completion round above the bound " + std::to_string(bound));
      }
      break;
    }
    case Protocol::D3: {
      auto programs = build_programs<D3Program>(labels);
      run_programs(tree, programs, cap, rep);
      break;
    }
    case Protocol::Star: {
      auto programs = build_programs<StarProgram>(labels);
      run_programs(tree, programs, cap, rep);
      break;
    }
    case Protocol::Line: {
      auto programs = build_programs<LineProgram>(labels);
      run_programs(tree, programs, cap, rep);
      auto order = line_order(tree);
      std::vector<std::uint64_t> pos(tree.size());
      for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i + 1;
      auto m3 = check_mod3(rep.sim.transcript, pos);
      if (!m3.clean()) rep.problems.push_back("mod-3 schedule: " + *m3.first);
      break;
    }
  }
  return rep;
}

// Outputs file: "T <idx> <n> <u>-<w> ..." per distinct output tree, then
// "O <v> <idx> <v_out>" per node.

inline void write_outputs(std::ostream& os, const std::vector<std::optional<NodeOutput>>& outputs) {
  std::map<const Tree*, std::size_t> index;
  for (const auto& o : outputs) {
    if (!o || index.count(o->tree.get())) continue;
    std::size_t idx = index.size();
    index[o->tree.get()] = idx;
    os << "T " << idx << ' ' << o->tree->size();
    for (auto [u, w] : o->tree->edges()) os << ' ' << u << '-' << w;
    os << '\n';
  }
  for (std::size_t v = 0; v < outputs.size(); ++v)
    if (outputs[v]) os << "O " << v << ' ' << index.at(outputs[v]->tree.get()) << ' ' << outputs[v]->node << '\n';
}

inline std::vector<std::optional<NodeOutput>> read_outputs(std::istream& is, std::size_t n) {
  std::map<std::size_t, std::shared_ptr<const Tree>> trees;
  std::vector<std::optional<NodeOutput>> out(n);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "T") {
      std::string idx, size, e;
      if (!(ls >> idx >> size)) throw ParseError("bad tree line: " + line);
      std::size_t m = detail::parse_uint(size);
      if (m == 0) throw ParseError("empty output tree");
      std::vector<Edge> edges;
      while (ls >> e) {
        auto dash = e.find('-');
        if (dash == std::string::npos) throw ParseError("bad edge '" + e + "'");
        auto u = detail::parse_uint(e.substr(0, dash)), w = detail::parse_uint(e.substr(dash + 1));
        if (u >= m || w >= m) throw ParseError("edge endpoint out of range in output tree");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(w));
      }
      try {
        trees[detail::parse_uint(idx)] = std::make_shared<const Tree>(m, edges);
      } catch (const InvalidTree& err) {
        throw ParseError(std::string("invalid output tree: ") + err.what());
      }
    } else if (tag == "O") {
      std::string v, idx, at;
      if (!(ls >> v >> idx >> at)) throw ParseError("bad output line: " + line);
      auto node = detail::parse_uint(v);
      if (node >= n) throw ParseError("output for unknown node " + v);
      auto it = trees.find(detail::parse_uint(idx));
      if (it == trees.end()) throw ParseError("output refers to unknown tree " + idx);
      out[node] = NodeOutput{it->second, static_cast<NodeId>(detail::parse_uint(at))};
    } else {
      throw ParseError("unknown line in outputs file: " + line);
    }
  }
  return out;
}

// ---- batch sweeps ----

struct BatchConfig {
  std::vector<std::string> families;
  std::vector<std::uint64_t> deltas, diameters, seeds;
  std::optional<Round> max_rounds;
};

/// Values like "3", "3,4,8", "1-5" or "1-3,8".
inline std::vector<std::uint64_t> parse_range(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& part : detail::split(text, ',')) {
    auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(detail::parse_uint(part));
      continue;
    }
    auto lo = detail::parse_uint(part.substr(0, dash)), hi = detail::parse_uint(part.substr(dash + 1));
    if (lo > hi) throw ParseError("empty range '" + part + "'");
    if (hi - lo > 100000) throw ParseError("range '" + part + "' is too long");
    for (auto x = lo; x <= hi; ++x) out.push_back(x);
  }
  if (out.empty()) throw ParseError("empty value list");
  return out;
}

inline BatchConfig parse_batch_config(std::istream& is) {
  BatchConfig c;
  std::string line;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(no) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    auto append = [&](std::vector<std::uint64_t>& dst) {
      auto v = parse_range(value);
      dst.insert(dst.end(), v.begin(), v.end());
    };
    if (key == "family") {
      for (const auto& f : detail::split(value, ',')) {
        if (std::find(family_names().begin(), family_names().end(), f) == family_names().end())
          throw ParseError("line " + std::to_string(no) + ": unknown family '" + f + "'");
        c.families.push_back(f);
      }
    } else if (key == "delta") {
      append(c.deltas);
    } else if (key == "diameter") {
      append(c.diameters);
    } else if (key == "seeds") {
      append(c.seeds);
    } else if (key == "max_rounds") {
      c.max_rounds = detail::parse_uint(value);
    } else {
      throw ParseError("line " + std::to_string(no) + ": unknown key '" + key + "'");
    }
  }
  if (c.families.empty()) c.families.push_back("random");
  if (c.deltas.empty() || c.diameters.empty() || c.seeds.empty())
    throw ParseError("config needs delta=, diameter= and seeds=");
  return c;
}

struct BatchRow {
  std::string family;
  std::uint64_t delta = 0, diameter = 0, n = 0, seed = 0;
  std::string protocol;
  Round rounds = 0;
  std::size_t max_label_bits = 0;
  bool valid = false;
  std::string problem;  // first failure, not part of the CSV

  auto key() const { return std::tie(family, delta, diameter, n, seed, protocol); }
};

inline bool enumerated_family(const std::string& f) { return f == "feas" || f == "lines" || f == "stars"; }

inline std::vector<BatchRow> run_batch(const BatchConfig& c) {
  std::vector<BatchRow> rows;
  for (const auto& family : c.families)
    for (auto delta : c.deltas)
      for (auto d : c.diameters) {
        std::vector<std::uint64_t> seeds = enumerated_family(family) ? std::vector<std::uint64_t>{c.seeds.front()} : c.seeds;
        for (auto seed : seeds) {
          std::vector<Tree> trees;
          try {
            trees = generate({family, delta, d, seed, 1});
          } catch (const InfeasibleParameters&) {
            continue;  // combination outside the family's range
          }
          for (const auto& t : trees) {
            BatchRow row{family, max_degree(t), diameter(t), t.size(), seed, "", 0, 0, false, ""};
            try {
              auto rep = run_tree(t, std::nullopt, std::nullopt, c.max_rounds);
              row.protocol = protocol_name(rep.protocol);
              row.rounds = rep.rounds;
              row.max_label_bits = rep.max_label_bits;
              row.valid = rep.pass();
              if (!rep.problems.empty()) row.problem = rep.problems.front();
              else if (!row.valid) row.problem = "invalid placement";
            } catch (const Error& e) {
              row.protocol = protocol_name(dispatch(t));
              row.problem = e.what();
            }
            rows.push_back(std::move(row));
          }
        }
      }
  std::sort(rows.begin(), rows.end(), [](const BatchRow& a, const BatchRow& b) { return a.key() < b.key(); });
  // Enumerated families repeat across the swept parameter they ignore.
  rows.erase(std::unique(rows.begin(), rows.end(), [](const BatchRow& a, const BatchRow& b) { return a.key() == b.key(); }),
             rows.end());
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<BatchRow>& rows) {
  os << "family,delta,diameter,n,seed,protocol,rounds,max_label_bits,valid\n";
  for (const auto& r : rows)
    os << r.family << ',' << r.delta << ',' << r.diameter << ',' << r.n << ',' << r.seed << ',' << r.protocol << ','
       << r.rounds << ',' << r.max_label_bits << ',' << (r.valid ? 1 : 0) << '\n';
}

}  // namespace toporec
