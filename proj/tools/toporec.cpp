// toporec: generate trees, label them, run and verify the protocols.
// Exit status: 0 pass, 1 verification failure, 2 usage or format error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "toporec/runner.hpp"

namespace fs = std::filesystem;
using namespace toporec;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

Tree load_tree(const std::string& path) {
  auto in = open_in(path);
  return read_tree(in);
}

std::vector<BitString> load_labels(const std::string& path, std::size_t n) {
  auto in = open_in(path);
  return read_labels(in, n);
}

std::optional<Protocol> parse_protocol(const std::string& s) {
  if (s == "auto") return std::nullopt;
  return protocol_from_name(s);
}

void print_report(const RunReport& rep) {
  std::size_t valid = std::count(rep.verdict.valid.begin(), rep.verdict.valid.end(), true);
  std::cout << "protocol=" << protocol_name(rep.protocol) << " n=" << rep.n << " delta=" << rep.delta
            << " diameter=" << rep.diameter << " rounds=" << rep.rounds << " max_label_bits=" << rep.max_label_bits
            << " valid=" << valid << '/' << rep.n << " result=" << (rep.pass() ? "pass" : "fail") << '\n';
  for (const auto& p : rep.problems) std::cout << "problem: " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology recognition in radio tree networks"};
  app.require_subcommand(1);

  GenSpec gen;
  std::string gen_out;
  auto* cmd_gen = app.add_subcommand("gen", "write generated trees to a directory");
  cmd_gen->add_option("--family", gen.family, "random|feas|diamLB|degLB|sticks|lines|stars")->required();
  cmd_gen->add_option("--delta", gen.delta, "maximum degree");
  cmd_gen->add_option("--diameter", gen.diameter, "diameter");
  cmd_gen->add_option("--seed", gen.seed, "seed");
  cmd_gen->add_option("--count", gen.count, "number of samples");
  cmd_gen->add_option("--out", gen_out, "output directory")->required();

  std::string tree_path, labels_path, out_path, truth_path, protocol = "auto", transcript_path, outputs_path;
  std::optional<Round> max_rounds;
  auto* cmd_label = app.add_subcommand("label", "compute labels for a tree");
  cmd_label->add_option("--tree", tree_path)->required();
  cmd_label->add_option("--out", out_path)->required();
  cmd_label->add_option("--truth", truth_path, "ground-truth t/z values (main scheme)");
  cmd_label->add_option("--protocol", protocol, "auto|main|d3|star|line");

  auto* cmd_run = app.add_subcommand("run", "label (or load labels), simulate and verify");
  cmd_run->add_option("--tree", tree_path)->required();
  cmd_run->add_option("--labels", labels_path);
  cmd_run->add_option("--protocol", protocol, "auto|main|d3|star|line");
  cmd_run->add_option("--transcript", transcript_path);
  cmd_run->add_option("--outputs", outputs_path);
  cmd_run->add_option("--max-rounds", max_rounds);

  std::string config_path;
  auto* cmd_batch = app.add_subcommand("batch", "run a parameter sweep and write CSV");
  cmd_batch->add_option("--config", config_path)->required();
  cmd_batch->add_option("--out", out_path)->required();

  auto* cmd_verify = app.add_subcommand("verify", "check a recorded run");
  cmd_verify->add_option("--tree", tree_path)->required();
  cmd_verify->add_option("--labels", labels_path)->required();
  cmd_verify->add_option("--transcript", transcript_path)->required();
  cmd_verify->add_option("--outputs", outputs_path)->required();

  std::string delta_text;
  unsigned label_bits = 0;
  auto* cmd_bounds = app.add_subcommand("bounds", "pigeonhole certificate for the feasibility family");
  cmd_bounds->add_option("--delta", delta_text)->required();
  cmd_bounds->add_option("--label-bits", label_bits)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_gen) {
      auto trees = generate(gen);
      fs::create_directories(gen_out);
      for (std::size_t i = 0; i < trees.size(); ++i) {
        std::ostringstream name;
        name << gen.family << "_d" << gen.delta << "_D" << gen.diameter << "_s" << gen.seed << '_' << i << ".tree";
        auto out = open_out((fs::path(gen_out) / name.str()).string());
        write_tree(out, trees[i]);
      }
      std::cout << "wrote " << trees.size() << " tree(s) to " << gen_out << '\n';
      return 0;
    }
    if (*cmd_label) {
      Tree t = load_tree(tree_path);
      auto l = label_tree(t, parse_protocol(protocol));
      auto out = open_out(out_path);
      write_labels(out, l.labels);
      if (!truth_path.empty()) {
        if (!l.main) throw UsageError("--truth is only available for the main scheme");
        auto tout = open_out(truth_path);
        write_truth(tout, l.main->truth);
      }
      std::cout << "protocol=" << protocol_name(l.protocol) << " max_label_bits=" << scheme_length(l.labels) << '\n';
      return 0;
    }
    if (*cmd_run) {
      Tree t = load_tree(tree_path);
      std::optional<std::vector<BitString>> labels;
      if (!labels_path.empty()) labels = load_labels(labels_path, t.size());
      auto rep = run_tree(t, labels, parse_protocol(protocol), max_rounds);
      if (!transcript_path.empty()) {
        auto out = open_out(transcript_path);
        write_transcript(out, rep.sim.transcript);
      }
      if (!outputs_path.empty()) {
        auto out = open_out(outputs_path);
        write_outputs(out, rep.sim.outputs);
      }
      print_report(rep);
      return rep.pass() ? 0 : 1;
    }
    if (*cmd_batch) {
      auto in = open_in(config_path);
      auto rows = run_batch(parse_batch_config(in));
      auto out = open_out(out_path);
      write_csv(out, rows);
      std::size_t bad = 0;
      for (const auto& r : rows)
        if (!r.valid) {
          ++bad;
          std::cerr << "fail: " << r.family << " delta=" << r.delta << " D=" << r.diameter << " n=" << r.n
                    << " seed=" << r.seed << ": " << r.problem << '\n';
        }
      std::cout << rows.size() << " run(s), " << bad << " failure(s)\n";
      return bad == 0 ? 0 : 1;
    }
    if (*cmd_verify) {
      Tree t = load_tree(tree_path);
      auto labels = load_labels(labels_path, t.size());
      auto tin = open_in(transcript_path);
      auto recorded = read_transcript(tin, t.size());
      auto oin = open_in(outputs_path);
      auto outputs = read_outputs(oin, t.size());
      bool ok = true;
      if (auto bad = check_collision_rule(recorded, t)) {
        std::cout << "collision rule: " << *bad << '\n';
        ok = false;
      }
      auto rep = run_tree(t, labels);
      std::ostringstream replay, given;
      write_transcript(replay, rep.sim.transcript);
      write_transcript(given, recorded);
      if (replay.str() != given.str()) {
        std::cout << "transcript does not match a replay of the labels\n";
        ok = false;
      }
      auto verdict = check_run(t, outputs);
      if (!verdict.all_valid()) {
        std::cout << "outputs: " << verdict.missing.size() << " missing, "
                  << std::count(verdict.valid.begin(), verdict.valid.end(), false) - verdict.missing.size()
                  << " misplaced\n";
        ok = false;
      }
      std::cout << (ok ? "verified" : "verification failed") << '\n';
      return ok ? 0 : 1;
    }
    if (*cmd_bounds) {
      BigInt delta;
      try {
        delta = BigInt(delta_text);
      } catch (const std::exception&) {
        throw UsageError("--delta must be an integer");
      }
      auto c = pigeonhole_certificate(delta, label_bits);
      std::cout << "views_upper_bound=2^" << c.views_log2 << " family_size=" << c.family_size
                << " separable=" << (c.separable ? "true" : "false") << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const MalformedLabel& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleParameters& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedShape& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
