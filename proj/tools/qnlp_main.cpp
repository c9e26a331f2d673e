// Copyright 2026 The qnlp-ansatz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qnlp: parse, rewrite, compile, simulate, train, sweep and report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnlp/circuit.hpp"
#include "qnlp/dataset.hpp"
#include "qnlp/error.hpp"
#include "qnlp/experiment.hpp"
#include "qnlp/parser.hpp"
#include "qnlp/rewrite.hpp"
#include "qnlp/simulator.hpp"
#include "qnlp/tensornet.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

using nlohmann::json;

struct SentenceArgs {
  std::string sentence;
  std::string lexicon;
  std::string scheme = "re";
};

void add_sentence_args(CLI::App* cmd, SentenceArgs& a) {
  cmd->add_option("sentence", a.sentence, "Sentence to process")->required();
  cmd->add_option("--lexicon", a.lexicon, "Lexicon TSV (word<TAB>type); default: bundled");
}

qnlp::Lexicon lexicon_of(const SentenceArgs& a) {
  return a.lexicon.empty() ? qnlp::mc_lexicon() : qnlp::Lexicon::load(a.lexicon);
}

qnlp::Diagram rewritten(const SentenceArgs& a) {
  return qnlp::rewrite(qnlp::parse_sentence(a.sentence, lexicon_of(a)),
                       qnlp::parse_scheme(a.scheme));
}

json stats_json(const qnlp::Diagram& d) {
  const auto s = qnlp::count_stats(d);
  return {{"boxes", s.n_boxes}, {"cups", s.n_cups}, {"max_width", s.max_width}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qnlp::Error(qnlp::ErrorKind::ConfigError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw qnlp::Error(qnlp::ErrorKind::ConfigError, path + ": " + e.what());
  }
}

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qnlp::Error(qnlp::ErrorKind::ConfigError, "bad parameter '" + item + "'");
    }
  }
  return out;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional sentence classification with circuit and tensor ansatze"};
  app.require_subcommand(1);
  std::string results_dir;
  app.add_option("--results-root", results_dir, "Output root (default $QNLP_RESULTS_ROOT or ./results)");

  SentenceArgs parse_args;
  bool emit_json = false;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a sentence into a string diagram");
  add_sentence_args(parse_cmd, parse_args);
  parse_cmd->add_flag("--emit-json", emit_json, "Print the diagram as JSON");

  SentenceArgs rewrite_args;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "Parse and rewrite a sentence");
  add_sentence_args(rewrite_cmd, rewrite_args);
  rewrite_cmd->add_option("--scheme", rewrite_args.scheme, "re, re_norm, re_norm_cur, re_norm_cur_norm");

  SentenceArgs compile_args;
  std::string ansatz = "iqp";
  int layers = 1, rotations = 3;
  std::size_t d_n = 2, d_s = 2, bond = 2, max_legs = 2;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a sentence to a circuit or network");
  add_sentence_args(compile_cmd, compile_args);
  compile_cmd->add_option("--scheme", compile_args.scheme, "Rewriting scheme");
  compile_cmd->add_option("--ansatz", ansatz, "iqp, strongly_entangling, sim14, sim15, tensor, spider, mps");
  compile_cmd->add_option("--layers", layers, "Circuit layers");
  compile_cmd->add_option("--rotations", rotations, "Single-qubit rotations per word qubit");
  compile_cmd->add_option("--dn", d_n, "Noun wire dimension (tensor ansatze)");
  compile_cmd->add_option("--ds", d_s, "Sentence wire dimension (tensor ansatze)");
  compile_cmd->add_option("--bond", bond, "MPS bond dimension");
  compile_cmd->add_option("--max-legs", max_legs, "Spider split threshold");

  std::string circuit_path, params_text;
  std::uint64_t param_seed = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a compiled circuit");
  simulate_cmd->add_option("--circuit", circuit_path, "Circuit JSON from `compile`")->required();
  simulate_cmd->add_option("--params", params_text, "Comma-separated angles; default: random");
  simulate_cmd->add_option("--seed", param_seed, "Seed for random angles");

  std::string train_config;
  auto* train_cmd = app.add_subcommand("train", "Run one experiment");
  train_cmd->add_option("--config", train_config, "Experiment config JSON")->required();

  std::string sweep_config;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a resumable layers x rotations sweep");
  sweep_cmd->add_option("--config", sweep_config, "Sweep config JSON")->required();

  auto* report_cmd = app.add_subcommand("report", "Write tables and curve data from finished runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto root = results_dir.empty() ? qnlp::results_root() : std::filesystem::path(results_dir);

  try {
    if (*parse_cmd) {
      const auto d = qnlp::parse_sentence(parse_args.sentence, lexicon_of(parse_args));
      if (emit_json) {
        print(qnlp::to_json(d));
      } else {
        for (const auto& box : d.boxes) std::cout << box.name << '\t' << qnlp::to_string(box.cod) << '\n';
        std::cout << "cups\t" << d.cups.size() << '\n';
      }
    } else if (*rewrite_cmd) {
      const auto d = rewritten(rewrite_args);
      print({{"scheme", rewrite_args.scheme}, {"stats", stats_json(d)}, {"diagram", qnlp::to_json(d)}});
    } else if (*compile_cmd) {
      const auto d = rewritten(compile_args);
      if (ansatz == "tensor" || ansatz == "spider" || ansatz == "mps") {
        qnlp::TensorAnsatzConfig cfg;
        cfg.kind = qnlp::parse_tensor_ansatz(ansatz);
        cfg.d_n = d_n;
        cfg.d_s = d_s;
        cfg.bond_dim = bond;
        cfg.max_legs = max_legs;
        print(qnlp::to_json(qnlp::compile_network(d, cfg)));
      } else {
        qnlp::CircuitAnsatzConfig cfg;
        cfg.kind = qnlp::parse_circuit_ansatz(ansatz);
        cfg.n_layers = layers;
        cfg.n_single_qubit_params = rotations;
        print(qnlp::to_json(qnlp::compile_circuit(d, cfg)));
      }
    } else if (*simulate_cmd) {
      qnlp::Circuit c;
      try {
        c = qnlp::circuit_from_json(read_json_file(circuit_path));
      } catch (const json::exception& e) {
        throw qnlp::Error(qnlp::ErrorKind::ConfigError, circuit_path + ": " + e.what());
      }
      std::vector<double> params;
      if (params_text.empty()) {
        std::mt19937_64 rng(param_seed);
        std::uniform_real_distribution<double> u(0, 2 * 3.141592653589793);
        for (std::size_t i = 0; i < c.symbols.size(); ++i) params.push_back(u(rng));
      } else {
        params = parse_params(params_text);
      }
      const auto run = qnlp::run(c, params);
      const auto dist = qnlp::sentence_distribution(c, params);
      print({{"params", params},
             {"survival_norm", run.survival_norm},
             {"p", dist.p},
             {"degenerate", dist.degenerate}});
    } else if (*train_cmd) {
      const auto cfg = qnlp::load_experiment_config(train_config);
      const auto r = qnlp::run_experiment(cfg, root);
      std::cout << "run " << r.run_id << " (" << r.n_params << " params)\n"
                << "val_acc " << qnlp::format_number(r.mean.val_acc) << " test_acc "
                << qnlp::format_number(r.mean_test_acc) << '\n'
                << "wrote " << (root / "runs" / r.run_id).string() << '\n';
    } else if (*sweep_cmd) {
      const auto cfg = qnlp::sweep_config_from_json(read_json_file(sweep_config));
      const auto out = qnlp::run_sweep(cfg, root);
      std::cout << "executed " << out.executed << " of " << out.cells.size() << " cells\n"
                << "wrote " << out.results_csv.string() << '\n';
    } else if (*report_cmd) {
      const auto files = qnlp::report(root);
      std::cout << "runs " << files.n_runs << '\n';
      for (const auto& p : {files.table1, files.table2, files.table3, files.curves}) {
        std::cout << "wrote " << p.string() << '\n';
      }
    }
  } catch (const qnlp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == qnlp::ErrorKind::ConfigError ? kExitConfig : kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
  return 0;
}
