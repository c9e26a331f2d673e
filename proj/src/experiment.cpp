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

#include "qnlp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "qnlp/error.hpp"
#include "qnlp/models.hpp"
#include "qnlp/parser.hpp"

namespace qnlp {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

json number_json(double v) { return std::isnan(v) ? json("NaN") : json(v); }

double number_from(const json& j) {
  if (j.is_string()) return kNaN;
  if (j.is_null()) return kNaN;
  return j.get<double>();
}

// Re-raises pipeline errors with the failing stage in the message.
template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ZeroParameterModel) throw;
    throw Error(e.kind(), std::string(stage) + " stage: " + e.detail());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string(stage) + " stage: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig default_config(Backend backend) {
  ExperimentConfig cfg;
  cfg.backend = backend;
  // One SPSA step per full-batch epoch needs larger gains than the
  // optimizer's generic defaults to converge within 120 epochs.
  cfg.train.spsa.a = 1.5;
  cfg.train.spsa.c = 0.2;
  if (backend == Backend::Tensor) {
    cfg.scheme = RewriteScheme::Re;
    cfg.train.optimizer = OptimizerKind::AdaptiveGD;
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["run_id"] = cfg.run_id;
  j["scheme"] = to_string(cfg.scheme);
  if (cfg.backend == Backend::Circuit) {
    j["backend"] = {{"kind", "circuit"},
                    {"ansatz", to_string(cfg.circuit.kind)},
                    {"n_layers", cfg.circuit.n_layers},
                    {"n_single_qubit_params", cfg.circuit.n_single_qubit_params},
                    {"qubits_per_n", cfg.circuit.qubits_per_n},
                    {"qubits_per_s", cfg.circuit.qubits_per_s},
                    {"max_qubits", cfg.circuit.max_qubits}};
  } else {
    j["backend"] = {{"kind", "tensor"},
                    {"ansatz", to_string(cfg.tensor.kind)},
                    {"d_n", cfg.tensor.d_n},
                    {"d_s", cfg.tensor.d_s},
                    {"bond_dim", cfg.tensor.bond_dim},
                    {"max_legs", cfg.tensor.max_legs}};
  }
  j["seeds"] = cfg.seeds;
  if (cfg.dataset.path.empty()) {
    j["dataset"] = {{"generator", "mc"}, {"seed", cfg.dataset.seed}, {"sizes", cfg.dataset.sizes}};
  } else {
    j["dataset"] = {{"path", cfg.dataset.path}};
  }
  j["lexicon"] = cfg.lexicon;
  json train = to_json(cfg.train);
  train.erase("seed");
  j["train"] = train;
  j["budget_seconds"] = cfg.budget_seconds;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    const json backend = j.value("backend", json{{"kind", "circuit"}});
    const std::string kind = backend.value("kind", "circuit");
    if (kind != "circuit" && kind != "tensor") {
      throw Error(ErrorKind::ConfigError, "backend kind must be circuit or tensor");
    }
    ExperimentConfig cfg = default_config(kind == "circuit" ? Backend::Circuit : Backend::Tensor);
    cfg.run_id = j.value("run_id", std::string{});
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
    if (cfg.backend == Backend::Circuit) {
      auto& c = cfg.circuit;
      if (backend.contains("ansatz")) c.kind = parse_circuit_ansatz(backend["ansatz"].get<std::string>());
      c.n_layers = backend.value("n_layers", c.n_layers);
      c.n_single_qubit_params = backend.value("n_single_qubit_params", c.n_single_qubit_params);
      c.qubits_per_n = backend.value("qubits_per_n", c.qubits_per_n);
      c.qubits_per_s = backend.value("qubits_per_s", c.qubits_per_s);
      c.max_qubits = backend.value("max_qubits", c.max_qubits);
      if (c.n_layers < 0 || c.n_single_qubit_params < 0 || c.qubits_per_n < 1 || c.qubits_per_s < 1) {
        throw Error(ErrorKind::ConfigError, "circuit counts must be non-negative and widths >= 1");
      }
    } else {
      auto& t = cfg.tensor;
      if (backend.contains("ansatz")) t.kind = parse_tensor_ansatz(backend["ansatz"].get<std::string>());
      t.d_n = backend.value("d_n", t.d_n);
      t.d_s = backend.value("d_s", t.d_s);
      t.bond_dim = backend.value("bond_dim", t.bond_dim);
      t.max_legs = backend.value("max_legs", t.max_legs);
      if (t.d_n < 2 || t.d_s < 2 || t.bond_dim < 1 || t.max_legs < 1) {
        throw Error(ErrorKind::ConfigError, "tensor dims must be >= 2, bond and max_legs >= 1");
      }
    }
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty()) throw Error(ErrorKind::ConfigError, "seeds must not be empty");
    if (j.contains("dataset")) {
      const auto& d = j["dataset"];
      cfg.dataset.path = d.value("path", std::string{});
      cfg.dataset.seed = d.value("seed", cfg.dataset.seed);
      if (d.contains("sizes")) cfg.dataset.sizes = d["sizes"].get<std::array<std::size_t, 3>>();
    }
    cfg.lexicon = j.value("lexicon", std::string{});
    if (j.contains("train")) {
      const auto seed = cfg.train.seed;
      json t = j["train"];
      if (!t.contains("optimizer")) t["optimizer"] = to_string(cfg.train.optimizer);
      cfg.train = train_config_from_json(t);
      cfg.train.seed = seed;
    }
    if (j.contains("epochs")) cfg.train.epochs = j["epochs"].get<std::size_t>();
    if (cfg.train.epochs < 1) throw Error(ErrorKind::ConfigError, "epochs must be >= 1");
    cfg.budget_seconds = j.value("budget_seconds", 0.0);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  try {
    return experiment_config_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw Error(ErrorKind::ConfigError, e.detail());
    throw;
  }
}

std::string derive_run_id(const ExperimentConfig& cfg) {
  if (!cfg.run_id.empty()) return cfg.run_id;
  std::string id;
  if (cfg.backend == Backend::Circuit) {
    id = std::string(to_string(cfg.circuit.kind)) + "_L" + std::to_string(cfg.circuit.n_layers) +
         "_R" + std::to_string(cfg.circuit.n_single_qubit_params);
  } else {
    id = std::string(to_string(cfg.tensor.kind)) + "_dn" + std::to_string(cfg.tensor.d_n) + "_ds" +
         std::to_string(cfg.tensor.d_s);
  }
  return id + "_" + std::string(to_string(cfg.scheme));
}

Dataset build_dataset(Model& model, const Splits& splits, const Lexicon& lexicon,
                      RewriteScheme scheme) {
  Dataset data;
  auto add = [&](const LabeledSet& set, std::vector<Example>& out) {
    for (const auto& item : set.items) {
      const Diagram parsed = staged("parse", [&] { return parse_sentence(item.words, lexicon); });
      const Diagram rewritten = staged("rewrite", [&] { return rewrite(parsed, scheme); });
      std::size_t idx = 0;
      if (auto* cm = dynamic_cast<CircuitModel*>(&model)) {
        idx = staged("compile", [&] { return cm->add(rewritten); });
      } else if (auto* tm = dynamic_cast<TensorModel*>(&model)) {
        idx = staged("compile", [&] { return tm->add(rewritten); });
      } else {
        throw Error(ErrorKind::ConfigError, "unsupported model type");
      }
      out.push_back({idx, item.label});
    }
  };
  add(splits.train, data.train);
  add(splits.dev, data.dev);
  add(splits.test, data.test);
  return data;
}

fs::path results_root() {
  if (const char* env = std::getenv("QNLP_RESULTS_ROOT"); env && *env) return env;
  return "results";
}

namespace {

void write_run(const fs::path& dir, const ExperimentConfig& cfg, const ExperimentResult& r,
               const Model* model) {
  fs::create_directories(dir);
  write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");

  std::string csv = "run_id,seed,epoch,train_loss,val_loss,train_acc,val_acc\n";
  for (std::size_t s = 0; s < r.histories.size(); ++s) {
    const auto& h = r.histories[s];
    for (std::size_t e = 0; e < h.epochs.size(); ++e) {
      const auto& m = h.epochs[e];
      csv += r.run_id + "," + std::to_string(r.seeds[s]) + "," + std::to_string(e + 1) + "," +
             format_number(m.train_loss) + "," + format_number(m.val_loss) + "," +
             format_number(m.train_acc) + "," + format_number(m.val_acc) + "\n";
    }
  }
  write_text(dir / "metrics.csv", csv);

  json ck{{"config", to_json(cfg)}, {"epoch", cfg.train.epochs}, {"seeds", r.seeds}};
  ck["symbols"] = json::array();
  if (const auto* cm = dynamic_cast<const CircuitModel*>(model)) {
    for (const auto& s : cm->symbols()) ck["symbols"].push_back(to_json(s));
  } else if (const auto* tm = dynamic_cast<const TensorModel*>(model)) {
    ck["shapes"] = json::array();
    for (const auto& s : tm->symbols()) {
      ck["symbols"].push_back(to_json(s));
      ck["shapes"].push_back(tm->store().at(s).shape());
    }
  }
  ck["values"] = json::array();
  for (const auto& h : r.histories) ck["values"].push_back(h.final_params);
  write_text(dir / "checkpoint.json", ck.dump() + "\n");

  json summary{{"run_id", r.run_id},
               {"status", r.zero_parameters ? "nan" : "ok"},
               {"n_params", r.n_params},
               {"seeds", r.seeds},
               {"train_loss", number_json(r.mean.train_loss)},
               {"val_loss", number_json(r.mean.val_loss)},
               {"train_acc", number_json(r.mean.train_acc)},
               {"val_acc", number_json(r.mean.val_acc)},
               {"test_acc", number_json(r.mean_test_acc)}};
  json per_seed = json::array(), crossing = json::array();
  std::size_t degenerate = 0;
  for (const auto& h : r.histories) {
    per_seed.push_back(h.test_acc);
    const auto c = crossing_epoch(h);
    crossing.push_back(c ? json(*c) : json(nullptr));
    degenerate += h.degenerate_count;
  }
  summary["test_acc_per_seed"] = per_seed;
  summary["crossing_epoch_per_seed"] = crossing;
  summary["degenerate_count"] = degenerate;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& root) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.run_id = derive_run_id(cfg);
  r.seeds = cfg.seeds;

  const Lexicon lexicon = staged("data", [&] {
    return cfg.lexicon.empty() ? mc_lexicon() : Lexicon::load(cfg.lexicon);
  });
  const Splits splits = staged("data", [&] {
    return cfg.dataset.path.empty() ? generate_mc(cfg.dataset.seed, cfg.dataset.sizes)
                                    : load_splits(cfg.dataset.path);
  });

  std::unique_ptr<Model> model;
  if (cfg.backend == Backend::Circuit) {
    model = std::make_unique<CircuitModel>(cfg.circuit);
  } else {
    model = std::make_unique<TensorModel>(cfg.tensor);
  }

  try {
    const Dataset data = build_dataset(*model, splits, lexicon, cfg.scheme);
    r.n_params = model->n_params();
    if (r.n_params == 0) throw Error(ErrorKind::ZeroParameterModel, "no trainable parameters");
    for (std::uint64_t seed : cfg.seeds) {
      TrainConfig tc = cfg.train;
      tc.seed = seed;
      if (cfg.budget_seconds > 0) {
        tc.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(cfg.budget_seconds));
      }
      r.histories.push_back(staged("train", [&] { return fit(*model, data, tc); }));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroParameterModel) throw;
    r.zero_parameters = true;
    r.histories.clear();
    r.n_params = 0;
  }

  if (r.zero_parameters) {
    r.mean = {kNaN, kNaN, kNaN, kNaN};
    r.mean_test_acc = kNaN;
  } else {
    const std::size_t last_k = std::min<std::size_t>(10, cfg.train.epochs);
    for (const auto& h : r.histories) {
      const Summary s = summarize(h, last_k);
      r.mean.train_loss += s.train_loss;
      r.mean.val_loss += s.val_loss;
      r.mean.train_acc += s.train_acc;
      r.mean.val_acc += s.val_acc;
      r.mean_test_acc += h.test_acc;
    }
    const double n = static_cast<double>(r.histories.size());
    r.mean = {r.mean.train_loss / n, r.mean.val_loss / n, r.mean.train_acc / n, r.mean.val_acc / n};
    r.mean_test_acc /= n;
  }

  if (!root.empty()) {
    staged("output", [&] {
      write_run(root / "runs" / r.run_id, cfg, r, model.get());
      return 0;
    });
  }
  return r;
}

json to_json(const SweepConfig& cfg) {
  json ansatze = json::array();
  for (auto a : cfg.ansatze) ansatze.push_back(to_string(a));
  return {{"name", cfg.name},
          {"base", to_json(cfg.base)},
          {"ansatze", ansatze},
          {"layers", cfg.layers},
          {"rotations", cfg.rotations},
          {"workers", cfg.workers},
          {"cell_budget_seconds", cfg.cell_budget_seconds}};
}

SweepConfig sweep_config_from_json(const json& j) {
  try {
    SweepConfig cfg;
    cfg.name = j.value("name", cfg.name);
    cfg.base = experiment_config_from_json(j.value("base", json::object()));
    if (cfg.base.backend != Backend::Circuit) {
      throw Error(ErrorKind::ConfigError, "sweeps run over circuit ansatze");
    }
    if (j.contains("ansatze")) {
      cfg.ansatze.clear();
      for (const auto& a : j["ansatze"]) cfg.ansatze.push_back(parse_circuit_ansatz(a.get<std::string>()));
    }
    if (j.contains("layers")) cfg.layers = j["layers"].get<std::vector<int>>();
    if (j.contains("rotations")) cfg.rotations = j["rotations"].get<std::vector<int>>();
    cfg.workers = std::max<std::size_t>(1, j.value("workers", cfg.workers));
    cfg.cell_budget_seconds = j.value("cell_budget_seconds", cfg.cell_budget_seconds);
    for (int v : cfg.layers) {
      if (v < 0) throw Error(ErrorKind::ConfigError, "layer counts must be non-negative");
    }
    for (int v : cfg.rotations) {
      if (v < 0) throw Error(ErrorKind::ConfigError, "rotation counts must be non-negative");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

namespace {

json cell_json(const SweepCell& c) {
  return {{"run_id", c.run_id},
          {"ansatz", to_string(c.ansatz)},
          {"layers", c.layers},
          {"rotations", c.rotations},
          {"status", c.status},
          {"test_acc", number_json(c.test_acc)}};
}

std::map<std::string, SweepCell> read_ledger(const fs::path& path) {
  std::map<std::string, SweepCell> done;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    // A torn final line from an interrupted write is skipped and redone.
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("run_id")) continue;
    SweepCell c;
    c.run_id = j["run_id"].get<std::string>();
    c.ansatz = parse_circuit_ansatz(j.value("ansatz", "iqp"));
    c.layers = j.value("layers", 0);
    c.rotations = j.value("rotations", 0);
    c.status = j.value("status", "");
    c.test_acc = number_from(j.value("test_acc", json(nullptr)));
    done[c.run_id] = c;
  }
  return done;
}

// New records must not be glued onto a torn final line.
void terminate_torn_line(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in || in.tellg() <= 0) return;
  in.seekg(-1, std::ios::end);
  char last = '\n';
  in.get(last);
  in.close();
  if (last != '\n') std::ofstream(path, std::ios::app) << '\n';
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& cfg, const fs::path& root) {
  const fs::path dir = root / "sweeps" / cfg.name;
  fs::create_directories(dir);
  const fs::path ledger_path = dir / "ledger.jsonl";
  write_text(dir / "sweep.json", to_json(cfg).dump(2) + "\n");

  std::vector<SweepCell> grid;
  for (auto a : cfg.ansatze) {
    for (int l : cfg.layers) {
      for (int r : cfg.rotations) {
        SweepCell c;
        c.ansatz = a;
        c.layers = l;
        c.rotations = r;
        c.run_id = cfg.name + "_" + std::string(to_string(a)) + "_L" + std::to_string(l) + "_R" +
                   std::to_string(r);
        grid.push_back(std::move(c));
      }
    }
  }

  auto done = read_ledger(ledger_path);
  terminate_torn_line(ledger_path);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!done.count(grid[i].run_id)) pending.push_back(i);
  }

  std::mutex ledger_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      SweepCell cell = grid[pending[k]];
      ExperimentConfig ec = cfg.base;
      ec.run_id = cell.run_id;
      ec.circuit.kind = cell.ansatz;
      ec.circuit.n_layers = cell.layers;
      ec.circuit.n_single_qubit_params = cell.rotations;
      if (cfg.cell_budget_seconds > 0) ec.budget_seconds = cfg.cell_budget_seconds;
      try {
        const auto r = run_experiment(ec, root);
        cell.status = r.zero_parameters ? "nan" : "ok";
        cell.test_acc = r.mean_test_acc;
      } catch (const Error& e) {
        cell.status = std::string(to_string(e.kind()));
        cell.test_acc = kNaN;
      } catch (const std::exception& e) {
        cell.status = "IoError";
        cell.test_acc = kNaN;
      }
      std::lock_guard lock(ledger_mutex);
      std::ofstream out(ledger_path, std::ios::app);
      out << cell_json(cell).dump() << '\n';
      out.flush();
      done[cell.run_id] = cell;
    }
  };
  const std::size_t n_threads = std::min(cfg.workers, std::max<std::size_t>(pending.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  SweepOutcome out;
  out.executed = pending.size();
  out.results_csv = dir / "results.csv";
  std::string csv = "ansatz,layers,rotations,test_acc,status,run_id\n";
  for (const auto& g : grid) {
    const SweepCell& c = done.at(g.run_id);
    out.cells.push_back(c);
    csv += std::string(to_string(c.ansatz)) + "," + std::to_string(c.layers) + "," +
           std::to_string(c.rotations) + "," + format_number(c.test_acc) + "," + c.status + "," +
           c.run_id + "\n";
  }
  write_text(out.results_csv, csv);
  return out;
}

namespace {

struct RunRecord {
  std::string run_id;
  json config;
  json summary;
  bool has_config = false;
  bool has_summary = false;
  bool has_metrics = false;
  std::vector<std::vector<std::string>> metrics;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::optional<json> try_read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

std::string field(const RunRecord& r, const char* key) {
  if (!r.has_summary || !r.summary.contains(key)) return "";
  const json& v = r.summary[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  return "";
}

std::string backend_field(const RunRecord& r, const char* key) {
  if (!r.has_config) return "";
  const json b = r.config.value("backend", json::object());
  if (!b.contains(key)) return "";
  const json& v = b[key];
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string median_crossing(const RunRecord& r) {
  if (!r.has_summary || !r.summary.contains("crossing_epoch_per_seed")) return "";
  std::vector<double> v;
  for (const auto& c : r.summary["crossing_epoch_per_seed"]) {
    v.push_back(c.is_number() ? c.get<double>() : std::numeric_limits<double>::infinity());
  }
  if (v.empty()) return "";
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double m = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return std::isfinite(m) ? format_number(m) : "";
}

}  // namespace

ReportFiles report(const fs::path& root) {
  const fs::path runs = root / "runs";
  std::vector<RunRecord> records;
  if (fs::is_directory(runs)) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(runs)) {
      if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
      RunRecord r;
      r.run_id = d.filename().string();
      if (auto j = try_read_json(d / "config.json")) {
        r.config = *j;
        r.has_config = true;
      }
      if (auto j = try_read_json(d / "summary.json")) {
        r.summary = *j;
        r.has_summary = true;
      }
      std::ifstream in(d / "metrics.csv");
      if (in) {
        r.has_metrics = true;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
          if (!line.empty()) r.metrics.push_back(split_csv(line));
        }
      }
      records.push_back(std::move(r));
    }
  }
  if (records.empty()) throw Error(ErrorKind::EmptyResults, "no runs under " + runs.string());

  const fs::path out_dir = root / "report";
  fs::create_directories(out_dir);
  ReportFiles files{out_dir / "table1.csv", out_dir / "table2.csv", out_dir / "table3.csv",
                    out_dir / "curves.csv", records.size()};

  auto status = [](const RunRecord& r) -> std::string {
    if (!r.has_config || !r.has_summary || !r.has_metrics) return "missing";
    return r.summary.value("status", "ok");
  };
  auto scheme = [](const RunRecord& r) -> std::string {
    return r.has_config ? r.config.value("scheme", "") : "";
  };

  std::string t1 = "run_id,backend,ansatz,scheme,train_loss,val_loss,train_acc,val_acc,test_acc,status\n";
  std::string t2 = "ansatz,layers,rotations,scheme,test_acc,status,run_id\n";
  std::string t3 =
      "ansatz,scheme,d_n,d_s,train_loss,val_loss,train_acc,val_acc,test_acc,crossing_epoch,status,run_id\n";
  std::string curves = "run_id,seed,epoch,metric,value\n";
  static const char* kMetricNames[] = {"train_loss", "val_loss", "train_acc", "val_acc"};

  for (const auto& r : records) {
    const std::string backend = backend_field(r, "kind");
    t1 += r.run_id + "," + backend + "," + backend_field(r, "ansatz") + "," + scheme(r) + "," +
          field(r, "train_loss") + "," + field(r, "val_loss") + "," + field(r, "train_acc") + "," +
          field(r, "val_acc") + "," + field(r, "test_acc") + "," + status(r) + "\n";
    if (backend == "circuit") {
      t2 += backend_field(r, "ansatz") + "," + backend_field(r, "n_layers") + "," +
            backend_field(r, "n_single_qubit_params") + "," + scheme(r) + "," +
            field(r, "test_acc") + "," + status(r) + "," + r.run_id + "\n";
    } else if (backend == "tensor") {
      t3 += backend_field(r, "ansatz") + "," + scheme(r) + "," + backend_field(r, "d_n") + "," +
            backend_field(r, "d_s") + "," + field(r, "train_loss") + "," + field(r, "val_loss") +
            "," + field(r, "train_acc") + "," + field(r, "val_acc") + "," + field(r, "test_acc") +
            "," + median_crossing(r) + "," + status(r) + "," + r.run_id + "\n";
    }
    for (const auto& row : r.metrics) {
      if (row.size() < 7) continue;
      for (int m = 0; m < 4; ++m) {
        curves += row[0] + "," + row[1] + "," + row[2] + "," + kMetricNames[m] + "," + row[3 + m] + "\n";
      }
    }
  }
  write_text(files.table1, t1);
  write_text(files.table2, t2);
  write_text(files.table3, t3);
  write_text(files.curves, curves);
  return files;
}

}  // namespace qnlp
