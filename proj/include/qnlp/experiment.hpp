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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnlp/circuit.hpp"
#include "qnlp/dataset.hpp"
#include "qnlp/rewrite.hpp"
#include "qnlp/tensornet.hpp"
#include "qnlp/training.hpp"

namespace qnlp {

enum class Backend { Circuit, Tensor };

struct DatasetSpec {
  /// Directory holding train.tsv/dev.tsv/test.tsv; empty selects the generator.
  std::string path;
  std::uint64_t seed = 7;
  std::array<std::size_t, 3> sizes{70, 30, 30};
};

struct ExperimentConfig {
  std::string run_id;
  RewriteScheme scheme = RewriteScheme::ReNormCurNorm;
  Backend backend = Backend::Circuit;
  CircuitAnsatzConfig circuit;
  TensorAnsatzConfig tensor;
  std::vector<std::uint64_t> seeds{0};
  DatasetSpec dataset;
  /// Lexicon file; empty selects the bundled food/IT lexicon.
  std::string lexicon;
  TrainConfig train;
  /// Wall-clock limit for the whole run; 0 disables it.
  double budget_seconds = 0.0;
};

/// Optimizer defaults to SPSA for circuits and adaptive GD for tensors.
ExperimentConfig default_config(Backend backend);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on unknown names or fields of the wrong type.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

/// Stable identifier derived from the configuration when run_id is empty.
std::string derive_run_id(const ExperimentConfig& cfg);

/// Parses, rewrites and registers every sentence of the splits.
Dataset build_dataset(Model& model, const Splits& splits, const Lexicon& lexicon,
                      RewriteScheme scheme);

struct ExperimentResult {
  std::string run_id;
  std::vector<std::uint64_t> seeds;
  std::vector<History> histories;
  /// Set when the model has no trainable parameters.
  bool zero_parameters = false;
  std::size_t n_params = 0;
  /// Means over seeds of the last-ten-epoch summaries and test accuracy;
  /// NaN when zero_parameters.
  Summary mean;
  double mean_test_acc = 0.0;
};

/// Root for run and sweep outputs: $QNLP_RESULTS_ROOT, else ./results.
std::filesystem::path results_root();

/// End-to-end run over all seeds. Writes config.json, metrics.csv,
/// checkpoint.json and summary.json under <root>/runs/<run_id>/ when root is
/// non-empty. Errors carry the failing stage in their message.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& root = {});

struct SweepConfig {
  std::string name = "sweep";
  ExperimentConfig base;
  std::vector<CircuitAnsatz> ansatze{CircuitAnsatz::IQP, CircuitAnsatz::StronglyEntangling,
                                     CircuitAnsatz::Sim14, CircuitAnsatz::Sim15};
  std::vector<int> layers{0, 1, 2, 3, 4};
  std::vector<int> rotations{0, 1, 2, 3, 4};
  std::size_t workers = 1;
  /// Per-cell wall-clock limit; 0 disables it.
  double cell_budget_seconds = 0.0;
};

nlohmann::json to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct SweepCell {
  CircuitAnsatz ansatz = CircuitAnsatz::IQP;
  int layers = 0;
  int rotations = 0;
  std::string run_id;
  /// ok, nan (no parameters), or an error kind name.
  std::string status;
  double test_acc = 0.0;
};

struct SweepOutcome {
  std::vector<SweepCell> cells;
  std::size_t executed = 0;
  std::filesystem::path results_csv;
};

/// Runs every grid cell not yet in <root>/sweeps/<name>/ledger.jsonl and
/// rewrites results.csv with one row per cell in grid order.
SweepOutcome run_sweep(const SweepConfig& cfg, const std::filesystem::path& root);

struct ReportFiles {
  std::filesystem::path table1, table2, table3, curves;
  std::size_t n_runs = 0;
};

/// Reads <root>/runs/* and writes tables and long-format curves under
/// <root>/report/. Throws EmptyResults when no run directory exists.
ReportFiles report(const std::filesystem::path& root);

/// Formats a metric for CSV/JSON text output; NaN prints as "NaN".
std::string format_number(double v);

}  // namespace qnlp
