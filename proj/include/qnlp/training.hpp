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
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qnlp/simulator.hpp"

namespace qnlp {

using Probs = std::array<double, 2>;

inline constexpr double kProbClip = 1e-7;

/// Binary cross-entropy with probabilities clipped to [1e-7, 1 - 1e-7].
double bce_loss(const Probs& probs, int label);
/// d bce_loss / d (p0, p1); zero where clipping is active.
Probs bce_grad(const Probs& probs, int label);

/// argmax with ties predicting 0.
int predict_label(const Probs& probs);
/// Throws EmptyEvalSet.
double accuracy(std::span<const Probs> dists, std::span<const int> labels);

/// A trainable ensemble of sentence models sharing one flat parameter vector.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t n_params() const = 0;
  virtual std::size_t n_sentences() const = 0;
  virtual std::vector<double> initial_params(std::mt19937_64& rng) const = 0;
  virtual void set_params(std::span<const double> params) = 0;
  virtual Distribution predict(std::size_t sentence) const = 0;
  /// Adds d loss / d params for one sentence into `grad`; returns false on a
  /// degenerate evaluation.
  virtual bool accumulate_gradient(std::size_t sentence, const Probs& upstream,
                                   std::span<double> grad) const = 0;
};

struct Example {
  std::size_t sentence = 0;
  int label = 0;
};

struct Dataset {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;
};

enum class OptimizerKind { SPSA, AdaptiveGD };

std::string_view to_string(OptimizerKind kind);
/// Accepts spsa, adam. Throws ConfigError.
OptimizerKind parse_optimizer(std::string_view name);

struct SpsaConfig {
  double a = 0.1;
  double c = 0.1;
  /// Negative selects 0.01 * epochs.
  double A = -1.0;
  double alpha = 0.602;
  double gamma = 0.101;
};

struct AdaptiveGDConfig {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  std::size_t epochs = 120;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::SPSA;
  SpsaConfig spsa;
  AdaptiveGDConfig adam;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EpochMetrics {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;

  friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

struct History {
  std::vector<EpochMetrics> epochs;
  double test_acc = 0.0;
  std::size_t degenerate_count = 0;
  std::vector<double> final_params;

  friend bool operator==(const History&, const History&) = default;
};

/// Initializes from cfg.seed, then per epoch: train loss at the current
/// parameters, one optimizer step, dev evaluation. Test accuracy is taken
/// after the last epoch. Throws ZeroParameterModel, NonFiniteLoss,
/// BudgetExceeded, EmptyEvalSet.
History fit(Model& model, const Dataset& data, const TrainConfig& cfg);

struct Summary {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
};

/// Means over the final last_k epochs. Throws TooFewEpochs.
Summary summarize(const History& h, std::size_t last_k = 10);

/// First epoch (1-based) with val_acc == 1, if any.
std::optional<std::size_t> crossing_epoch(const History& h);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace qnlp
