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

#include "qnlp/training.hpp"

#include <algorithm>
#include <cmath>

#include "qnlp/error.hpp"

namespace qnlp {

double bce_loss(const Probs& probs, int label) {
  const double p = std::clamp(label == 1 ? probs[1] : probs[0], kProbClip, 1.0 - kProbClip);
  return -std::log(p);
}

Probs bce_grad(const Probs& probs, int label) {
  const std::size_t k = label == 1 ? 1 : 0;
  Probs g{0.0, 0.0};
  if (probs[k] > kProbClip && probs[k] < 1.0 - kProbClip) g[k] = -1.0 / probs[k];
  return g;
}

int predict_label(const Probs& probs) { return probs[1] > probs[0] ? 1 : 0; }

double accuracy(std::span<const Probs> dists, std::span<const int> labels) {
  if (dists.empty()) throw Error(ErrorKind::EmptyEvalSet, "accuracy of an empty set");
  if (dists.size() != labels.size()) {
    throw Error(ErrorKind::ShapeMismatch, "predictions and labels differ in length");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dists.size(); ++i) correct += predict_label(dists[i]) == labels[i];
  return static_cast<double>(correct) / static_cast<double>(dists.size());
}

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::SPSA ? "spsa" : "adam";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "spsa") return OptimizerKind::SPSA;
  if (name == "adam") return OptimizerKind::AdaptiveGD;
  throw Error(ErrorKind::ConfigError, "unknown optimizer '" + std::string(name) + "'");
}

namespace {

struct Evaluation {
  double loss = 0.0;
  double acc = 0.0;
  std::size_t degenerate = 0;
};

Evaluation evaluate(const Model& model, std::span<const Example> set) {
  if (set.empty()) throw Error(ErrorKind::EmptyEvalSet, "evaluation set is empty");
  Evaluation e;
  std::vector<Probs> dists;
  std::vector<int> labels;
  for (const auto& ex : set) {
    const auto d = model.predict(ex.sentence);
    e.degenerate += d.degenerate;
    e.loss += bce_loss(d.p, ex.label);
    dists.push_back(d.p);
    labels.push_back(ex.label);
  }
  e.loss /= static_cast<double>(set.size());
  e.acc = accuracy(dists, labels);
  if (!std::isfinite(e.loss)) throw Error(ErrorKind::NonFiniteLoss, "loss is not finite");
  return e;
}

void check_deadline(const TrainConfig& cfg, std::size_t epoch) {
  if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline) {
    throw Error(ErrorKind::BudgetExceeded, "time budget exhausted at epoch " + std::to_string(epoch));
  }
}

}  // namespace

History fit(Model& model, const Dataset& data, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw Error(ErrorKind::ConfigError, "epochs must be >= 1");
  if (model.n_params() == 0) {
    throw Error(ErrorKind::ZeroParameterModel, "model has no trainable parameters");
  }
  if (data.train.empty() || data.dev.empty() || data.test.empty()) {
    throw Error(ErrorKind::EmptyEvalSet, "every split needs at least one sentence");
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> theta = model.initial_params(rng);
  const std::size_t np = theta.size();

  History h;
  std::vector<double> m(np, 0.0), v(np, 0.0), grad(np, 0.0), probe(np, 0.0), delta(np, 0.0);
  const double spsa_A = cfg.spsa.A < 0 ? 0.01 * static_cast<double>(cfg.epochs) : cfg.spsa.A;
  std::bernoulli_distribution coin(0.5);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    check_deadline(cfg, epoch);
    model.set_params(theta);
    const Evaluation train = evaluate(model, data.train);
    h.degenerate_count += train.degenerate;

    if (cfg.optimizer == OptimizerKind::SPSA) {
      const double k = static_cast<double>(epoch + 1);
      const double ak = cfg.spsa.a / std::pow(k + spsa_A, cfg.spsa.alpha);
      const double ck = cfg.spsa.c / std::pow(k, cfg.spsa.gamma);
      for (std::size_t i = 0; i < np; ++i) delta[i] = coin(rng) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < np; ++i) probe[i] = theta[i] + ck * delta[i];
      model.set_params(probe);
      const Evaluation plus = evaluate(model, data.train);
      for (std::size_t i = 0; i < np; ++i) probe[i] = theta[i] - ck * delta[i];
      model.set_params(probe);
      const Evaluation minus = evaluate(model, data.train);
      h.degenerate_count += plus.degenerate + minus.degenerate;
      const double slope = (plus.loss - minus.loss) / (2.0 * ck);
      for (std::size_t i = 0; i < np; ++i) theta[i] -= ak * slope * delta[i];
    } else {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (const auto& ex : data.train) {
        const auto d = model.predict(ex.sentence);
        model.accumulate_gradient(ex.sentence, bce_grad(d.p, ex.label), grad);
      }
      const double n = static_cast<double>(data.train.size());
      const double t = static_cast<double>(epoch + 1);
      const auto& a = cfg.adam;
      for (std::size_t i = 0; i < np; ++i) {
        const double g = grad[i] / n;
        m[i] = a.beta1 * m[i] + (1 - a.beta1) * g;
        v[i] = a.beta2 * v[i] + (1 - a.beta2) * g * g;
        const double mh = m[i] / (1 - std::pow(a.beta1, t));
        const double vh = v[i] / (1 - std::pow(a.beta2, t));
        theta[i] -= a.lr * mh / (std::sqrt(vh) + a.eps);
      }
    }

    model.set_params(theta);
    const Evaluation dev = evaluate(model, data.dev);
    h.degenerate_count += dev.degenerate;
    h.epochs.push_back({train.loss, dev.loss, train.acc, dev.acc});
  }
  const Evaluation test = evaluate(model, data.test);
  h.degenerate_count += test.degenerate;
  h.test_acc = test.acc;
  h.final_params = std::move(theta);
  return h;
}

Summary summarize(const History& h, std::size_t last_k) {
  if (last_k == 0 || h.epochs.size() < last_k) {
    throw Error(ErrorKind::TooFewEpochs, std::to_string(h.epochs.size()) + " epochs, need " +
                                             std::to_string(last_k));
  }
  Summary s;
  for (std::size_t i = h.epochs.size() - last_k; i < h.epochs.size(); ++i) {
    s.train_loss += h.epochs[i].train_loss;
    s.val_loss += h.epochs[i].val_loss;
    s.train_acc += h.epochs[i].train_acc;
    s.val_acc += h.epochs[i].val_acc;
  }
  const double k = static_cast<double>(last_k);
  return {s.train_loss / k, s.val_loss / k, s.train_acc / k, s.val_acc / k};
}

std::optional<std::size_t> crossing_epoch(const History& h) {
  for (std::size_t i = 0; i < h.epochs.size(); ++i) {
    if (h.epochs[i].val_acc == 1.0) return i + 1;
  }
  return std::nullopt;
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"epochs", cfg.epochs},
          {"seed", cfg.seed},
          {"optimizer", to_string(cfg.optimizer)},
          {"spsa", {{"a", cfg.spsa.a}, {"c", cfg.spsa.c}, {"A", cfg.spsa.A},
                    {"alpha", cfg.spsa.alpha}, {"gamma", cfg.spsa.gamma}}},
          {"adam", {{"lr", cfg.adam.lr}, {"beta1", cfg.adam.beta1}, {"beta2", cfg.adam.beta2},
                    {"eps", cfg.adam.eps}}}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j["optimizer"].get<std::string>());
  if (j.contains("spsa")) {
    const auto& s = j["spsa"];
    cfg.spsa.a = s.value("a", cfg.spsa.a);
    cfg.spsa.c = s.value("c", cfg.spsa.c);
    cfg.spsa.A = s.value("A", cfg.spsa.A);
    cfg.spsa.alpha = s.value("alpha", cfg.spsa.alpha);
    cfg.spsa.gamma = s.value("gamma", cfg.spsa.gamma);
  }
  if (j.contains("adam")) {
    const auto& a = j["adam"];
    cfg.adam.lr = a.value("lr", cfg.adam.lr);
    cfg.adam.beta1 = a.value("beta1", cfg.adam.beta1);
    cfg.adam.beta2 = a.value("beta2", cfg.adam.beta2);
    cfg.adam.eps = a.value("eps", cfg.adam.eps);
  }
  if (cfg.epochs < 1) throw Error(ErrorKind::ConfigError, "epochs must be >= 1");
  return cfg;
}

}  // namespace qnlp
