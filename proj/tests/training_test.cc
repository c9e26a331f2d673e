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

#include <cmath>
#include <set>
#include <sstream>

#include "gtest/gtest.h"

#include "test_util.hpp"
#include "qnlp/dataset.hpp"
#include "qnlp/models.hpp"
#include "qnlp/parser.hpp"

using namespace qnlp;

namespace {

// p1 = exp(-q(theta)) / 2, so the label-1 loss is ln 2 + q(theta) and never clips.
class QuadraticModel : public Model {
 public:
  QuadraticModel(std::vector<double> target, std::vector<double> weight)
      : target_(std::move(target)), weight_(std::move(weight)), theta_(target_.size()) {}

  std::size_t n_params() const override { return target_.size(); }
  std::size_t n_sentences() const override { return 1; }
  std::vector<double> initial_params(std::mt19937_64&) const override {
    std::vector<double> p(target_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = target_[i] + 1.0;
    return p;
  }
  void set_params(std::span<const double> p) override { theta_.assign(p.begin(), p.end()); }
  Distribution predict(std::size_t) const override {
    const double p1 = std::exp(-q()) / 2;
    return {{1 - p1, p1}, false};
  }
  bool accumulate_gradient(std::size_t, const Probs& up, std::span<double> grad) const override {
    const double p1 = std::exp(-q()) / 2;
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      const double dp1 = -p1 * 2 * weight_[i] * (theta_[i] - target_[i]);
      grad[i] += up[1] * dp1 - up[0] * dp1;
    }
    return true;
  }

 private:
  double q() const {
    double s = 0;
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      s += weight_[i] * (theta_[i] - target_[i]) * (theta_[i] - target_[i]);
    }
    return s;
  }

  std::vector<double> target_, weight_, theta_;
};

class StubModel : public Model {
 public:
  StubModel(std::size_t n, Probs p) : n_(n), p_(p) {}
  std::size_t n_params() const override { return n_; }
  std::size_t n_sentences() const override { return 1; }
  std::vector<double> initial_params(std::mt19937_64&) const override {
    return std::vector<double>(n_, 0.0);
  }
  void set_params(std::span<const double>) override {}
  Distribution predict(std::size_t) const override { return {p_, false}; }
  bool accumulate_gradient(std::size_t, const Probs&, std::span<double>) const override {
    return true;
  }

 private:
  std::size_t n_;
  Probs p_;
};

Dataset single_sentence(int label) {
  Dataset d;
  d.train = {{0, label}};
  d.dev = {{0, label}};
  d.test = {{0, label}};
  return d;
}

CircuitModel rx_toy() {
  Circuit c;
  c.n_qubits = 1;
  c.gates = {{GateKind::RX, {0}, SymbolRef{0}}};
  c.outputs = {0};
  c.symbols = {{"theta", "s", 0}};
  CircuitModel m;
  m.add(c);
  return m;
}

History constant_history(std::size_t n, EpochMetrics m) {
  History h;
  h.epochs.assign(n, m);
  return h;
}

}  // namespace

TEST(training, bce_examples) {
  ASSERT_NEAR(bce_loss({0, 1}, 1), 1e-7, 1e-12);
  ASSERT_NEAR(bce_loss({0.5, 0.5}, 0), std::log(2.0), 1e-15);
  ASSERT_NEAR(bce_loss({0.5, 0.5}, 1), std::log(2.0), 1e-15);
  ASSERT_NEAR(bce_loss({0.9, 0.1}, 1), 2.302585092994046, 1e-12);
  ASSERT_TRUE(std::isfinite(bce_loss({1, 0}, 1)));
}

TEST(training, bce_gradient) {
  const auto g = bce_grad({0.8, 0.2}, 1);
  ASSERT_DOUBLE_EQ(g[0], 0.0);
  ASSERT_DOUBLE_EQ(g[1], -5.0);
  ASSERT_DOUBLE_EQ(bce_grad({0.25, 0.75}, 0)[0], -4.0);
  ASSERT_EQ(bce_grad({0, 1}, 1), (Probs{0, 0}));
}

TEST(training, accuracy_examples) {
  std::vector<Probs> dists(30, Probs{0.2, 0.8});
  std::vector<int> labels(30, 1);
  labels[4] = 0;
  ASSERT_NEAR(accuracy(dists, labels), 0.9667, 5e-5);

  const std::vector<Probs> uniform(5, Probs{0.5, 0.5});
  const std::vector<int> ones(5, 1);
  ASSERT_EQ(accuracy(uniform, ones), 0.0);
  ASSERT_EQ(predict_label({0.5, 0.5}), 0);

  ASSERT_EQ(kind_of([] { accuracy({}, {}); }), ErrorKind::EmptyEvalSet);
}

TEST(training, summarize_examples) {
  const auto h = constant_history(12, {0.3, 0.4, 0.75, 0.5});
  const auto s = summarize(h);
  ASSERT_DOUBLE_EQ(s.train_loss, 0.3);
  ASSERT_DOUBLE_EQ(s.val_acc, 0.5);

  auto g = constant_history(120, {0, 0, 1, 0.2});
  for (std::size_t e = 110; e < 120; ++e) g.epochs[e].val_acc = 1.0;
  g.epochs[115].val_acc = 0.9;
  ASSERT_NEAR(summarize(g).val_acc, 0.99, 1e-15);

  ASSERT_EQ(kind_of([] { summarize(constant_history(9, {})); }), ErrorKind::TooFewEpochs);
}

TEST(training, crossing_epoch_is_one_based) {
  auto h = constant_history(5, {0, 0, 0, 0.5});
  ASSERT_FALSE(crossing_epoch(h));
  h.epochs[3].val_acc = 1.0;
  ASSERT_EQ(crossing_epoch(h), 4u);
}

TEST(training, spsa_decreases_toy_loss) {
  int decreasing = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto model = rx_toy();
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.seed = seed;
    const auto h = fit(model, single_sentence(1), cfg);
    bool strict = true;
    for (std::size_t e = 1; e < h.epochs.size(); ++e) {
      strict = strict && h.epochs[e].train_loss < h.epochs[e - 1].train_loss;
    }
    decreasing += strict;
  }
  ASSERT_GE(decreasing, 4);
}

TEST(training, one_epoch_history) {
  auto model = rx_toy();
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto h = fit(model, single_sentence(0), cfg);
  ASSERT_EQ(h.epochs.size(), 1u);
  ASSERT_EQ(h.final_params.size(), 1u);
}

TEST(training, fit_is_deterministic) {
  for (auto opt : {OptimizerKind::SPSA, OptimizerKind::AdaptiveGD}) {
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.seed = 3;
    cfg.optimizer = opt;
    auto a = rx_toy();
    auto b = rx_toy();
    ASSERT_EQ(fit(a, single_sentence(1), cfg), fit(b, single_sentence(1), cfg));
  }
}

TEST(training, adaptive_gd_solves_convex_quadratic) {
  const std::vector<double> target{0.4, -1.3, 2.0};
  QuadraticModel model(target, {1.0, 0.5, 2.0});
  TrainConfig cfg;
  cfg.epochs = 500;
  cfg.optimizer = OptimizerKind::AdaptiveGD;
  const auto h = fit(model, single_sentence(1), cfg);
  for (std::size_t i = 0; i < target.size(); ++i) {
    ASSERT_NEAR(h.final_params[i], target[i], 1e-4);
  }
}

TEST(training, fit_errors) {
  StubModel empty(0, {0.5, 0.5});
  ASSERT_EQ(kind_of([&] { fit(empty, single_sentence(1), {}); }), ErrorKind::ZeroParameterModel);

  StubModel nan(1, {std::nan(""), std::nan("")});
  ASSERT_EQ(kind_of([&] { fit(nan, single_sentence(1), {}); }), ErrorKind::NonFiniteLoss);

  auto model = rx_toy();
  TrainConfig late;
  late.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  ASSERT_EQ(kind_of([&] { fit(model, single_sentence(1), late); }), ErrorKind::BudgetExceeded);

  Dataset no_dev = single_sentence(1);
  no_dev.dev.clear();
  ASSERT_EQ(kind_of([&] { fit(model, no_dev, {}); }), ErrorKind::EmptyEvalSet);
}

TEST(training, config_json_round_trip) {
  TrainConfig cfg;
  cfg.epochs = 33;
  cfg.seed = 9;
  cfg.optimizer = OptimizerKind::AdaptiveGD;
  cfg.spsa.a = 1.5;
  cfg.adam.lr = 0.01;
  const auto back = train_config_from_json(to_json(cfg));
  ASSERT_EQ(back.epochs, 33u);
  ASSERT_EQ(back.seed, 9u);
  ASSERT_EQ(back.optimizer, OptimizerKind::AdaptiveGD);
  ASSERT_EQ(back.spsa.a, 1.5);
  ASSERT_EQ(back.adam.lr, 0.01);
  ASSERT_EQ(kind_of([] { parse_optimizer("sgd"); }), ErrorKind::ConfigError);
}

TEST(dataset, tsv_line) {
  std::istringstream in("1\tman prepares tasty sauce\n0\tperson runs program\n");
  const auto set = parse_tsv(in, "train");
  ASSERT_EQ(set.size(), 2u);
  ASSERT_EQ(set.items[0].label, 1);
  ASSERT_EQ(set.items[0].words, (std::vector<std::string>{"man", "prepares", "tasty", "sauce"}));

  std::ostringstream out;
  write_tsv(out, set);
  std::istringstream again(out.str());
  ASSERT_EQ(parse_tsv(again, "train"), set);
}

TEST(dataset, tsv_errors) {
  for (const char* bad : {"2\tman cooks meal\n", "man cooks meal\n", "1\t\n", "x\tman\n"}) {
    std::istringstream in(bad);
    ASSERT_EQ(kind_of([&] { parse_tsv(in, "dev"); }), ErrorKind::MalformedLine) << bad;
  }
  ASSERT_EQ(kind_of([] { load_tsv("/nonexistent/train.tsv", "train"); }), ErrorKind::IoError);
}

TEST(dataset, generator_is_deterministic) {
  ASSERT_EQ(generate_mc(7), generate_mc(7));
  ASSERT_NE(generate_mc(7), generate_mc(8));
}

TEST(dataset, generator_splits_are_balanced_closed_and_distinct) {
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    const auto s = generate_mc(seed);
    std::set<std::vector<std::string>> seen;
    std::set<std::string> vocab;
    for (const auto& it : s.train.items) vocab.insert(it.words.begin(), it.words.end());
    const std::pair<const LabeledSet*, std::size_t> parts[] = {
        {&s.train, 70}, {&s.dev, 30}, {&s.test, 30}};
    for (const auto& [set, n] : parts) {
      ASSERT_EQ(set->size(), n);
      std::size_t ones = 0;
      for (const auto& it : set->items) {
        ones += it.label;
        ASSERT_TRUE(seen.insert(it.words).second);
        for (const auto& w : it.words) ASSERT_TRUE(vocab.count(w)) << w;
      }
      ASSERT_EQ(ones, n / 2);
    }
  }
}

TEST(dataset, generated_sentences_parse_to_s) {
  const auto lex = mc_lexicon();
  for (const auto& item : mc_corpus()) {
    ASSERT_NO_THROW(parse_sentence(item.words, lex));
  }
  ASSERT_EQ(kind_of([] { generate_mc(1, {100, 50, 50}); }), ErrorKind::ConfigError);
}
