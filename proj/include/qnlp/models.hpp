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

#include <map>
#include <vector>

#include "qnlp/circuit.hpp"
#include "qnlp/tensornet.hpp"
#include "qnlp/training.hpp"

namespace qnlp {

/// Circuit ensemble with one parameter per distinct symbol across sentences.
class CircuitModel : public Model {
 public:
  explicit CircuitModel(CircuitAnsatzConfig cfg = {}) : cfg_(cfg) {}

  /// Compiles and registers a sentence; returns its index.
  std::size_t add(const Diagram& d);
  /// Registers a ready-made circuit; its symbols join the shared table.
  std::size_t add(Circuit c);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Circuit& circuit(std::size_t i) const { return entries_.at(i).circuit; }
  /// Parameters of sentence i in its own symbol order.
  std::vector<double> local_params(std::size_t i) const;

  std::size_t n_params() const override { return symbols_.size(); }
  std::size_t n_sentences() const override { return entries_.size(); }
  std::vector<double> initial_params(std::mt19937_64& rng) const override;
  void set_params(std::span<const double> params) override;
  Distribution predict(std::size_t sentence) const override;
  bool accumulate_gradient(std::size_t sentence, const Probs& upstream,
                           std::span<double> grad) const override;

 private:
  struct Entry {
    Circuit circuit;
    std::vector<std::size_t> global;
  };

  CircuitAnsatzConfig cfg_;
  std::map<Symbol, std::size_t> index_;
  std::vector<Symbol> symbols_;
  std::vector<Entry> entries_;
  std::vector<double> params_;
};

/// Softmax of a two-entry tensor output.
Probs softmax2(const Tensor& out);

/// Tensor-network ensemble; parameters are the flattened tensors of every
/// distinct symbol in first-seen order.
class TensorModel : public Model {
 public:
  explicit TensorModel(TensorAnsatzConfig cfg = {}) : cfg_(cfg) {}

  /// Throws WrongOutputArity unless the network yields two values.
  std::size_t add(const Diagram& d);

  const Network& network(std::size_t i) const { return nets_.at(i); }
  const TensorParamStore& store() const { return store_; }
  const std::vector<Symbol>& symbols() const { return order_; }

  std::size_t n_params() const override { return total_; }
  std::size_t n_sentences() const override { return nets_.size(); }
  std::vector<double> initial_params(std::mt19937_64& rng) const override;
  void set_params(std::span<const double> params) override;
  Distribution predict(std::size_t sentence) const override;
  bool accumulate_gradient(std::size_t sentence, const Probs& upstream,
                           std::span<double> grad) const override;

 private:
  struct Slot {
    std::size_t offset = 0;
    std::vector<std::size_t> shape;
  };

  TensorAnsatzConfig cfg_;
  std::map<Symbol, Slot> slots_;
  std::vector<Symbol> order_;
  std::size_t total_ = 0;
  std::vector<Network> nets_;
  TensorParamStore store_;
};

}  // namespace qnlp
