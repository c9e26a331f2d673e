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

#include "qnlp/models.hpp"

#include <cmath>
#include <numbers>

#include "qnlp/error.hpp"

namespace qnlp {

std::size_t CircuitModel::add(const Diagram& d) { return add(compile_circuit(d, cfg_)); }

std::size_t CircuitModel::add(Circuit c) {
  Entry e;
  for (const auto& s : c.symbols) {
    auto [it, inserted] = index_.emplace(s, symbols_.size());
    if (inserted) symbols_.push_back(s);
    e.global.push_back(it->second);
  }
  e.circuit = std::move(c);
  entries_.push_back(std::move(e));
  params_.resize(symbols_.size(), 0.0);
  return entries_.size() - 1;
}

std::vector<double> CircuitModel::local_params(std::size_t i) const {
  const auto& e = entries_.at(i);
  std::vector<double> local(e.global.size());
  for (std::size_t k = 0; k < local.size(); ++k) local[k] = params_[e.global[k]];
  return local;
}

std::vector<double> CircuitModel::initial_params(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::vector<double> p(symbols_.size());
  for (auto& x : p) x = angle(rng);
  return p;
}

void CircuitModel::set_params(std::span<const double> params) {
  if (params.size() != symbols_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "parameter vector length differs from symbol count");
  }
  params_.assign(params.begin(), params.end());
}

Distribution CircuitModel::predict(std::size_t sentence) const {
  return sentence_distribution(entries_.at(sentence).circuit, local_params(sentence));
}

bool CircuitModel::accumulate_gradient(std::size_t sentence, const Probs& upstream,
                                       std::span<double> grad) const {
  const auto& e = entries_.at(sentence);
  const auto g = gradient(e.circuit, local_params(sentence), upstream);
  for (std::size_t k = 0; k < g.grad.size(); ++k) grad[e.global[k]] += g.grad[k];
  return !g.degenerate;
}

Probs softmax2(const Tensor& out) {
  if (out.size() != 2) {
    throw Error(ErrorKind::WrongOutputArity,
                "expected a two-valued output, got " + std::to_string(out.size()));
  }
  const double m = std::max(out[0], out[1]);
  const double e0 = std::exp(out[0] - m);
  const double e1 = std::exp(out[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

std::size_t TensorModel::add(const Diagram& d) {
  Network net = compile_network(d, cfg_);
  std::size_t out = 1;
  for (std::size_t e : net.outputs) out *= net.edge_dims[e];
  if (out != 2) {
    throw Error(ErrorKind::WrongOutputArity,
                "sentence network yields " + std::to_string(out) + " values, expected 2");
  }
  for (const auto& [sym, shape] : param_shapes(net)) {
    auto it = slots_.find(sym);
    if (it != slots_.end()) {
      if (it->second.shape != shape) {
        throw Error(ErrorKind::ShapeMismatch, "symbol " + to_string(sym) + " reused with a new shape");
      }
      continue;
    }
    slots_.emplace(sym, Slot{total_, shape});
    order_.push_back(sym);
    total_ += shape_size(shape);
    store_.tensors.emplace(sym, Tensor(shape));
  }
  nets_.push_back(std::move(net));
  return nets_.size() - 1;
}

std::vector<double> TensorModel::initial_params(std::mt19937_64& rng) const {
  std::vector<double> p(total_);
  for (const auto& sym : order_) {
    const Slot& slot = slots_.at(sym);
    std::size_t fan_in = 1;
    for (std::size_t i = 0; i + 1 < slot.shape.size(); ++i) fan_in *= slot.shape[i];
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(fan_in)));
    const std::size_t n = shape_size(slot.shape);
    for (std::size_t k = 0; k < n; ++k) p[slot.offset + k] = normal(rng);
  }
  return p;
}

void TensorModel::set_params(std::span<const double> params) {
  if (params.size() != total_) {
    throw Error(ErrorKind::ShapeMismatch, "parameter vector length differs from model size");
  }
  for (auto& [sym, t] : store_.tensors) {
    const std::size_t off = slots_.at(sym).offset;
    auto data = t.data();
    for (std::size_t k = 0; k < data.size(); ++k) data[k] = params[off + k];
  }
}

Distribution TensorModel::predict(std::size_t sentence) const {
  return {softmax2(contract(nets_.at(sentence), store_)), false};
}

bool TensorModel::accumulate_gradient(std::size_t sentence, const Probs& upstream,
                                      std::span<double> grad) const {
  const Network& net = nets_.at(sentence);
  const Tensor out = contract(net, store_);
  const Probs p = softmax2(out);
  const double mean = upstream[0] * p[0] + upstream[1] * p[1];
  Tensor up(out.shape());
  up[0] = p[0] * (upstream[0] - mean);
  up[1] = p[1] * (upstream[1] - mean);
  for (const auto& [sym, g] : gradient_hole(net, store_, up)) {
    const std::size_t off = slots_.at(sym).offset;
    const auto data = g.data();
    for (std::size_t k = 0; k < data.size(); ++k) grad[off + k] += data[k];
  }
  return true;
}

}  // namespace qnlp
