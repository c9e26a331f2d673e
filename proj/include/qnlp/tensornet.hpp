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

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qnlp/circuit.hpp"
#include "qnlp/diagram.hpp"
#include "qnlp/tensor.hpp"

namespace qnlp {

enum class TensorAnsatz { Tensor, Spider, MPS };

std::string_view to_string(TensorAnsatz kind);
/// Accepts tensor, spider, mps. Throws ConfigError.
TensorAnsatz parse_tensor_ansatz(std::string_view name);

struct TensorAnsatzConfig {
  TensorAnsatz kind = TensorAnsatz::Tensor;
  std::size_t d_n = 2;
  std::size_t d_s = 2;
  std::size_t bond_dim = 2;
  std::size_t max_legs = 2;

  WireDims dims() const { return {d_n, d_s}; }
};

enum class NodeKind { Param, CupDelta, SpiderCopy };

std::string_view to_string(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::Param;
  /// Meaningful for Param nodes only.
  Symbol symbol;
  /// legs[i] is the edge bound to axis i.
  std::vector<std::size_t> legs;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Every edge joins exactly two node legs, or one node leg and an output.
struct Network {
  std::vector<Node> nodes;
  std::vector<std::size_t> edge_dims;
  std::vector<std::size_t> outputs;

  std::vector<std::size_t> shape_of(const Node& node) const;
  std::size_t add_edge(std::size_t dim);

  friend bool operator==(const Network&, const Network&) = default;
};

struct TensorParamStore {
  std::map<Symbol, Tensor> tensors;

  const Tensor& at(const Symbol& s) const;
};

Network compile_network(const Diagram& d, const TensorAnsatzConfig& cfg);

/// Shapes of the chain replacing a tensor of the given leg dims.
std::vector<std::vector<std::size_t>> mps_split(std::span<const std::size_t> shape,
                                                std::size_t bond);

struct SpiderSplit {
  /// Consecutive groups of original legs; neighbouring groups overlap in one leg.
  std::vector<std::vector<std::size_t>> group_shapes;
  std::vector<std::vector<std::size_t>> group_legs;
  /// Overlap legs, each merged by a 3-ary copy spider that also carries the
  /// original wire.
  std::vector<std::size_t> shared;
};

/// Groups of at most max_legs legs. Shapes with <= max_legs legs stay as one
/// group. Throws ConfigError when max_legs < 2.
SpiderSplit spider_split(std::span<const std::size_t> shape, std::size_t max_legs);

/// Parameter shapes needed by the network, keyed by symbol.
std::map<Symbol, std::vector<std::size_t>> param_shapes(const Network& net);

/// Full contraction, indexed by net.outputs. Throws ShapeMismatch when a
/// Param is missing from the store or has the wrong shape.
Tensor contract(const Network& net, const TensorParamStore& store);

/// d(upstream . output)/d(param) for every symbol in the network.
std::map<Symbol, Tensor> gradient_hole(const Network& net, const TensorParamStore& store,
                                       const Tensor& upstream);

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TensorParamStore& store);
TensorParamStore param_store_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Symbol& s);
Symbol symbol_from_json(const nlohmann::json& j);

}  // namespace qnlp
