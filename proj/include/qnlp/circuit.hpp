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

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qnlp/diagram.hpp"

namespace qnlp {

enum class GateKind { H, RX, RY, RZ, CNOT, CRZ, CRX };

std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
bool is_rotation(GateKind kind);
bool is_controlled(GateKind kind);

/// Index into a circuit's symbol table.
struct SymbolRef {
  std::size_t index = 0;
  friend bool operator==(const SymbolRef&, const SymbolRef&) = default;
};

/// Gate angle: none, a fixed value in radians, or a trainable symbol.
using GateParam = std::variant<std::monostate, double, SymbolRef>;

/// Controlled gates list the control first. Rotations are exp(-i theta P / 2).
struct Gate {
  GateKind kind = GateKind::H;
  std::vector<std::size_t> qubits;
  GateParam param;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Trainable parameter identity; equal symbols are shared corpus-wide.
struct Symbol {
  std::string word;
  std::string type_fingerprint;
  std::size_t index = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

std::string to_string(const Symbol& s);

struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;
  /// Qubits projected onto |0> at the end.
  std::vector<std::size_t> postselect;
  std::vector<std::size_t> outputs;
  std::vector<Symbol> symbols;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

enum class CircuitAnsatz { IQP, StronglyEntangling, Sim14, Sim15 };

std::string_view to_string(CircuitAnsatz kind);
CircuitAnsatz parse_circuit_ansatz(std::string_view name);

struct CircuitAnsatzConfig {
  CircuitAnsatz kind = CircuitAnsatz::IQP;
  int n_layers = 1;
  int n_single_qubit_params = 3;
  int qubits_per_n = 1;
  int qubits_per_s = 1;
  std::size_t max_qubits = 20;
};

/// Word/box label and type string shared by all symbols of one block.
struct SymbolPrefix {
  std::string word;
  std::string type_fingerprint;
};

/// Gates for one box acting on local qubits 0..k-1; new symbols are appended
/// to `symbols` and referenced by index.
std::vector<Gate> word_block(const SymbolPrefix& prefix, std::size_t k,
                             const CircuitAnsatzConfig& cfg, std::vector<Symbol>& symbols);

/// Trainable parameters used by word_block for a k-qubit box.
std::size_t block_param_count(std::size_t k, const CircuitAnsatzConfig& cfg);

/// CNOT(q1 -> q2), H(q1); both qubits are then postselected on 0.
std::vector<Gate> cup_block(std::size_t q1, std::size_t q2);

/// Throws ZeroParameterModel when no box carries a parameter and
/// WidthOverflow past cfg.max_qubits.
Circuit compile_circuit(const Diagram& d, const CircuitAnsatzConfig& cfg);

/// Size of compile_circuit's symbol table, without building gates.
std::size_t param_count(const Diagram& d, const CircuitAnsatzConfig& cfg);

/// Fingerprint used for a box's symbols: `cod` for words, `dom->cod` otherwise.
std::string box_fingerprint(const Box& box);

nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace qnlp
