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
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnlp/pregroup.hpp"
#include "qnlp/tensor.hpp"

namespace qnlp {

inline constexpr std::size_t kUnbound = std::numeric_limits<std::size_t>::max();

// Caps only appear transiently inside the currying pass (and in hand-built
// snake diagrams); parsed sentences contain Word boxes only.
enum class BoxTag { Word, Curried, Cap };

struct Box {
  std::string name;
  PregroupType dom;
  PregroupType cod;
  BoxTag tag = BoxTag::Word;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Output port `port` of box `box`.
struct Producer {
  std::size_t box = kUnbound;
  std::size_t port = 0;

  friend bool operator==(const Producer&, const Producer&) = default;
};

enum class ConsumerKind { Unbound, BoxInput, Cup, Open };

/// BoxInput: (box, input port). Cup: (cup index, 0 = left / 1 = right).
/// Open: (position in open_wires, 0).
struct Consumer {
  ConsumerKind kind = ConsumerKind::Unbound;
  std::size_t id = kUnbound;
  std::size_t port = 0;

  friend bool operator==(const Consumer&, const Consumer&) = default;
};

struct Wire {
  SimpleType type;
  Producer src;
  Consumer dst;

  friend bool operator==(const Wire&, const Wire&) = default;
};

struct Cup {
  std::size_t left = kUnbound;
  std::size_t right = kUnbound;

  friend bool operator==(const Cup&, const Cup&) = default;
};

/// String diagram in graph form. Box order is a drawing order: every box
/// appears after the producers of its inputs, and boxes without inputs are
/// placed to the right of everything drawn so far.
struct Diagram {
  std::vector<Box> boxes;
  std::vector<Wire> wires;
  std::vector<Cup> cups;
  std::vector<std::size_t> open_wires;

  std::size_t add_box(Box box);
  /// New wire leaving output `port` of `box`, with no consumer yet.
  std::size_t add_wire(std::size_t box, std::size_t port);
  std::size_t add_cup(std::size_t left_wire, std::size_t right_wire);
  void connect_input(std::size_t wire, std::size_t box, std::size_t port);
  void add_open(std::size_t wire);
  /// Convenience: word box 1 -> cod with one fresh wire per output.
  std::vector<std::size_t> add_word(std::string name, PregroupType cod);

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

enum class ViolationKind {
  BadReference,
  DanglingPort,
  TypeMismatch,
  NonContractibleCup,
  PlanarityViolation,
  OrderViolation,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::vector<Violation> validate(const Diagram& d);
bool has_violation(std::span<const Violation> vs, ViolationKind kind);
/// Throws InvalidDiagram with the first violation.
void require_valid(const Diagram& d);

struct WireDims {
  std::size_t n = 2;
  std::size_t s = 2;

  std::size_t operator()(SimpleType t) const { return t.base == Base::N ? n : s; }
  std::vector<std::size_t> of(const PregroupType& t) const;
};

/// Dense tensors per box index, shaped dom dims followed by cod dims. Cap
/// boxes need no entry.
struct TensorAssignment {
  std::map<std::size_t, Tensor> tensors;
  WireDims dims;
};

/// Full contraction of the diagram; the result is indexed by open wires in
/// order. Cups and caps evaluate to the identity (unnormalized).
Tensor eval_tensor(const Diagram& d, const TensorAssignment& a);

struct DiagramStats {
  std::size_t n_boxes = 0;
  std::size_t n_cups = 0;
  std::size_t max_width = 0;
  std::vector<SimpleType> open_types;

  friend bool operator==(const DiagramStats&, const DiagramStats&) = default;
};

DiagramStats count_stats(const Diagram& d);

/// Boxes in the drawing order used by all passes: producers first, ties
/// broken by the existing position.
std::vector<std::size_t> drawing_order(const Diagram& d);

/// Reorders boxes into drawing order, numbers wires by producer, and sorts
/// cups by their left wire. Returns the new diagram; `old_index[i]` is the
/// source position of new box i.
Diagram canonicalize(const Diagram& d, std::vector<std::size_t>* old_index = nullptr);

nlohmann::json to_json(const Diagram& d);
Diagram diagram_from_json(const nlohmann::json& j);

}  // namespace qnlp
