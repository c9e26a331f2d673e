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

#include "qnlp/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "qnlp/error.hpp"

namespace qnlp {

std::size_t Diagram::add_box(Box box) {
  boxes.push_back(std::move(box));
  return boxes.size() - 1;
}

std::size_t Diagram::add_wire(std::size_t box, std::size_t port) {
  wires.push_back(Wire{boxes.at(box).cod.simples.at(port), {box, port}, {}});
  return wires.size() - 1;
}

std::size_t Diagram::add_cup(std::size_t left_wire, std::size_t right_wire) {
  cups.push_back({left_wire, right_wire});
  const std::size_t id = cups.size() - 1;
  wires.at(left_wire).dst = {ConsumerKind::Cup, id, 0};
  wires.at(right_wire).dst = {ConsumerKind::Cup, id, 1};
  return id;
}

void Diagram::connect_input(std::size_t wire, std::size_t box, std::size_t port) {
  wires.at(wire).dst = {ConsumerKind::BoxInput, box, port};
}

void Diagram::add_open(std::size_t wire) {
  open_wires.push_back(wire);
  wires.at(wire).dst = {ConsumerKind::Open, open_wires.size() - 1, 0};
}

std::vector<std::size_t> Diagram::add_word(std::string name, PregroupType cod) {
  const std::size_t b = add_box({std::move(name), {}, std::move(cod), BoxTag::Word});
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < boxes[b].cod.size(); ++p) out.push_back(add_wire(b, p));
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::BadReference: return "BadReference";
    case ViolationKind::DanglingPort: return "DanglingPort";
    case ViolationKind::TypeMismatch: return "TypeMismatch";
    case ViolationKind::NonContractibleCup: return "NonContractibleCup";
    case ViolationKind::PlanarityViolation: return "PlanarityViolation";
    case ViolationKind::OrderViolation: return "OrderViolation";
  }
  return "Unknown";
}

bool has_violation(std::span<const Violation> vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::vector<std::size_t> WireDims::of(const PregroupType& t) const {
  std::vector<std::size_t> out;
  out.reserve(t.size());
  for (const auto& s : t.simples) out.push_back((*this)(s));
  return out;
}

namespace {

// Port -> wire lookup tables. Entries stay kUnbound when a port is unused.
struct PortIndex {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::vector<std::size_t>> in;

  explicit PortIndex(const Diagram& d) {
    out.resize(d.boxes.size());
    in.resize(d.boxes.size());
    for (std::size_t b = 0; b < d.boxes.size(); ++b) {
      out[b].assign(d.boxes[b].cod.size(), kUnbound);
      in[b].assign(d.boxes[b].dom.size(), kUnbound);
    }
    for (std::size_t w = 0; w < d.wires.size(); ++w) {
      const auto& wire = d.wires[w];
      if (wire.src.box < out.size() && wire.src.port < out[wire.src.box].size()) {
        out[wire.src.box][wire.src.port] = w;
      }
      if (wire.dst.kind == ConsumerKind::BoxInput && wire.dst.id < in.size() &&
          wire.dst.port < in[wire.dst.id].size()) {
        in[wire.dst.id][wire.dst.port] = w;
      }
    }
  }
};

enum class SweepResult { Ok, Order, Planarity };

// Draws the diagram left to right, top to bottom, keeping the ordered list
// of dangling wires. Cups are closed once their two wires sit side by side;
// `eager` closes them after every box, otherwise only when a box needs its
// inputs adjacent and at the end.
template <class Hooks>
SweepResult sweep(const Diagram& d, const PortIndex& ports, bool eager,
                  Hooks& hooks, std::string& detail) {
  std::vector<std::size_t> frontier;
  std::vector<bool> produced(d.wires.size(), false);

  auto close_cups = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i + 1 < frontier.size(); ++i) {
        const auto& a = d.wires[frontier[i]].dst;
        const auto& b = d.wires[frontier[i + 1]].dst;
        if (a.kind == ConsumerKind::Cup && b.kind == ConsumerKind::Cup &&
            a.id == b.id && a.port == 0 && b.port == 1) {
          hooks.on_cup(i);
          frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i),
                         frontier.begin() + static_cast<std::ptrdiff_t>(i + 2));
          changed = true;
          break;
        }
      }
    }
  };

  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    const auto& inputs = ports.in[b];
    std::size_t pos = frontier.size();
    if (!inputs.empty()) {
      close_cups();
      for (std::size_t w : inputs) {
        if (!produced[w]) {
          detail = "box " + std::to_string(b) + " drawn before its inputs";
          return SweepResult::Order;
        }
      }
      auto it = std::find(frontier.begin(), frontier.end(), inputs[0]);
      pos = static_cast<std::size_t>(it - frontier.begin());
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (pos + k >= frontier.size() || frontier[pos + k] != inputs[k]) {
          detail = "inputs of box " + std::to_string(b) + " are not adjacent";
          return SweepResult::Planarity;
        }
      }
    }
    hooks.on_box(b, pos, inputs.size());
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pos),
                   frontier.begin() + static_cast<std::ptrdiff_t>(pos + inputs.size()));
    frontier.insert(frontier.begin() + static_cast<std::ptrdiff_t>(pos),
                    ports.out[b].begin(), ports.out[b].end());
    for (std::size_t w : ports.out[b]) produced[w] = true;
    hooks.on_width(frontier.size());
    if (eager) close_cups();
  }
  close_cups();
  if (frontier != d.open_wires) {
    detail = "cups cross or enclose an open wire";
    return SweepResult::Planarity;
  }
  return SweepResult::Ok;
}

struct NoHooks {
  void on_box(std::size_t, std::size_t, std::size_t) {}
  void on_cup(std::size_t) {}
  void on_width(std::size_t) {}
};

std::vector<Violation> structural_violations(const Diagram& d) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string s) { out.push_back({k, std::move(s)}); };
  const std::size_t nb = d.boxes.size();

  std::vector<std::vector<int>> out_uses(nb), in_uses(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    out_uses[b].assign(d.boxes[b].cod.size(), 0);
    in_uses[b].assign(d.boxes[b].dom.size(), 0);
    if (d.boxes[b].tag == BoxTag::Word && !d.boxes[b].dom.empty()) {
      add(ViolationKind::TypeMismatch, "word box " + std::to_string(b) + " has a domain");
    }
    if (d.boxes[b].tag == BoxTag::Cap &&
        (d.boxes[b].cod.size() != 2 || !d.boxes[b].dom.empty() ||
         !contractible(d.boxes[b].cod.simples[1], d.boxes[b].cod.simples[0]))) {
      add(ViolationKind::TypeMismatch, "malformed cap " + std::to_string(b));
    }
  }

  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    const auto& wire = d.wires[w];
    const std::string ws = "wire " + std::to_string(w);
    if (wire.src.box >= nb || wire.src.port >= d.boxes[wire.src.box].cod.size()) {
      add(ViolationKind::BadReference, ws + " has no valid producer");
    } else {
      ++out_uses[wire.src.box][wire.src.port];
      if (d.boxes[wire.src.box].cod.simples[wire.src.port] != wire.type) {
        add(ViolationKind::TypeMismatch, ws + " differs from its producer port");
      }
    }
    switch (wire.dst.kind) {
      case ConsumerKind::Unbound:
        add(ViolationKind::DanglingPort, ws + " has no consumer");
        break;
      case ConsumerKind::BoxInput:
        if (wire.dst.id >= nb || wire.dst.port >= d.boxes[wire.dst.id].dom.size()) {
          add(ViolationKind::BadReference, ws + " feeds a missing input");
        } else {
          ++in_uses[wire.dst.id][wire.dst.port];
          if (d.boxes[wire.dst.id].dom.simples[wire.dst.port] != wire.type) {
            add(ViolationKind::TypeMismatch, ws + " differs from its input port");
          }
        }
        break;
      case ConsumerKind::Cup: {
        const bool ok = wire.dst.id < d.cups.size() &&
                        (wire.dst.port == 0 ? d.cups[wire.dst.id].left
                                            : d.cups[wire.dst.id].right) == w;
        if (!ok) add(ViolationKind::BadReference, ws + " disagrees with its cup");
        break;
      }
      case ConsumerKind::Open:
        if (wire.dst.id >= d.open_wires.size() || d.open_wires[wire.dst.id] != w) {
          add(ViolationKind::BadReference, ws + " disagrees with open_wires");
        }
        break;
    }
  }

  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t p = 0; p < out_uses[b].size(); ++p) {
      if (out_uses[b][p] != 1) {
        add(ViolationKind::DanglingPort, "output " + std::to_string(p) + " of box " +
                                             std::to_string(b) + " used " +
                                             std::to_string(out_uses[b][p]) + " times");
      }
    }
    for (std::size_t p = 0; p < in_uses[b].size(); ++p) {
      if (in_uses[b][p] != 1) {
        add(ViolationKind::DanglingPort, "input " + std::to_string(p) + " of box " +
                                             std::to_string(b) + " used " +
                                             std::to_string(in_uses[b][p]) + " times");
      }
    }
  }

  for (std::size_t c = 0; c < d.cups.size(); ++c) {
    const auto& cup = d.cups[c];
    if (cup.left >= d.wires.size() || cup.right >= d.wires.size() || cup.left == cup.right) {
      add(ViolationKind::BadReference, "cup " + std::to_string(c) + " references bad wires");
      continue;
    }
    const auto& l = d.wires[cup.left].dst;
    const auto& r = d.wires[cup.right].dst;
    if (l.kind != ConsumerKind::Cup || l.id != c || l.port != 0 ||
        r.kind != ConsumerKind::Cup || r.id != c || r.port != 1) {
      add(ViolationKind::BadReference, "cup " + std::to_string(c) + " is not bound by its wires");
    }
    if (!contractible(d.wires[cup.left].type, d.wires[cup.right].type)) {
      add(ViolationKind::NonContractibleCup,
          "cup " + std::to_string(c) + " over (" + to_string(d.wires[cup.left].type) + ", " +
              to_string(d.wires[cup.right].type) + ")");
    }
  }
  for (std::size_t i = 0; i < d.open_wires.size(); ++i) {
    const std::size_t w = d.open_wires[i];
    if (w >= d.wires.size() || d.wires[w].dst.kind != ConsumerKind::Open || d.wires[w].dst.id != i) {
      add(ViolationKind::BadReference, "open wire " + std::to_string(i) + " is not bound");
    }
  }
  return out;
}

}  // namespace

std::vector<Violation> validate(const Diagram& d) {
  auto out = structural_violations(d);
  const bool references_ok =
      !has_violation(out, ViolationKind::BadReference) &&
      !has_violation(out, ViolationKind::DanglingPort);
  if (!references_ok) return out;

  PortIndex ports(d);
  NoHooks hooks;
  std::string detail;
  switch (sweep(d, ports, false, hooks, detail)) {
    case SweepResult::Ok: break;
    case SweepResult::Order:
      out.push_back({ViolationKind::OrderViolation, detail});
      break;
    case SweepResult::Planarity:
      out.push_back({ViolationKind::PlanarityViolation, detail});
      break;
  }
  return out;
}

void require_valid(const Diagram& d) {
  const auto vs = validate(d);
  if (!vs.empty()) {
    throw Error(ErrorKind::InvalidDiagram,
                std::string(to_string(vs.front().kind)) + ": " + vs.front().detail);
  }
}

namespace {

struct EvalHooks {
  const Diagram& d;
  const TensorAssignment& a;
  Tensor state = Tensor::scalar(1.0);

  const Tensor& box_tensor(std::size_t b, Tensor& scratch) const {
    const auto& box = d.boxes[b];
    if (box.tag == BoxTag::Cap) {
      scratch = Tensor::identity(a.dims(box.cod.simples[0]));
      return scratch;
    }
    auto it = a.tensors.find(b);
    if (it == a.tensors.end()) {
      throw Error(ErrorKind::ShapeMismatch, "no tensor for box " + std::to_string(b));
    }
    auto expected = a.dims.of(box.dom);
    const auto cod = a.dims.of(box.cod);
    expected.insert(expected.end(), cod.begin(), cod.end());
    if (it->second.shape() != expected) {
      throw Error(ErrorKind::ShapeMismatch, "tensor for box " + std::to_string(b) +
                                                " (" + box.name + ") has the wrong shape");
    }
    return it->second;
  }

  void on_box(std::size_t b, std::size_t pos, std::size_t n_in) {
    Tensor scratch;
    const Tensor& t = box_tensor(b, scratch);
    if (n_in == 0) {
      state = outer(state, t);
      return;
    }
    std::vector<std::size_t> axes_state(n_in), axes_box(n_in);
    std::iota(axes_state.begin(), axes_state.end(), pos);
    std::iota(axes_box.begin(), axes_box.end(), 0);
    Tensor r = contract(state, axes_state, t, axes_box);
    const std::size_t n_out = t.rank() - n_in;
    const std::size_t n_free = state.rank() - n_in;
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < pos; ++i) perm.push_back(i);
    for (std::size_t i = 0; i < n_out; ++i) perm.push_back(n_free + i);
    for (std::size_t i = pos; i < n_free; ++i) perm.push_back(i);
    state = r.permuted(perm);
  }
  void on_cup(std::size_t pos) { state = trace(state, pos, pos + 1); }
  void on_width(std::size_t) {}
};

struct WidthHooks {
  std::size_t max_width = 0;
  void on_box(std::size_t, std::size_t, std::size_t) {}
  void on_cup(std::size_t) {}
  void on_width(std::size_t w) { max_width = std::max(max_width, w); }
};

}  // namespace

Tensor eval_tensor(const Diagram& d, const TensorAssignment& a) {
  require_valid(d);
  PortIndex ports(d);
  EvalHooks hooks{d, a};
  std::string detail;
  sweep(d, ports, true, hooks, detail);
  return std::move(hooks.state);
}

DiagramStats count_stats(const Diagram& d) {
  DiagramStats stats;
  for (const auto& b : d.boxes) {
    if (b.tag != BoxTag::Cap) ++stats.n_boxes;
  }
  stats.n_cups = d.cups.size();
  for (std::size_t w : d.open_wires) stats.open_types.push_back(d.wires.at(w).type);
  PortIndex ports(d);
  WidthHooks hooks;
  std::string detail;
  sweep(d, ports, false, hooks, detail);
  stats.max_width = hooks.max_width;
  return stats;
}

std::vector<std::size_t> drawing_order(const Diagram& d) {
  const std::size_t nb = d.boxes.size();
  PortIndex ports(d);
  std::vector<bool> done(nb, false);
  std::vector<std::size_t> order;
  order.reserve(nb);
  auto ready = [&](std::size_t b) {
    for (std::size_t w : ports.in[b]) {
      if (w == kUnbound) continue;
      const std::size_t src = d.wires[w].src.box;
      if (src < nb && !done[src]) return false;
    }
    return true;
  };
  while (order.size() < nb) {
    std::size_t pick = kUnbound;
    for (std::size_t b = 0; b < nb && pick == kUnbound; ++b) {
      if (!done[b] && ready(b)) pick = b;
    }
    if (pick == kUnbound) {  // cycle: keep the remaining boxes as they are
      for (std::size_t b = 0; b < nb; ++b) {
        if (!done[b]) order.push_back(b);
      }
      break;
    }
    done[pick] = true;
    order.push_back(pick);
  }
  return order;
}

Diagram canonicalize(const Diagram& d, std::vector<std::size_t>* old_index) {
  const auto order = drawing_order(d);
  std::vector<std::size_t> new_box(d.boxes.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_box[order[i]] = i;

  PortIndex ports(d);
  std::vector<std::size_t> new_wire(d.wires.size(), kUnbound);
  std::size_t next = 0;
  for (std::size_t b : order) {
    for (std::size_t w : ports.out[b]) {
      if (w != kUnbound && new_wire[w] == kUnbound) new_wire[w] = next++;
    }
  }
  for (auto& nw : new_wire) {
    if (nw == kUnbound) nw = next++;
  }

  std::vector<std::size_t> cup_order(d.cups.size());
  std::iota(cup_order.begin(), cup_order.end(), 0);
  std::stable_sort(cup_order.begin(), cup_order.end(), [&](std::size_t x, std::size_t y) {
    return new_wire[d.cups[x].left] < new_wire[d.cups[y].left];
  });
  std::vector<std::size_t> new_cup(d.cups.size());
  for (std::size_t i = 0; i < cup_order.size(); ++i) new_cup[cup_order[i]] = i;

  Diagram out;
  for (std::size_t b : order) out.boxes.push_back(d.boxes[b]);
  out.wires.resize(d.wires.size());
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    Wire wire = d.wires[w];
    if (wire.src.box < d.boxes.size()) wire.src.box = new_box[wire.src.box];
    switch (wire.dst.kind) {
      case ConsumerKind::BoxInput:
        if (wire.dst.id < d.boxes.size()) wire.dst.id = new_box[wire.dst.id];
        break;
      case ConsumerKind::Cup:
        if (wire.dst.id < d.cups.size()) wire.dst.id = new_cup[wire.dst.id];
        break;
      default: break;
    }
    out.wires[new_wire[w]] = wire;
  }
  for (std::size_t c : cup_order) {
    out.cups.push_back({new_wire[d.cups[c].left], new_wire[d.cups[c].right]});
  }
  for (std::size_t w : d.open_wires) out.open_wires.push_back(new_wire[w]);
  if (old_index) *old_index = order;
  return out;
}

namespace {

std::string tag_name(BoxTag tag) {
  switch (tag) {
    case BoxTag::Word: return "word";
    case BoxTag::Curried: return "curried";
    case BoxTag::Cap: return "cap";
  }
  return "word";
}

BoxTag tag_from(const std::string& s) {
  if (s == "word") return BoxTag::Word;
  if (s == "curried") return BoxTag::Curried;
  if (s == "cap") return BoxTag::Cap;
  throw Error(ErrorKind::ParseError, "unknown box tag '" + s + "'");
}

std::string consumer_name(ConsumerKind k) {
  switch (k) {
    case ConsumerKind::Unbound: return "unbound";
    case ConsumerKind::BoxInput: return "box";
    case ConsumerKind::Cup: return "cup";
    case ConsumerKind::Open: return "open";
  }
  return "unbound";
}

ConsumerKind consumer_from(const std::string& s) {
  if (s == "box") return ConsumerKind::BoxInput;
  if (s == "cup") return ConsumerKind::Cup;
  if (s == "open") return ConsumerKind::Open;
  if (s == "unbound") return ConsumerKind::Unbound;
  throw Error(ErrorKind::ParseError, "unknown consumer kind '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const Diagram& d) {
  nlohmann::json j;
  j["boxes"] = nlohmann::json::array();
  for (const auto& b : d.boxes) {
    j["boxes"].push_back({{"name", b.name},
                          {"dom", to_string(b.dom)},
                          {"cod", to_string(b.cod)},
                          {"tag", tag_name(b.tag)}});
  }
  j["wires"] = nlohmann::json::array();
  for (const auto& w : d.wires) {
    j["wires"].push_back({{"type", to_string(w.type)},
                          {"src", {w.src.box, w.src.port}},
                          {"dst", {{"kind", consumer_name(w.dst.kind)},
                                   {"id", w.dst.id},
                                   {"port", w.dst.port}}}});
  }
  j["cups"] = nlohmann::json::array();
  for (const auto& c : d.cups) j["cups"].push_back({c.left, c.right});
  j["open_wires"] = d.open_wires;
  return j;
}

Diagram diagram_from_json(const nlohmann::json& j) {
  try {
    Diagram d;
    for (const auto& b : j.at("boxes")) {
      d.boxes.push_back({b.at("name").get<std::string>(),
                         parse_type(b.at("dom").get<std::string>()),
                         parse_type(b.at("cod").get<std::string>()),
                         tag_from(b.at("tag").get<std::string>())});
    }
    for (const auto& w : j.at("wires")) {
      Wire wire;
      wire.type = parse_simple_type(w.at("type").get<std::string>());
      wire.src = {w.at("src").at(0).get<std::size_t>(), w.at("src").at(1).get<std::size_t>()};
      const auto& dst = w.at("dst");
      wire.dst = {consumer_from(dst.at("kind").get<std::string>()),
                  dst.at("id").get<std::size_t>(), dst.at("port").get<std::size_t>()};
      d.wires.push_back(wire);
    }
    for (const auto& c : j.at("cups")) {
      d.cups.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
    }
    d.open_wires = j.at("open_wires").get<std::vector<std::size_t>>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("diagram json: ") + e.what());
  }
}

}  // namespace qnlp
