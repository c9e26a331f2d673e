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

#include "qnlp/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qnlp/error.hpp"

namespace qnlp {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRZ: return "CRZ";
    case GateKind::CRX: return "CRX";
  }
  return "H";
}

GateKind parse_gate_kind(std::string_view name) {
  for (auto k : {GateKind::H, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CNOT,
                 GateKind::CRZ, GateKind::CRX}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::ParseError, "unknown gate '" + std::string(name) + "'");
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
         kind == GateKind::CRZ || kind == GateKind::CRX;
}

bool is_controlled(GateKind kind) {
  return kind == GateKind::CNOT || kind == GateKind::CRZ || kind == GateKind::CRX;
}

std::string to_string(const Symbol& s) {
  return s.word + "__" + s.type_fingerprint + "_" + std::to_string(s.index);
}

std::string_view to_string(CircuitAnsatz kind) {
  switch (kind) {
    case CircuitAnsatz::IQP: return "iqp";
    case CircuitAnsatz::StronglyEntangling: return "strongly_entangling";
    case CircuitAnsatz::Sim14: return "sim14";
    case CircuitAnsatz::Sim15: return "sim15";
  }
  return "iqp";
}

CircuitAnsatz parse_circuit_ansatz(std::string_view name) {
  for (auto k : {CircuitAnsatz::IQP, CircuitAnsatz::StronglyEntangling, CircuitAnsatz::Sim14,
                 CircuitAnsatz::Sim15}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::ConfigError, "unknown circuit ansatz '" + std::string(name) + "'");
}

std::size_t block_param_count(std::size_t k, const CircuitAnsatzConfig& cfg) {
  if (k == 0) return 0;
  if (k == 1) return static_cast<std::size_t>(std::max(cfg.n_single_qubit_params, 0));
  const std::size_t layers = static_cast<std::size_t>(std::max(cfg.n_layers, 0));
  switch (cfg.kind) {
    case CircuitAnsatz::IQP: return layers * (k - 1);
    case CircuitAnsatz::StronglyEntangling: return layers * 3 * k;
    case CircuitAnsatz::Sim14: return layers * 4 * k;
    case CircuitAnsatz::Sim15: return layers * 2 * k;
  }
  return 0;
}

std::vector<Gate> word_block(const SymbolPrefix& prefix, std::size_t k,
                             const CircuitAnsatzConfig& cfg, std::vector<Symbol>& symbols) {
  std::vector<Gate> gates;
  std::size_t local = 0;
  auto param = [&] {
    symbols.push_back({prefix.word, prefix.type_fingerprint, local++});
    return GateParam{SymbolRef{symbols.size() - 1}};
  };
  auto one = [&](GateKind g, std::size_t q, GateParam p = {}) {
    gates.push_back({g, {q}, std::move(p)});
  };
  auto two = [&](GateKind g, std::size_t c, std::size_t t, GateParam p = {}) {
    gates.push_back({g, {c, t}, std::move(p)});
  };

  if (k == 1) {
    for (int i = 0; i < cfg.n_single_qubit_params; ++i) {
      one(i % 2 == 0 ? GateKind::RX : GateKind::RZ, 0, param());
    }
    return gates;
  }

  // Ring entanglers: reversed order (i -> i+1) and forward order (i -> i-1).
  auto ring_down = [&](GateKind g, bool parametrized) {
    for (std::size_t i = k; i-- > 0;) {
      two(g, i, (i + 1) % k, parametrized ? param() : GateParam{});
    }
  };
  auto ring_up = [&](GateKind g, bool parametrized) {
    for (std::size_t i = 0; i < k; ++i) {
      two(g, i, (i + k - 1) % k, parametrized ? param() : GateParam{});
    }
  };

  for (int layer = 0; layer < cfg.n_layers; ++layer) {
    switch (cfg.kind) {
      case CircuitAnsatz::IQP:
        for (std::size_t q = 0; q < k; ++q) one(GateKind::H, q);
        for (std::size_t q = 0; q + 1 < k; ++q) two(GateKind::CRZ, q, q + 1, param());
        break;
      case CircuitAnsatz::StronglyEntangling:
        for (std::size_t q = 0; q < k; ++q) {
          one(GateKind::RZ, q, param());
          one(GateKind::RY, q, param());
          one(GateKind::RZ, q, param());
        }
        for (std::size_t q = 0; q < k; ++q) two(GateKind::CNOT, q, (q + 1) % k);
        break;
      case CircuitAnsatz::Sim14:
        for (std::size_t q = 0; q < k; ++q) one(GateKind::RY, q, param());
        ring_down(GateKind::CRX, true);
        for (std::size_t q = 0; q < k; ++q) one(GateKind::RY, q, param());
        ring_up(GateKind::CRX, true);
        break;
      case CircuitAnsatz::Sim15:
        for (std::size_t q = 0; q < k; ++q) one(GateKind::RY, q, param());
        ring_down(GateKind::CNOT, false);
        for (std::size_t q = 0; q < k; ++q) one(GateKind::RY, q, param());
        ring_up(GateKind::CNOT, false);
        break;
    }
  }
  return gates;
}

std::vector<Gate> cup_block(std::size_t q1, std::size_t q2) {
  return {Gate{GateKind::CNOT, {q1, q2}, {}}, Gate{GateKind::H, {q1}, {}}};
}

std::string box_fingerprint(const Box& box) {
  if (box.tag == BoxTag::Word) return to_string(box.cod);
  return to_string(box.dom) + "->" + to_string(box.cod);
}

namespace {

std::size_t qubits_for(SimpleType t, const CircuitAnsatzConfig& cfg) {
  return static_cast<std::size_t>(t.base == Base::N ? cfg.qubits_per_n : cfg.qubits_per_s);
}

std::size_t qubits_for(const PregroupType& t, const CircuitAnsatzConfig& cfg) {
  std::size_t k = 0;
  for (const auto& s : t.simples) k += qubits_for(s, cfg);
  return k;
}

void check_config(const CircuitAnsatzConfig& cfg) {
  if (cfg.n_layers < 0 || cfg.n_single_qubit_params < 0 || cfg.qubits_per_n < 1 ||
      cfg.qubits_per_s < 1) {
    throw Error(ErrorKind::ConfigError, "invalid circuit ansatz configuration");
  }
}

std::size_t block_width(const Box& box, const CircuitAnsatzConfig& cfg) {
  return std::max(qubits_for(box.dom, cfg), qubits_for(box.cod, cfg));
}

}  // namespace

Circuit compile_circuit(const Diagram& d, const CircuitAnsatzConfig& cfg) {
  check_config(cfg);
  require_valid(d);
  const std::size_t nb = d.boxes.size();
  std::vector<std::vector<std::size_t>> out_wires(nb), in_wires(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    out_wires[b].resize(d.boxes[b].cod.size());
    in_wires[b].resize(d.boxes[b].dom.size());
  }
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    out_wires[d.wires[w].src.box][d.wires[w].src.port] = w;
    if (d.wires[w].dst.kind == ConsumerKind::BoxInput) {
      in_wires[d.wires[w].dst.id][d.wires[w].dst.port] = w;
    }
  }

  Circuit c;
  std::map<Symbol, std::size_t> table;
  std::vector<std::vector<std::size_t>> wire_qubits(d.wires.size());
  std::vector<bool> assigned(d.wires.size(), false), cup_done(d.cups.size(), false);

  auto fresh = [&](std::size_t count) {
    std::vector<std::size_t> q(count);
    for (auto& x : q) x = c.n_qubits++;
    if (c.n_qubits > cfg.max_qubits) {
      throw Error(ErrorKind::WidthOverflow, std::to_string(c.n_qubits) + " qubits exceed limit " +
                                                std::to_string(cfg.max_qubits));
    }
    return q;
  };
  auto emit_block = [&](const Box& box, const std::vector<std::size_t>& qubits) {
    std::vector<Symbol> local;
    auto gates = word_block({box.name, box_fingerprint(box)}, qubits.size(), cfg, local);
    for (auto& g : gates) {
      for (auto& q : g.qubits) q = qubits[q];
      if (auto* ref = std::get_if<SymbolRef>(&g.param)) {
        const Symbol& s = local[ref->index];
        auto [it, inserted] = table.emplace(s, c.symbols.size());
        if (inserted) c.symbols.push_back(s);
        ref->index = it->second;
      }
      c.gates.push_back(std::move(g));
    }
  };
  auto assign = [&](std::size_t b, const std::vector<std::size_t>& qubits) {
    std::size_t next = 0;
    for (std::size_t p = 0; p < d.boxes[b].cod.size(); ++p) {
      const std::size_t w = out_wires[b][p];
      const std::size_t width = qubits_for(d.boxes[b].cod.simples[p], cfg);
      wire_qubits[w].assign(qubits.begin() + static_cast<std::ptrdiff_t>(next),
                            qubits.begin() + static_cast<std::ptrdiff_t>(next + width));
      assigned[w] = true;
      next += width;
    }
  };

  for (std::size_t b = 0; b < nb; ++b) {
    const Box& box = d.boxes[b];
    if (box.tag == BoxTag::Cap) {
      const auto q = fresh(2 * qubits_for(box.cod.simples[0], cfg));
      const std::size_t half = q.size() / 2;
      for (std::size_t i = 0; i < half; ++i) {
        c.gates.push_back({GateKind::H, {q[i]}, {}});
        c.gates.push_back({GateKind::CNOT, {q[i], q[half + i]}, {}});
      }
      assign(b, q);
    } else if (box.dom.empty()) {
      const auto q = fresh(qubits_for(box.cod, cfg));
      emit_block(box, q);
      assign(b, q);
    } else {
      std::vector<std::size_t> q;
      for (std::size_t w : in_wires[b]) q.insert(q.end(), wire_qubits[w].begin(), wire_qubits[w].end());
      const std::size_t n_in = q.size();
      const std::size_t n_out = qubits_for(box.cod, cfg);
      if (n_out > n_in) {
        const auto extra = fresh(n_out - n_in);
        q.insert(q.end(), extra.begin(), extra.end());
      }
      emit_block(box, q);
      for (std::size_t i = n_out; i < n_in; ++i) c.postselect.push_back(q[i]);
      q.resize(n_out);
      assign(b, q);
    }
    for (std::size_t k = 0; k < d.cups.size(); ++k) {
      const auto& cup = d.cups[k];
      if (cup_done[k] || !assigned[cup.left] || !assigned[cup.right]) continue;
      const auto& l = wire_qubits[cup.left];
      const auto& r = wire_qubits[cup.right];
      for (std::size_t i = 0; i < l.size(); ++i) {
        for (auto& g : cup_block(l[i], r[i])) c.gates.push_back(std::move(g));
        c.postselect.push_back(l[i]);
        c.postselect.push_back(r[i]);
      }
      cup_done[k] = true;
    }
  }
  for (std::size_t w : d.open_wires) {
    c.outputs.insert(c.outputs.end(), wire_qubits[w].begin(), wire_qubits[w].end());
  }
  std::sort(c.postselect.begin(), c.postselect.end());
  if (c.symbols.empty()) {
    throw Error(ErrorKind::ZeroParameterModel, "circuit has no trainable parameters");
  }
  return c;
}

std::size_t param_count(const Diagram& d, const CircuitAnsatzConfig& cfg) {
  check_config(cfg);
  require_valid(d);
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t total = 0, width = 0;
  for (const Box& box : d.boxes) {
    const std::size_t n_in = qubits_for(box.dom, cfg);
    const std::size_t n_out = qubits_for(box.cod, cfg);
    if (box.tag == BoxTag::Cap) {
      width += n_out;
      continue;
    }
    width += n_out > n_in ? n_out - n_in : 0;
    if (seen.emplace(box.name, box_fingerprint(box)).second) {
      total += block_param_count(block_width(box, cfg), cfg);
    }
  }
  if (width > cfg.max_qubits) {
    throw Error(ErrorKind::WidthOverflow, std::to_string(width) + " qubits exceed limit " +
                                              std::to_string(cfg.max_qubits));
  }
  if (total == 0) throw Error(ErrorKind::ZeroParameterModel, "no trainable parameters");
  return total;
}

nlohmann::json to_json(const Circuit& c) {
  nlohmann::json j;
  j["n_qubits"] = c.n_qubits;
  j["gates"] = nlohmann::json::array();
  for (const auto& g : c.gates) {
    nlohmann::json p = nullptr;
    if (const auto* v = std::get_if<double>(&g.param)) p = *v;
    if (const auto* s = std::get_if<SymbolRef>(&g.param)) p = {{"symbol", s->index}};
    j["gates"].push_back({{"kind", to_string(g.kind)}, {"qubits", g.qubits}, {"param", p}});
  }
  j["postselect"] = c.postselect;
  j["outputs"] = c.outputs;
  j["symbols"] = nlohmann::json::array();
  for (const auto& s : c.symbols) {
    j["symbols"].push_back({{"word", s.word}, {"type", s.type_fingerprint}, {"index", s.index}});
  }
  return j;
}

Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& g : j.at("gates")) {
      Gate gate{parse_gate_kind(g.at("kind").get<std::string>()),
                g.at("qubits").get<std::vector<std::size_t>>(), {}};
      const auto& p = g.at("param");
      if (p.is_number()) gate.param = p.get<double>();
      if (p.is_object()) gate.param = SymbolRef{p.at("symbol").get<std::size_t>()};
      c.gates.push_back(std::move(gate));
    }
    c.postselect = j.at("postselect").get<std::vector<std::size_t>>();
    c.outputs = j.at("outputs").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("symbols")) {
      c.symbols.push_back({s.at("word").get<std::string>(), s.at("type").get<std::string>(),
                           s.at("index").get<std::size_t>()});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("circuit json: ") + e.what());
  }
}

}  // namespace qnlp
