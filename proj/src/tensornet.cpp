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

#include "qnlp/tensornet.hpp"

#include <algorithm>

#include "qnlp/error.hpp"

namespace qnlp {

std::string_view to_string(TensorAnsatz kind) {
  switch (kind) {
    case TensorAnsatz::Tensor: return "tensor";
    case TensorAnsatz::Spider: return "spider";
    case TensorAnsatz::MPS: return "mps";
  }
  return "?";
}

TensorAnsatz parse_tensor_ansatz(std::string_view name) {
  for (auto k : {TensorAnsatz::Tensor, TensorAnsatz::Spider, TensorAnsatz::MPS}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::ConfigError, "unknown tensor ansatz '" + std::string(name) + "'");
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Param: return "param";
    case NodeKind::CupDelta: return "cup";
    case NodeKind::SpiderCopy: return "spider";
  }
  return "?";
}

std::vector<std::size_t> Network::shape_of(const Node& node) const {
  std::vector<std::size_t> shape;
  shape.reserve(node.legs.size());
  for (std::size_t e : node.legs) shape.push_back(edge_dims.at(e));
  return shape;
}

std::size_t Network::add_edge(std::size_t dim) {
  edge_dims.push_back(dim);
  return edge_dims.size() - 1;
}

const Tensor& TensorParamStore::at(const Symbol& s) const {
  auto it = tensors.find(s);
  if (it == tensors.end()) {
    throw Error(ErrorKind::ShapeMismatch, "no tensor for symbol " + to_string(s));
  }
  return it->second;
}

std::vector<std::vector<std::size_t>> mps_split(std::span<const std::size_t> shape,
                                                std::size_t bond) {
  const std::size_t k = shape.size();
  if (k < 3) return {std::vector<std::size_t>(shape.begin(), shape.end())};
  std::vector<std::vector<std::size_t>> chain;
  chain.push_back({shape[0], bond});
  for (std::size_t i = 1; i + 1 < k; ++i) chain.push_back({bond, shape[i], bond});
  chain.push_back({bond, shape[k - 1]});
  return chain;
}

SpiderSplit spider_split(std::span<const std::size_t> shape, std::size_t max_legs) {
  if (max_legs < 2) throw Error(ErrorKind::ConfigError, "max_legs must be at least 2");
  SpiderSplit out;
  const std::size_t k = shape.size();
  if (k <= max_legs) {
    out.group_shapes.emplace_back(shape.begin(), shape.end());
    std::vector<std::size_t> legs(k);
    for (std::size_t i = 0; i < k; ++i) legs[i] = i;
    out.group_legs.push_back(std::move(legs));
    return out;
  }
  const std::size_t step = max_legs - 1;
  for (std::size_t start = 0; start + 1 < k; start += step) {
    const std::size_t last = std::min(k - 1, start + step);
    std::vector<std::size_t> dims, legs;
    for (std::size_t i = start; i <= last; ++i) {
      dims.push_back(shape[i]);
      legs.push_back(i);
    }
    if (last + 1 < k) out.shared.push_back(last);
    out.group_shapes.push_back(std::move(dims));
    out.group_legs.push_back(std::move(legs));
  }
  return out;
}

namespace {

void lower_mps(Network& net, std::size_t bond) {
  std::vector<Node> nodes;
  for (auto& node : net.nodes) {
    if (node.kind != NodeKind::Param || node.legs.size() < 3) {
      nodes.push_back(std::move(node));
      continue;
    }
    const std::size_t k = node.legs.size();
    std::size_t prev = kUnbound;
    for (std::size_t i = 0; i < k; ++i) {
      Node part{NodeKind::Param, node.symbol, {}};
      part.symbol.index = i;
      if (i > 0) part.legs.push_back(prev);
      part.legs.push_back(node.legs[i]);
      if (i + 1 < k) {
        prev = net.add_edge(bond);
        part.legs.push_back(prev);
      }
      nodes.push_back(std::move(part));
    }
  }
  net.nodes = std::move(nodes);
}

void lower_spider(Network& net, std::size_t max_legs) {
  std::vector<Node> nodes;
  for (auto& node : net.nodes) {
    if (node.kind != NodeKind::Param || node.legs.size() <= max_legs) {
      nodes.push_back(std::move(node));
      continue;
    }
    const auto shape = net.shape_of(node);
    const auto split = spider_split(shape, max_legs);
    // Each shared leg gets one fresh edge per neighbouring group; a copy
    // spider joins both with the original wire.
    std::vector<Node> spiders;
    std::vector<std::size_t> incoming(node.legs.size(), kUnbound);
    for (std::size_t g = 0; g < split.group_legs.size(); ++g) {
      Node part{NodeKind::Param, node.symbol, {}};
      part.symbol.index = g;
      for (std::size_t leg : split.group_legs[g]) {
        const bool shared =
            std::find(split.shared.begin(), split.shared.end(), leg) != split.shared.end();
        if (!shared) {
          part.legs.push_back(node.legs[leg]);
          continue;
        }
        const std::size_t e = net.add_edge(shape[leg]);
        part.legs.push_back(e);
        if (incoming[leg] == kUnbound) {
          incoming[leg] = e;
        } else {
          spiders.push_back({NodeKind::SpiderCopy, {}, {incoming[leg], e, node.legs[leg]}});
        }
      }
      nodes.push_back(std::move(part));
    }
    for (auto& sp : spiders) nodes.push_back(std::move(sp));
  }
  net.nodes = std::move(nodes);
}

struct Labeled {
  Tensor t;
  std::vector<std::size_t> labels;
};

Labeled join(const Labeled& a, const Labeled& b) {
  std::vector<std::size_t> axes_a, axes_b;
  std::vector<bool> used_b(b.labels.size(), false);
  Labeled out;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
    if (it == b.labels.end()) {
      out.labels.push_back(a.labels[i]);
    } else {
      axes_a.push_back(i);
      axes_b.push_back(static_cast<std::size_t>(it - b.labels.begin()));
      used_b[axes_b.back()] = true;
    }
  }
  for (std::size_t j = 0; j < b.labels.size(); ++j) {
    if (!used_b[j]) out.labels.push_back(b.labels[j]);
  }
  out.t = contract(a.t, axes_a, b.t, axes_b);
  return out;
}

bool shares_label(const Labeled& a, const Labeled& b) {
  for (std::size_t l : a.labels) {
    if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) return true;
  }
  return false;
}

// Greedy left-to-right: cups touching the accumulator first, then the
// leftmost connected item, then the leftmost item.
Tensor contract_items(std::vector<Labeled> items, const std::vector<bool>& is_cup,
                      std::span<const std::size_t> result_labels) {
  Labeled acc{Tensor::scalar(1.0), {}};
  std::vector<bool> done(items.size(), false);
  for (std::size_t step = 0; step < items.size(); ++step) {
    std::size_t pick = kUnbound;
    for (std::size_t i = 0; i < items.size() && pick == kUnbound; ++i) {
      if (!done[i] && is_cup[i] && shares_label(acc, items[i])) pick = i;
    }
    for (std::size_t i = 0; i < items.size() && pick == kUnbound; ++i) {
      if (!done[i] && shares_label(acc, items[i])) pick = i;
    }
    for (std::size_t i = 0; i < items.size() && pick == kUnbound; ++i) {
      if (!done[i]) pick = i;
    }
    done[pick] = true;
    acc = join(acc, items[pick]);
  }
  if (acc.labels.size() != result_labels.size()) {
    throw Error(ErrorKind::ShapeMismatch, "network leaves " + std::to_string(acc.labels.size()) +
                                              " open legs, expected " +
                                              std::to_string(result_labels.size()));
  }
  std::vector<std::size_t> axes;
  for (std::size_t l : result_labels) {
    auto it = std::find(acc.labels.begin(), acc.labels.end(), l);
    if (it == acc.labels.end()) throw Error(ErrorKind::ShapeMismatch, "open leg mismatch");
    axes.push_back(static_cast<std::size_t>(it - acc.labels.begin()));
  }
  return acc.t.permuted(axes);
}

Tensor node_tensor(const Network& net, const Node& node, const TensorParamStore& store) {
  const auto shape = net.shape_of(node);
  switch (node.kind) {
    case NodeKind::CupDelta:
      if (shape.size() != 2 || shape[0] != shape[1]) {
        throw Error(ErrorKind::ShapeMismatch, "cup legs must have equal dims");
      }
      return Tensor::identity(shape[0]);
    case NodeKind::SpiderCopy:
      for (std::size_t d : shape) {
        if (d != shape[0]) throw Error(ErrorKind::ShapeMismatch, "spider legs must have equal dims");
      }
      return Tensor::copy_spider(shape.size(), shape.empty() ? 1 : shape[0]);
    case NodeKind::Param: {
      const Tensor& t = store.at(node.symbol);
      if (t.shape() != shape) {
        throw Error(ErrorKind::ShapeMismatch, "tensor for " + to_string(node.symbol) +
                                                  " has the wrong shape");
      }
      return t;
    }
  }
  return {};
}

}  // namespace

Network compile_network(const Diagram& d, const TensorAnsatzConfig& cfg) {
  if (cfg.d_n < 2 || cfg.d_s < 2 || cfg.bond_dim < 1 || cfg.max_legs < 2) {
    throw Error(ErrorKind::ConfigError, "tensor dims and max_legs must be >= 2 and bond >= 1");
  }
  require_valid(d);
  const WireDims dims = cfg.dims();
  Network net;
  for (const auto& w : d.wires) net.add_edge(dims(w.type));

  std::vector<std::vector<std::size_t>> ins(d.boxes.size()), outs(d.boxes.size());
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    ins[b].assign(d.boxes[b].dom.size(), kUnbound);
    outs[b].assign(d.boxes[b].cod.size(), kUnbound);
  }
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    const auto& wire = d.wires[w];
    outs[wire.src.box][wire.src.port] = w;
    if (wire.dst.kind == ConsumerKind::BoxInput) ins[wire.dst.id][wire.dst.port] = w;
  }
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    const Box& box = d.boxes[b];
    Node node;
    if (box.tag == BoxTag::Cap) {
      node.kind = NodeKind::CupDelta;
    } else {
      node.kind = NodeKind::Param;
      node.symbol = {box.name, box_fingerprint(box), 0};
    }
    node.legs = ins[b];
    node.legs.insert(node.legs.end(), outs[b].begin(), outs[b].end());
    net.nodes.push_back(std::move(node));
  }
  for (const auto& cup : d.cups) {
    net.nodes.push_back({NodeKind::CupDelta, {}, {cup.left, cup.right}});
  }
  net.outputs = d.open_wires;

  switch (cfg.kind) {
    case TensorAnsatz::Tensor: break;
    case TensorAnsatz::MPS: lower_mps(net, cfg.bond_dim); break;
    case TensorAnsatz::Spider: lower_spider(net, cfg.max_legs); break;
  }
  return net;
}

std::map<Symbol, std::vector<std::size_t>> param_shapes(const Network& net) {
  std::map<Symbol, std::vector<std::size_t>> shapes;
  for (const auto& node : net.nodes) {
    if (node.kind != NodeKind::Param) continue;
    auto shape = net.shape_of(node);
    auto [it, inserted] = shapes.emplace(node.symbol, shape);
    if (!inserted && it->second != shape) {
      throw Error(ErrorKind::ShapeMismatch, "symbol " + to_string(node.symbol) +
                                                " used with two shapes");
    }
  }
  return shapes;
}

Tensor contract(const Network& net, const TensorParamStore& store) {
  std::vector<Labeled> items;
  std::vector<bool> is_cup;
  for (const auto& node : net.nodes) {
    items.push_back({node_tensor(net, node, store), node.legs});
    is_cup.push_back(node.kind == NodeKind::CupDelta);
  }
  return contract_items(std::move(items), is_cup, net.outputs);
}

std::map<Symbol, Tensor> gradient_hole(const Network& net, const TensorParamStore& store,
                                       const Tensor& upstream) {
  std::vector<std::size_t> out_shape;
  for (std::size_t e : net.outputs) out_shape.push_back(net.edge_dims.at(e));
  if (upstream.shape() != out_shape) {
    throw Error(ErrorKind::ShapeMismatch, "upstream shape differs from network output");
  }
  std::vector<Tensor> tensors;
  for (const auto& node : net.nodes) tensors.push_back(node_tensor(net, node, store));

  std::map<Symbol, Tensor> grads;
  for (std::size_t hole = 0; hole < net.nodes.size(); ++hole) {
    const Node& target = net.nodes[hole];
    if (target.kind != NodeKind::Param) continue;
    std::vector<Labeled> items;
    std::vector<bool> is_cup;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (i == hole) continue;
      items.push_back({tensors[i], net.nodes[i].legs});
      is_cup.push_back(net.nodes[i].kind == NodeKind::CupDelta);
    }
    items.push_back({upstream, net.outputs});
    is_cup.push_back(false);
    Tensor g = contract_items(std::move(items), is_cup, target.legs);
    auto it = grads.find(target.symbol);
    if (it == grads.end()) {
      grads.emplace(target.symbol, std::move(g));
    } else {
      auto dst = it->second.data();
      auto src = g.data();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
  }
  return grads;
}

nlohmann::json to_json(const Symbol& s) {
  return {{"word", s.word}, {"type", s.type_fingerprint}, {"index", s.index}};
}

Symbol symbol_from_json(const nlohmann::json& j) {
  return {j.at("word").get<std::string>(), j.at("type").get<std::string>(),
          j.at("index").get<std::size_t>()};
}

nlohmann::json to_json(const Network& net) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& node : net.nodes) {
    nlohmann::json n{{"kind", to_string(node.kind)}, {"legs", node.legs}};
    if (node.kind == NodeKind::Param) n["symbol"] = to_json(node.symbol);
    j["nodes"].push_back(std::move(n));
  }
  j["edges"] = net.edge_dims;
  j["outputs"] = net.outputs;
  return j;
}

Network network_from_json(const nlohmann::json& j) {
  Network net;
  net.edge_dims = j.at("edges").get<std::vector<std::size_t>>();
  net.outputs = j.at("outputs").get<std::vector<std::size_t>>();
  for (const auto& n : j.at("nodes")) {
    Node node;
    const auto kind = n.at("kind").get<std::string>();
    if (kind == "param") {
      node.kind = NodeKind::Param;
      node.symbol = symbol_from_json(n.at("symbol"));
    } else if (kind == "cup") {
      node.kind = NodeKind::CupDelta;
    } else if (kind == "spider") {
      node.kind = NodeKind::SpiderCopy;
    } else {
      throw Error(ErrorKind::ParseError, "unknown node kind '" + kind + "'");
    }
    node.legs = n.at("legs").get<std::vector<std::size_t>>();
    for (std::size_t e : node.legs) {
      if (e >= net.edge_dims.size()) throw Error(ErrorKind::ParseError, "leg references no edge");
    }
    net.nodes.push_back(std::move(node));
  }
  return net;
}

nlohmann::json to_json(const TensorParamStore& store) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [sym, t] : store.tensors) {
    j.push_back({{"symbol", to_json(sym)},
                 {"shape", t.shape()},
                 {"data", std::vector<double>(t.data().begin(), t.data().end())}});
  }
  return j;
}

TensorParamStore param_store_from_json(const nlohmann::json& j) {
  TensorParamStore store;
  for (const auto& e : j) {
    store.tensors.emplace(symbol_from_json(e.at("symbol")),
                          Tensor(e.at("shape").get<std::vector<std::size_t>>(),
                                 e.at("data").get<std::vector<double>>()));
  }
  return store;
}

}  // namespace qnlp
