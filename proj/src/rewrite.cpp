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

#include "qnlp/rewrite.hpp"

#include <algorithm>
#include <numeric>

#include "qnlp/error.hpp"

namespace qnlp {

std::string_view to_string(RewriteScheme scheme) {
  switch (scheme) {
    case RewriteScheme::Re: return "re";
    case RewriteScheme::ReNorm: return "re_norm";
    case RewriteScheme::ReNormCur: return "re_norm_cur";
    case RewriteScheme::ReNormCurNorm: return "re_norm_cur_norm";
  }
  return "re";
}

RewriteScheme parse_scheme(std::string_view name) {
  for (auto s : {RewriteScheme::Re, RewriteScheme::ReNorm, RewriteScheme::ReNormCur,
                 RewriteScheme::ReNormCurNorm}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::ConfigError, "unknown rewrite scheme '" + std::string(name) + "'");
}

namespace {

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<BoxOrigin> identity_origin(const Diagram& d) {
  std::vector<BoxOrigin> out;
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    out.push_back({b, iota_vec(d.boxes[b].dom.size() + d.boxes[b].cod.size())});
  }
  return out;
}

// Origin of (first then second) given each step's origin.
std::vector<BoxOrigin> compose(std::span<const BoxOrigin> first,
                               std::span<const BoxOrigin> second) {
  std::vector<BoxOrigin> out;
  for (const auto& o : second) {
    if (o.source == kUnbound || first[o.source].source == kUnbound) {
      out.push_back({kUnbound, {}});
      continue;
    }
    const auto& inner = first[o.source];
    BoxOrigin c{inner.source, {}};
    for (std::size_t a : o.axes) c.axes.push_back(inner.axes[a]);
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t output_wire(const Diagram& d, std::size_t box, std::size_t port) {
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    if (d.wires[w].src.box == box && d.wires[w].src.port == port) return w;
  }
  return kUnbound;
}

// Points `keep` at whatever `from` fed, updating the consumer's back-link.
void take_consumer(Diagram& d, std::size_t keep, std::size_t from) {
  const Consumer dst = d.wires[from].dst;
  d.wires[keep].dst = dst;
  if (dst.kind == ConsumerKind::Cup) {
    (dst.port == 0 ? d.cups[dst.id].left : d.cups[dst.id].right) = keep;
  } else if (dst.kind == ConsumerKind::Open) {
    d.open_wires[dst.id] = keep;
  }
}

struct Dead {
  std::vector<bool> box, wire, cup;
  explicit Dead(const Diagram& d)
      : box(d.boxes.size(), false), wire(d.wires.size(), false), cup(d.cups.size(), false) {}
};

Diagram compact(const Diagram& d, const Dead& dead, std::vector<BoxOrigin>& origin) {
  auto remap = [](const std::vector<bool>& gone) {
    std::vector<std::size_t> m(gone.size(), kUnbound);
    std::size_t next = 0;
    for (std::size_t i = 0; i < gone.size(); ++i) {
      if (!gone[i]) m[i] = next++;
    }
    return m;
  };
  const auto box_map = remap(dead.box);
  const auto wire_map = remap(dead.wire);
  const auto cup_map = remap(dead.cup);

  Diagram out;
  std::vector<BoxOrigin> new_origin;
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    if (dead.box[b]) continue;
    out.boxes.push_back(d.boxes[b]);
    new_origin.push_back(origin[b]);
  }
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    if (dead.wire[w]) continue;
    Wire wire = d.wires[w];
    wire.src.box = box_map[wire.src.box];
    if (wire.dst.kind == ConsumerKind::BoxInput) wire.dst.id = box_map[wire.dst.id];
    if (wire.dst.kind == ConsumerKind::Cup) wire.dst.id = cup_map[wire.dst.id];
    out.wires.push_back(wire);
  }
  for (std::size_t c = 0; c < d.cups.size(); ++c) {
    if (dead.cup[c]) continue;
    out.cups.push_back({wire_map[d.cups[c].left], wire_map[d.cups[c].right]});
  }
  for (std::size_t w : d.open_wires) out.open_wires.push_back(wire_map[w]);
  origin = std::move(new_origin);
  return out;
}

// Yanks every cup-cap snake. A cup whose right wire leaves a cap's left port
// (or whose left wire leaves a cap's right port) straightens into the
// cap's other wire.
Diagram yank(Diagram d, std::vector<BoxOrigin>& origin) {
  Dead dead(d);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < d.cups.size() && !changed; ++c) {
      if (dead.cup[c]) continue;
      const std::size_t wl = d.cups[c].left;
      const std::size_t wr = d.cups[c].right;
      const Producer pl = d.wires[wl].src;
      const Producer pr = d.wires[wr].src;
      std::size_t keep = kUnbound, cap = kUnbound;
      if (d.boxes[pr.box].tag == BoxTag::Cap && pr.port == 0 && pr.box != pl.box) {
        keep = wl;
        cap = pr.box;
      } else if (d.boxes[pl.box].tag == BoxTag::Cap && pl.port == 1 && pl.box != pr.box) {
        keep = wr;
        cap = pl.box;
      } else {
        continue;
      }
      const std::size_t leg0 = output_wire(d, cap, 0);
      const std::size_t leg1 = output_wire(d, cap, 1);
      const std::size_t other = keep == wl ? leg1 : leg0;
      take_consumer(d, keep, other);
      dead.cup[c] = true;
      dead.box[cap] = true;
      dead.wire[leg0] = true;
      dead.wire[leg1] = true;
      // Park dead wires on a dead box so output_wire never finds them again.
      d.wires[leg0].src.box = cap;
      d.wires[leg1].src.box = cap;
      d.wires[leg0].src.port = d.wires[leg1].src.port = kUnbound;
      changed = true;
    }
  }
  return compact(d, dead, origin);
}

Rewritten finish(Diagram d, std::vector<BoxOrigin> origin) {
  std::vector<std::size_t> old_index;
  Diagram canon = canonicalize(d, &old_index);
  std::vector<BoxOrigin> reordered;
  for (std::size_t b : old_index) reordered.push_back(origin[b]);
  return {std::move(canon), std::move(reordered)};
}

}  // namespace

Rewritten identity_rewrite(const Diagram& d) { return {d, identity_origin(d)}; }

Rewritten normal_form_traced(const Diagram& d) {
  auto origin = identity_origin(d);
  Diagram y = yank(d, origin);
  return finish(std::move(y), std::move(origin));
}

Rewritten bend_adjoints(const Diagram& d) {
  require_valid(d);
  const std::size_t nb = d.boxes.size();

  // bend[b]: cod ports of box b to turn into inputs.
  std::vector<std::vector<std::size_t>> bend(nb);
  std::vector<std::size_t> out_of(d.wires.size());
  for (std::size_t w = 0; w < d.wires.size(); ++w) {
    const auto& wire = d.wires[w];
    if (d.boxes[wire.src.box].tag != BoxTag::Word || wire.type.z == 0) continue;
    if (wire.dst.kind != ConsumerKind::Cup) continue;
    const auto& cup = d.cups[wire.dst.id];
    const std::size_t partner = wire.dst.port == 0 ? cup.right : cup.left;
    if (d.wires[partner].type.z != 0) {
      throw Error(ErrorKind::CurryUnsupported,
                  "adjoint output of '" + d.boxes[wire.src.box].name +
                      "' is cupped to another adjoint");
    }
    bend[wire.src.box].push_back(wire.src.port);
  }

  Diagram out;
  std::vector<BoxOrigin> origin;
  std::vector<std::size_t> new_index(nb, kUnbound);
  // (old box, old port) -> new producer.
  std::vector<std::vector<Producer>> moved(nb);
  struct PendingInput {
    std::size_t cap;
    std::size_t cap_port;
    std::size_t box;
    std::size_t port;
  };
  std::vector<PendingInput> pending;

  for (std::size_t b = 0; b < nb; ++b) {
    const Box& box = d.boxes[b];
    moved[b].resize(box.cod.size());
    if (bend[b].empty()) {
      new_index[b] = out.add_box(box);
      origin.push_back({b, iota_vec(box.dom.size() + box.cod.size())});
      for (std::size_t p = 0; p < box.cod.size(); ++p) moved[b][p] = {new_index[b], p};
      continue;
    }
    std::sort(bend[b].begin(), bend[b].end());
    std::vector<std::size_t> right_adj, left_adj, kept;
    for (std::size_t p = 0; p < box.cod.size(); ++p) {
      const bool bent = std::binary_search(bend[b].begin(), bend[b].end(), p);
      if (!bent) {
        kept.push_back(p);
      } else if (box.cod.simples[p].z > 0) {
        right_adj.push_back(p);
      } else {
        left_adj.push_back(p);
      }
    }
    // Partners nest outward, so the inputs read in reverse port order.
    std::vector<std::size_t> dom_ports(right_adj.rbegin(), right_adj.rend());
    dom_ports.insert(dom_ports.end(), left_adj.rbegin(), left_adj.rend());

    Box curried{box.name, {}, {}, BoxTag::Curried};
    for (std::size_t p : dom_ports) {
      const SimpleType t = box.cod.simples[p];
      curried.dom.simples.push_back(adjoint(t, t.z > 0 ? Side::Left : Side::Right));
    }
    for (std::size_t p : kept) curried.cod.simples.push_back(box.cod.simples[p]);

    // Caps first so the curried box finds its inputs drawn.
    std::vector<std::size_t> cap_of_port(box.cod.size(), kUnbound);
    for (std::size_t p : right_adj) {
      const SimpleType t = box.cod.simples[p];
      cap_of_port[p] = out.add_box({"cap", {}, PregroupType{{t, adjoint(t, Side::Left)}}, BoxTag::Cap});
      origin.push_back({kUnbound, {}});
    }
    for (std::size_t p : left_adj) {
      const SimpleType t = box.cod.simples[p];
      cap_of_port[p] = out.add_box({"cap", {}, PregroupType{{adjoint(t, Side::Right), t}}, BoxTag::Cap});
      origin.push_back({kUnbound, {}});
    }
    new_index[b] = out.add_box(curried);
    std::vector<std::size_t> axes = dom_ports;
    axes.insert(axes.end(), kept.begin(), kept.end());
    origin.push_back({b, axes});

    for (std::size_t i = 0; i < kept.size(); ++i) moved[b][kept[i]] = {new_index[b], i};
    for (std::size_t i = 0; i < dom_ports.size(); ++i) {
      const std::size_t p = dom_ports[i];
      const bool right = box.cod.simples[p].z > 0;
      // The adjoint leg keeps the old consumer; the plain leg feeds the box.
      moved[b][p] = {cap_of_port[p], right ? 0u : 1u};
      pending.push_back({cap_of_port[p], right ? 1u : 0u, new_index[b], i});
    }
  }

  for (const auto& wire : d.wires) {
    Wire w = wire;
    w.src = moved[wire.src.box][wire.src.port];
    if (w.dst.kind == ConsumerKind::BoxInput) w.dst.id = new_index[w.dst.id];
    out.wires.push_back(w);
  }
  out.cups = d.cups;
  out.open_wires = d.open_wires;
  for (const auto& p : pending) {
    const std::size_t w = out.add_wire(p.cap, p.cap_port);
    out.connect_input(w, p.box, p.port);
  }
  return {std::move(out), std::move(origin)};
}

Rewritten curry_traced(const Diagram& d) {
  Rewritten bent = bend_adjoints(d);
  Diagram y = yank(std::move(bent.diagram), bent.origin);
  return finish(std::move(y), std::move(bent.origin));
}

Rewritten rewrite_traced(const Diagram& d, RewriteScheme scheme) {
  require_valid(d);
  if (scheme == RewriteScheme::Re) return identity_rewrite(d);
  Rewritten r = normal_form_traced(d);
  if (scheme == RewriteScheme::ReNorm) return r;
  Rewritten c = curry_traced(r.diagram);
  r = {std::move(c.diagram), compose(r.origin, c.origin)};
  if (scheme == RewriteScheme::ReNormCur) return r;
  Rewritten n = normal_form_traced(r.diagram);
  return {std::move(n.diagram), compose(r.origin, n.origin)};
}

Diagram normal_form(const Diagram& d) { return normal_form_traced(d).diagram; }
Diagram curry(const Diagram& d) { return curry_traced(d).diagram; }
Diagram rewrite(const Diagram& d, RewriteScheme scheme) {
  return rewrite_traced(d, scheme).diagram;
}

TensorAssignment transport(const TensorAssignment& a, std::span<const BoxOrigin> origin) {
  TensorAssignment out;
  out.dims = a.dims;
  for (std::size_t b = 0; b < origin.size(); ++b) {
    if (origin[b].source == kUnbound) continue;
    auto it = a.tensors.find(origin[b].source);
    if (it == a.tensors.end()) continue;
    out.tensors.emplace(b, it->second.permuted(origin[b].axes));
  }
  return out;
}

}  // namespace qnlp
