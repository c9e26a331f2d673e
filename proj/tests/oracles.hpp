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

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code paths with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "qnlp/dataset.hpp"
#include "qnlp/diagram.hpp"
#include "qnlp/parser.hpp"
#include "qnlp/pregroup.hpp"
#include "qnlp/tensor.hpp"

namespace qnlp::oracle {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

inline bool pairs_contract(SimpleType l, SimpleType r) {
  return l.base == r.base && r.z - l.z == 1;
}

// Every non-crossing complete matching of types[l, r).
inline std::vector<Pairs> complete_matchings(const std::vector<SimpleType>& t, std::size_t l,
                                             std::size_t r) {
  if (l >= r) return {Pairs{}};
  std::vector<Pairs> out;
  for (std::size_t m = l + 1; m < r; m += 2) {
    if (!pairs_contract(t[l], t[m])) continue;
    for (const auto& inner : complete_matchings(t, l + 1, m)) {
      for (const auto& rest : complete_matchings(t, m + 1, r)) {
        Pairs p{{l, m}};
        p.insert(p.end(), inner.begin(), inner.end());
        p.insert(p.end(), rest.begin(), rest.end());
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

struct Witness {
  Pairs cups;
  std::vector<std::size_t> residual;
};

// Every planar witness of types[l, r): unmatched positions only at top level.
inline std::vector<Witness> all_witnesses(const std::vector<SimpleType>& t, std::size_t l,
                                          std::size_t r) {
  if (l >= r) return {Witness{}};
  std::vector<Witness> out;
  for (auto w : all_witnesses(t, l + 1, r)) {
    w.residual.insert(w.residual.begin(), l);
    out.push_back(std::move(w));
  }
  for (std::size_t m = l + 1; m < r; m += 2) {
    if (!pairs_contract(t[l], t[m])) continue;
    for (const auto& inner : complete_matchings(t, l + 1, m)) {
      for (auto rest : all_witnesses(t, m + 1, r)) {
        Witness w;
        w.cups = {{l, m}};
        w.cups.insert(w.cups.end(), inner.begin(), inner.end());
        w.cups.insert(w.cups.end(), rest.cups.begin(), rest.cups.end());
        w.residual = rest.residual;
        out.push_back(std::move(w));
      }
    }
  }
  return out;
}

inline std::vector<Witness> witnesses_to(const std::vector<SimpleType>& t,
                                         const PregroupType& target) {
  std::vector<Witness> out;
  for (auto& w : all_witnesses(t, 0, t.size())) {
    std::vector<SimpleType> res;
    for (std::size_t i : w.residual) res.push_back(t[i]);
    if (res == target.simples) {
      std::sort(w.cups.begin(), w.cups.end());
      out.push_back(std::move(w));
    }
  }
  return out;
}

// Number of scalar entries in a tensor of this shape.
inline std::size_t volume(const std::vector<std::size_t>& shape) {
  std::size_t v = 1;
  for (std::size_t d : shape) v *= d;
  return v;
}

inline std::size_t flat(const std::vector<std::size_t>& shape, const std::vector<std::size_t>& idx) {
  std::size_t f = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) f = f * shape[i] + idx[i];
  return f;
}

// Sum over every assignment of one index per wire of the product of box
// entries and cup deltas; the result is indexed by open wires.
inline Tensor brute_force_eval(const Diagram& d, const TensorAssignment& a) {
  const std::size_t nw = d.wires.size();
  std::vector<std::size_t> dim(nw);
  for (std::size_t w = 0; w < nw; ++w) dim[w] = a.dims(d.wires[w].type);

  std::vector<std::vector<std::size_t>> box_ins(d.boxes.size()), box_outs(d.boxes.size());
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    box_ins[b].resize(d.boxes[b].dom.size());
    box_outs[b].resize(d.boxes[b].cod.size());
  }
  for (std::size_t w = 0; w < nw; ++w) {
    box_outs[d.wires[w].src.box][d.wires[w].src.port] = w;
    if (d.wires[w].dst.kind == ConsumerKind::BoxInput) {
      box_ins[d.wires[w].dst.id][d.wires[w].dst.port] = w;
    }
  }

  std::vector<std::size_t> out_shape;
  for (std::size_t w : d.open_wires) out_shape.push_back(dim[w]);
  std::vector<double> result(volume(out_shape), 0.0);

  std::vector<std::size_t> idx(nw, 0);
  while (true) {
    double term = 1.0;
    for (const auto& c : d.cups) term *= idx[c.left] == idx[c.right] ? 1.0 : 0.0;
    for (std::size_t b = 0; b < d.boxes.size() && term != 0.0; ++b) {
      if (d.boxes[b].tag == BoxTag::Cap) {
        term *= idx[box_outs[b][0]] == idx[box_outs[b][1]] ? 1.0 : 0.0;
        continue;
      }
      const Tensor& t = a.tensors.at(b);
      std::vector<std::size_t> legs = box_ins[b];
      legs.insert(legs.end(), box_outs[b].begin(), box_outs[b].end());
      std::vector<std::size_t> local;
      for (std::size_t w : legs) local.push_back(idx[w]);
      term *= t.data()[flat(t.shape(), local)];
    }
    if (term != 0.0) {
      std::vector<std::size_t> o;
      for (std::size_t w : d.open_wires) o.push_back(idx[w]);
      result[flat(out_shape, o)] += term;
    }
    std::size_t k = 0;
    while (k < nw && ++idx[k] == dim[k]) idx[k++] = 0;
    if (k == nw) break;
  }
  return Tensor(out_shape, result);
}

inline Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t(std::move(shape));
  for (auto& x : t.data()) x = u(rng);
  return t;
}

inline TensorAssignment random_assignment(const Diagram& d, std::mt19937_64& rng,
                                          WireDims dims = {}) {
  TensorAssignment a;
  a.dims = dims;
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    if (d.boxes[b].tag == BoxTag::Cap) continue;
    auto shape = dims.of(d.boxes[b].dom);
    const auto cod = dims.of(d.boxes[b].cod);
    shape.insert(shape.end(), cod.begin(), cod.end());
    a.tensors.emplace(b, random_tensor(shape, rng));
  }
  return a;
}

// Parsed diagrams of every sentence in the generated corpus.
inline const std::vector<Diagram>& corpus_diagrams() {
  static const std::vector<Diagram> all = [] {
    std::vector<Diagram> out;
    const Lexicon lex = mc_lexicon();
    for (const auto& item : mc_corpus()) out.push_back(parse_sentence(item.words, lex));
    return out;
  }();
  return all;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double relative_error(const std::vector<double>& got, const std::vector<double>& ref) {
  double diff = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) diff = std::max(diff, std::abs(got[i] - ref[i]));
  return diff / std::max(max_abs(ref), 1e-6);
}

}  // namespace qnlp::oracle
