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

#include "qnlp/parser.hpp"

#include <algorithm>

#include "qnlp/error.hpp"

namespace qnlp {

Diagram diagram_from_witness(std::span<const std::string> words,
                             std::span<const PregroupType> types,
                             const ReductionWitness& witness) {
  Diagram d;
  std::vector<std::size_t> flat_wire;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto ws = d.add_word(normalize_word(words[i]), types[i]);
    flat_wire.insert(flat_wire.end(), ws.begin(), ws.end());
  }
  auto cups = witness.cups;
  std::sort(cups.begin(), cups.end());
  for (const auto& [l, r] : cups) d.add_cup(flat_wire.at(l), flat_wire.at(r));
  for (std::size_t i : witness.residual) d.add_open(flat_wire.at(i));
  return d;
}

Diagram parse_sentence(std::span<const std::string> words, const Lexicon& lexicon,
                       const PregroupType& target) {
  if (words.empty()) throw Error(ErrorKind::NoReduction, "empty sentence");
  std::vector<const std::vector<PregroupType>*> options;
  for (const auto& w : words) options.push_back(&lexicon.lookup(w));

  // Odometer over lexical alternatives; the last word varies fastest.
  std::vector<std::size_t> choice(words.size(), 0);
  while (true) {
    std::vector<PregroupType> types;
    std::vector<SimpleType> flat;
    for (std::size_t i = 0; i < words.size(); ++i) {
      types.push_back((*options[i])[choice[i]]);
      flat.insert(flat.end(), types.back().simples.begin(), types.back().simples.end());
    }
    if (!flat.empty()) {
      if (auto witness = try_reduce_types(flat, target)) {
        return diagram_from_witness(words, types, *witness);
      }
    }
    bool advanced = false;
    for (std::size_t k = words.size(); k-- > 0;) {
      if (++choice[k] < options[k]->size()) {
        advanced = true;
        break;
      }
      choice[k] = 0;
    }
    if (!advanced) break;
  }
  std::string sentence;
  for (const auto& w : words) sentence += (sentence.empty() ? "" : " ") + w;
  throw Error(ErrorKind::NoReduction, "'" + sentence + "'");
}

Diagram parse_sentence(std::string_view sentence, const Lexicon& lexicon,
                       const PregroupType& target) {
  const auto words = tokenize(sentence);
  return parse_sentence(std::span<const std::string>(words), lexicon, target);
}

}  // namespace qnlp
