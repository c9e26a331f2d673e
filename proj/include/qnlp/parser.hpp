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

#include <span>
#include <string>

#include "qnlp/diagram.hpp"
#include "qnlp/pregroup.hpp"

namespace qnlp {

/// One Word box per word, cups from the first reduction witness found
/// (lexical alternatives tried in lexicon order, last word varying fastest),
/// and the residual wires left open. Throws UnknownWord or NoReduction.
Diagram parse_sentence(std::span<const std::string> words, const Lexicon& lexicon,
                       const PregroupType& target = sentence_type());

Diagram parse_sentence(std::string_view sentence, const Lexicon& lexicon,
                       const PregroupType& target = sentence_type());

/// Builds the diagram for already-chosen word types and a witness over
/// their flattened simple types.
Diagram diagram_from_witness(std::span<const std::string> words,
                             std::span<const PregroupType> types,
                             const ReductionWitness& witness);

}  // namespace qnlp
