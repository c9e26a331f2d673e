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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qnlp/pregroup.hpp"

namespace qnlp {

struct LabeledItem {
  std::vector<std::string> words;
  int label = 0;

  friend bool operator==(const LabeledItem&, const LabeledItem&) = default;
};

struct LabeledSet {
  std::string name;
  std::vector<LabeledItem> items;

  std::size_t size() const { return items.size(); }
  friend bool operator==(const LabeledSet&, const LabeledSet&) = default;
};

struct Splits {
  LabeledSet train{"train", {}};
  LabeledSet dev{"dev", {}};
  LabeledSet test{"test", {}};

  friend bool operator==(const Splits&, const Splits&) = default;
};

/// `label<TAB>sentence` per line; blank lines skipped. Throws MalformedLine.
LabeledSet parse_tsv(std::istream& in, std::string name);
LabeledSet load_tsv(const std::string& path, std::string name);
void write_tsv(std::ostream& out, const LabeledSet& set);

/// The 17-word food/IT lexicon used by generate_mc.
Lexicon mc_lexicon();

/// Every sentence of the food (label 1) and IT (label 0) grammars.
std::vector<LabeledItem> mc_corpus();

/// Label-balanced, deduplicated train/dev/test draw from mc_corpus in which
/// every dev and test word occurs in train. Deterministic in `seed`.
/// Throws VocabularyLeak when no closed split is found.
Splits generate_mc(std::uint64_t seed, std::array<std::size_t, 3> sizes = {70, 30, 30});

/// Loads three TSV files named train.tsv, dev.tsv and test.tsv from `dir`.
Splits load_splits(const std::string& dir);

}  // namespace qnlp
