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

#include "qnlp/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "qnlp/error.hpp"

namespace qnlp {

LabeledSet parse_tsv(std::istream& in, std::string name) {
  LabeledSet set{std::move(name), {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    const std::string label = tab == std::string::npos ? "" : line.substr(0, tab);
    if (label != "0" && label != "1") {
      throw Error(ErrorKind::MalformedLine, "line " + std::to_string(lineno) +
                                                ": expected 0 or 1, a tab, then the sentence");
    }
    auto words = tokenize(line.substr(tab + 1));
    if (words.empty()) {
      throw Error(ErrorKind::MalformedLine, "line " + std::to_string(lineno) + ": empty sentence");
    }
    set.items.push_back({std::move(words), label == "1" ? 1 : 0});
  }
  return set;
}

LabeledSet load_tsv(const std::string& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return parse_tsv(in, std::move(name));
}

void write_tsv(std::ostream& out, const LabeledSet& set) {
  for (const auto& item : set.items) {
    out << item.label << '\t';
    for (std::size_t i = 0; i < item.words.size(); ++i) out << (i ? " " : "") << item.words[i];
    out << '\n';
  }
}

namespace {

const std::vector<std::string> kSubjects{"man", "woman", "person"};
const std::string kSubjectAdjective = "skillful";

struct Topic {
  int label;
  std::vector<std::string> verbs;
  std::vector<std::string> objects;
  std::string object_adjective;
};

const std::vector<Topic>& topics() {
  static const std::vector<Topic> t{
      {1, {"prepares", "cooks", "bakes"}, {"meal", "sauce", "dinner"}, "tasty"},
      {0, {"runs", "debugs"}, {"program", "application", "software"}, "useful"},
  };
  return t;
}

}  // namespace

Lexicon mc_lexicon() {
  Lexicon lex;
  const auto noun = parse_type("n");
  const auto verb = parse_type("n.r@s@n.l");
  const auto adjective = parse_type("n@n.l");
  for (const auto& s : kSubjects) lex.add(s, noun);
  lex.add(kSubjectAdjective, adjective);
  for (const auto& t : topics()) {
    for (const auto& v : t.verbs) lex.add(v, verb);
    for (const auto& o : t.objects) lex.add(o, noun);
    lex.add(t.object_adjective, adjective);
  }
  return lex;
}

std::vector<LabeledItem> mc_corpus() {
  std::vector<LabeledItem> out;
  for (const auto& t : topics()) {
    for (int pattern = 0; pattern < 4; ++pattern) {
      const bool adj_subject = pattern & 1;
      const bool adj_object = pattern & 2;
      for (const auto& s : kSubjects) {
        for (const auto& v : t.verbs) {
          for (const auto& o : t.objects) {
            std::vector<std::string> w;
            if (adj_subject) w.push_back(kSubjectAdjective);
            w.push_back(s);
            w.push_back(v);
            if (adj_object) w.push_back(t.object_adjective);
            w.push_back(o);
            out.push_back({std::move(w), t.label});
          }
        }
      }
    }
  }
  return out;
}

Splits generate_mc(std::uint64_t seed, std::array<std::size_t, 3> sizes) {
  std::array<std::vector<LabeledItem>, 2> pool;
  for (auto& item : mc_corpus()) pool[item.label].push_back(std::move(item));

  // Split sizes per label: label 1 takes the extra item of an odd split.
  std::array<std::array<std::size_t, 3>, 2> quota{};
  for (std::size_t s = 0; s < 3; ++s) {
    quota[1][s] = (sizes[s] + 1) / 2;
    quota[0][s] = sizes[s] / 2;
  }
  for (int label = 0; label < 2; ++label) {
    if (quota[label][0] + quota[label][1] + quota[label][2] > pool[label].size()) {
      throw Error(ErrorKind::ConfigError, "requested splits exceed the generated corpus");
    }
  }

  std::mt19937_64 rng(seed);
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Splits out;
    std::array<LabeledSet*, 3> sets{&out.train, &out.dev, &out.test};
    for (int label = 0; label < 2; ++label) {
      std::shuffle(pool[label].begin(), pool[label].end(), rng);
      std::size_t next = 0;
      for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t i = 0; i < quota[label][s]; ++i) sets[s]->items.push_back(pool[label][next++]);
      }
    }
    for (auto* set : sets) std::shuffle(set->items.begin(), set->items.end(), rng);

    std::set<std::string> vocab;
    for (const auto& item : out.train.items) vocab.insert(item.words.begin(), item.words.end());
    bool closed = true;
    for (const auto* set : {&out.dev, &out.test}) {
      for (const auto& item : set->items) {
        for (const auto& w : item.words) closed = closed && vocab.count(w);
      }
    }
    if (closed) return out;
  }
  throw Error(ErrorKind::VocabularyLeak, "no vocabulary-closed split after " +
                                             std::to_string(kAttempts) + " attempts");
}

Splits load_splits(const std::string& dir) {
  Splits s;
  s.train = load_tsv(dir + "/train.tsv", "train");
  s.dev = load_tsv(dir + "/dev.tsv", "dev");
  s.test = load_tsv(dir + "/test.tsv", "test");
  return s;
}

}  // namespace qnlp
