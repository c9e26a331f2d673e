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

#include "qnlp/pregroup.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qnlp/error.hpp"

namespace qnlp {

SimpleType adjoint(SimpleType t, Side side) {
  return {t.base, side == Side::Left ? t.z - 1 : t.z + 1};
}

bool contractible(SimpleType left, SimpleType right) {
  return left.base == right.base && right.z == left.z + 1;
}

PregroupType PregroupType::operator+(const PregroupType& other) const {
  PregroupType out = *this;
  out.simples.insert(out.simples.end(), other.simples.begin(),
                     other.simples.end());
  return out;
}

PregroupType sentence_type() { return PregroupType{{kSentence}}; }

std::string to_string(SimpleType t) {
  std::string out = t.base == Base::N ? "n" : "s";
  for (int i = 0; i < t.z; ++i) out += ".r";
  for (int i = 0; i > t.z; --i) out += ".l";
  return out;
}

std::string to_string(const PregroupType& t) {
  std::string out;
  for (std::size_t i = 0; i < t.simples.size(); ++i) {
    if (i) out += "@";
    out += to_string(t.simples[i]);
  }
  return out;
}

SimpleType parse_simple_type(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::ParseError,
                 "bad simple type '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  SimpleType t;
  if (text[0] == 'n') {
    t.base = Base::N;
  } else if (text[0] == 's') {
    t.base = Base::S;
  } else {
    throw fail();
  }
  std::string_view rest = text.substr(1);
  while (!rest.empty()) {
    if (rest.substr(0, 2) == ".l") {
      --t.z;
    } else if (rest.substr(0, 2) == ".r") {
      ++t.z;
    } else {
      throw fail();
    }
    rest.remove_prefix(2);
  }
  return t;
}

PregroupType parse_type(std::string_view text) {
  PregroupType out;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find('@', start);
    out.simples.push_back(parse_simple_type(text.substr(start, at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

namespace {

struct StackScan {
  std::span<const SimpleType> types;
  const PregroupType& target;
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> cups;

  bool search(std::size_t pos) {
    const std::size_t remaining = types.size() - pos;
    // Each later type can cancel at most one stacked type.
    if (stack.size() > target.size() + remaining) return false;
    if (pos == types.size()) {
      if (stack.size() != target.size()) return false;
      for (std::size_t i = 0; i < stack.size(); ++i) {
        if (types[stack[i]] != target.simples[i]) return false;
      }
      return true;
    }
    const SimpleType next = types[pos];
    if (!stack.empty() && contractible(types[stack.back()], next)) {
      const std::size_t top = stack.back();
      stack.pop_back();
      cups.emplace_back(top, pos);
      if (search(pos + 1)) return true;
      cups.pop_back();
      stack.push_back(top);
    }
    stack.push_back(pos);
    if (search(pos + 1)) return true;
    stack.pop_back();
    return false;
  }
};

}  // namespace

std::optional<ReductionWitness> try_reduce_types(
    std::span<const SimpleType> types, const PregroupType& target) {
  StackScan scan{types, target, {}, {}};
  if (!scan.search(0)) return std::nullopt;
  return ReductionWitness{std::move(scan.cups), std::move(scan.stack)};
}

ReductionWitness reduce_types(std::span<const SimpleType> types,
                              const PregroupType& target) {
  if (auto w = try_reduce_types(types, target)) return *std::move(w);
  std::string seq;
  for (const auto& t : types) seq += to_string(t) + " ";
  throw Error(ErrorKind::NoReduction,
              "[" + seq + "] does not reduce to " + to_string(target));
}

std::string normalize_word(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  std::string word;
  while (in >> word) {
    while (!word.empty() && (word.back() == '.' || word.back() == ',')) {
      word.pop_back();
    }
    if (!word.empty()) out.push_back(word);
  }
  return out;
}

void Lexicon::add(std::string_view word, PregroupType type) {
  entries_[normalize_word(word)].push_back(std::move(type));
}

bool Lexicon::contains(std::string_view word) const {
  return entries_.count(normalize_word(word)) > 0;
}

const std::vector<PregroupType>& Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(normalize_word(word));
  if (it == entries_.end()) {
    throw Error(ErrorKind::UnknownWord, std::string(word));
  }
  return it->second;
}

std::vector<std::string> Lexicon::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [w, _] : entries_) out.push_back(w);
  return out;
}

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorKind::MalformedLine,
                  "lexicon line " + std::to_string(lineno));
    }
    lex.add(line.substr(0, tab), parse_type(line.substr(tab + 1)));
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return parse(in);
}

}  // namespace qnlp
