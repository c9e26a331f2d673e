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

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qnlp {

enum class Base { N, S };

/// A base type with an adjoint order: -1 is the left adjoint, +1 the right.
struct SimpleType {
  Base base = Base::N;
  int z = 0;

  friend auto operator<=>(const SimpleType&, const SimpleType&) = default;
};

enum class Side { Left, Right };

SimpleType adjoint(SimpleType t, Side side);

/// True when `left` followed by `right` reduces to the unit, i.e. the pair
/// p.p^r or p^l.p (and their iterated forms).
bool contractible(SimpleType left, SimpleType right);

/// Ordered product of simple types; the empty product is the unit.
struct PregroupType {
  std::vector<SimpleType> simples;

  bool empty() const { return simples.empty(); }
  std::size_t size() const { return simples.size(); }
  PregroupType operator+(const PregroupType& other) const;
  friend auto operator<=>(const PregroupType&, const PregroupType&) = default;
};

inline constexpr SimpleType kNoun{Base::N, 0};
inline constexpr SimpleType kSentence{Base::S, 0};

/// The single simple type `s`.
PregroupType sentence_type();

std::string to_string(SimpleType t);
/// `n.r@s@n.l` style; the unit prints as the empty string.
std::string to_string(const PregroupType& t);
SimpleType parse_simple_type(std::string_view text);
PregroupType parse_type(std::string_view text);

struct ReductionWitness {
  std::vector<std::pair<std::size_t, std::size_t>> cups;
  std::vector<std::size_t> residual;

  friend bool operator==(const ReductionWitness&,
                         const ReductionWitness&) = default;
};

/// Stack-scan reduction with backtracking over contract/skip choices,
/// contracting whenever possible first. Returns nullopt if no planar witness
/// leaves exactly `target`.
std::optional<ReductionWitness> try_reduce_types(
    std::span<const SimpleType> types, const PregroupType& target);

/// As try_reduce_types, throwing NoReduction on failure.
ReductionWitness reduce_types(std::span<const SimpleType> types,
                              const PregroupType& target);

std::string normalize_word(std::string_view word);
std::vector<std::string> tokenize(std::string_view sentence);

class Lexicon {
 public:
  /// Appends an alternative type for `word`; earlier entries win ties.
  void add(std::string_view word, PregroupType type);
  bool contains(std::string_view word) const;
  /// Throws UnknownWord.
  const std::vector<PregroupType>& lookup(std::string_view word) const;
  std::vector<std::string> words() const;
  std::size_t size() const { return entries_.size(); }

  /// One `word<TAB>type-expression` entry per line; blank lines and lines
  /// starting with '#' are skipped.
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::string& path);

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  std::map<std::string, std::vector<PregroupType>> entries_;
};

}  // namespace qnlp
