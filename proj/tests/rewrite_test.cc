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

#include <random>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "test_util.hpp"
#include "qnlp/circuit.hpp"
#include "qnlp/parser.hpp"

using namespace qnlp;

namespace {

Diagram alice_likes_bob() {
  Lexicon lex;
  lex.add("Alice", parse_type("n"));
  lex.add("Bob", parse_type("n"));
  lex.add("likes", parse_type("n.r@s@n.l"));
  return parse_sentence("Alice likes Bob", lex);
}

// A noun wire bent through a cap: the cup joins the noun to the cap's left
// leg and the cap's right leg stays open.
Diagram snake() {
  Diagram d;
  const auto a = d.add_word("a", parse_type("n"));
  const auto cap = d.add_box({"cap", {}, parse_type("n.r@n"), BoxTag::Cap});
  const auto c0 = d.add_wire(cap, 0);
  const auto c1 = d.add_wire(cap, 1);
  d.add_cup(a[0], c0);
  d.add_open(c1);
  return d;
}

const Diagram& random_corpus_diagram(std::mt19937_64& rng) {
  const auto& c = oracle::corpus_diagrams();
  return c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng)];
}

}  // namespace

TEST(rewrite, scheme_names) {
  for (auto s : {RewriteScheme::Re, RewriteScheme::ReNorm, RewriteScheme::ReNormCur,
                 RewriteScheme::ReNormCurNorm}) {
    ASSERT_EQ(parse_scheme(to_string(s)), s);
  }
  ASSERT_EQ(parse_scheme("re_norm_cur_norm"), RewriteScheme::ReNormCurNorm);
  ASSERT_EQ(kind_of([] { parse_scheme("norm"); }), ErrorKind::ConfigError);
}

TEST(rewrite, raw_scheme_is_identity) {
  for (std::size_t i = 0; i < oracle::corpus_diagrams().size(); i += 5) {
    const auto& d = oracle::corpus_diagrams()[i];
    ASSERT_EQ(rewrite(d, RewriteScheme::Re), d);
  }
}

TEST(rewrite, curried_alice_likes_bob) {
  const Diagram c = rewrite(alice_likes_bob(), RewriteScheme::ReNormCur);
  ASSERT_TRUE(validate(c).empty());
  ASSERT_TRUE(c.cups.empty());
  ASSERT_EQ(count_stats(c).open_types, (std::vector<SimpleType>{kSentence}));
  std::size_t curried = 0;
  for (const auto& b : c.boxes) {
    if (b.tag != BoxTag::Curried) continue;
    ++curried;
    ASSERT_EQ(b.name, "likes");
    ASSERT_EQ(b.dom, parse_type("n@n"));
    ASSERT_EQ(b.cod, parse_type("s"));
  }
  ASSERT_EQ(curried, 1u);
}

TEST(rewrite, snake_is_yanked) {
  const Diagram d = snake();
  ASSERT_TRUE(validate(d).empty());
  const Diagram nf = rewrite(d, RewriteScheme::ReNorm);
  ASSERT_TRUE(validate(nf).empty());
  ASSERT_EQ(nf.wires.size() + 2, d.wires.size());
  ASSERT_EQ(nf.boxes.size(), 1u);
  ASSERT_TRUE(nf.cups.empty());
  ASSERT_EQ(nf.open_wires.size(), 1u);

  std::mt19937_64 rng(1);
  const auto a = oracle::random_assignment(d, rng);
  const auto traced = normal_form_traced(d);
  ASSERT_LT(max_abs_diff(eval_tensor(traced.diagram, transport(a, traced.origin)), eval_tensor(d, a)),
            1e-12);
}

TEST(rewrite, right_snake_is_yanked) {
  // Mirror image: the cap's right leg meets the noun from the left side.
  Diagram d;
  const auto cap = d.add_box({"cap", {}, parse_type("n@n.l"), BoxTag::Cap});
  const auto c0 = d.add_wire(cap, 0);
  const auto c1 = d.add_wire(cap, 1);
  const auto a = d.add_word("a", parse_type("n"));
  d.add_open(c0);
  d.add_cup(c1, a[0]);
  ASSERT_TRUE(validate(d).empty());
  const auto nf = normal_form_traced(d);
  ASSERT_EQ(nf.diagram.boxes.size(), 1u);
  ASSERT_EQ(nf.diagram.wires.size(), 1u);
  ASSERT_EQ(nf.origin[0].source, 1u);
  std::mt19937_64 rng(2);
  const auto asg = oracle::random_assignment(d, rng);
  ASSERT_LT(max_abs_diff(eval_tensor(nf.diagram, transport(asg, nf.origin)), eval_tensor(d, asg)),
            1e-12);
}

TEST(rewrite, normal_form_fixpoints) {
  const Diagram d = alice_likes_bob();
  ASSERT_EQ(normal_form(d), d);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Diagram bent = bend_adjoints(random_corpus_diagram(rng)).diagram;
    const Diagram once = normal_form(bent);
    ASSERT_EQ(normal_form(once), once);
  }
}

TEST(rewrite, curry_without_adjoints_is_identity) {
  Diagram d;
  d.add_open(d.add_word("s", parse_type("s"))[0]);
  ASSERT_EQ(curry(d), d);
}

TEST(rewrite, adjective_becomes_noun_map) {
  Lexicon lex;
  lex.add("tasty", parse_type("n@n.l"));
  lex.add("sauce", parse_type("n"));
  const Diagram d = parse_sentence("tasty sauce", lex, parse_type("n"));
  const auto traced = curry_traced(d);
  const Diagram& c = traced.diagram;
  ASSERT_TRUE(c.cups.empty());
  ASSERT_EQ(c.boxes.size(), 2u);
  const Box& adj = c.boxes[1];
  ASSERT_EQ(adj.tag, BoxTag::Curried);
  ASSERT_EQ(adj.dom, parse_type("n"));
  ASSERT_EQ(adj.cod, parse_type("n"));
  std::mt19937_64 rng(4);
  const auto a = oracle::random_assignment(d, rng);
  const auto b = transport(a, traced.origin);
  // The curried adjective is the transposed matrix of the original.
  const Tensor& m = a.tensors.at(0);
  const Tensor& mc = b.tensors.at(1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) ASSERT_EQ(mc.at({i, j}), m.at({j, i}));
  ASSERT_LT(max_abs_diff(eval_tensor(c, b), eval_tensor(d, a)), 1e-12);
}

TEST(rewrite, curry_rejects_adjoint_to_adjoint_cups) {
  Diagram d;
  const auto a = d.add_word("a", parse_type("s@n.l.l"));
  const auto b = d.add_word("b", parse_type("n.l"));
  d.add_cup(a[1], b[0]);
  d.add_open(a[0]);
  ASSERT_TRUE(validate(d).empty());
  ASSERT_EQ(kind_of([&] { curry(d); }), ErrorKind::CurryUnsupported);
}

TEST(rewrite, semantics_preserved_on_random_corpus) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Diagram& d = random_corpus_diagram(rng);
    const auto a = oracle::random_assignment(d, rng);
    const Tensor ref = eval_tensor(d, a);
    // Parsed diagrams are already canonical, so the same assignment applies.
    ASSERT_LT(max_abs_diff(eval_tensor(normal_form(d), a), ref), 1e-10);
    for (auto scheme : {RewriteScheme::ReNorm, RewriteScheme::ReNormCur, RewriteScheme::ReNormCurNorm}) {
      const auto r = rewrite_traced(d, scheme);
      ASSERT_TRUE(validate(r.diagram).empty());
      ASSERT_LT(max_abs_diff(eval_tensor(r.diagram, transport(a, r.origin)), ref), 1e-10);
    }
    const auto bent = bend_adjoints(d);
    ASSERT_LT(max_abs_diff(eval_tensor(bent.diagram, transport(a, bent.origin)), ref), 1e-10);
    ASSERT_EQ(normal_form(bent.diagram), curry(d));
  }
}

TEST(rewrite, cup_counts_are_monotone) {
  for (const auto& d : oracle::corpus_diagrams()) {
    const auto full = rewrite(d, RewriteScheme::ReNormCurNorm).cups.size();
    const auto norm = rewrite(d, RewriteScheme::ReNorm).cups.size();
    ASSERT_LE(full, norm);
    ASSERT_LE(norm, d.cups.size());
  }
}

TEST(rewrite, currying_reduces_circuit_parameters) {
  CircuitAnsatzConfig cfg;
  cfg.kind = CircuitAnsatz::IQP;
  cfg.n_layers = 2;
  cfg.n_single_qubit_params = 3;
  for (const auto& d : oracle::corpus_diagrams()) {
    ASSERT_LE(param_count(rewrite(d, RewriteScheme::ReNormCurNorm), cfg), param_count(d, cfg));
  }
}
