// Copyright 2026 The Sandpile Compiler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include "sandpile/lazy.hpp"

using namespace sandpile;

namespace {

std::vector<TuringMachine> corpus_machines() {
  return {corpus::right_mover(), corpus::one_rule_halter(), corpus::unary_incrementer(3),
          corpus::busy_beaver3()};
}

LazyAutomaton two_state(int radius) {
  LazyAutomaton a;
  a.size = 2;
  a.radius = radius;
  a.labels = {"a", "b"};
  return a;
}

int64_t position_of(const LazyRow& row, int state) {
  for (size_t i = 0; i < row.cells.size(); ++i)
    if (row.cells[i] == state) return row.origin + static_cast<int64_t>(i);
  return INT64_MIN;
}

}  // namespace

TEST_CASE("all-lazy rows stay lazy") {
  auto a = two_state(1);
  a.rules.push_back({{PatternElem::wildcard(), PatternElem::letter(0), PatternElem::wildcard()}, 1});
  LazyRow row;
  row.cells = {kLazy, kLazy, kLazy};
  auto next = std::get<LazyRow>(lazy_step(a, row));
  CHECK(next.all_lazy());
  auto tr = lazy_run(a, row, 10);
  CHECK(tr.status == LazyTrace::Status::Halted);
  CHECK(tr.time == 0);
}

TEST_CASE("a single matching rule sets the state, no match gives lazy") {
  auto a = two_state(1);
  a.rules.push_back({{PatternElem::wildcard(), PatternElem::letter(0), PatternElem::wildcard()}, 1});
  LazyRow row;
  row.cells = {0, 1};
  auto next = std::get<LazyRow>(lazy_step(a, row));
  CHECK(next.at(0) == 1);
  CHECK(next.at(1) == kLazy);
  CHECK(next.at(-1) == kLazy);
}

TEST_CASE("two overlapping rules malfunction") {
  auto a = two_state(1);
  a.rules.push_back({{PatternElem::wildcard(), PatternElem::letter(0), PatternElem::wildcard()}, 1});
  a.rules.push_back({{PatternElem::letter(1), PatternElem::letter(0), PatternElem::wildcard()}, 0});
  LazyRow row;
  row.cells = {1, 0};
  auto res = lazy_step(a, row);
  REQUIRE(std::holds_alternative<Malfunction>(res));
  CHECK(std::get<Malfunction>(res).x == 1);
  CHECK(std::get<Malfunction>(res).rules.size() == 2);
}

TEST_CASE("all-wildcard patterns are rejected") {
  auto a = two_state(1);
  a.rules.push_back({{PatternElem::wildcard(), PatternElem::wildcard(), PatternElem::wildcard()}, 0});
  CHECK_THROWS_AS(a.validate(), Error);
}

TEST_CASE("tm_to_lazy rule families and initial row") {
  auto m = corpus::one_rule_halter();
  auto c = tm_to_lazy(m);
  const auto& sp = c.space;
  CHECK(c.automaton.radius == 2);
  CHECK(c.automaton.size == 8);
  const auto dump = dump_rules(c.automaton);
  // A0 -> 1 R H: head on the left moving right arrives as h(H, g1).
  CHECK(dump.find("TH h(A,0) _t(0) TH TH -> h(H,0)") != std::string::npos);
  CHECK(dump.find("* * _< S S -> t(0)") != std::string::npos);
  CHECK(dump.find("* * _* < S -> <") != std::string::npos);
  // No rule has a final head in the centre.
  CHECK(dump.find("_h(H,") == std::string::npos);

  const auto& row = c.initial;
  CHECK(row.origin == -4);
  std::vector<int> expect{c.left_front, sp.tape(0), sp.tape(0), sp.tape(0), sp.head(m.start, 0),
                          sp.tape(0),   sp.tape(0), sp.tape(0), c.right_front};
  CHECK(row.cells == expect);
}

TEST_CASE("class-element rules behave like their instantiation") {
  auto m = corpus::one_rule_halter();
  auto c = tm_to_lazy(m);
  LazyAutomaton literal = c.automaton;
  literal.rules = expand_rules(c.automaton);
  CHECK(literal.rules.size() > c.automaton.rules.size());
  auto a = lazy_run(c.automaton, c.initial, 40);
  auto b = lazy_run(literal, c.initial, 40);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t t = 0; t < a.rows.size(); ++t) CHECK(a.rows[t].cells == b.rows[t].cells);
  CHECK(a.status == b.status);
}

TEST_CASE("compiled corpus: no malfunction, simulation, halting equivalence") {
  const int64_t budget = 120;
  for (const auto& m : corpus_machines()) {
    auto c = tm_to_lazy(m);
    auto tr = lazy_run(c.automaton, c.initial, budget);
    CHECK(tr.status != LazyTrace::Status::Malfunction);
    auto trace = tm_trace(m, budget);
    int64_t halt_step = -1;
    for (size_t t = 0; t < trace.size(); ++t)
      if (trace[t].halted) {
        halt_step = static_cast<int64_t>(t);
        break;
      }
    CHECK((tr.status == LazyTrace::Status::Halted) == (halt_step >= 0));
    const int64_t last = halt_step >= 0 ? halt_step : budget;
    for (int64_t t = 0; t <= last; ++t) {
      auto d = decode_lazy_row(c, m, tr.rows[static_cast<size_t>(t)]);
      REQUIRE(d.has_value());
      CHECK(*d == trace[static_cast<size_t>(t)]);
    }
  }
}

TEST_CASE("wavefront speed, head safety and the speed-two wave of laziness") {
  for (const auto& m : corpus_machines()) {
    auto c = tm_to_lazy(m);
    auto tr = lazy_run(c.automaton, c.initial, 120);
    const auto trace = tm_trace(m, 120);
    int64_t halt = -1;
    for (size_t t = 0; t < trace.size(); ++t)
      if (trace[t].halted) {
        halt = static_cast<int64_t>(t);
        break;
      }
    const int64_t l0 = position_of(tr.rows[0], c.left_front);
    const int64_t r0 = position_of(tr.rows[0], c.right_front);
    for (size_t t = 0; t < tr.rows.size(); ++t) {
      const auto& row = tr.rows[t];
      const int64_t l = position_of(row, c.left_front), r = position_of(row, c.right_front);
      if (l == INT64_MIN || r == INT64_MIN) break;
      CHECK(l == l0 - static_cast<int64_t>(t));
      CHECK(r == r0 + static_cast<int64_t>(t));
      if (halt < 0 || static_cast<int64_t>(t) <= halt) {
        const int64_t head = trace[t].head;
        CHECK(head - l > 2);
        CHECK(r - head > 2);
      }
    }
    if (halt < 0) continue;
    const int64_t x0 = trace[static_cast<size_t>(halt)].head;
    for (int64_t k = 1; halt + k < static_cast<int64_t>(tr.rows.size()); ++k) {
      const auto& row = tr.rows[static_cast<size_t>(halt + k)];
      // Lazy interval around the halt site has radius 2k - 1 until it meets the fronts.
      const int64_t radius = 2 * k - 1;
      const int64_t l = position_of(row, c.left_front), r = position_of(row, c.right_front);
      for (int64_t x = x0 - radius; x <= x0 + radius; ++x) {
        if (l != INT64_MIN && x <= l + 2) continue;
        if (r != INT64_MIN && x >= r - 2) continue;
        CHECK(row.at(x) == kLazy);
      }
      if (l != INT64_MIN && x0 - radius - 1 > l + 3) CHECK(row.at(x0 - radius - 1) != kLazy);
      if (r != INT64_MIN && x0 + radius + 1 < r - 3) CHECK(row.at(x0 + radius + 1) != kLazy);
    }
  }
}

TEST_CASE("right-mover runs to the budget") {
  auto c = tm_to_lazy(corpus::right_mover());
  auto tr = lazy_run(c.automaton, c.initial, 60);
  CHECK(tr.status == LazyTrace::Status::Running);
  CHECK(tr.rows.size() == 61);
}
