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

#include <random>

#include "sandpile/tm.hpp"

using namespace sandpile;

namespace {

std::vector<TuringMachine> corpus_machines() {
  return {corpus::right_mover(), corpus::one_rule_halter(), corpus::unary_incrementer(3),
          corpus::busy_beaver3()};
}

// Independent interpreter over a plain vector tape, used as the oracle.
int64_t halting_steps(const TuringMachine& m, int64_t cap) {
  std::vector<int> tape(2 * cap + 8, m.blank);
  int64_t head = cap + 4;
  for (size_t i = 0; i < m.input.size(); ++i) tape[static_cast<size_t>(head) + i] = m.input[i];
  int state = m.start;
  for (int64_t n = 0; n < cap; ++n) {
    if (m.final[static_cast<size_t>(state)]) return n;
    const auto& r = m.rule(state, tape[static_cast<size_t>(head)]);
    tape[static_cast<size_t>(head)] = r->write;
    head += r->move == Move::Left ? -1 : 1;
    state = r->next;
  }
  return m.final[static_cast<size_t>(state)] ? cap : -1;
}

}  // namespace

TEST_CASE("tm_step applies delta and moves the head") {
  auto m = corpus::right_mover();
  auto s = initial_snapshot(m);
  for (int i = 1; i <= 5; ++i) {
    s = tm_step(m, s);
    CHECK(s.head == i);
    CHECK_FALSE(s.halted);
  }
}

TEST_CASE("one-rule halter writes a 1 and halts after one step") {
  auto m = corpus::one_rule_halter();
  auto s = tm_step(m, initial_snapshot(m));
  CHECK(s.halted);
  CHECK(s.read(0, m.blank) == m.letter_index("1"));
  CHECK(s.head == 1);
  CHECK_THROWS_AS(tm_step(m, s), Error);
}

TEST_CASE("corpus halting times from the independent interpreter") {
  CHECK(halting_steps(corpus::one_rule_halter(), 100) == 1);
  CHECK(halting_steps(corpus::unary_incrementer(3), 100) == 4);
  CHECK(halting_steps(corpus::busy_beaver3(), 100) == 21);
  CHECK(halting_steps(corpus::right_mover(), 100) == -1);
  auto tr = tm_trace(corpus::busy_beaver3(), 30);
  CHECK_FALSE(tr[20].halted);
  CHECK(tr[21].halted);
}

TEST_CASE("machine file round trip and errors") {
  auto m = corpus::busy_beaver3();
  auto text = emit_machine(m);
  CHECK(emit_machine(parse_machine(text)) == text);
  CHECK_THROWS_AS(parse_machine("states A H\nalphabet 0 1\nblank 0\nstart A\nfinal H\nA 0 -> H 1 R\n"), Error);
  CHECK_THROWS_AS(parse_machine("states A\nalphabet 0\nblank 0\nstart A\nA 0 -> A 0 X\n"), Error);
}

TEST_CASE("tm_to_ca rule families") {
  auto m = corpus::busy_beaver3();
  auto ca = tm_to_ca(m);
  const auto& sp = ca.space;
  CHECK(ca.size == 11);
  const int t0 = sp.tape(0), t1 = sp.tape(1);
  // No head in sight: unchanged.
  CHECK(ca.f(t1, t0, t1) == t0);
  CHECK(ca.f(t0, t0, t0) == t0);
  // Two heads -> e.
  const int hA0 = sp.head(m.state_index("A"), 0);
  CHECK(ca.f(hA0, t0, hA0) == ca.error);
  CHECK(ca.f(ca.error, t0, t0) == ca.error);
  // C0 -> 1 L C: head on the right moving left arrives in state C.
  const int hC0 = sp.head(m.state_index("C"), 0);
  CHECK(ca.f(t0, t1, hC0) == sp.head(m.state_index("C"), 1));
  // Head on square writes the new letter.
  CHECK(ca.f(t0, hC0, t0) == t1);
  // Head on the left moving left: nothing changes.
  CHECK(ca.f(hC0, t1, t0) == t1);
  // Final head frozen.
  const int hH1 = sp.head(m.state_index("H"), 1);
  CHECK(ca.f(t0, hH1, t1) == hH1);
  CHECK(ca.f(hH1, t0, t0) == t0);
}

TEST_CASE("CA simulation matches the TM trace for the corpus") {
  for (const auto& m : corpus_machines()) {
    auto ca = tm_to_ca(m);
    auto rows = ca_run(ca, encode_ca_row(ca, initial_snapshot(m)), 30);
    auto trace = tm_trace(m, 30);
    for (size_t t = 0; t < rows.size(); ++t) {
      auto d = decode_ca_row(ca, m, rows[t]);
      REQUIRE(d.has_value());
      CHECK(*d == trace[t]);
    }
  }
}

TEST_CASE("ca_run quiescence, head translation and error spreading") {
  auto m = corpus::right_mover();
  auto ca = tm_to_ca(m);
  CARow blank;
  blank.background = ca.quiescent;
  blank.cells = {ca.quiescent, ca.quiescent};
  for (const auto& r : ca_run(ca, blank, 5))
    for (int c : r.cells) CHECK(c == ca.quiescent);

  auto rows = ca_run(ca, encode_ca_row(ca, initial_snapshot(m)), 6);
  for (size_t t = 0; t < rows.size(); ++t) CHECK(ca.space.is_head(rows[t].at(static_cast<int64_t>(t))));

  CARow err = blank;
  err.cells = {ca.error};
  auto spread = ca_run(ca, err, 3);
  for (int64_t t = 0; t <= 3; ++t)
    for (int64_t x = -t; x <= t; ++x) CHECK(spread[static_cast<size_t>(t)].at(x) == ca.error);
  CHECK(spread[3].at(4) == ca.quiescent);
}

TEST_CASE("decode_ca_row rejects malformed rows") {
  auto m = corpus::busy_beaver3();
  auto ca = tm_to_ca(m);
  auto row = encode_ca_row(ca, initial_snapshot(m));
  CHECK(decode_ca_row(ca, m, row) == initial_snapshot(m));
  auto two = row;
  two.cells.push_back(row.cells[0]);
  CHECK_FALSE(decode_ca_row(ca, m, two).has_value());
  auto e = row;
  e.cells.push_back(ca.error);
  CHECK_FALSE(decode_ca_row(ca, m, e).has_value());
  CARow none;
  none.background = ca.quiescent;
  none.cells = {ca.quiescent};
  CHECK_FALSE(decode_ca_row(ca, m, none).has_value());
}

TEST_CASE("single-head preservation on random well-formed rows") {
  auto m = corpus::busy_beaver3();
  auto ca = tm_to_ca(m);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    TapeSnapshot s;
    for (int64_t x = -5; x <= 5; ++x)
      if (rng() % 2) s.tape[x] = 1;
    s.head = static_cast<int64_t>(rng() % 11) - 5;
    do s.state = static_cast<int>(rng() % m.q());
    while (m.final[static_cast<size_t>(s.state)]);
    auto rows = ca_run(ca, encode_ca_row(ca, s), 1);
    auto d = decode_ca_row(ca, m, rows[1]);
    REQUIRE(d.has_value());
    CHECK(*d == tm_step(m, s));
  }
}
