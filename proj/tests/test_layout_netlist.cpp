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

#include <random>

#include "doctest.h"
#include "sandpile/layout.hpp"

using namespace sandpile;

namespace {

std::vector<TuringMachine> corpus_machines() {
  return {corpus::right_mover(), corpus::one_rule_halter(), corpus::unary_incrementer(3),
          corpus::busy_beaver3()};
}

CellularAutomaton two_state_ca() {
  CellularAutomaton ca;
  ca.size = 2;
  ca.labels = {"0", "1"};
  ca.table.assign(8, 0);
  for (int l = 0; l < 2; ++l)
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r) ca.table[static_cast<size_t>((l * 2 + c) * 2 + r)] = l ^ r;
  return ca;
}

void check_ca_closure(const CellularAutomaton& ca, const CubeSpec& spec, const CARow& row0, int64_t T,
                      NetStyle style) {
  const CubeGrid grid{static_cast<int64_t>(row0.cells.size()) + T + 3, T};
  const auto n = build_cube_netlist(spec, grid, ca_init(row0, grid), style);
  const auto fired = eval_closure(n.net);
  const auto rows = ca_run(ca, row0, T);
  for (int64_t t = 0; t <= T; ++t)
    for (int64_t x = -grid.X; x <= grid.X; ++x) REQUIRE(n.read(fired, x, t) == rows[static_cast<size_t>(t)].at(x));
}

}  // namespace

TEST_CASE("bits per cube") {
  CHECK(bits_for(1) == 1);
  CHECK(bits_for(2) == 1);
  CHECK(bits_for(5) == 3);
  CHECK(bits_for(8) == 3);
  CHECK(bits_for(9) == 4);
}

TEST_CASE("two-state automaton: one gate per tuple") {
  const auto ca = two_state_ca();
  const auto spec = ca_spec(ca);
  CHECK(spec.terms.size() == 8);
  CHECK(spec.bits == 1);
  CubeGrid grid{3, 1};
  CARow row0{0, {1}, 0, 0};
  const auto n = build_cube_netlist(spec, grid, ca_init(row0, grid), NetStyle::Paper);
  size_t per_cube = 0;
  for (GateId g : n.term_gates.at({0, 1})) per_cube += g >= 0;
  CHECK(per_cube == 8);
  for (GateId g : n.term_gates.at({3, 1})) CHECK(g == -1);  // clamped column
  check_ca_closure(ca, spec, row0, 6, NetStyle::Paper);
  check_ca_closure(ca, spec, row0, 6, NetStyle::Tile);
}

TEST_CASE("five-state automaton needs three bits") {
  CellularAutomaton ca;
  ca.size = 5;
  ca.table.assign(125, 0);
  for (size_t i = 0; i < ca.table.size(); ++i) ca.table[i] = static_cast<int>(i % 5);
  const auto spec = ca_spec(ca);
  CHECK(spec.bits == 3);
  CHECK(spec.terms.size() == 125);
}

TEST_CASE("netlist closure reproduces the automaton run") {
  for (const auto& m : corpus_machines()) {
    CAPTURE(emit_machine(m));
    const auto ca = tm_to_ca(m);
    const auto row0 = encode_ca_row(ca, initial_snapshot(m));
    const int64_t T = 12;
    for (NetStyle style : {NetStyle::Paper, NetStyle::Tile}) {
      check_ca_closure(ca, ca_spec(ca), row0, T, style);
      check_ca_closure(ca, ca_spec_minimized(ca), row0, T, style);
    }
  }
}

TEST_CASE("minimized cover computes the same function") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    CellularAutomaton ca;
    ca.size = 2 + rng() % 4;
    const size_t n = ca.size;
    ca.table.resize(n * n * n);
    for (auto& v : ca.table) v = static_cast<int>(rng() % (rng() % 3 == 0 ? n : 2));
    const auto spec = ca_spec_minimized(ca);
    CHECK(spec.terms.size() <= n * n * n);
    for (size_t l = 0; l < n; ++l)
      for (size_t c = 0; c < n; ++c)
        for (size_t r = 0; r < n; ++r) {
          const int s[3] = {static_cast<int>(l), static_cast<int>(c), static_cast<int>(r)};
          size_t hits = 0;
          for (const auto& t : spec.terms) {
            bool ok = true;
            for (const auto& in : t.inputs) ok = ok && (in.mask >> s[in.dx + 1] & 1);
            if (ok) {
              ++hits;
              REQUIRE(t.result == ca.f(s[0], s[1], s[2]));
            }
          }
          REQUIRE(hits >= 1);
        }
  }
}

TEST_CASE("lazy netlist closure reproduces the lazy run") {
  for (const auto& m : corpus_machines()) {
    CAPTURE(emit_machine(m));
    const auto c = tm_to_lazy(m);
    const int64_t T = 10;
    const CubeGrid grid{static_cast<int64_t>(c.initial.cells.size()) + 2 * T + 6, T};
    const auto trace = lazy_run(c.automaton, c.initial, T);
    REQUIRE(trace.status != LazyTrace::Status::Malfunction);
    for (NetStyle style : {NetStyle::Paper, NetStyle::Tile}) {
      const auto n = build_cube_netlist(lazy_spec(c.automaton), grid, lazy_init(c.initial), style);
      const auto fired = eval_closure(n.net);
      for (size_t t = 0; t < trace.rows.size(); ++t) {
        const int64_t reach = grid.X - 2 * static_cast<int64_t>(t);
        for (int64_t x = -reach; x <= reach; ++x) REQUIRE(n.read(fired, x, static_cast<int64_t>(t)) == trace.rows[t].at(x));
      }
    }
  }
}

TEST_CASE("lazy rule inputs") {
  LazyAutomaton a;
  a.size = 5;
  a.radius = 1;
  a.labels = {"a", "b", "c", "d", "e"};
  PartialRule r;
  r.pattern = {PatternElem::wildcard(), PatternElem::letter(0), PatternElem::letter(3)};
  r.result = 1;
  a.rules.push_back(r);
  const auto spec = lazy_spec(a);
  REQUIRE(spec.terms.size() == 1);
  CHECK(spec.terms[0].inputs.size() == 2);
  CubeGrid grid{2, 1};
  const auto n = build_cube_netlist(spec, grid, {}, NetStyle::Paper);
  const GateId g = n.term_gates.at({0, 1})[0];
  REQUIRE(g >= 0);
  CHECK(n.net.inputs(g).size() == 6);
}

TEST_CASE("fired terms grow with the window height") {
  const auto m = corpus::right_mover();
  const auto c = tm_to_lazy(m);
  size_t last = 0;
  for (int64_t T : {4, 8, 12}) {
    const CubeGrid grid{40, T};
    const auto n = build_cube_netlist(lazy_spec(c.automaton), grid, lazy_init(c.initial), NetStyle::Tile);
    const size_t k = fired_terms(n, eval_closure(n.net));
    CHECK(k > last);
    last = k;
  }
}

TEST_CASE("alarm fires only on halting machines") {
  for (const auto& m : corpus_machines()) {
    CAPTURE(emit_machine(m));
    const auto ca = tm_to_ca(m);
    auto spec = ca_spec_minimized(ca);
    set_alarm(spec, ca, m);
    const auto row0 = encode_ca_row(ca, initial_snapshot(m));
    const int64_t T = 25;
    const CubeGrid grid{static_cast<int64_t>(row0.cells.size()) + T + 3, T};
    const auto n = build_cube_netlist(spec, grid, ca_init(row0, grid), NetStyle::Tile);
    const auto fired = eval_closure(n.net);
    const bool halts = tm_trace(m, T).back().halted;
    CHECK(fired[static_cast<size_t>(n.net.wire("alarm"))] == halts);
  }
}
