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
#include "sandpile/periodic.hpp"

using namespace sandpile;
using Behaviour = PeriodicDecision::Behaviour;

namespace {

std::string answers(const PeriodicDecision& d) {
  return {verdict_char(d.vertex), verdict_char(d.global), verdict_char(d.local)};
}

PeriodicBackground random_background(std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> period(1, 3), chips(0, 7);
  const int64_t nx = period(rng), ny = period(rng), nz = period(rng);
  std::vector<int64_t> p(static_cast<size_t>(nx * ny * nz));
  for (auto& c : p) c = chips(rng);
  return {nx, ny, nz, p};
}

}  // namespace

TEST_CASE("torus reduction") {
  auto one = to_torus(PeriodicBackground::uniform(5));
  CHECK(one.graph.size() == 1);
  CHECK(one.graph.degree(0) == 6);
  CHECK(one.chips == Chips{5});
  auto eight = to_torus({2, 2, 2, std::vector<int64_t>(8, 5)});
  CHECK(eight.graph.size() == 8);
  CHECK(eight.chips == Chips(8, 5));
  PeriodicBackground bg(3, 3, 3, std::vector<int64_t>(27, 0));
  bg.set({1, 2, 0}, 6);
  auto t = to_torus(bg);
  int unstable = 0;
  for (Vertex v = 0; v < 27; ++v) unstable += is_unstable(t.graph, t.chips, v);
  CHECK(unstable == 1);
  CHECK(bg.at({-2, -1, 3}) == 6);
}

TEST_CASE("decision table examples") {
  CHECK(answers(decide_periodic(PeriodicBackground::uniform(5))) == "NNN");
  CHECK(answers(decide_periodic(PeriodicBackground::uniform(0))) == "NNN");
  PeriodicBackground six(2, 2, 2, std::vector<int64_t>(8, 5));
  six.set({1, 1, 1}, 6);
  auto d = decide_periodic(six);
  CHECK(answers(d) == "YYY");
  CHECK(d.behaviour == Behaviour::Loops);
  CHECK(answers(decide_periodic(PeriodicBackground::uniform(6))) == "YYY");
}

TEST_CASE("stabilizing backgrounds depend on the origin") {
  // One 6 among 0s on a big enough torus topples once and settles.
  PeriodicBackground at_origin(3, 3, 3, std::vector<int64_t>(27, 0));
  at_origin.set({0, 0, 0}, 6);
  auto d = decide_periodic(at_origin);
  CHECK(d.behaviour == Behaviour::Stabilizes);
  CHECK(answers(d) == "YYN");

  PeriodicBackground elsewhere(3, 3, 3, std::vector<int64_t>(27, 0));
  elsewhere.set({1, 1, 1}, 6);
  CHECK(answers(decide_periodic(elsewhere)) == "NYN");
}

TEST_CASE("decider agrees with direct torus simulation") {
  std::mt19937_64 rng(99);
  int counts[3] = {0, 0, 0};
  for (int inst = 0; inst < 50; ++inst) {
    const auto bg = random_background(rng);
    const auto d = decide_periodic(bg);
    auto t = to_torus(bg);
    const auto run = stabilize(t.graph, t.chips, 200000);
    const bool stable_at_start = run.topplings == 0 && run.outcome == Outcome::Stable;
    ++counts[static_cast<int>(d.behaviour)];
    if (stable_at_start) {
      CHECK(d.behaviour == Behaviour::StableAtStart);
      CHECK(answers(d) == "NNN");
    } else if (run.outcome == Outcome::Stable) {
      CHECK(d.behaviour == Behaviour::Stabilizes);
      const bool fired = run.odometer[static_cast<size_t>(t.vertex({0, 0, 0}))] > 0;
      CHECK(answers(d) == std::string(fired ? "Y" : "N") + "YN");
    } else {
      CHECK(d.behaviour == Behaviour::Loops);
      CHECK(answers(d) == "YYY");
    }
  }
  CHECK(counts[2] > 0);
}

TEST_CASE("loops grow the odometer on every vertex") {
  std::mt19937_64 rng(4);
  int loops = 0;
  for (int inst = 0; inst < 40; ++inst) {
    const auto d = decide_periodic(random_background(rng));
    if (d.behaviour != Behaviour::Loops) continue;
    ++loops;
    CHECK(d.loop_odometer_after > d.loop_odometer_before);
    CHECK(d.loop_length > 0);
    for (int64_t k : d.loop_topplings) CHECK(k > 0);
  }
  CHECK(loops > 0);
}

TEST_CASE("p+f simulation") {
  PFConfiguration wire;
  wire.background = PeriodicBackground(8, 8, 8, std::vector<int64_t>(512, 0));
  for (int64_t x = 0; x < 8; ++x) wire.background.set({x, 0, 0}, 5);
  auto still = pf_simulate(wire, 10000, Box{{-20, -20, -20}, {20, 20, 20}});
  CHECK(still.run.outcome == LatticeOutcome::Stable);
  CHECK(still.run.topplings == 0);

  // A full periodic row of 5s is an infinite wire; the window stops it.
  wire.delta[{0, 0, 0}] = 1;
  auto fired = pf_simulate(wire, 10000, Box{{-20, -20, -20}, {20, 20, 20}});
  CHECK(fired.origin_topplings == 1);
  CHECK(fired.run.outcome == LatticeOutcome::WindowExceeded);

  PFConfiguration hot;
  hot.background = PeriodicBackground::uniform(6);
  CHECK_THROWS_WITH_AS(pf_simulate(hot, 10), doctest::Contains("decide-periodic"), Error);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    PFConfiguration quiet;
    std::vector<int64_t> p(8);
    for (auto& c : p) c = std::uniform_int_distribution<int64_t>(0, 4)(rng);
    quiet.background = PeriodicBackground(2, 2, 2, p);
    quiet.delta[{i, -i, 1}] = 1;
    auto r = pf_simulate(quiet, 100);
    CHECK(r.run.outcome == LatticeOutcome::Stable);
    CHECK(r.run.topplings == 0);
  }
}

TEST_CASE("pf file round trip") {
  PFConfiguration c;
  c.background = PeriodicBackground(2, 1, 2, {5, 4, 3, 0});
  c.delta[{0, 0, 0}] = 1;
  c.delta[{-3, 2, 7}] = 12;
  const std::string text = emit_pf(c);
  CHECK(parse_pf(text) == c);
  CHECK(emit_pf(parse_pf(text)) == text);
  CHECK(parse_pf("# comment\nperiods 1 1 1\npattern\n5\ndelta\n0 0 0 +1\n").delta.size() == 1);
}

TEST_CASE("pf parse errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_pf("periods 1 1\n"), doctest::Contains("line 1"), Error);
  CHECK_THROWS_WITH_AS(parse_pf("periods 1 1 1\npattern\nx\n"), doctest::Contains("line 3, column 1"),
                       Error);
  CHECK_THROWS_AS(parse_pf("periods 1 1 1\npattern\n5\ndelta\n0 0 0 +0\n"), Error);
  CHECK_THROWS_AS(parse_pf("periods 1 1 1\npattern\n-1\n"), Error);
}
