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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sandpile/circuit.hpp"
#include "sandpile/lazy.hpp"
#include "sandpile/tm.hpp"

namespace sandpile {

/// Cubes c(x, t) for x in [-X, X], t in [0, T].
struct CubeGrid {
  int64_t X = 0;
  int64_t T = 0;
  bool contains(int64_t x, int64_t t) const { return x >= -X && x <= X && t >= 0 && t <= T; }
  int64_t width() const { return 2 * X + 1; }
};

/// One input of a term: the states allowed in cube (x + dx, t - 1).
struct TermInput {
  int dx = 0;
  uint64_t mask = 0;
};

/// AND over its inputs (wildcard positions omitted) that sets the cube to
/// `result`.
struct Term {
  std::vector<TermInput> inputs;
  int result = 0;
};

/// Per-cube circuit shared by every cube in the grid.
struct CubeSpec {
  size_t states = 0;  // codes 0..states-1
  int bits = 1;
  int radius = 1;
  std::vector<Term> terms;
  uint64_t alarm = 0;          // states that set off the alarm
  bool blank_fill = false;     // init chains setting t = 0 cubes blank
  bool clamp = false;          // boundary columns |x| = X held blank
  int blank = 0;
  std::vector<std::string> labels;

  std::vector<uint64_t> classes() const;  // multi-state masks used by terms, sorted
  uint64_t used_states() const;           // states needing a decoder
};

int bits_for(size_t states);

/// Per-tuple terms: the literal table of a radius-1 automaton.
CubeSpec ca_spec(const CellularAutomaton& ca);
/// Greedy multi-valued cover of the same table; equal function, far fewer terms.
CubeSpec ca_spec_minimized(const CellularAutomaton& ca);
CubeSpec lazy_spec(const LazyAutomaton& a);
void set_alarm(CubeSpec& spec, const CellularAutomaton& ca, const TuringMachine& m);

/// Initial data: explicit states at t = 0 and where the blank chains start.
struct InitPlan {
  std::map<int64_t, int> explicit_states;
  std::optional<int64_t> right_chain;  // cubes x >= this are set blank
  std::optional<int64_t> left_chain;   // cubes x <= this are set blank
};

InitPlan ca_init(const CARow& row0, const CubeGrid& grid);
InitPlan lazy_init(const LazyRow& row0);

enum class NetStyle {
  Paper,  // letters read raw cell bits, terms write cell bits directly
  Tile,   // every input through a decoder/class wire, terms write a bus
};

struct CubeNetlist {
  Netlist net;
  CubeGrid grid;
  CubeSpec spec;
  NetStyle style = NetStyle::Paper;
  /// Term gates per cube, in spec order; -1 where the term was not emitted.
  std::map<std::pair<int64_t, int64_t>, std::vector<GateId>> term_gates;

  size_t cell_index(int64_t x, int64_t t, int bit) const;
  /// Decoded state per cube: a state, kLazy, or kConflict.
  int read(const FiredSet& fired, int64_t x, int64_t t) const;
  std::vector<int> read_row(const FiredSet& fired, int64_t t) const;
};

inline constexpr int kConflict = -2;

/// Wire names: `c:x:t:j:v` cell wires, `d:x:t:s` decoders, `k:x:t:i`
/// classes, `n:x:t:s` buses, `ir:x`/`il:x` init chains, `alarm`.
CubeNetlist build_cube_netlist(const CubeSpec& spec, const CubeGrid& grid, const InitPlan& init,
                               NetStyle style);

CubeNetlist ca_to_netlist(const CellularAutomaton& ca, const CARow& row0, const CubeGrid& grid);
CubeNetlist lazy_to_netlist(const LazyCompilation& c, const CubeGrid& grid);

/// Number of fired term gates.
size_t fired_terms(const CubeNetlist& n, const FiredSet& fired);

}  // namespace sandpile
