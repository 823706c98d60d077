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

#include "sandpile/lattice.hpp"

namespace sandpile {

enum class Move : uint8_t { Left, Right };

struct Transition {
  int next = 0;    // state index
  int write = 0;   // letter index
  Move move = Move::Right;
};

/// Single-tape machine (Q, q0, F, Gamma, beta, delta) with indexed states and letters.
struct TuringMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  int start = 0;
  int blank = 0;
  std::vector<bool> final;                       // per state
  std::vector<std::optional<Transition>> delta;  // states.size() * alphabet.size()
  std::vector<int> input;                        // letters written from square 0 rightwards

  size_t q() const { return states.size(); }
  size_t g() const { return alphabet.size(); }
  const std::optional<Transition>& rule(int state, int letter) const {
    return delta[static_cast<size_t>(state) * g() + static_cast<size_t>(letter)];
  }
  int state_index(const std::string& name) const;
  int letter_index(const std::string& name) const;
  /// Throws unless delta is total on the non-final states.
  void validate() const;
};

TuringMachine parse_machine(const std::string& text);
std::string emit_machine(const TuringMachine& m);

struct TapeSnapshot {
  std::map<int64_t, int> tape;  // non-blank squares only
  int64_t head = 0;
  int state = 0;
  bool halted = false;

  int read(int64_t x, int blank) const {
    auto it = tape.find(x);
    return it == tape.end() ? blank : it->second;
  }
  friend bool operator==(const TapeSnapshot&, const TapeSnapshot&) = default;
};

TapeSnapshot initial_snapshot(const TuringMachine& m);
/// Applies delta once. Throws when the machine has already halted.
TapeSnapshot tm_step(const TuringMachine& m, const TapeSnapshot& s);
/// Snapshots 0..steps; the halted snapshot repeats once reached.
std::vector<TapeSnapshot> tm_trace(const TuringMachine& m, int64_t steps);
std::string describe(const TuringMachine& m, const TapeSnapshot& s);

/// Enumeration of t(gamma), h(q, gamma) and the special states shared by the
/// ordinary and the lazy automaton: tape states in alphabet order, head
/// states in (state, letter) order, then the specials.
struct StateSpace {
  size_t letters = 0;
  size_t states = 0;
  int tape(int letter) const { return letter; }
  int head(int state, int letter) const {
    return static_cast<int>(letters + static_cast<size_t>(state) * letters + static_cast<size_t>(letter));
  }
  int special(int k) const { return static_cast<int>(letters + states * letters) + k; }
  bool is_tape(int s) const { return s >= 0 && static_cast<size_t>(s) < letters; }
  bool is_head(int s) const {
    return static_cast<size_t>(s) >= letters && static_cast<size_t>(s) < letters + states * letters;
  }
  int head_state(int s) const { return static_cast<int>((static_cast<size_t>(s) - letters) / letters); }
  int letter_of(int s) const {
    return is_tape(s) ? s : static_cast<int>((static_cast<size_t>(s) - letters) % letters);
  }
};

/// Radius-1 automaton f: S^3 -> S stored as a dense table.
struct CellularAutomaton {
  StateSpace space;
  size_t size = 0;  // |S|
  int error = 0;    // the e state
  int quiescent = 0;
  std::vector<int> table;  // index (l * |S| + c) * |S| + r
  std::vector<std::string> labels;

  int f(int l, int c, int r) const {
    return table[(static_cast<size_t>(l) * size + static_cast<size_t>(c)) * size + static_cast<size_t>(r)];
  }
};

CellularAutomaton tm_to_ca(const TuringMachine& m);

/// Row over Z with a finite window [origin, origin + cells.size()) and the
/// quiescent state elsewhere.
struct CARow {
  int64_t origin = 0;
  std::vector<int> cells;
  int background = 0;
  int64_t time = 0;

  int at(int64_t x) const {
    const int64_t i = x - origin;
    return i < 0 || i >= static_cast<int64_t>(cells.size()) ? background : cells[static_cast<size_t>(i)];
  }
};

CARow encode_ca_row(const CellularAutomaton& ca, const TapeSnapshot& s);
std::vector<CARow> ca_run(const CellularAutomaton& ca, const CARow& row0, int64_t steps);

/// nullopt when the row holds an error state or not exactly one head.
std::optional<TapeSnapshot> decode_ca_row(const CellularAutomaton& ca, const TuringMachine& m,
                                          const CARow& row);

namespace corpus {
TuringMachine right_mover();
TuringMachine one_rule_halter();
TuringMachine unary_incrementer(int ones = 3);
TuringMachine busy_beaver3();
}  // namespace corpus

}  // namespace sandpile
