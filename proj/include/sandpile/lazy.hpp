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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sandpile/tm.hpp"

namespace sandpile {

inline constexpr int kLazy = -1;

/// One position of a partial-rule pattern: the wildcard (matches anything,
/// including the lazy state) or a non-empty set of states. A single state is
/// the usual letter; larger sets abbreviate the family of rules obtained by
/// instantiating a quantified letter.
struct PatternElem {
  bool wild = false;
  uint64_t mask = 0;
  std::string name;  // label for sets of more than one state

  static PatternElem wildcard() { return {true, 0, "*"}; }
  static PatternElem letter(int s) { return {false, uint64_t{1} << s, {}}; }
  static PatternElem any_of(uint64_t mask, std::string name) { return {false, mask, std::move(name)}; }

  bool matches(int state) const { return wild || (state >= 0 && ((mask >> state) & 1U)); }
  bool is_letter() const { return !wild && (mask & (mask - 1)) == 0; }
  int single() const;
};

struct PartialRule {
  std::vector<PatternElem> pattern;  // length 2r + 1
  int result = 0;
};

struct LazyAutomaton {
  size_t size = 0;  // |S|, at most 64
  int radius = 1;
  std::vector<PartialRule> rules;
  std::vector<std::string> labels;

  /// Throws on all-wildcard patterns, wrong lengths or out-of-range states.
  void validate() const;
};

/// Literal per-letter rules (every set element instantiated).
std::vector<PartialRule> expand_rules(const LazyAutomaton& a);
/// One rule per line, `pi -> s`.
std::string dump_rules(const LazyAutomaton& a, bool expanded = false);

struct LazyRow {
  int64_t origin = 0;
  std::vector<int> cells;  // kLazy outside and where lazy
  int64_t time = 0;

  int at(int64_t x) const {
    const int64_t i = x - origin;
    return i < 0 || i >= static_cast<int64_t>(cells.size()) ? kLazy : cells[static_cast<size_t>(i)];
  }
  bool all_lazy() const;
  /// [min, max] of non-lazy sites; nullopt when all lazy.
  std::optional<std::pair<int64_t, int64_t>> support() const;
  void trim();
};

struct Malfunction {
  int64_t x = 0;
  int64_t time = 0;
  std::vector<size_t> rules;
};

std::variant<LazyRow, Malfunction> lazy_step(const LazyAutomaton& a, const LazyRow& row);

struct LazyTrace {
  enum class Status { Running, Halted, Malfunction };
  std::vector<LazyRow> rows;
  Status status = Status::Running;
  int64_t time = 0;  // halting or malfunction time
  std::optional<Malfunction> malfunction;
};

LazyTrace lazy_run(const LazyAutomaton& a, const LazyRow& row0, int64_t steps);

struct LazyCompilation {
  LazyAutomaton automaton;
  LazyRow initial;
  StateSpace space;
  int left_front = 0;
  int right_front = 0;
  uint64_t tape_or_head = 0;
  uint64_t all_states = 0;
};

/// Radius-2 lazy automaton simulating the machine, with wavefronts.
LazyCompilation tm_to_lazy(const TuringMachine& m);

/// Tape snapshot read from a lazy row between the wavefronts; nullopt unless
/// exactly one head and no lazy square between the fronts.
std::optional<TapeSnapshot> decode_lazy_row(const LazyCompilation& c, const TuringMachine& m,
                                            const LazyRow& row);

}  // namespace sandpile
