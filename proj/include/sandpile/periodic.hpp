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

#include "sandpile/graph.hpp"
#include "sandpile/sparse.hpp"

namespace sandpile {

/// chips(x, y, z) = pattern(x mod nx, y mod ny, z mod nz).
class PeriodicBackground {
 public:
  PeriodicBackground() = default;
  PeriodicBackground(int64_t nx, int64_t ny, int64_t nz, std::vector<int64_t> pattern);
  static PeriodicBackground uniform(int64_t chips) { return {1, 1, 1, {chips}}; }

  int64_t nx() const { return nx_; }
  int64_t ny() const { return ny_; }
  int64_t nz() const { return nz_; }
  const std::vector<int64_t>& pattern() const { return pattern_; }

  size_t index(int64_t x, int64_t y, int64_t z) const;
  int64_t at(const Site& s) const { return pattern_[index(s.x, s.y, s.z)]; }
  void set(const Site& s, int64_t chips) { pattern_.at(index(s.x, s.y, s.z)) = chips; }
  int64_t max_entry() const;

  Background as_background() const;

  friend bool operator==(const PeriodicBackground&, const PeriodicBackground&) = default;

 private:
  int64_t nx_ = 1, ny_ = 1, nz_ = 1;
  std::vector<int64_t> pattern_{0};
};

/// Periodic background plus finitely many added chips.
struct PFConfiguration {
  PeriodicBackground background;
  std::map<Site, int64_t> delta;

  friend bool operator==(const PFConfiguration&, const PFConfiguration&) = default;
};

struct TorusState {
  Graph graph;
  Chips chips;
  Odometer odometer;
  int64_t nx = 1, ny = 1, nz = 1;
  Vertex vertex(const Site& s) const;
};

TorusState to_torus(const PeriodicBackground& bg);

enum class Verdict { No, Yes, Conditional };

struct PeriodicDecision {
  enum class Behaviour { StableAtStart, Stabilizes, Loops };
  Behaviour behaviour = Behaviour::StableAtStart;
  Verdict vertex = Verdict::No;
  Verdict global = Verdict::No;
  Verdict local = Verdict::No;
  bool origin_fired = false;
  // Number of parallel toppling rounds until a stable or repeated state.
  int64_t trace_length = 0;
  int64_t loop_start = -1;
  int64_t loop_length = 0;
  // Total topplings at the first and the repeated occurrence of the loop state.
  int64_t loop_odometer_before = 0;
  int64_t loop_odometer_after = 0;
  std::vector<int64_t> loop_topplings;  // per-vertex topplings across one period
};

char verdict_char(Verdict v);

/// Runs the torus with synchronous rounds, hashing full states, until stable
/// or a state repeats, and maps the outcome to the three answers.
PeriodicDecision decide_periodic(const PeriodicBackground& bg);

struct PFRun {
  SparseLattice lattice;
  LatticeRun run;
  int64_t origin_topplings = 0;
};

/// Throws if the background is not stable everywhere.
PFRun pf_simulate(const PFConfiguration& cfg, int64_t budget,
                  const std::optional<Box>& window = std::nullopt);

std::string emit_pf(const PFConfiguration& cfg);
/// Throws Error carrying `line L, column C` on malformed input.
PFConfiguration parse_pf(const std::string& text);

}  // namespace sandpile
