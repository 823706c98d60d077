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
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "sandpile/graph.hpp"
#include "sandpile/lattice.hpp"

namespace sandpile {

/// Chip count of an unmaterialized site. Must be stable (below the degree).
using Background = std::function<int64_t(const Site&)>;

inline Background empty_background() {
  return [](const Site&) { return int64_t{0}; };
}

/// Axis-aligned closed box of sites.
struct Box {
  Site lo;
  Site hi;
  bool contains(const Site& s) const {
    return s.x >= lo.x && s.x <= hi.x && s.y >= lo.y && s.y <= hi.y && s.z >= lo.z && s.z <= hi.z;
  }
  // Distance from s to the outside of the box, 0 on the boundary layer.
  int64_t margin(const Site& s) const;
  Box grown(int64_t by) const {
    return {{lo.x - by, lo.y - by, lo.z - by}, {hi.x + by, hi.y + by, hi.z + by}};
  }
};

enum class LatticeOutcome { Stable, BudgetExhausted, WindowExceeded };

std::string to_string(LatticeOutcome o);

struct LatticeRun {
  LatticeOutcome outcome = LatticeOutcome::Stable;
  int64_t topplings = 0;
  std::string diagnostic;
};

/// Sandpile on Z^3 (or Z^2) with a stable background and a sparse set of
/// materialized sites. Only sites that received chips or were set explicitly
/// are stored; odometers of untouched sites are implicitly zero.
class SparseLattice {
 public:
  explicit SparseLattice(int dim = 3, Background bg = empty_background());

  int dim() const { return dim_; }
  int64_t degree() const { return dim_ == 3 ? 6 : 4; }

  int64_t chips(const Site& s) const;
  int64_t odometer(const Site& s) const;
  void add(const Site& s, int64_t k);
  void set(const Site& s, int64_t k);

  bool is_unstable(const Site& s) const { return chips(s) >= degree(); }
  /// Unconditional toppling; may drive the count negative.
  void topple(const Site& s);

  /// Continues stabilization from the current state. `budget` bounds the
  /// number of topplings performed by this call. A toppling within two sites
  /// of the window boundary aborts with WindowExceeded.
  LatticeRun stabilize(int64_t budget, const std::optional<Box>& window = std::nullopt,
                       std::mt19937_64* shuffle = nullptr);

  /// Records the running toppling count (1-based) at the first toppling of `s`.
  void watch(const Site& s) {
    watch_key_ = pack(s);
    watching_ = true;
    watch_step_ = odometer(s) > 0 ? 0 : -1;
  }
  int64_t first_toppling() const { return watch_step_; }  // -1 if not yet

  size_t materialized() const { return cells_.size(); }
  int64_t total_topplings() const { return total_topplings_; }
  int64_t max_odometer() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [k, c] : cells_) f(unpack(k), int64_t{c.chips}, int64_t{c.odo});
  }

  /// Sites with non-zero odometer, sorted.
  std::vector<std::pair<Site, int64_t>> odometer_entries() const;

  /// CSV `x,y,z,chips` for every site of the box with a non-zero count.
  std::string export_csv(const Box& box) const;
  /// Text grid for the z = const slice of the box, top row is the largest y.
  std::string export_slice(const Box& box, int64_t z) const;

 private:
  // Eight bytes per site; the map dominates memory on large designs.
  struct Cell {
    int32_t chips = 0;
    uint32_t odo : 31 = 0;
    uint32_t queued : 1 = 0;
  };
  Cell& cell(uint64_t key);
  void enqueue_if_unstable(uint64_t key, Cell& c);

  int dim_;
  Background bg_;
  absl::flat_hash_map<uint64_t, Cell> cells_;
  std::deque<uint64_t> work_;
  int64_t total_topplings_ = 0;
  uint64_t watch_key_ = 0;
  bool watching_ = false;
  int64_t watch_step_ = -1;
};

/// Restarts a stabilization with a window grown geometrically until no
/// toppling comes within two sites of its boundary. `make` builds a fresh
/// lattice for each attempt.
LatticeRun stabilize_in_growing_window(const std::function<SparseLattice()>& make,
                                       Box window, int64_t budget, int max_attempts,
                                       SparseLattice& out);

}  // namespace sandpile
