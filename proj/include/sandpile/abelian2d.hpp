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
#include <random>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "sandpile/lattice.hpp"
#include "sandpile/sparse.hpp"

namespace sandpile::net2d {

/// Firing channel: a normal node fires all four arcs; a crossover fires its
/// vertical (north/south) or horizontal (east/west) pair.
enum class Channel { Normal, Vertical, Horizontal };

struct Node {
  bool crossover = false;
  int64_t chips = 0;       // normal nodes
  int64_t vertical = 0;    // crossover counters
  int64_t horizontal = 0;
  int64_t fired = 0;
  int64_t fired_vertical = 0;
  int64_t fired_horizontal = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Two-message abelian network on Z^2: normal nodes fire at 4, crossovers
/// fire each pair at 2. Untouched sites are empty normal nodes.
class Network {
 public:
  void set_normal(int64_t x, int64_t y, int64_t chips);
  void set_crossover(int64_t x, int64_t y, int64_t vertical, int64_t horizontal);
  /// A chip arriving at (x, y) along `from`'s axis; horizontal=true for east/west arcs.
  void deliver(int64_t x, int64_t y, bool horizontal);
  void add_chip(int64_t x, int64_t y) { deliver(x, y, true); }

  Node node(int64_t x, int64_t y) const;
  std::optional<Channel> unstable_channel(int64_t x, int64_t y) const;
  void fire(int64_t x, int64_t y, Channel c);

  struct Run {
    LatticeOutcome outcome = LatticeOutcome::Stable;
    int64_t firings = 0;
  };
  Run stabilize(int64_t budget, std::mt19937_64* shuffle = nullptr);

  /// Grid rows from y = hi down to lo, cells separated by spaces; empty
  /// normal nodes print as `.`, crossovers as `h/v`.
  std::string grid(int64_t xlo, int64_t xhi, int64_t ylo, int64_t yhi) const;
  /// CSV `x,y,0,chips,N` for normals and `x,y,0,h/v,X` for crossovers.
  std::string csv() const;

  std::vector<std::pair<Site, Node>> nodes() const;

 private:
  Node& at(int64_t x, int64_t y);
  void enqueue(int64_t x, int64_t y);
  absl::flat_hash_map<uint64_t, Node> nodes_;
  std::vector<uint64_t> work_;
};

}  // namespace sandpile::net2d
