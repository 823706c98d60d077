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

#include "sandpile/lattice.hpp"

namespace sandpile {

using Vertex = int32_t;

/// Finite directed multigraph; out-degree is the length of the adjacency list.
class Graph {
 public:
  Graph() = default;
  explicit Graph(size_t n) : adj_(n) {}

  size_t size() const { return adj_.size(); }
  void add_arc(Vertex from, Vertex to);
  void add_edge(Vertex a, Vertex b);  // two opposite arcs

  const std::vector<Vertex>& out(Vertex v) const { return adj_.at(check(v)); }
  int64_t degree(Vertex v) const { return static_cast<int64_t>(out(v).size()); }

  bool contains(Vertex v) const { return v >= 0 && static_cast<size_t>(v) < adj_.size(); }
  size_t component_count() const;
  // Simple undirected: every arc has a matching reverse arc, no loops, no duplicates.
  bool is_simple_undirected() const;
  size_t undirected_edge_count() const;
  // Largest BFS eccentricity; -1 if disconnected.
  int64_t diameter() const;

  static Graph torus(int64_t nx, int64_t ny, int64_t nz);

 private:
  Vertex check(Vertex v) const {
    if (!contains(v)) throw Error("vertex " + std::to_string(v) + " not in graph");
    return v;
  }
  std::vector<std::vector<Vertex>> adj_;
};

using Chips = std::vector<int64_t>;
using Odometer = std::vector<int64_t>;
using TopplingSequence = std::vector<Vertex>;

enum class Outcome { Stable, BudgetExhausted };

struct StabilizeResult {
  Chips chips;
  Odometer odometer;
  Outcome outcome = Outcome::Stable;
  int64_t topplings = 0;
};

bool is_unstable(const Graph& g, const Chips& c, Vertex v);
void topple(const Graph& g, Chips& c, Vertex v);

/// Worklist stabilization. With `shuffle` set the next vertex is drawn
/// uniformly from the worklist instead of FIFO order.
StabilizeResult stabilize(const Graph& g, Chips chips, int64_t budget,
                          std::mt19937_64* shuffle = nullptr);

struct SequenceResult {
  Chips chips;
  bool legal = true;
};

/// Applies topplings in order, including at stable vertices.
SequenceResult run_sequence(const Graph& g, Chips chips, const TopplingSequence& seq);

struct FiniteDecision {
  bool halts = false;
  int64_t cap = 0;
  StabilizeResult run;
};

/// Halting on a finite simple undirected graph with the 2nmd toppling cap.
FiniteDecision decide_finite_halting(const Graph& g, const Chips& chips);

struct GraphConfig {
  Graph graph;
  Chips chips;
};

/// `vertices N`, then `edge A B` or `arc A B` lines, then `chips c0 ... cN-1`.
/// Errors carry line and column.
GraphConfig parse_graph_config(const std::string& text);
std::string emit_graph_config(const GraphConfig& g);

}  // namespace sandpile
