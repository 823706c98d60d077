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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sandpile/layout.hpp"
#include "sandpile/periodic.hpp"
#include "sandpile/place.hpp"
#include "sandpile/sparse.hpp"
#include "sandpile/tm.hpp"

namespace sandpile {

enum class Target { VertexPrediction, GlobalHalting, LocalHalting };

std::string to_string(Target t);
/// Accepts `vertex`, `global`, `local` and the full enum names.
Target parse_target(const std::string& s);

struct CompilePlan {
  Target target = Target::VertexPrediction;
  TuringMachine machine;
  std::string machine_path;  // as written in a plan file
  CubeGrid window;
  int K = 0;  // routing lattice side, 0 for automatic
};

std::string emit_plan(const CompilePlan& p);
/// `target`, `machine`, `window X,T` and optional `side K` lines. The machine
/// path is resolved against `base_dir`. Errors carry line and column.
CompilePlan parse_plan(const std::string& text, const std::string& base_dir = ".");

struct DesignOptions {
  bool windowed = true;      // only instances owned by window cubes are present
  bool origin_alarm = false; // alarm routed through lattice node (0,0,0) of cube (0,0)
  bool centre_alarm = false; // translate so that node sits at the lattice origin
  bool bomb = false;         // bomb chips on every chip-free site, alarm reconnected to the origin
  PlaceOptions place;
};

/// A placed tile repeated over the lattice plus finitely many added chips.
/// Cube (x, t) occupies [n x, n x + n) x [0, n) x [n t, n t + n) before the
/// shift is applied.
struct PlacedDesign {
  Target target = Target::VertexPrediction;
  CubeSpec spec;
  CubeGrid grid;
  InitPlan init;
  TileCircuit circuit;
  std::shared_ptr<const PlacedTile> tile;
  DesignOptions options;
  Site shift;                      // lattice site = tile-frame site + shift
  std::map<Site, int64_t> delta;   // lattice sites
  std::vector<Site> reconnect;     // lattice sites of the origin reconnect wire

  int64_t n() const { return tile->n; }
  int64_t periodic_chips(const Site& lattice) const;  // the repeating tile, bomb chips included
  int64_t background_chips(const Site& lattice) const;
  Background background() const;
  /// Background plus delta, ready to stabilize.
  SparseLattice lattice() const;

  Site site(const std::string& net, int64_t x, int64_t t) const;
  bool fired(const SparseLattice& lat, const std::string& net, int64_t x, int64_t t) const;
  /// Decoded cube state: a state, kLazy or kConflict.
  int read(const SparseLattice& lat, int64_t x, int64_t t) const;
  std::vector<int> read_row(const SparseLattice& lat, int64_t t) const;

  /// Elements of the given kind in grid cubes whose output stub toppled.
  int64_t fired_elements(const SparseLattice& lat, ElementKind kind) const;

  /// The periodic tile (shift applied) and the delta. Bomb chips are part of
  /// the background; the window restriction is a simulation choice and is not
  /// part of the exported configuration.
  PFConfiguration pf() const;
  /// `instance x y z` for every tile wire instance of the grid, then `origin`.
  std::string port_map() const;
};

PlacedDesign build_design(const CubeSpec& spec, const CubeGrid& grid, const InitPlan& init,
                          const DesignOptions& opt);

/// A plain netlist placed as a single cube (grid 0,0) with its init wires
/// carrying one chip each.
PlacedDesign build_netlist_design(const Netlist& net, const PlaceOptions& opt = {});

/// VertexPrediction: CA pipeline, alarm through the origin, windowed.
/// GlobalHalting: lazy pipeline, no alarm, infinite periodic background.
/// LocalHalting: the VertexPrediction layout with bomb chips and the alarm
/// reconnected to the corner at the origin.
PlacedDesign compile(const CompilePlan& plan);

/// Bomb chip count for a chip-free site of the periodic tile.
int64_t bomb_chips(VertexClass c);

}  // namespace sandpile
