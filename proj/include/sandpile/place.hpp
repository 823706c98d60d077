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
#include <set>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "sandpile/circuit.hpp"
#include "sandpile/gadgets.hpp"
#include "sandpile/layout.hpp"
#include "sandpile/sparse.hpp"

namespace sandpile {

/// The instance of a tile wire owned by the cube (x + du, t + dw).
struct TileRef {
  std::string net;
  int du = 0;
  int dw = 0;
};

struct TileGate {
  GateKind kind = GateKind::And;
  std::vector<TileRef> inputs;
  std::vector<TileRef> outputs;
};

/// The circuit every cube carries. Wires are per-cube instances; `periodic`
/// wires are one net shared by all cubes.
struct TileCircuit {
  std::vector<std::string> nets;
  std::vector<TileGate> gates;
  std::set<std::string> periodic;
  std::set<std::string> init_targets;  // wires that may receive initial chips
  std::vector<std::string> cells;      // cell names, zero/one wires are `<name>:0`, `<name>:1`

  void add_net(const std::string& name) { nets.push_back(name); }
};

/// Factored tile circuit: `c:j:v` cell wires, `d:s` decoders, `k:i` classes,
/// `n:s` buses, `ir`/`il` init chains, `alarm`.
TileCircuit tile_circuit(const CubeSpec& spec);
/// A plain netlist as a single tile with no neighbours.
TileCircuit tile_circuit(const Netlist& net);
/// Tile wire instance receiving an initial chip.
struct InitWire {
  std::string net;
  int64_t x = 0;
  int64_t t = 0;
};

std::vector<InitWire> init_wires(const CubeSpec& spec, const InitPlan& init);

std::string instance_name(const std::string& net, int64_t x, int64_t t);  // `net@x:t`

/// Every cube of the grid as one netlist. Gates reading a wire outside the
/// grid are dropped, as are outputs landing outside it.
Netlist flatten(const TileCircuit& tile, const CubeGrid& grid, const std::vector<InitWire>& init = {});

enum class ElementKind { And, Or, Diode, Pad };

struct Element {
  ElementKind kind = ElementKind::Pad;
  int arity = 0;
  Gadget gadget;  // centred on the origin, in the u-v plane
};

/// Port of an element placed in the cube (home + du, home + dw).
struct Terminal {
  int element = 0;
  std::string port;
  int du = 0;
  int dw = 0;
};

struct PhysNet {
  std::string name;
  std::vector<Terminal> terminals;
  bool periodic = false;
  std::vector<Site> fixed_nodes;  // routing-lattice nodes of the home cube the net must reach
};

struct PhysCircuit {
  std::vector<Element> elements;
  std::vector<PhysNet> nets;
  std::map<std::string, int> index;
  int net(const std::string& name) const;
};

/// Gadgets and nets for a tile. Gates with one input become diodes; a gate
/// output feeding a shared or initialised net goes through a diode.
PhysCircuit lower(const TileCircuit& tile);

/// One site of the tile footprint. Route sites record which cube owns them:
/// the site in cube T belongs to the instance of cube T - (du, dw).
struct TileSite {
  int8_t chips = 0;
  int8_t du = 0;
  int8_t dw = 0;
  int32_t net = -1;      // -1 inside a gadget
  int32_t element = -1;  // -1 on a route
};

struct PlaceOptions {
  int K = 0;  // routing lattice side; 0 picks a start size
  int max_n = 1024;
  int layer_pitch = 5;
  int corridor = 1;  // free lattice nodes kept around each gadget box
  double growth = 1.25;
};

/// Placed and routed tile of side n = 3K + 1 (routing lattice at 2 + 3k).
struct PlacedTile {
  int K = 0;
  int64_t n = 0;
  PhysCircuit circuit;
  std::vector<Site> anchors;  // per element, local fine coordinates
  absl::flat_hash_map<Site, TileSite> sites;
  /// Per net: a local site on the net and the offset of its owner.
  std::vector<std::pair<Site, std::pair<int, int>>> probe;
  int attempts = 0;
  int64_t route_nodes = 0;

  const TileSite* at(const Site& local) const;
  Site net_site(int net, int64_t x, int64_t t) const;  // lattice site of the instance of cube (x, t)
};

std::shared_ptr<const PlacedTile> place_and_route(const PhysCircuit& c, const PlaceOptions& opt = {});

enum class VertexClass { Body, Face, Edge, Corner };
VertexClass vertex_class(const Site& s, int64_t n);

struct AuditReport {
  bool ok = true;
  std::vector<std::string> problems;
  int64_t max_body_deposit = 0;
  int64_t max_face_deposit = 0;
};

/// Static spacing check over the periodic tile: chip-free body sites see at
/// most two footprint neighbours, face sites one, edge and corner sites none,
/// and footprints of different nets or gadgets touch only at their ports.
AuditReport audit(const PlacedTile& t);

}  // namespace sandpile
