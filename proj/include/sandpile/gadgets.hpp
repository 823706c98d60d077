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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sandpile/lattice.hpp"
#include "sandpile/sparse.hpp"

namespace sandpile {

enum class PortRole { Input, Output };

struct Port {
  std::string name;
  Site site;
  PortRole role = PortRole::Input;
};

/// Signed permutation matrix acting on lattice offsets.
struct Orientation {
  std::array<std::array<int, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  Site apply(const Site& s) const;
  Orientation then(const Orientation& o) const;  // first *this, then o

  static Orientation identity() { return {}; }
  static Orientation rot_z() { return {{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}}}; }  // x -> y
  static Orientation rot_x() { return {{{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}}}; }  // y -> z
  static Orientation rot_y() { return {{{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}}}; }  // z -> x
  static Orientation mirror_x() { return {{{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}; }
  static Orientation mirror_y() { return {{{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}}}; }
};

class Gadget {
 public:
  std::map<Site, int64_t> footprint;
  std::vector<Port> ports;
  int64_t deposit_bound = 2;

  const Port& port(const std::string& name) const;
  std::vector<std::string> inputs() const;
  std::vector<std::string> outputs() const;

  Gadget transformed(const Orientation& o, const Site& offset = {}) const;
  /// Union of footprints; overlapping sites must agree. Ports get `prefix`.
  void merge(const Gadget& other, const std::string& prefix = "");
  void set(const Site& s, int64_t chips);
  void validate() const;

  SparseLattice to_lattice() const;
  std::string slice(const Box& box, int64_t z = 0) const;
};

/// 5 chips on a self-avoiding path; ports "a" (first) and "b" (last).
Gadget build_wire(const std::vector<Site>& path);
/// Straight wire of `length` sites from `start` stepping by `dir`.
std::vector<Site> straight(const Site& start, const Site& dir, int64_t length);

/// Throat (4 chips) at the origin, 5s above the throat and the last left
/// wire site. Ports "in" at (-stub, 0, 0) and "out" at (stub, 0, 0).
Gadget build_diode(int64_t stub = 4);

/// Centre at the origin, arms left/right along x and down along -y.
/// Ports "left", "right", "down" at the arm ends.
Gadget build_wait2(int64_t arm = 3);
Gadget build_wait1(int64_t arm = 3);

/// Two-input gate: diodes at x = -2 and x = 2 feeding a wait gate centred at
/// the origin; output runs down -y. Ports "in0".."in{k-1}" and "out". Fan-in
/// above 2 chains gates left-leaning, each stage lower and to the right.
/// A negative `down` gives the output stub the same length as the inputs.
Gadget build_and(int k = 2, int64_t stub = 4, int64_t down = -1);
Gadget build_or(int k = 2, int64_t stub = 4, int64_t down = -1);

struct GadgetReport {
  SparseLattice lattice;
  LatticeRun run;
  std::map<std::string, bool> toppled;  // per port
  std::vector<std::string> fired_outputs;
  std::vector<std::string> backfired_inputs;
  int64_t max_off_deposit = 0;
  int64_t max_odometer = 0;
};

/// Places `g` alone in an empty lattice, adds one chip to each fired port and
/// stabilizes.
GadgetReport verify_gadget(const Gadget& g, const std::set<std::string>& fire,
                           int64_t budget = 1'000'000);

}  // namespace sandpile
