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
#include <random>
#include <span>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace sandpile {

using WireId = int32_t;
using GateId = int32_t;

enum class GateKind : uint8_t { And, Or };

struct Cell {
  std::string name;
  WireId zero = -1;
  WireId one = -1;
};

/// One-shot monotone circuit. Gate inputs and outputs are stored flat;
/// a gate may drive several wires.
class Netlist {
 public:
  WireId add_wire(std::string name);
  WireId wire(const std::string& name) const;  // throws if unknown
  bool has_wire(const std::string& name) const { return index_.contains(name); }
  GateId add_gate(GateKind kind, std::span<const WireId> inputs, std::span<const WireId> outputs);
  size_t add_cell(std::string name, WireId zero, WireId one);
  void add_init(WireId w);

  size_t wire_count() const { return names_.size(); }
  size_t gate_count() const { return kinds_.size(); }
  const std::string& wire_name(WireId w) const { return names_.at(static_cast<size_t>(w)); }
  GateKind kind(GateId g) const { return kinds_[static_cast<size_t>(g)]; }
  std::span<const WireId> inputs(GateId g) const;
  std::span<const WireId> outputs(GateId g) const;
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<WireId>& init() const { return init_; }

 private:
  std::vector<std::string> names_;
  absl::flat_hash_map<std::string, WireId> index_;
  std::vector<GateKind> kinds_;
  std::vector<uint32_t> in_begin_{0};
  std::vector<uint32_t> out_begin_{0};
  std::vector<WireId> in_;
  std::vector<WireId> out_;
  std::vector<Cell> cells_;
  std::vector<WireId> init_;
};

using FiredSet = std::vector<bool>;

/// Least fixpoint of the gate semantics starting from the initial wires.
/// With `shuffle`, gates are processed in a random order.
FiredSet eval_closure(const Netlist& net, std::mt19937_64* shuffle = nullptr);

/// Gates whose outputs fired because the gate itself fired.
std::vector<bool> fired_gates(const Netlist& net, const FiredSet& fired);

enum class CellValue { Zero, One, Lazy, Conflict };

CellValue read_cell(const FiredSet& fired, const Cell& cell);
const char* to_string(CellValue v);

std::string emit_netlist(const Netlist& net);
Netlist parse_netlist(const std::string& text);

}  // namespace sandpile
