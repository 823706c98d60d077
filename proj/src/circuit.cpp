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

#include "sandpile/circuit.hpp"

#include <sstream>

#include "sandpile/lattice.hpp"

namespace sandpile {

WireId Netlist::add_wire(std::string name) {
  if (name.empty()) throw Error("wire names must be non-empty");
  auto id = static_cast<WireId>(names_.size());
  if (!index_.try_emplace(name, id).second) throw Error("duplicate wire '" + name + "'");
  names_.push_back(std::move(name));
  return id;
}

WireId Netlist::wire(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown wire '" + name + "'");
  return it->second;
}

GateId Netlist::add_gate(GateKind kind, std::span<const WireId> inputs, std::span<const WireId> outputs) {
  if (inputs.empty()) throw Error("gates need at least one input");
  if (outputs.empty()) throw Error("gates need at least one output");
  for (WireId w : inputs)
    if (w < 0 || static_cast<size_t>(w) >= names_.size()) throw Error("gate input references a missing wire");
  for (WireId w : outputs)
    if (w < 0 || static_cast<size_t>(w) >= names_.size()) throw Error("gate output references a missing wire");
  in_.insert(in_.end(), inputs.begin(), inputs.end());
  out_.insert(out_.end(), outputs.begin(), outputs.end());
  in_begin_.push_back(static_cast<uint32_t>(in_.size()));
  out_begin_.push_back(static_cast<uint32_t>(out_.size()));
  kinds_.push_back(kind);
  return static_cast<GateId>(kinds_.size() - 1);
}

size_t Netlist::add_cell(std::string name, WireId zero, WireId one) {
  if (zero == one) throw Error("cell wires must be distinct");
  if (zero < 0 || one < 0 || static_cast<size_t>(std::max(zero, one)) >= names_.size())
    throw Error("cell references a missing wire");
  cells_.push_back({std::move(name), zero, one});
  return cells_.size() - 1;
}

void Netlist::add_init(WireId w) {
  if (w < 0 || static_cast<size_t>(w) >= names_.size()) throw Error("INIT references a missing wire");
  init_.push_back(w);
}

std::span<const WireId> Netlist::inputs(GateId g) const {
  const auto i = static_cast<size_t>(g);
  return {in_.data() + in_begin_[i], in_begin_[i + 1] - in_begin_[i]};
}

std::span<const WireId> Netlist::outputs(GateId g) const {
  const auto i = static_cast<size_t>(g);
  return {out_.data() + out_begin_[i], out_begin_[i + 1] - out_begin_[i]};
}

FiredSet eval_closure(const Netlist& net, std::mt19937_64* shuffle) {
  const size_t nw = net.wire_count(), ng = net.gate_count();
  // Wire -> consuming gates, CSR.
  std::vector<uint32_t> start(nw + 1, 0);
  for (size_t g = 0; g < ng; ++g)
    for (WireId w : net.inputs(static_cast<GateId>(g))) ++start[static_cast<size_t>(w) + 1];
  for (size_t w = 0; w < nw; ++w) start[w + 1] += start[w];
  std::vector<GateId> users(start.back());
  std::vector<uint32_t> fill(start.begin(), start.end() - 1);
  for (size_t g = 0; g < ng; ++g)
    for (WireId w : net.inputs(static_cast<GateId>(g))) users[fill[static_cast<size_t>(w)]++] = static_cast<GateId>(g);

  FiredSet fired(nw, false);
  std::vector<uint32_t> seen(ng, 0);
  std::vector<bool> done(ng, false);
  std::vector<GateId> ready;
  std::vector<WireId> pending;
  auto fire = [&](WireId w) {
    if (!fired[static_cast<size_t>(w)]) {
      fired[static_cast<size_t>(w)] = true;
      pending.push_back(w);
    }
  };
  for (WireId w : net.init()) fire(w);
  while (!pending.empty() || !ready.empty()) {
    while (!pending.empty()) {
      const WireId w = pending.back();
      pending.pop_back();
      for (uint32_t i = start[static_cast<size_t>(w)]; i < start[static_cast<size_t>(w) + 1]; ++i) {
        const GateId g = users[i];
        if (done[static_cast<size_t>(g)]) continue;
        const uint32_t c = ++seen[static_cast<size_t>(g)];
        const bool ok = net.kind(g) == GateKind::Or || c == net.inputs(g).size();
        if (ok) {
          done[static_cast<size_t>(g)] = true;
          ready.push_back(g);
        }
      }
    }
    if (ready.empty()) break;
    size_t pick = ready.size() - 1;
    if (shuffle) pick = std::uniform_int_distribution<size_t>(0, ready.size() - 1)(*shuffle);
    std::swap(ready[pick], ready.back());
    const GateId g = ready.back();
    ready.pop_back();
    for (WireId w : net.outputs(g)) fire(w);
  }
  return fired;
}

std::vector<bool> fired_gates(const Netlist& net, const FiredSet& fired) {
  std::vector<bool> out(net.gate_count(), false);
  for (size_t g = 0; g < net.gate_count(); ++g) {
    const auto in = net.inputs(static_cast<GateId>(g));
    size_t on = 0;
    for (WireId w : in) on += fired[static_cast<size_t>(w)];
    out[g] = net.kind(static_cast<GateId>(g)) == GateKind::And ? on == in.size() : on > 0;
  }
  return out;
}

CellValue read_cell(const FiredSet& fired, const Cell& cell) {
  const bool z = fired.at(static_cast<size_t>(cell.zero));
  const bool o = fired.at(static_cast<size_t>(cell.one));
  if (z && o) return CellValue::Conflict;
  if (o) return CellValue::One;
  if (z) return CellValue::Zero;
  return CellValue::Lazy;
}

const char* to_string(CellValue v) {
  switch (v) {
    case CellValue::Zero: return "Zero";
    case CellValue::One: return "One";
    case CellValue::Lazy: return "Lazy";
    case CellValue::Conflict: return "Conflict";
  }
  return "?";
}

std::string emit_netlist(const Netlist& net) {
  std::ostringstream os;
  for (size_t w = 0; w < net.wire_count(); ++w) os << "WIRE " << net.wire_name(static_cast<WireId>(w)) << '\n';
  for (size_t g = 0; g < net.gate_count(); ++g) {
    const auto id = static_cast<GateId>(g);
    os << (net.kind(id) == GateKind::And ? "AND" : "OR");
    for (WireId w : net.outputs(id)) os << ' ' << net.wire_name(w);
    os << " <-";
    for (WireId w : net.inputs(id)) os << ' ' << net.wire_name(w);
    os << '\n';
  }
  for (const auto& c : net.cells())
    os << "CELL " << c.name << ' ' << net.wire_name(c.zero) << ' ' << net.wire_name(c.one) << '\n';
  for (WireId w : net.init()) os << "INIT " << net.wire_name(w) << '\n';
  return os.str();
}

Netlist parse_netlist(const std::string& text) {
  Netlist net;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    try {
      if (tok[0] == "WIRE" && tok.size() == 2) {
        net.add_wire(tok[1]);
      } else if ((tok[0] == "AND" || tok[0] == "OR") && tok.size() >= 4) {
        std::vector<WireId> outs, ins;
        bool arrow = false;
        for (size_t i = 1; i < tok.size(); ++i) {
          if (tok[i] == "<-") {
            if (arrow) throw Error("repeated '<-'");
            arrow = true;
            continue;
          }
          (arrow ? ins : outs).push_back(net.wire(tok[i]));
        }
        if (!arrow) throw Error("missing '<-'");
        net.add_gate(tok[0] == "AND" ? GateKind::And : GateKind::Or, ins, outs);
      } else if (tok[0] == "CELL" && tok.size() == 4) {
        net.add_cell(tok[1], net.wire(tok[2]), net.wire(tok[3]));
      } else if (tok[0] == "INIT" && tok.size() == 2) {
        net.add_init(net.wire(tok[1]));
      } else {
        throw Error("unrecognised statement '" + tok[0] + "'");
      }
    } catch (const Error& e) {
      throw Error(where() + e.what());
    }
  }
  return net;
}

}  // namespace sandpile
