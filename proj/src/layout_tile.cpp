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

#include <algorithm>
#include <bit>

#include "sandpile/lattice.hpp"
#include "sandpile/place.hpp"

namespace sandpile {
namespace {

std::string cell_wire(int j, int v) { return "c:" + std::to_string(j) + ":" + std::to_string(v); }

std::vector<TileRef> bits_of(const CubeSpec& spec, int s) {
  std::vector<TileRef> out;
  for (int j = 0; j < spec.bits; ++j) out.push_back({cell_wire(j, s >> j & 1)});
  return out;
}

}  // namespace

TileCircuit tile_circuit(const CubeSpec& spec) {
  TileCircuit tc;
  const auto classes = spec.classes();
  const uint64_t used = spec.used_states();
  uint64_t results = 0;
  for (const auto& t : spec.terms) results |= uint64_t{1} << t.result;

  for (int j = 0; j < spec.bits; ++j) {
    tc.cells.push_back("c:" + std::to_string(j));
    for (int v = 0; v < 2; ++v) {
      tc.add_net(cell_wire(j, v));
      tc.init_targets.insert(cell_wire(j, v));
    }
  }
  for (size_t s = 0; s < spec.states; ++s)
    if (used >> s & 1) tc.add_net("d:" + std::to_string(s));
  for (size_t i = 0; i < classes.size(); ++i) tc.add_net("k:" + std::to_string(i));
  for (size_t s = 0; s < spec.states; ++s)
    if (results >> s & 1) tc.add_net("n:" + std::to_string(s));

  // Terms first: the placer fills the tile bottom-up in gate order.
  for (const auto& term : spec.terms) {
    TileGate g{GateKind::And, {}, {{"n:" + std::to_string(term.result)}}};
    for (const auto& in : term.inputs) {
      std::string src;
      if (std::popcount(in.mask) > 1)
        src = "k:" + std::to_string(std::lower_bound(classes.begin(), classes.end(), in.mask) - classes.begin());
      else
        src = "d:" + std::to_string(std::countr_zero(in.mask));
      g.inputs.push_back({src, in.dx, -1});
    }
    tc.gates.push_back(g);
  }
  for (size_t s = 0; s < spec.states; ++s)
    if (results >> s & 1) tc.gates.push_back({GateKind::Or, {{"n:" + std::to_string(s)}}, bits_of(spec, static_cast<int>(s))});
  for (size_t s = 0; s < spec.states; ++s)
    if (used >> s & 1)
      tc.gates.push_back({GateKind::And, bits_of(spec, static_cast<int>(s)), {{"d:" + std::to_string(s)}}});
  for (size_t i = 0; i < classes.size(); ++i) {
    TileGate g{GateKind::Or, {}, {{"k:" + std::to_string(i)}}};
    for (size_t s = 0; s < spec.states; ++s)
      if (classes[i] >> s & 1) g.inputs.push_back({"d:" + std::to_string(s)});
    tc.gates.push_back(g);
  }
  if (spec.alarm) {
    tc.add_net("alarm");
    tc.periodic.insert("alarm");
    for (size_t s = 0; s < spec.states; ++s)
      if (spec.alarm >> s & 1) tc.gates.push_back({GateKind::Or, {{"d:" + std::to_string(s)}}, {{"alarm"}}});
  }
  if (spec.blank_fill) {
    for (const char* chain : {"ir", "il"}) {
      tc.add_net(chain);
      tc.init_targets.insert(chain);
    }
    tc.gates.push_back({GateKind::Or, {{"ir"}}, {{"ir", 1, 0}}});
    tc.gates.push_back({GateKind::Or, {{"ir"}}, bits_of(spec, spec.blank)});
    tc.gates.push_back({GateKind::Or, {{"il"}}, {{"il", -1, 0}}});
    tc.gates.push_back({GateKind::Or, {{"il"}}, bits_of(spec, spec.blank)});
  }
  return tc;
}

TileCircuit tile_circuit(const Netlist& net) {
  TileCircuit tc;
  for (size_t w = 0; w < net.wire_count(); ++w) tc.add_net(net.wire_name(static_cast<WireId>(w)));
  for (GateId g = 0; g < static_cast<GateId>(net.gate_count()); ++g) {
    TileGate tg{net.kind(g), {}, {}};
    for (WireId w : net.inputs(g)) tg.inputs.push_back({net.wire_name(w)});
    for (WireId w : net.outputs(g)) tg.outputs.push_back({net.wire_name(w)});
    tc.gates.push_back(tg);
  }
  for (WireId w : net.init()) tc.init_targets.insert(net.wire_name(w));
  for (const auto& c : net.cells()) {
    tc.init_targets.insert(net.wire_name(c.zero));
    tc.init_targets.insert(net.wire_name(c.one));
  }
  return tc;
}

std::string instance_name(const std::string& net, int64_t x, int64_t t) {
  return net + "@" + std::to_string(x) + ":" + std::to_string(t);
}

Netlist flatten(const TileCircuit& tile, const CubeGrid& grid, const std::vector<InitWire>& init) {
  Netlist out;
  auto name = [&](const TileRef& r, int64_t x, int64_t t) {
    if (tile.periodic.contains(r.net)) return r.net;
    return instance_name(r.net, x + r.du, t + r.dw);
  };
  for (const auto& p : tile.periodic) out.add_wire(p);
  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 0; t <= grid.T; ++t)
      for (const auto& w : tile.nets)
        if (!tile.periodic.contains(w)) out.add_wire(instance_name(w, x, t));
  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 0; t <= grid.T; ++t)
      for (const auto& c : tile.cells)
        out.add_cell(instance_name(c, x, t), out.wire(instance_name(c + ":0", x, t)),
                     out.wire(instance_name(c + ":1", x, t)));
  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 0; t <= grid.T; ++t)
      for (const auto& g : tile.gates) {
        std::vector<WireId> in, outs;
        bool present = true;
        for (const auto& r : g.inputs) {
          if (!grid.contains(x + r.du, t + r.dw)) present = false;
          else in.push_back(out.wire(name(r, x, t)));
        }
        for (const auto& r : g.outputs)
          if (grid.contains(x + r.du, t + r.dw)) outs.push_back(out.wire(name(r, x, t)));
        if (present && !outs.empty()) out.add_gate(g.kind, in, outs);
      }
  for (const auto& w : init) out.add_init(out.wire(instance_name(w.net, w.x, w.t)));
  return out;
}

std::vector<InitWire> init_wires(const CubeSpec& spec, const InitPlan& init) {
  std::vector<InitWire> out;
  for (const auto& [x, s] : init.explicit_states)
    for (int j = 0; j < spec.bits; ++j) out.push_back({cell_wire(j, s >> j & 1), x, 0});
  if (init.right_chain) out.push_back({"ir", *init.right_chain, 0});
  if (init.left_chain) out.push_back({"il", *init.left_chain, 0});
  return out;
}

int PhysCircuit::net(const std::string& name) const {
  auto it = index.find(name);
  if (it == index.end()) throw Error("unknown tile net '" + name + "'");
  return it->second;
}

namespace {

constexpr int64_t kGateStub = 4, kGateDown = 6, kDiodeStub = 3;

Element make_element(ElementKind kind, int arity) {
  Element e{kind, arity, {}};
  switch (kind) {
    case ElementKind::And: e.gadget = build_and(arity, kGateStub, kGateDown); break;
    case ElementKind::Or: e.gadget = build_or(arity, kGateStub, kGateDown); break;
    case ElementKind::Diode: e.gadget = build_diode(kDiodeStub); break;
    case ElementKind::Pad:
      e.gadget.set({0, 0, 0}, 5);
      e.gadget.ports.push_back({"p", {0, 0, 0}, PortRole::Input});
      break;
  }
  return e;
}

}  // namespace

PhysCircuit lower(const TileCircuit& tile) {
  PhysCircuit pc;
  auto add_net = [&](const std::string& name) {
    pc.index[name] = static_cast<int>(pc.nets.size());
    pc.nets.push_back({name, {}, tile.periodic.contains(name), {}});
  };
  for (const auto& w : tile.nets) add_net(w);
  std::map<std::string, int> drivers;
  for (const auto& g : tile.gates)
    for (const auto& r : g.outputs) ++drivers[r.net];

  auto attach = [&](const TileRef& r, int element, const std::string& port) {
    pc.nets[static_cast<size_t>(pc.net(r.net))].terminals.push_back({element, port, -r.du, -r.dw});
  };
  auto add_element = [&](ElementKind kind, int arity) {
    pc.elements.push_back(make_element(kind, arity));
    return static_cast<int>(pc.elements.size()) - 1;
  };
  auto diode = [&](const TileRef& in, const TileRef& out) {
    const int d = add_element(ElementKind::Diode, 1);
    attach(in, d, "in");
    attach(out, d, "out");
  };

  for (size_t gi = 0; gi < tile.gates.size(); ++gi) {
    const auto& g = tile.gates[gi];
    if (g.inputs.size() == 1) {
      for (const auto& o : g.outputs) diode(g.inputs[0], o);
      continue;
    }
    const int e = add_element(g.kind == GateKind::And ? ElementKind::And : ElementKind::Or,
                              static_cast<int>(g.inputs.size()));
    for (size_t i = 0; i < g.inputs.size(); ++i) attach(g.inputs[i], e, "in" + std::to_string(i));
    const TileRef& o0 = g.outputs.front();
    const bool direct = g.outputs.size() == 1 && drivers[o0.net] == 1 && !tile.init_targets.contains(o0.net) &&
                        !tile.periodic.contains(o0.net);
    if (direct) {
      attach(o0, e, "out");
      continue;
    }
    const std::string internal = "g" + std::to_string(gi);
    add_net(internal);
    attach({internal}, e, "out");
    for (const auto& o : g.outputs) diode({internal}, o);
  }
  for (auto& net : pc.nets)
    if (net.terminals.empty()) {
      const int p = add_element(ElementKind::Pad, 0);
      net.terminals.push_back({p, "p", 0, 0});
    }
  return pc;
}

}  // namespace sandpile
