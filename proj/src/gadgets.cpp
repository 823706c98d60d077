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

#include "sandpile/gadgets.hpp"

#include <algorithm>

namespace sandpile {

Site Orientation::apply(const Site& s) const {
  auto row = [&](int r) { return m[r][0] * s.x + m[r][1] * s.y + m[r][2] * s.z; };
  return {row(0), row(1), row(2)};
}

Orientation Orientation::then(const Orientation& o) const {
  Orientation r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r.m[i][j] = 0;
      for (int k = 0; k < 3; ++k) r.m[i][j] += o.m[i][k] * m[k][j];
    }
  return r;
}

const Port& Gadget::port(const std::string& name) const {
  for (const auto& p : ports)
    if (p.name == name) return p;
  throw Error("gadget has no port '" + name + "'");
}

std::vector<std::string> Gadget::inputs() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.role == PortRole::Input) out.push_back(p.name);
  return out;
}

std::vector<std::string> Gadget::outputs() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.role == PortRole::Output) out.push_back(p.name);
  return out;
}

Gadget Gadget::transformed(const Orientation& o, const Site& offset) const {
  Gadget g;
  g.deposit_bound = deposit_bound;
  for (const auto& [s, c] : footprint) g.footprint[o.apply(s) + offset] = c;
  for (auto p : ports) {
    p.site = o.apply(p.site) + offset;
    g.ports.push_back(p);
  }
  return g;
}

void Gadget::set(const Site& s, int64_t chips) {
  auto [it, fresh] = footprint.try_emplace(s, chips);
  if (!fresh && it->second != chips)
    throw Error("conflicting chip counts at " + to_string(s));
}

void Gadget::merge(const Gadget& other, const std::string& prefix) {
  for (const auto& [s, c] : other.footprint) set(s, c);
  for (auto p : other.ports) {
    p.name = prefix + p.name;
    ports.push_back(p);
  }
  deposit_bound = std::max(deposit_bound, other.deposit_bound);
}

void Gadget::validate() const {
  for (const auto& [s, c] : footprint)
    if (c < 0 || c > 5) throw Error("footprint chips out of range at " + to_string(s));
  std::set<std::string> names;
  for (const auto& p : ports) {
    if (!footprint.contains(p.site)) throw Error("port '" + p.name + "' is off the footprint");
    if (!names.insert(p.name).second) throw Error("duplicate port '" + p.name + "'");
  }
}

SparseLattice Gadget::to_lattice() const {
  SparseLattice lat(3);
  for (const auto& [s, c] : footprint) lat.set(s, c);
  return lat;
}

std::string Gadget::slice(const Box& box, int64_t z) const { return to_lattice().export_slice(box, z); }

std::vector<Site> straight(const Site& start, const Site& dir, int64_t length) {
  std::vector<Site> out;
  Site s = start;
  for (int64_t i = 0; i < length; ++i, s = s + dir) out.push_back(s);
  return out;
}

namespace {

void check_path(const std::vector<Site>& path) {
  if (path.empty()) throw Error("wire path is empty");
  std::set<Site> seen;
  for (size_t i = 0; i < path.size(); ++i) {
    if (!seen.insert(path[i]).second) throw Error("wire path revisits " + to_string(path[i]));
    if (i > 0 && !adjacent(path[i - 1], path[i]))
      throw Error("wire sites " + to_string(path[i - 1]) + " and " + to_string(path[i]) + " are not adjacent");
  }
  // A wire touching itself would double-feed a site.
  for (size_t i = 0; i < path.size(); ++i)
    for (size_t j = i + 2; j < path.size(); ++j)
      if (adjacent(path[i], path[j]))
        throw Error("wire touches itself at " + to_string(path[i]) + " and " + to_string(path[j]));
  int64_t last_bend = -3;
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    if (path[i] - path[i - 1] == path[i + 1] - path[i]) continue;
    if (static_cast<int64_t>(i) - last_bend < 3)
      throw Error("bends at " + to_string(path[static_cast<size_t>(last_bend)]) + " and " +
                  to_string(path[i]) + " need two straight steps between them");
    last_bend = static_cast<int64_t>(i);
  }
}

void lay(Gadget& g, const std::vector<Site>& path) {
  for (const Site& s : path) g.set(s, 5);
}

// Two-input gate body centred at `c`. A left stub of 0 means the left input
// wire is supplied by the caller and must end at c + (-3, 0, 0).
Gadget gate_core(const Site& c, int64_t centre, int64_t left_stub, int64_t right_stub, int64_t down) {
  Gadget g;
  auto at = [&](int64_t dx, int64_t dy) { return c + Site{dx, dy, 0}; };
  if (left_stub > 0) {
    lay(g, straight(at(-2 - left_stub, 0), {1, 0, 0}, left_stub));
    g.ports.push_back({"in0", at(-2 - left_stub, 0), PortRole::Input});
  }
  g.set(at(-3, 1), 5);
  g.set(at(-2, 0), 4);
  g.set(at(-2, 1), 5);
  g.set(at(-1, 0), 5);
  g.set(at(0, 0), centre);
  g.set(at(1, 0), 5);
  g.set(at(2, 0), 4);
  g.set(at(2, 1), 5);
  g.set(at(3, 1), 5);
  lay(g, straight(at(3, 0), {1, 0, 0}, right_stub));
  g.ports.push_back({"in1", at(2 + right_stub, 0), PortRole::Input});
  if (down > 0) {
    lay(g, straight(at(0, -1), {0, -1, 0}, down));
    g.ports.push_back({"out", at(0, -down), PortRole::Output});
  }
  return g;
}

Gadget build_gate(int k, int64_t centre, int64_t stub, int64_t down) {
  if (down < 0) down = stub;
  if (k < 2) throw Error("gates need fan-in >= 2");
  if (stub < 3) throw Error("gate stubs need at least 3 sites");
  constexpr int64_t kDx = 9, kDy = 6;
  if (k == 2) {
    Gadget g = gate_core({0, 0, 0}, centre, stub, stub, down);
    g.validate();
    return g;
  }
  Gadget g;
  Site c{0, 0, 0};
  for (int stage = 1; stage < k; ++stage) {
    const bool first = stage == 1, last = stage == k - 1;
    Gadget part = gate_core(c, centre, first ? stub : 0, stub, last ? down : 0);
    for (auto& p : part.ports) {
      if (p.name == "in1") p.name = "in" + std::to_string(stage);
      g.ports.push_back(p);
    }
    for (const auto& [s, v] : part.footprint) g.set(s, v);
    if (!last) {
      const Site next = c + Site{kDx, -kDy, 0};
      std::vector<Site> link = straight(c + Site{0, -1, 0}, {0, -1, 0}, kDy);
      for (const Site& s : straight(c + Site{1, -kDy, 0}, {1, 0, 0}, kDx - 3)) link.push_back(s);
      check_path(link);
      lay(g, link);
      c = next;
    }
  }
  g.validate();
  return g;
}

Gadget build_wait(int64_t centre, int64_t arm) {
  if (arm < 1) throw Error("wait gate arms need at least one site");
  Gadget g;
  g.set({0, 0, 0}, centre);
  lay(g, straight({-arm, 0, 0}, {1, 0, 0}, arm));
  lay(g, straight({1, 0, 0}, {1, 0, 0}, arm));
  lay(g, straight({0, -1, 0}, {0, -1, 0}, arm));
  g.ports = {{"left", {-arm, 0, 0}, PortRole::Input},
             {"right", {arm, 0, 0}, PortRole::Input},
             {"down", {0, -arm, 0}, PortRole::Input}};
  g.validate();
  return g;
}

}  // namespace

Gadget build_wire(const std::vector<Site>& path) {
  check_path(path);
  Gadget g;
  lay(g, path);
  g.ports = {{"a", path.front(), PortRole::Input}, {"b", path.back(), PortRole::Output}};
  if (path.size() == 1) g.ports.pop_back();
  g.validate();
  return g;
}

Gadget build_diode(int64_t stub) {
  if (stub < 2) throw Error("diode stubs need at least 2 sites");
  Gadget g;
  lay(g, straight({-stub, 0, 0}, {1, 0, 0}, stub));
  g.set({-1, 1, 0}, 5);
  g.set({0, 0, 0}, 4);
  g.set({0, 1, 0}, 5);
  lay(g, straight({1, 0, 0}, {1, 0, 0}, stub));
  g.ports = {{"in", {-stub, 0, 0}, PortRole::Input}, {"out", {stub, 0, 0}, PortRole::Output}};
  g.validate();
  return g;
}

Gadget build_wait2(int64_t arm) { return build_wait(4, arm); }
Gadget build_wait1(int64_t arm) { return build_wait(5, arm); }
Gadget build_and(int k, int64_t stub, int64_t down) { return build_gate(k, 4, stub, down); }
Gadget build_or(int k, int64_t stub, int64_t down) { return build_gate(k, 5, stub, down); }

GadgetReport verify_gadget(const Gadget& g, const std::set<std::string>& fire, int64_t budget) {
  GadgetReport r{g.to_lattice(), {}, {}, {}, {}, 0, 0};
  for (const auto& name : fire) r.lattice.add(g.port(name).site, 1);
  r.run = r.lattice.stabilize(budget);
  for (const auto& p : g.ports) {
    const bool t = r.lattice.odometer(p.site) > 0;
    r.toppled[p.name] = t;
    if (!t || fire.contains(p.name)) continue;
    (p.role == PortRole::Output ? r.fired_outputs : r.backfired_inputs).push_back(p.name);
  }
  r.lattice.for_each([&](const Site& s, int64_t chips, int64_t odo) {
    r.max_odometer = std::max(r.max_odometer, odo);
    if (!g.footprint.contains(s)) r.max_off_deposit = std::max(r.max_off_deposit, chips);
  });
  return r;
}

}  // namespace sandpile
