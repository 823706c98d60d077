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

#include "sandpile/design.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sandpile/lazy.hpp"

namespace sandpile {

namespace {

int64_t fdiv(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int64_t fmod(int64_t a, int64_t b) { return a - fdiv(a, b) * b; }

// The lattice node the alarm is pulled through, and its fine site.
constexpr Site kOriginNode{0, 0, 0};
constexpr Site kOriginSite{2, 2, 2};

std::string cell_wire(int j, int v) { return "c:" + std::to_string(j) + ":" + std::to_string(v); }

}  // namespace

std::string to_string(Target t) {
  switch (t) {
    case Target::VertexPrediction: return "vertex";
    case Target::GlobalHalting: return "global";
    case Target::LocalHalting: return "local";
  }
  return "?";
}

Target parse_target(const std::string& s) {
  if (s == "vertex" || s == "VertexPrediction") return Target::VertexPrediction;
  if (s == "global" || s == "GlobalHalting") return Target::GlobalHalting;
  if (s == "local" || s == "LocalHalting") return Target::LocalHalting;
  throw Error("unknown target '" + s + "' (expected vertex, global or local)");
}

int64_t bomb_chips(VertexClass c) {
  switch (c) {
    case VertexClass::Body: return 3;
    case VertexClass::Face: return 4;
    default: return 5;
  }
}

int64_t PlacedDesign::periodic_chips(const Site& s) const {
  const int64_t n = tile->n;
  const Site l{fmod(s.x - shift.x, n), fmod(s.y - shift.y, n), fmod(s.z - shift.z, n)};
  if (const TileSite* ts = tile->at(l)) return ts->chips;
  return options.bomb ? bomb_chips(vertex_class(l, n)) : 0;
}

int64_t PlacedDesign::background_chips(const Site& s) const {
  if (!options.windowed) return periodic_chips(s);
  const int64_t n = tile->n;
  const Site f = s - shift;
  const Site l{fmod(f.x, n), fmod(f.y, n), fmod(f.z, n)};
  const TileSite* ts = tile->at(l);
  if (!ts) return options.bomb ? bomb_chips(vertex_class(l, n)) : 0;
  const int64_t cx = fdiv(f.x, n), cy = fdiv(f.y, n), ct = fdiv(f.z, n);
  bool present;
  if (ts->net >= 0 && tile->circuit.nets[static_cast<size_t>(ts->net)].periodic)
    // Shared wires may link window cubes through a neighbouring cube.
    present = cy == 0 && cx >= -grid.X - 1 && cx <= grid.X + 1 && ct >= -1 && ct <= grid.T + 1;
  else
    present = cy == 0 && grid.contains(cx - ts->du, ct - ts->dw);
  if (present) return ts->chips;
  return options.bomb ? bomb_chips(vertex_class(l, n)) : 0;
}

Background PlacedDesign::background() const {
  return [this](const Site& s) { return background_chips(s); };
}

SparseLattice PlacedDesign::lattice() const {
  SparseLattice lat(3, background());
  for (const auto& [s, k] : delta) lat.add(s, k);
  return lat;
}

Site PlacedDesign::site(const std::string& net, int64_t x, int64_t t) const {
  return tile->net_site(tile->circuit.net(net), x, t) + shift;
}

bool PlacedDesign::fired(const SparseLattice& lat, const std::string& net, int64_t x, int64_t t) const {
  return lat.odometer(site(net, x, t)) > 0;
}

int PlacedDesign::read(const SparseLattice& lat, int64_t x, int64_t t) const {
  int code = 0;
  bool lazy = false;
  for (int j = 0; j < spec.bits; ++j) {
    const bool zero = fired(lat, cell_wire(j, 0), x, t), one = fired(lat, cell_wire(j, 1), x, t);
    if (zero && one) return kConflict;
    if (!zero && !one) lazy = true;
    if (one) code |= 1 << j;
  }
  if (lazy) return kLazy;
  return static_cast<size_t>(code) < spec.states ? code : kConflict;
}

std::vector<int> PlacedDesign::read_row(const SparseLattice& lat, int64_t t) const {
  std::vector<int> row;
  for (int64_t x = -grid.X; x <= grid.X; ++x) row.push_back(read(lat, x, t));
  return row;
}

int64_t PlacedDesign::fired_elements(const SparseLattice& lat, ElementKind kind) const {
  int64_t count = 0;
  const int64_t side = n();
  for (size_t e = 0; e < tile->circuit.elements.size(); ++e) {
    const Element& el = tile->circuit.elements[e];
    if (el.kind != kind) continue;
    const auto outs = el.gadget.outputs();
    const Site local = tile->anchors[e] + el.gadget.port(outs.empty() ? el.gadget.ports.front().name : outs.front()).site;
    for (int64_t t = 0; t <= grid.T; ++t)
      for (int64_t x = -grid.X; x <= grid.X; ++x)
        if (lat.odometer(local + Site{side * x, 0, side * t} + shift) > 0) ++count;
  }
  return count;
}

PFConfiguration PlacedDesign::pf() const {
  const int64_t n = tile->n;
  PFConfiguration cfg;
  cfg.background = PeriodicBackground(n, n, n, std::vector<int64_t>(static_cast<size_t>(n * n * n), 0));
  for (int64_t x = 0; x < n; ++x)
    for (int64_t y = 0; y < n; ++y)
      for (int64_t z = 0; z < n; ++z) {
        const int64_t c = periodic_chips({x, y, z});
        if (c) cfg.background.set({x, y, z}, c);
      }
  for (const auto& [s, k] : delta) {
    // Reconnect sites are stated against the windowed background; restate them.
    const int64_t extra = k + background_chips(s) - periodic_chips(s);
    if (extra) cfg.delta[s] = extra;
  }
  return cfg;
}

std::string PlacedDesign::port_map() const {
  std::ostringstream out;
  out << "# instance x y z\n";
  for (const auto& net : circuit.nets)
    for (int64_t t = 0; t <= grid.T; ++t)
      for (int64_t x = -grid.X; x <= grid.X; ++x) {
        const Site s = site(net, x, t);
        out << instance_name(net, x, t) << ' ' << s.x << ' ' << s.y << ' ' << s.z << '\n';
      }
  if (options.origin_alarm) {
    const Site o = kOriginSite + shift;
    out << "origin " << o.x << ' ' << o.y << ' ' << o.z << '\n';
  }
  return out.str();
}

PlacedDesign build_design(const CubeSpec& spec, const CubeGrid& grid, const InitPlan& init,
                          const DesignOptions& opt) {
  PlacedDesign d;
  d.spec = spec;
  d.grid = grid;
  d.init = init;
  d.options = opt;
  d.circuit = tile_circuit(spec);
  PhysCircuit pc = lower(d.circuit);
  if (opt.origin_alarm || opt.bomb) pc.nets[static_cast<size_t>(pc.net("alarm"))].fixed_nodes = {kOriginNode};
  d.tile = place_and_route(pc, opt.place);
  const AuditReport rep = audit(*d.tile);
  if (!rep.ok) throw Error("spacing-rule violation after placement: " + rep.problems.front());
  if (opt.centre_alarm) d.shift = Site{} - kOriginSite;

  for (const auto& w : init_wires(spec, init)) d.delta[d.site(w.net, w.x, w.t)] += 1;

  if (opt.bomb) {
    // Shortest chip-free path from the alarm wire to a neighbour of the
    // corner vertex of cube (0, 0). Spacing is ignored except that the path
    // must not touch any other wire.
    const int alarm = pc.net("alarm");
    const int64_t side = d.n();
    auto local = [&](const Site& s) { return d.tile->at({fmod(s.x, side), fmod(s.y, side), fmod(s.z, side)}); };
    auto allowed = [&](const Site& s) {
      if (s.x < 0 || s.y < 0 || s.z < 0 || s.x > 5 || s.y > 5 || s.z > 5 || s == Site{}) return false;
      if (local(s)) return false;
      for (const Site& dir : kDirs3)
        if (const TileSite* ts = local(s + dir); ts && ts->net != alarm) return false;
      return true;
    };
    std::map<Site, Site> parent;
    std::deque<Site> queue;
    for (int64_t x = 0; x <= 5; ++x)
      for (int64_t y = 0; y <= 5; ++y)
        for (int64_t z = 0; z <= 5; ++z) {
          const Site s{x, y, z};
          if (!allowed(s)) continue;
          bool touches = false;
          for (const Site& dir : kDirs3)
            if (const TileSite* ts = local(s + dir); ts && ts->net == alarm) touches = true;
          if (touches) {
            parent[s] = s;
            queue.push_back(s);
          }
        }
    std::optional<Site> end;
    while (!queue.empty() && !end) {
      const Site s = queue.front();
      queue.pop_front();
      if (s.x + s.y + s.z == 1) {
        end = s;
        break;
      }
      for (const Site& dir : kDirs3) {
        const Site nb = s + dir;
        if (allowed(nb) && parent.try_emplace(nb, s).second) queue.push_back(nb);
      }
    }
    if (!end) throw Error("no room for the origin reconnect wire");
    std::vector<Site> tail;
    for (Site s = *end;; s = parent.at(s)) {
      tail.push_back(s);
      if (parent.at(s) == s) break;
    }
    std::reverse(tail.begin(), tail.end());
    for (const Site& s : tail) {
      const Site l = s + d.shift;
      d.reconnect.push_back(l);
      d.delta[l] = 5 - d.background_chips(l);
    }
  }
  return d;
}

PlacedDesign build_netlist_design(const Netlist& net, const PlaceOptions& opt) {
  PlacedDesign d;
  d.grid = {0, 0};
  d.options.place = opt;
  d.circuit = tile_circuit(net);
  d.tile = place_and_route(lower(d.circuit), opt);
  const AuditReport rep = audit(*d.tile);
  if (!rep.ok) throw Error("spacing-rule violation after placement: " + rep.problems.front());
  for (WireId w : net.init()) d.delta[d.site(net.wire_name(w), 0, 0)] += 1;
  return d;
}

PlacedDesign compile(const CompilePlan& plan) {
  plan.machine.validate();
  const TuringMachine& m = plan.machine;
  DesignOptions opt;
  opt.place.K = plan.K;
  PlacedDesign d;
  if (plan.target == Target::GlobalHalting) {
    const LazyCompilation lc = tm_to_lazy(m);
    opt.windowed = false;
    d = build_design(lazy_spec(lc.automaton), plan.window, lazy_init(lc.initial), opt);
  } else {
    const CellularAutomaton ca = tm_to_ca(m);
    CubeSpec spec = ca_spec_minimized(ca);
    set_alarm(spec, ca, m);
    spec.clamp = false;
    opt.windowed = true;
    opt.origin_alarm = true;
    opt.centre_alarm = plan.target == Target::VertexPrediction;
    opt.bomb = plan.target == Target::LocalHalting;
    const CARow row0 = encode_ca_row(ca, initial_snapshot(m));
    d = build_design(spec, plan.window, ca_init(row0, plan.window), opt);
  }
  d.target = plan.target;
  return d;
}

// Plan files.

std::string emit_plan(const CompilePlan& p) {
  std::ostringstream out;
  out << "target " << to_string(p.target) << '\n';
  out << "machine " << p.machine_path << '\n';
  out << "window " << p.window.X << ',' << p.window.T << '\n';
  out << "side " << p.K << '\n';
  return out.str();
}

namespace {

[[noreturn]] void plan_fail(size_t line, size_t col, const std::string& what) {
  throw Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

int64_t plan_int(const std::string& s, size_t line, size_t col) {
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) plan_fail(line, col, "expected an integer, got '" + s + "'");
  return v;
}

}  // namespace

CompilePlan parse_plan(const std::string& text, const std::string& base_dir) {
  CompilePlan p;
  bool has_target = false, has_machine = false, has_window = false;
  std::istringstream in(text);
  std::string raw;
  for (size_t lineno = 1; std::getline(in, raw); ++lineno) {
    const std::string line = raw.substr(0, raw.find('#'));
    const size_t k0 = line.find_first_not_of(" \t\r");
    if (k0 == std::string::npos) continue;
    const size_t k1 = line.find_first_of(" \t", k0);
    const std::string key = line.substr(k0, k1 - k0);
    const size_t v0 = k1 == std::string::npos ? std::string::npos : line.find_first_not_of(" \t", k1);
    if (v0 == std::string::npos) plan_fail(lineno, k0 + 1, "'" + key + "' needs a value");
    const size_t v1 = line.find_last_not_of(" \t\r");
    const std::string val = line.substr(v0, v1 - v0 + 1);
    const size_t col = v0 + 1;
    if (key == "target") {
      try {
        p.target = parse_target(val);
      } catch (const Error& e) {
        plan_fail(lineno, col, e.what());
      }
      has_target = true;
    } else if (key == "machine") {
      p.machine_path = val;
      const std::filesystem::path path = std::filesystem::path(base_dir) / val;
      std::ifstream f(path);
      if (!f) plan_fail(lineno, col, "cannot open machine file '" + path.string() + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      try {
        p.machine = parse_machine(buf.str());
      } catch (const Error& e) {
        plan_fail(lineno, col, std::string("machine file: ") + e.what());
      }
      has_machine = true;
    } else if (key == "window") {
      const size_t comma = val.find(',');
      if (comma == std::string::npos) plan_fail(lineno, col, "expected 'window X,T'");
      p.window.X = plan_int(val.substr(0, comma), lineno, col);
      p.window.T = plan_int(val.substr(comma + 1), lineno, col + comma + 1);
      if (p.window.X < 1 || p.window.T < 0) plan_fail(lineno, col, "window needs X >= 1 and T >= 0");
      has_window = true;
    } else if (key == "side") {
      const int64_t k = plan_int(val, lineno, col);
      if (k < 0 || k > 341) plan_fail(lineno, col, "side must be 0 (automatic) or at most 341");
      p.K = static_cast<int>(k);
    } else {
      plan_fail(lineno, k0 + 1, "unknown key '" + key + "'");
    }
  }
  if (!has_target || !has_machine || !has_window)
    plan_fail(1, 1, "plan needs target, machine and window lines");
  return p;
}

}  // namespace sandpile
