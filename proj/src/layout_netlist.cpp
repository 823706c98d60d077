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
#include <set>

#include "sandpile/lattice.hpp"
#include "sandpile/layout.hpp"

namespace sandpile {

int bits_for(size_t states) {
  int b = 1;
  while ((size_t{1} << b) < states) ++b;
  return b;
}

std::vector<uint64_t> CubeSpec::classes() const {
  std::set<uint64_t> out;
  for (const auto& t : terms)
    for (const auto& in : t.inputs)
      if (std::popcount(in.mask) > 1) out.insert(in.mask);
  return {out.begin(), out.end()};
}

uint64_t CubeSpec::used_states() const {
  uint64_t m = alarm;
  for (const auto& t : terms)
    for (const auto& in : t.inputs) m |= in.mask;
  return m;
}

namespace {

uint64_t full_mask(size_t states) { return states == 64 ? ~uint64_t{0} : (uint64_t{1} << states) - 1; }

void check_states(const CubeSpec& s) {
  if (s.states == 0 || s.states > 64) throw Error("cube spec needs 1..64 states");
  if ((size_t{1} << s.bits) < s.states) throw Error("too few bits for the state count");
}

}  // namespace

CubeSpec ca_spec(const CellularAutomaton& ca) {
  CubeSpec s;
  s.states = ca.size;
  s.bits = bits_for(ca.size);
  s.labels = ca.labels;
  s.blank_fill = true;
  s.clamp = true;
  s.blank = ca.quiescent;
  const int n = static_cast<int>(ca.size);
  for (int l = 0; l < n; ++l)
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r)
        s.terms.push_back({{{-1, uint64_t{1} << l}, {0, uint64_t{1} << c}, {1, uint64_t{1} << r}}, ca.f(l, c, r)});
  check_states(s);
  return s;
}

CubeSpec ca_spec_minimized(const CellularAutomaton& ca) {
  CubeSpec s = ca_spec(ca);
  s.terms.clear();
  const int n = static_cast<int>(ca.size);
  const uint64_t full = full_mask(ca.size);
  auto uniform = [&](const std::array<uint64_t, 3>& m, int result) {
    for (int l = 0; l < n; ++l)
      if (m[0] >> l & 1)
        for (int c = 0; c < n; ++c)
          if (m[1] >> c & 1)
            for (int r = 0; r < n; ++r)
              if ((m[2] >> r & 1) && ca.f(l, c, r) != result) return false;
    return true;
  };
  std::vector<bool> covered(static_cast<size_t>(n * n * n), false);
  for (int l = 0; l < n; ++l)
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        if (covered[static_cast<size_t>((l * n + c) * n + r)]) continue;
        const int result = ca.f(l, c, r);
        std::array<uint64_t, 3> m{uint64_t{1} << l, uint64_t{1} << c, uint64_t{1} << r};
        for (int p : {0, 2, 1})
          for (int q = 0; q < n; ++q) {
            if (m[p] >> q & 1) continue;
            auto trial = m;
            trial[p] |= uint64_t{1} << q;
            if (uniform(trial, result)) m = trial;
          }
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d)
              if ((m[0] >> a & 1) && (m[1] >> b & 1) && (m[2] >> d & 1))
                covered[static_cast<size_t>((a * n + b) * n + d)] = true;
        Term t{{}, result};
        for (int p = 0; p < 3; ++p)
          if (m[p] != full) t.inputs.push_back({p - 1, m[p]});
        if (t.inputs.empty()) t.inputs.push_back({0, full});
        s.terms.push_back(t);
      }
  return s;
}

CubeSpec lazy_spec(const LazyAutomaton& a) {
  a.validate();
  CubeSpec s;
  s.states = a.size;
  s.bits = bits_for(a.size);
  s.radius = a.radius;
  s.labels = a.labels;
  for (const auto& rule : a.rules) {
    Term t{{}, rule.result};
    for (size_t i = 0; i < rule.pattern.size(); ++i)
      if (!rule.pattern[i].wild) t.inputs.push_back({static_cast<int>(i) - a.radius, rule.pattern[i].mask});
    s.terms.push_back(t);
  }
  check_states(s);
  return s;
}

void set_alarm(CubeSpec& spec, const CellularAutomaton& ca, const TuringMachine& m) {
  spec.alarm = 0;
  for (size_t q = 0; q < m.states.size(); ++q)
    if (m.final[q])
      for (size_t g = 0; g < m.alphabet.size(); ++g)
        spec.alarm |= uint64_t{1} << ca.space.head(static_cast<int>(q), static_cast<int>(g));
}

InitPlan ca_init(const CARow& row0, const CubeGrid& grid) {
  const int64_t lo = row0.origin, hi = row0.origin + static_cast<int64_t>(row0.cells.size()) - 1;
  if (lo <= -grid.X || hi >= grid.X) throw Error("window too small for the initial data");
  InitPlan p;
  for (int64_t x = lo; x <= hi; ++x) p.explicit_states[x] = row0.at(x);
  p.right_chain = hi + 1;
  p.left_chain = lo - 1;
  return p;
}

InitPlan lazy_init(const LazyRow& row0) {
  InitPlan p;
  for (size_t i = 0; i < row0.cells.size(); ++i)
    if (row0.cells[i] != kLazy) p.explicit_states[row0.origin + static_cast<int64_t>(i)] = row0.cells[i];
  return p;
}

size_t CubeNetlist::cell_index(int64_t x, int64_t t, int bit) const {
  if (!grid.contains(x, t)) throw Error("cube outside the grid");
  return static_cast<size_t>(((x + grid.X) * (grid.T + 1) + t) * spec.bits + bit);
}

int CubeNetlist::read(const FiredSet& fired, int64_t x, int64_t t) const {
  int code = 0;
  bool lazy = false;
  for (int j = 0; j < spec.bits; ++j) {
    switch (read_cell(fired, net.cells()[cell_index(x, t, j)])) {
      case CellValue::Conflict: return kConflict;
      case CellValue::Lazy: lazy = true; break;
      case CellValue::One: code |= 1 << j; break;
      case CellValue::Zero: break;
    }
  }
  if (lazy) return kLazy;
  return static_cast<size_t>(code) < spec.states ? code : kConflict;
}

std::vector<int> CubeNetlist::read_row(const FiredSet& fired, int64_t t) const {
  std::vector<int> row;
  for (int64_t x = -grid.X; x <= grid.X; ++x) row.push_back(read(fired, x, t));
  return row;
}

namespace {

std::string cube_name(char kind, int64_t x, int64_t t) {
  return std::string(1, kind) + ":" + std::to_string(x) + ":" + std::to_string(t);
}

}  // namespace

CubeNetlist build_cube_netlist(const CubeSpec& spec, const CubeGrid& grid, const InitPlan& init,
                               NetStyle style) {
  check_states(spec);
  if (grid.X < 1 || grid.T < 0) throw Error("cube grid needs X >= 1 and T >= 0");
  CubeNetlist out;
  out.grid = grid;
  out.spec = spec;
  out.style = style;
  Netlist& net = out.net;
  const int b = spec.bits;
  const auto classes = spec.classes();
  const uint64_t decoded = style == NetStyle::Tile ? spec.used_states() : [&] {
    uint64_t m = 0;
    for (uint64_t c : classes) m |= c;
    return m;
  }();
  uint64_t results = 0;
  for (const auto& t : spec.terms) results |= uint64_t{1} << t.result;

  auto cell = [&](int64_t x, int64_t t, int j, int v) {
    return net.wire(cube_name('c', x, t) + ":" + std::to_string(j) + ":" + std::to_string(v));
  };
  auto bits_of = [&](int64_t x, int64_t t, int s) {
    std::vector<WireId> w;
    for (int j = 0; j < b; ++j) w.push_back(cell(x, t, j, s >> j & 1));
    return w;
  };
  auto dec = [&](int64_t x, int64_t t, int s) { return net.wire(cube_name('d', x, t) + ":" + std::to_string(s)); };
  auto cls = [&](int64_t x, int64_t t, uint64_t mask) {
    const auto i = std::lower_bound(classes.begin(), classes.end(), mask) - classes.begin();
    return net.wire(cube_name('k', x, t) + ":" + std::to_string(i));
  };

  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 0; t <= grid.T; ++t)
      for (int j = 0; j < b; ++j) {
        const std::string base = cube_name('c', x, t) + ":" + std::to_string(j);
        const WireId z = net.add_wire(base + ":0"), o = net.add_wire(base + ":1");
        net.add_cell(std::to_string(x) + ":" + std::to_string(t) + ":" + std::to_string(j), z, o);
      }

  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 0; t <= grid.T; ++t) {
      for (size_t s = 0; s < spec.states; ++s)
        if (decoded >> s & 1) {
          const WireId d = net.add_wire(cube_name('d', x, t) + ":" + std::to_string(s));
          net.add_gate(GateKind::And, bits_of(x, t, static_cast<int>(s)), std::vector{d});
        }
      for (size_t i = 0; i < classes.size(); ++i) {
        const WireId k = net.add_wire(cube_name('k', x, t) + ":" + std::to_string(i));
        std::vector<WireId> in;
        for (size_t s = 0; s < spec.states; ++s)
          if (classes[i] >> s & 1) in.push_back(dec(x, t, static_cast<int>(s)));
        net.add_gate(GateKind::Or, in, std::vector{k});
      }
      if (style == NetStyle::Tile)
        for (size_t s = 0; s < spec.states; ++s)
          if (results >> s & 1) {
            const WireId bus = net.add_wire(cube_name('n', x, t) + ":" + std::to_string(s));
            net.add_gate(GateKind::Or, std::vector{bus}, bits_of(x, t, static_cast<int>(s)));
          }
    }

  const bool clamp = spec.blank_fill && spec.clamp;
  for (int64_t x = -grid.X; x <= grid.X; ++x)
    for (int64_t t = 1; t <= grid.T; ++t) {
      auto& gates = out.term_gates[{x, t}];
      gates.assign(spec.terms.size(), -1);
      if (clamp && (x == grid.X || x == -grid.X)) continue;
      for (size_t i = 0; i < spec.terms.size(); ++i) {
        const Term& term = spec.terms[i];
        std::vector<WireId> in;
        bool present = true;
        for (const auto& ti : term.inputs) {
          const int64_t sx = x + ti.dx;
          if (!grid.contains(sx, t - 1)) {
            present = false;
            break;
          }
          if (std::popcount(ti.mask) > 1) {
            in.push_back(cls(sx, t - 1, ti.mask));
          } else if (style == NetStyle::Paper) {
            for (WireId w : bits_of(sx, t - 1, std::countr_zero(ti.mask))) in.push_back(w);
          } else {
            in.push_back(dec(sx, t - 1, std::countr_zero(ti.mask)));
          }
        }
        if (!present) continue;
        if (style == NetStyle::Paper)
          gates[i] = net.add_gate(GateKind::And, in, bits_of(x, t, term.result));
        else
          gates[i] = net.add_gate(GateKind::And, in,
                                  std::vector{net.wire(cube_name('n', x, t) + ":" + std::to_string(term.result))});
      }
    }

  if (spec.alarm) {
    const WireId alarm = net.add_wire("alarm");
    for (int64_t x = -grid.X; x <= grid.X; ++x)
      for (int64_t t = 0; t <= grid.T; ++t)
        for (size_t s = 0; s < spec.states; ++s) {
          if (!(spec.alarm >> s & 1)) continue;
          if (style == NetStyle::Paper)
            net.add_gate(GateKind::And, bits_of(x, t, static_cast<int>(s)), std::vector{alarm});
          else
            net.add_gate(GateKind::Or, std::vector{dec(x, t, static_cast<int>(s))}, std::vector{alarm});
        }
  }

  if (spec.blank_fill) {
    for (int64_t x = -grid.X; x <= grid.X; ++x) {
      net.add_wire("ir:" + std::to_string(x));
      net.add_wire("il:" + std::to_string(x));
    }
    for (int64_t x = -grid.X; x <= grid.X; ++x) {
      const WireId r = net.wire("ir:" + std::to_string(x)), l = net.wire("il:" + std::to_string(x));
      if (x < grid.X) net.add_gate(GateKind::Or, std::vector{r}, std::vector{net.wire("ir:" + std::to_string(x + 1))});
      if (x > -grid.X) net.add_gate(GateKind::Or, std::vector{l}, std::vector{net.wire("il:" + std::to_string(x - 1))});
      for (WireId chain : {r, l}) {
        net.add_gate(GateKind::Or, std::vector{chain}, bits_of(x, 0, spec.blank));
        if (clamp && ((x == grid.X && chain == r) || (x == -grid.X && chain == l)))
          for (int64_t t = 1; t <= grid.T; ++t) net.add_gate(GateKind::Or, std::vector{chain}, bits_of(x, t, spec.blank));
      }
    }
    if (init.right_chain) net.add_init(net.wire("ir:" + std::to_string(*init.right_chain)));
    if (init.left_chain) net.add_init(net.wire("il:" + std::to_string(*init.left_chain)));
  }

  for (const auto& [x, s] : init.explicit_states) {
    if (!grid.contains(x, 0)) throw Error("initial cube " + std::to_string(x) + " outside the window");
    for (WireId w : bits_of(x, 0, s)) net.add_init(w);
  }
  return out;
}

CubeNetlist ca_to_netlist(const CellularAutomaton& ca, const CARow& row0, const CubeGrid& grid) {
  return build_cube_netlist(ca_spec(ca), grid, ca_init(row0, grid), NetStyle::Paper);
}

CubeNetlist lazy_to_netlist(const LazyCompilation& c, const CubeGrid& grid) {
  return build_cube_netlist(lazy_spec(c.automaton), grid, lazy_init(c.initial), NetStyle::Paper);
}

size_t fired_terms(const CubeNetlist& n, const FiredSet& fired) {
  const auto g = fired_gates(n.net, fired);
  size_t count = 0;
  for (const auto& [cube, ids] : n.term_gates)
    for (GateId id : ids)
      if (id >= 0 && g[static_cast<size_t>(id)]) ++count;
  return count;
}

}  // namespace sandpile
