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

#include "sandpile/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "sandpile/circuit.hpp"
#include "sandpile/lazy.hpp"

namespace sandpile {

namespace {

std::string state_name(int s) {
  if (s == kLazy) return "lazy";
  if (s == kConflict) return "conflict";
  return std::to_string(s);
}

// Cubes |x| <= X - speed * t see no effect of the missing cubes beyond the
// window: the boundary damage moves inwards one radius per step.
bool exact(const CubeGrid& g, int speed, int64_t x, int64_t t) { return std::abs(x) <= g.X - speed * t; }

int64_t tape_reach(const TapeSnapshot& s) {
  int64_t r = std::abs(s.head);
  for (const auto& [x, v] : s.tape) r = std::max<int64_t>(r, std::abs(x));
  return r;
}

template <typename F>
StageCheck compare_cubes(const std::string& name, const CubeGrid& g, int speed, F&& pair) {
  StageCheck c{name, true, true, 0, ""};
  for (int64_t t = 0; t <= g.T; ++t)
    for (int64_t x = -g.X; x <= g.X; ++x) {
      if (speed > 0 && !exact(g, speed, x, t)) continue;
      const auto [a, b] = pair(x, t);
      ++c.compared;
      if (a != b && c.ok) {
        c.ok = false;
        c.detail = "cube (" + std::to_string(x) + ", " + std::to_string(t) + "): " + state_name(a) + " vs " +
                   state_name(b);
      }
    }
  return c;
}

StageCheck skipped(const std::string& name, const std::string& why) { return {name, false, true, 0, why}; }

}  // namespace

bool PipelineReport::stages_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

int64_t pipeline_window(const TuringMachine& m, Target target, int64_t T) {
  const int speed = target == Target::GlobalHalting ? 2 : 1;
  int64_t X = 1;
  const auto trace = tm_trace(m, T);
  for (size_t t = 0; t < trace.size(); ++t)
    X = std::max<int64_t>(X, tape_reach(trace[t]) + speed * static_cast<int64_t>(t) + 2);
  return X;
}

PipelineReport run_pipeline(const TuringMachine& m, Target target, const CubeGrid& window, int64_t budget, int K) {
  const auto start = std::chrono::steady_clock::now();
  m.validate();
  PipelineReport r;
  r.target = target;
  r.window = window;
  r.budget = budget;
  const CubeGrid& g = window;
  const auto trace = tm_trace(m, g.T);
  for (size_t t = 0; t < trace.size(); ++t)
    if (trace[t].halted) {
      r.tm_halted = true;
      r.tm_halt_step = static_cast<int64_t>(t);
      break;
    }

  CompilePlan plan;
  plan.target = target;
  plan.machine = m;
  plan.window = g;
  plan.K = K;

  if (target != Target::GlobalHalting) {
    for (size_t t = 0; t < trace.size(); ++t)
      if (tape_reach(trace[t]) + static_cast<int64_t>(t) + 1 > g.X)
        throw Error("window overflow: the machine reaches square " + std::to_string(tape_reach(trace[t])) +
                    " at step " + std::to_string(t) + ", need X >= " + std::to_string(pipeline_window(m, target, g.T)));
    const CellularAutomaton ca = tm_to_ca(m);
    const auto rows = ca_run(ca, encode_ca_row(ca, trace[0]), g.T);
    StageCheck tc{"tm=ca", true, true, 0, ""};
    for (int64_t t = 0; t <= g.T; ++t) {
      const auto d = decode_ca_row(ca, m, rows[static_cast<size_t>(t)]);
      ++tc.compared;
      if ((!d || *d != trace[static_cast<size_t>(t)]) && tc.ok) {
        tc.ok = false;
        tc.detail = "step " + std::to_string(t) + ": " +
                    (d ? describe(m, *d) : std::string("undecodable row")) + " vs " + describe(m, trace[static_cast<size_t>(t)]);
      }
    }
    r.checks.push_back(tc);

    const PlacedDesign d = compile(plan);
    const CubeNetlist cn = build_cube_netlist(d.spec, g, d.init, NetStyle::Tile);
    const FiredSet fired = eval_closure(cn.net);
    r.checks.push_back(compare_cubes("ca=netlist", g, 1, [&](int64_t x, int64_t t) {
      return std::pair{rows[static_cast<size_t>(t)].at(x), cn.read(fired, x, t)};
    }));

    r.K = d.tile->K;
    r.n = d.n();
    r.tile_sites = static_cast<int64_t>(d.tile->sites.size());
    SparseLattice lat = d.lattice();
    lat.watch({0, 0, 0});
    const LatticeRun run = lat.stabilize(budget);
    r.outcome = run.outcome;
    r.topplings = run.topplings;
    r.origin_odometer = lat.odometer({0, 0, 0});
    r.origin_step = lat.first_toppling();
    r.max_odometer = lat.max_odometer();
    r.materialized = static_cast<int64_t>(lat.materialized());
    r.fired_and = d.fired_elements(lat, ElementKind::And);
    if (target == Target::LocalHalting && r.origin_odometer > 0)
      r.checks.push_back(skipped("netlist=sandpile", "bomb set off, cell wires are overrun"));
    else if (run.outcome != LatticeOutcome::Stable)
      r.checks.push_back(skipped("netlist=sandpile", "sandpile did not stabilize within the budget"));
    else
      r.checks.push_back(compare_cubes("netlist=sandpile", g, 0, [&](int64_t x, int64_t t) {
        return std::pair{cn.read(fired, x, t), d.read(lat, x, t)};
      }));
  } else {
    const LazyCompilation lc = tm_to_lazy(m);
    const LazyTrace lt = lazy_run(lc.automaton, lc.initial, g.T);
    StageCheck tc{"tm=lazy", true, true, 0, ""};
    const int64_t last = r.tm_halted ? std::min(r.tm_halt_step, g.T) : g.T;
    for (int64_t t = 0; t <= last && t < static_cast<int64_t>(lt.rows.size()); ++t) {
      const auto d = decode_lazy_row(lc, m, lt.rows[static_cast<size_t>(t)]);
      ++tc.compared;
      if ((!d || *d != trace[static_cast<size_t>(t)]) && tc.ok) {
        tc.ok = false;
        tc.detail = "step " + std::to_string(t) + ": lazy row does not decode to the machine";
      }
    }
    if (lt.status == LazyTrace::Status::Malfunction) {
      tc.ok = false;
      tc.detail = "lazy automaton malfunctioned at step " + std::to_string(lt.time);
    }
    r.checks.push_back(tc);
    auto lazy_at = [&](int64_t x, int64_t t) {
      return t < static_cast<int64_t>(lt.rows.size()) ? lt.rows[static_cast<size_t>(t)].at(x) : kLazy;
    };

    const PlacedDesign d = compile(plan);
    const CubeNetlist cn = build_cube_netlist(d.spec, g, d.init, NetStyle::Tile);
    const FiredSet fired = eval_closure(cn.net);
    r.checks.push_back(compare_cubes("lazy=netlist", g, 2, [&](int64_t x, int64_t t) {
      return std::pair{lazy_at(x, t), cn.read(fired, x, t)};
    }));

    r.K = d.tile->K;
    r.n = d.n();
    r.tile_sites = static_cast<int64_t>(d.tile->sites.size());
    SparseLattice lat = d.lattice();
    lat.watch({0, 0, 0});
    const LatticeRun run = lat.stabilize(budget);
    r.outcome = run.outcome;
    r.topplings = run.topplings;
    r.origin_odometer = lat.odometer({0, 0, 0});
    r.origin_step = lat.first_toppling();
    r.max_odometer = lat.max_odometer();
    r.materialized = static_cast<int64_t>(lat.materialized());
    r.fired_and = d.fired_elements(lat, ElementKind::And);
    if (run.outcome != LatticeOutcome::Stable)
      r.checks.push_back(skipped("lazy=sandpile", "sandpile did not stabilize within the budget"));
    else
      r.checks.push_back(compare_cubes("lazy=sandpile", g, 0, [&](int64_t x, int64_t t) {
        return std::pair{lazy_at(x, t), d.read(lat, x, t)};
      }));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string PipelineReport::text() const {
  std::ostringstream out;
  out << "target: " << to_string(target) << "\n";
  out << "window: X=" << window.X << " T=" << window.T << "\n";
  out << "machine: " << (tm_halted ? "halts at step " + std::to_string(tm_halt_step) : "no halt within T") << "\n";
  out << "tile: K=" << K << " n=" << n << " sites=" << tile_sites << "\n";
  for (const auto& c : checks) {
    out << "stage " << c.name << ": ";
    if (!c.run)
      out << "skipped (" << c.detail << ")";
    else if (c.ok)
      out << "ok (" << c.compared << " compared)";
    else
      out << "MISMATCH " << c.detail;
    out << "\n";
  }
  out << "outcome: " << to_string(outcome) << " after " << topplings << " topplings (budget " << budget << ")\n";
  out << "materialized sites: " << materialized << ", max odometer: " << max_odometer << "\n";
  out << "fired AND gadgets in window: " << fired_and << "\n";
  out << "origin odometer: " << origin_odometer << "\n";
  out << "verdict (bounded run): ";
  switch (target) {
    case Target::VertexPrediction:
    case Target::LocalHalting:
      if (origin_step >= 0)
        out << "origin toppled at sandpile step " << origin_step;
      else
        out << "no origin toppling within budget";
      break;
    case Target::GlobalHalting:
      out << (outcome == LatticeOutcome::Stable ? "stabilized within budget" : "did not stabilize within budget");
      break;
  }
  out << "\n";
  return out.str();
}

}  // namespace sandpile
