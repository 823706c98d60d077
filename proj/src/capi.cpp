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


#include "sandpile/sandpile_c.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <set>
#include <sstream>
#include <string>

#include "sandpile/design.hpp"
#include "sandpile/gadgets.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/periodic.hpp"
#include "sandpile/pipeline.hpp"
#include "sandpile/tm.hpp"

using namespace sandpile;

// The design is shared because its background reads the design in place.
struct sp_lattice {
  std::shared_ptr<const PlacedDesign> design;
  SparseLattice lat;
};

struct sp_design {
  std::shared_ptr<const PlacedDesign> design;
};

namespace {

thread_local std::string g_error;

sp_status fail(sp_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

bool is_parse_message(const std::string& m) { return m.rfind("line ", 0) == 0; }

template <typename F>
sp_status guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return fail(is_parse_message(e.what()) ? SP_ERR_PARSE : SP_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SP_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

sp_outcome to_c(LatticeOutcome o) {
  switch (o) {
    case LatticeOutcome::Stable: return SP_STABLE;
    case LatticeOutcome::BudgetExhausted: return SP_BUDGET_EXHAUSTED;
    case LatticeOutcome::WindowExceeded: return SP_WINDOW_EXCEEDED;
  }
  return SP_STABLE;
}

Target from_c(sp_target t) {
  switch (t) {
    case SP_TARGET_VERTEX: return Target::VertexPrediction;
    case SP_TARGET_GLOBAL: return Target::GlobalHalting;
    case SP_TARGET_LOCAL: return Target::LocalHalting;
  }
  throw Error("unknown target " + std::to_string(static_cast<int>(t)));
}

Box box_of(const int64_t lo[3], const int64_t hi[3]) { return {{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}}; }

int64_t parse_count(const std::string& s, const std::string& what) {
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || v < 0) throw Error("bad " + what + " '" + s + "'");
  return v;
}

Gadget gadget_by_name(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool has_arg = colon != std::string::npos;
  const int64_t arg = has_arg ? parse_count(spec.substr(colon + 1), "gadget parameter") : -1;
  if (name == "wire") return build_wire(straight({0, 0, 0}, {1, 0, 0}, has_arg ? arg : 5));
  if (name == "diode") return build_diode(has_arg ? arg : 4);
  if (name == "and") return build_and(has_arg ? static_cast<int>(arg) : 2);
  if (name == "or") return build_or(has_arg ? static_cast<int>(arg) : 2);
  if (name == "wait1" && !has_arg) return build_wait1();
  if (name == "wait2" && !has_arg) return build_wait2();
  throw Error("unknown gadget '" + spec + "' (wire:L, diode, diode:S, and:K, or:K, wait1, wait2)");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out.empty() ? "-" : out;
}

std::shared_ptr<const PlacedDesign> hold(PlacedDesign d) { return std::make_shared<const PlacedDesign>(std::move(d)); }

}  // namespace

extern "C" {

const char* sp_version(void) { return "0.1.0"; }
const char* sp_last_error(void) { return g_error.c_str(); }
void sp_string_free(char* s) { std::free(s); }

sp_status sp_lattice_from_pf(const char* text, sp_lattice** out) {
  if (!text || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    const PFConfiguration cfg = parse_pf(text);
    if (cfg.background.max_entry() >= 6) throw Error("background is not stable");
    auto h = std::make_unique<sp_lattice>(sp_lattice{nullptr, SparseLattice(3, cfg.background.as_background())});
    for (const auto& [s, k] : cfg.delta) h->lat.add(s, k);
    *out = h.release();
    return SP_OK;
  });
}

void sp_lattice_free(sp_lattice* lat) { delete lat; }

sp_status sp_lattice_add(sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t chips) {
  if (!lat) return fail(SP_ERR_INVALID, "null lattice");
  return guarded([&] {
    if (!packable({x, y, z})) throw Error("site out of range");
    lat->lat.add({x, y, z}, chips);
    return SP_OK;
  });
}

sp_status sp_lattice_stabilize(sp_lattice* lat, int64_t budget, sp_outcome* outcome, int64_t* topplings) {
  if (!lat) return fail(SP_ERR_INVALID, "null lattice");
  if (budget < 0) return fail(SP_ERR_INVALID, "negative budget");
  return guarded([&] {
    const LatticeRun run = lat->lat.stabilize(budget);
    if (outcome) *outcome = to_c(run.outcome);
    if (topplings) *topplings = run.topplings;
    return SP_OK;
  });
}

sp_status sp_lattice_chips(const sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t* out) {
  if (!lat || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = lat->lat.chips({x, y, z});
    return SP_OK;
  });
}

sp_status sp_lattice_odometer(const sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t* out) {
  if (!lat || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = lat->lat.odometer({x, y, z});
    return SP_OK;
  });
}

sp_status sp_lattice_stats(const sp_lattice* lat, int64_t* total_topplings, int64_t* max_odometer,
                           int64_t* materialized) {
  if (!lat) return fail(SP_ERR_INVALID, "null lattice");
  return guarded([&] {
    if (total_topplings) *total_topplings = lat->lat.total_topplings();
    if (max_odometer) *max_odometer = lat->lat.max_odometer();
    if (materialized) *materialized = static_cast<int64_t>(lat->lat.materialized());
    return SP_OK;
  });
}

sp_status sp_lattice_slice(const sp_lattice* lat, const int64_t lo[3], const int64_t hi[3], int64_t z, char** out) {
  if (!lat || !lo || !hi || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = dup(lat->lat.export_slice(box_of(lo, hi), z));
    return SP_OK;
  });
}

sp_status sp_lattice_csv(const sp_lattice* lat, const int64_t lo[3], const int64_t hi[3], char** out) {
  if (!lat || !lo || !hi || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = dup(lat->lat.export_csv(box_of(lo, hi)));
    return SP_OK;
  });
}

sp_status sp_lattice_odometer_csv(const sp_lattice* lat, char** out) {
  if (!lat || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    std::ostringstream os;
    os << "x,y,z,odometer\n";
    for (const auto& [s, k] : lat->lat.odometer_entries()) os << s.x << ',' << s.y << ',' << s.z << ',' << k << '\n';
    *out = dup(os.str());
    return SP_OK;
  });
}

sp_status sp_lattice_bounds(const sp_lattice* lat, int64_t lo[3], int64_t hi[3]) {
  if (!lat || !lo || !hi) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    if (lat->lat.materialized() == 0) throw Error("no materialized sites");
    Site a{kCoordLimit, kCoordLimit, kCoordLimit}, b{-kCoordLimit, -kCoordLimit, -kCoordLimit};
    lat->lat.for_each([&](const Site& s, int64_t, int64_t) {
      a = {std::min(a.x, s.x), std::min(a.y, s.y), std::min(a.z, s.z)};
      b = {std::max(b.x, s.x), std::max(b.y, s.y), std::max(b.z, s.z)};
    });
    lo[0] = a.x, lo[1] = a.y, lo[2] = a.z;
    hi[0] = b.x, hi[1] = b.y, hi[2] = b.z;
    return SP_OK;
  });
}

sp_status sp_decide_periodic(const char* pf_text, sp_periodic_answer* out) {
  if (!pf_text || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    const PFConfiguration cfg = parse_pf(pf_text);
    if (!cfg.delta.empty()) throw Error("the periodic decider takes a background without delta");
    const PeriodicDecision d = decide_periodic(cfg.background);
    out->vertex = verdict_char(d.vertex);
    out->global = verdict_char(d.global);
    out->local = verdict_char(d.local);
    out->origin_fired = d.origin_fired ? 1 : 0;
    out->trace_length = d.trace_length;
    return SP_OK;
  });
}

sp_status sp_decide_finite(const char* graph_text, sp_finite_answer* out) {
  if (!graph_text || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    const GraphConfig g = parse_graph_config(graph_text);
    const FiniteDecision d = decide_finite_halting(g.graph, g.chips);
    out->halts = d.halts ? 1 : 0;
    out->cap = d.cap;
    out->topplings = d.run.topplings;
    return SP_OK;
  });
}

sp_status sp_verify_gadget(const char* name, const char* fire, int64_t budget, char** report, int* ok) {
  if (!name || !report || !ok) return fail(SP_ERR_INVALID, "null argument");
  if (budget < 0) return fail(SP_ERR_INVALID, "negative budget");
  return guarded([&] {
    const Gadget g = gadget_by_name(name);
    std::set<std::string> ports;
    std::istringstream fs(fire ? fire : "");
    for (std::string p; std::getline(fs, p, ',');)
      if (!p.empty()) {
        g.port(p);  // throws on an unknown port
        ports.insert(p);
      }
    const GadgetReport r = verify_gadget(g, ports, budget);
    Box box{{kCoordLimit, kCoordLimit, 0}, {-kCoordLimit, -kCoordLimit, 0}};
    for (const auto& [s, k] : g.footprint) {
      box.lo = {std::min(box.lo.x, s.x), std::min(box.lo.y, s.y), 0};
      box.hi = {std::max(box.hi.x, s.x), std::max(box.hi.y, s.y), 0};
    }
    box = box.grown(1);
    std::vector<std::string> toppled;
    for (const auto& [p, t] : r.toppled)
      if (t) toppled.push_back(p);
    const bool good = r.run.outcome == LatticeOutcome::Stable && r.backfired_inputs.empty() &&
                      r.max_off_deposit <= g.deposit_bound && r.max_odometer <= 1;
    std::ostringstream os;
    os << "gadget: " << name << "\n";
    os << "fired inputs: " << join({ports.begin(), ports.end()}) << "\n";
    os << "outcome: " << to_string(r.run.outcome) << " after " << r.run.topplings << " topplings\n";
    os << "toppled ports: " << join(toppled) << "\n";
    os << "fired outputs: " << join(r.fired_outputs) << "\n";
    os << "back-fired inputs: " << join(r.backfired_inputs) << "\n";
    os << "max off-footprint deposit: " << r.max_off_deposit << " (bound " << g.deposit_bound << ")\n";
    os << "max odometer: " << r.max_odometer << "\n";
    os << "slice z=0 after:\n" << r.lattice.export_slice(box, 0);
    *report = dup(os.str());
    *ok = good ? 1 : 0;
    return SP_OK;
  });
}

sp_status sp_compile_plan(const char* plan_text, const char* base_dir, sp_design** out) {
  if (!plan_text || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    const CompilePlan plan = parse_plan(plan_text, base_dir ? base_dir : ".");
    *out = new sp_design{hold(compile(plan))};
    return SP_OK;
  });
}

sp_status sp_compile_machine(const char* machine_text, sp_target target, int64_t X, int64_t T, int K,
                             sp_design** out) {
  if (!machine_text || !out) return fail(SP_ERR_INVALID, "null argument");
  if (T < 0) return fail(SP_ERR_INVALID, "negative T");
  return guarded([&] {
    CompilePlan plan;
    plan.target = from_c(target);
    plan.machine = parse_machine(machine_text);
    plan.window = {X > 0 ? X : pipeline_window(plan.machine, plan.target, T), T};
    plan.K = K;
    *out = new sp_design{hold(compile(plan))};
    return SP_OK;
  });
}

void sp_design_free(sp_design* d) { delete d; }

sp_status sp_design_info(const sp_design* d, int64_t* n, int* K, int64_t* tile_sites, int64_t* delta_sites) {
  if (!d) return fail(SP_ERR_INVALID, "null design");
  return guarded([&] {
    if (n) *n = d->design->n();
    if (K) *K = d->design->tile->K;
    if (tile_sites) *tile_sites = static_cast<int64_t>(d->design->tile->sites.size());
    if (delta_sites) *delta_sites = static_cast<int64_t>(d->design->delta.size());
    return SP_OK;
  });
}

sp_status sp_design_pf(const sp_design* d, char** out) {
  if (!d || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = dup(emit_pf(d->design->pf()));
    return SP_OK;
  });
}

sp_status sp_design_port_map(const sp_design* d, char** out) {
  if (!d || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = dup(d->design->port_map());
    return SP_OK;
  });
}

sp_status sp_design_lattice(const sp_design* d, sp_lattice** out) {
  if (!d || !out) return fail(SP_ERR_INVALID, "null argument");
  return guarded([&] {
    *out = new sp_lattice{d->design, d->design->lattice()};
    return SP_OK;
  });
}

sp_status sp_run_pipeline(const char* machine_text, sp_target target, int64_t X, int64_t T, int64_t budget,
                          sp_pipeline_result* out, char** report) {
  if (!machine_text || !out) return fail(SP_ERR_INVALID, "null argument");
  if (T < 0 || budget < 0) return fail(SP_ERR_INVALID, "negative T or budget");
  return guarded([&] {
    const TuringMachine m = parse_machine(machine_text);
    const Target t = from_c(target);
    const CubeGrid g{X > 0 ? X : pipeline_window(m, t, T), T};
    const PipelineReport r = run_pipeline(m, t, g, budget);
    out->stages_ok = r.stages_ok() ? 1 : 0;
    out->outcome = to_c(r.outcome);
    out->topplings = r.topplings;
    out->origin_odometer = r.origin_odometer;
    out->origin_step = r.origin_step;
    out->max_odometer = r.max_odometer;
    out->fired_and = r.fired_and;
    out->tm_halted = r.tm_halted ? 1 : 0;
    if (report) *report = dup(r.text());
    return SP_OK;
  });
}

}  // extern "C"
