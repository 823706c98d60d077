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


// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 stable / success, 1 input or usage error, 2 budget
// exhausted, 3 stage mismatch or misbehaving gadget.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sandpile/sandpile_c.h"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kInputError = 1, kBudget = 2, kMismatch = 3;
constexpr int64_t kFallbackBudget = 10'000'000;

struct Failure {
  int code;
  std::string message;
};

void check(sp_status s) {
  if (s != SP_OK) throw Failure{kInputError, sp_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInputError, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kInputError, "cannot write " + path.string()};
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  sp_string_free(s);
  return out;
}

int64_t default_budget() {
  if (const char* env = std::getenv("SANDPILE_BUDGET_DEFAULT")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && end != env && v >= 0) return v;
    throw Failure{kInputError, std::string("SANDPILE_BUDGET_DEFAULT is not a count: ") + env};
  }
  return kFallbackBudget;
}

using Lattice = std::unique_ptr<sp_lattice, decltype(&sp_lattice_free)>;
using Design = std::unique_ptr<sp_design, decltype(&sp_design_free)>;

Lattice load_pf(const std::string& path) {
  sp_lattice* raw = nullptr;
  const sp_status s = sp_lattice_from_pf(read_file(path).c_str(), &raw);
  if (s != SP_OK) throw Failure{kInputError, path + ": " + sp_last_error()};
  return {raw, &sp_lattice_free};
}

const char* outcome_name(sp_outcome o) {
  switch (o) {
    case SP_STABLE: return "Stable";
    case SP_BUDGET_EXHAUSTED: return "BudgetExhausted";
    case SP_WINDOW_EXCEEDED: return "WindowExceeded";
  }
  return "?";
}

int outcome_code(sp_outcome o) { return o == SP_STABLE ? kOk : kBudget; }

// Box holding every materialized site, flattened to the requested slice.
void bounds(const sp_lattice* lat, int64_t lo[3], int64_t hi[3]) {
  if (sp_lattice_bounds(lat, lo, hi) != SP_OK) lo[0] = lo[1] = lo[2] = hi[0] = hi[1] = hi[2] = 0;
}

std::vector<int64_t> parse_box(const std::string& s) {
  std::vector<int64_t> v;
  std::istringstream in(s);
  for (std::string p; std::getline(in, p, ',');) {
    char* end = nullptr;
    v.push_back(std::strtoll(p.c_str(), &end, 10));
    if (p.empty() || *end != '\0') throw Failure{kInputError, "--box expects x0,y0,z0,x1,y1,z1"};
  }
  if (v.size() != 6) throw Failure{kInputError, "--box expects x0,y0,z0,x1,y1,z1"};
  return v;
}

sp_target parse_target(const std::string& s) {
  if (s == "vertex") return SP_TARGET_VERTEX;
  if (s == "global") return SP_TARGET_GLOBAL;
  if (s == "local") return SP_TARGET_LOCAL;
  throw Failure{kInputError, "unknown target '" + s + "' (vertex, global, local)"};
}

std::pair<int64_t, int64_t> parse_window(const std::string& s) {
  const auto comma = s.find(',');
  char* e1 = nullptr;
  char* e2 = nullptr;
  if (comma != std::string::npos) {
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const long long X = std::strtoll(a.c_str(), &e1, 10), T = std::strtoll(b.c_str(), &e2, 10);
    if (!a.empty() && !b.empty() && *e1 == '\0' && *e2 == '\0' && T >= 0) return {X, T};
  }
  throw Failure{kInputError, "--window expects X,T"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sandpile simulator and machine-to-sandpile compiler"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sp_version());

  int64_t budget = -1;
  std::string input, out_path, fire, box_text, format = "slice", target_text = "vertex", window_text, pm_path;
  int64_t snapshot_every = 0, slice_z = 0;

  auto* sim = app.add_subcommand("simulate", "Stabilize a periodic-plus-finite configuration");
  sim->add_option("config", input, "PF configuration file")->required();
  sim->add_option("--budget", budget, "Toppling budget (default SANDPILE_BUDGET_DEFAULT or 10^7)");
  sim->add_option("--snapshot-every", snapshot_every, "Write a slice every N topplings")->check(CLI::NonNegativeNumber);
  sim->add_option("--z", slice_z, "Slice height for snapshots");
  sim->add_option("--out", out_path, "Output directory for odometer.csv and snapshots");

  auto* dp = app.add_subcommand("decide-periodic", "Answer the three questions for a periodic background");
  dp->add_option("config", input, "PF file with an empty delta")->required();

  auto* df = app.add_subcommand("decide-finite", "Decide halting on a finite graph");
  df->add_option("graph", input, "Graph configuration file")->required();

  auto* vg = app.add_subcommand("verify-gadget", "Run a gadget in isolation");
  vg->add_option("name", input, "wire:L, diode, diode:S, and:K, or:K, wait1, wait2")->required();
  vg->add_option("--fire", fire, "Comma-separated input ports to fire");
  vg->add_option("--budget", budget, "Toppling budget");

  auto* cp = app.add_subcommand("compile", "Compile a plan to a PF configuration and a port map");
  cp->add_option("plan", input, "Plan file")->required();
  cp->add_option("--out", out_path, "PF output file (default stdout)");
  cp->add_option("--port-map", pm_path, "Port map output file");

  auto* rp = app.add_subcommand("run-pipeline", "Run and cross-check every compilation stage");
  rp->add_option("machine", input, "Turing machine file")->required();
  rp->add_option("--target", target_text, "vertex, global or local");
  rp->add_option("--window", window_text, "X,T (default: smallest exact window for T=30)");
  rp->add_option("--budget", budget, "Sandpile toppling budget");

  auto* ex = app.add_subcommand("export-snapshot", "Stabilize, then export a box");
  ex->add_option("config", input, "PF configuration file")->required();
  ex->add_option("--budget", budget, "Toppling budget");
  ex->add_option("--box", box_text, "x0,y0,z0,x1,y1,z1 (default: materialized bounds)");
  ex->add_option("--z", slice_z, "Slice height");
  ex->add_option("--format", format, "slice or csv")->check(CLI::IsMember({"slice", "csv"}));
  ex->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (budget < 0) budget = default_budget();

    if (*sim) {
      Lattice lat = load_pf(input);
      if (!out_path.empty()) fs::create_directories(out_path);
      sp_outcome outcome = SP_STABLE;
      int64_t done = 0, step = 0;
      for (int snap = 0;; ++snap) {
        const int64_t chunk = snapshot_every > 0 ? std::min(snapshot_every, budget - done) : budget - done;
        check(sp_lattice_stabilize(lat.get(), chunk, &outcome, &step));
        done += step;
        const bool last = outcome == SP_STABLE || done >= budget;
        if (!out_path.empty() && (snapshot_every > 0 || last)) {
          int64_t lo[3], hi[3];
          bounds(lat.get(), lo, hi);
          char* s = nullptr;
          check(sp_lattice_slice(lat.get(), lo, hi, slice_z, &s));
          write_file(fs::path(out_path) / (last ? std::string("final_slice.txt")
                                                : "snapshot_" + std::to_string(snap) + ".txt"),
                     take(s));
        }
        if (last) break;
      }
      int64_t total = 0, max_odo = 0, mat = 0;
      check(sp_lattice_stats(lat.get(), &total, &max_odo, &mat));
      if (!out_path.empty()) {
        char* csv = nullptr;
        check(sp_lattice_odometer_csv(lat.get(), &csv));
        write_file(fs::path(out_path) / "odometer.csv", take(csv));
      }
      std::cout << "outcome: " << outcome_name(outcome) << "\ntopplings: " << total << "\nmax odometer: " << max_odo
                << "\nmaterialized: " << mat << "\n";
      return outcome_code(outcome);
    }

    if (*dp) {
      sp_periodic_answer a{};
      const std::string text = read_file(input);
      if (sp_decide_periodic(text.c_str(), &a) != SP_OK) throw Failure{kInputError, input + ": " + sp_last_error()};
      std::cout << a.vertex << a.global << a.local << "\nvertex: " << a.vertex << "\nglobal: " << a.global
                << "\nlocal: " << a.local << "\norigin fired: " << (a.origin_fired ? "yes" : "no")
                << "\nrounds: " << a.trace_length << "\n";
      return kOk;
    }

    if (*df) {
      sp_finite_answer a{};
      const std::string text = read_file(input);
      if (sp_decide_finite(text.c_str(), &a) != SP_OK) throw Failure{kInputError, input + ": " + sp_last_error()};
      std::cout << "halts: " << (a.halts ? "yes" : "no") << "\ncap: " << a.cap << "\ntopplings: " << a.topplings
                << "\n";
      return kOk;
    }

    if (*vg) {
      char* report = nullptr;
      int ok = 0;
      check(sp_verify_gadget(input.c_str(), fire.c_str(), budget, &report, &ok));
      const std::string text = take(report);
      std::cout << text << "verdict: " << (ok ? "ok" : "MISBEHAVES") << "\n";
      if (text.find("outcome: BudgetExhausted") != std::string::npos) return kBudget;
      return ok ? kOk : kMismatch;
    }

    if (*cp) {
      const std::string base = fs::path(input).parent_path().string();
      sp_design* raw = nullptr;
      if (sp_compile_plan(read_file(input).c_str(), base.empty() ? "." : base.c_str(), &raw) != SP_OK)
        throw Failure{kInputError, input + ": " + sp_last_error()};
      Design d(raw, &sp_design_free);
      char* pf = nullptr;
      check(sp_design_pf(d.get(), &pf));
      if (out_path.empty())
        std::cout << take(pf);
      else
        write_file(out_path, take(pf));
      if (!pm_path.empty()) {
        char* pm = nullptr;
        check(sp_design_port_map(d.get(), &pm));
        write_file(pm_path, take(pm));
      }
      int64_t n = 0, tile = 0, delta = 0;
      int K = 0;
      check(sp_design_info(d.get(), &n, &K, &tile, &delta));
      std::cerr << "tile n=" << n << " K=" << K << " sites=" << tile << " delta=" << delta << "\n";
      return kOk;
    }

    if (*rp) {
      const sp_target t = parse_target(target_text);
      auto [X, T] = window_text.empty() ? std::pair<int64_t, int64_t>{0, 30} : parse_window(window_text);
      sp_pipeline_result r{};
      char* report = nullptr;
      if (sp_run_pipeline(read_file(input).c_str(), t, X, T, budget, &r, &report) != SP_OK)
        throw Failure{kInputError, input + ": " + sp_last_error()};
      std::cout << take(report);
      if (!r.stages_ok) return kMismatch;
      return outcome_code(r.outcome);
    }

    if (*ex) {
      Lattice lat = load_pf(input);
      sp_outcome outcome = SP_STABLE;
      check(sp_lattice_stabilize(lat.get(), budget, &outcome, nullptr));
      int64_t lo[3], hi[3];
      if (box_text.empty()) {
        bounds(lat.get(), lo, hi);
      } else {
        const auto b = parse_box(box_text);
        for (int i = 0; i < 3; ++i) lo[i] = b[static_cast<size_t>(i)], hi[i] = b[static_cast<size_t>(i) + 3];
      }
      char* s = nullptr;
      check(format == "csv" ? sp_lattice_csv(lat.get(), lo, hi, &s) : sp_lattice_slice(lat.get(), lo, hi, slice_z, &s));
      if (out_path.empty())
        std::cout << take(s);
      else
        write_file(out_path, take(s));
      std::cerr << "outcome: " << outcome_name(outcome) << "\n";
      return outcome_code(outcome);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
