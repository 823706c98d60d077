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
#include <string>
#include <vector>

#include "sandpile/design.hpp"

namespace sandpile {

/// One stage-to-stage comparison.
struct StageCheck {
  std::string name;  // e.g. "tm=ca"
  bool run = false;  // false when the stage could not be compared
  bool ok = true;
  int64_t compared = 0;  // cubes or snapshots compared
  std::string detail;    // first mismatch, or why the check was skipped
};

struct PipelineReport {
  Target target = Target::VertexPrediction;
  CubeGrid window;
  int64_t budget = 0;
  // Machine level.
  bool tm_halted = false;
  int64_t tm_halt_step = -1;
  // Design.
  int K = 0;
  int64_t n = 0;
  int64_t tile_sites = 0;
  // Sandpile run.
  LatticeOutcome outcome = LatticeOutcome::Stable;
  int64_t topplings = 0;
  int64_t materialized = 0;
  int64_t max_odometer = 0;
  int64_t origin_odometer = 0;
  int64_t origin_step = -1;  // running toppling count at the first origin toppling
  int64_t fired_and = 0;     // AND gadgets in window cubes whose output toppled
  double seconds = 0;
  std::vector<StageCheck> checks;

  bool stages_ok() const;
  /// Human-readable report; verdicts are phrased for the bounded run.
  std::string text() const;
};

/// Compiles the machine for the target, runs every stage on the window and
/// the sandpile up to `budget` topplings, and cross-checks the stages on the
/// cubes each comparison is exact for. Throws Error on a window too small to
/// hold the machine's head inside the exact region.
PipelineReport run_pipeline(const TuringMachine& m, Target target, const CubeGrid& window, int64_t budget,
                            int K = 0);

/// Smallest X such that the head of the machine stays inside the cubes whose
/// netlist state is exact for T steps.
int64_t pipeline_window(const TuringMachine& m, Target target, int64_t T);

}  // namespace sandpile
