/*
 * Copyright 2026 The Sandpile Compiler Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SANDPILE_C_H_
#define SANDPILE_C_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SP_API __attribute__((visibility("default")))
#else
#define SP_API
#endif

/* Every call returns a status. On failure sp_last_error() holds a message
 * for the calling thread until its next failing call. */
typedef enum {
  SP_OK = 0,
  SP_ERR_PARSE = 1,     /* malformed input; message carries line and column */
  SP_ERR_INVALID = 2,   /* bad argument or unsupported input */
  SP_ERR_IO = 3,
  SP_ERR_INTERNAL = 4
} sp_status;

typedef enum { SP_STABLE = 0, SP_BUDGET_EXHAUSTED = 1, SP_WINDOW_EXCEEDED = 2 } sp_outcome;

typedef enum { SP_TARGET_VERTEX = 0, SP_TARGET_GLOBAL = 1, SP_TARGET_LOCAL = 2 } sp_target;

/* Opaque handles. */
typedef struct sp_lattice sp_lattice;   /* periodic background plus added chips, being stabilized */
typedef struct sp_design sp_design;     /* compiled, placed design */

SP_API const char* sp_version(void);
SP_API const char* sp_last_error(void);
/* Frees strings returned through char** out-parameters. */
SP_API void sp_string_free(char* s);

/* ---- Lattices ---- */

/* Periodic-plus-finite configuration text (periods / pattern / delta). */
SP_API sp_status sp_lattice_from_pf(const char* text, sp_lattice** out);
SP_API void sp_lattice_free(sp_lattice* lat);
SP_API sp_status sp_lattice_add(sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t chips);
SP_API sp_status sp_lattice_stabilize(sp_lattice* lat, int64_t budget, sp_outcome* outcome, int64_t* topplings);
SP_API sp_status sp_lattice_chips(const sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t* out);
SP_API sp_status sp_lattice_odometer(const sp_lattice* lat, int64_t x, int64_t y, int64_t z, int64_t* out);
SP_API sp_status sp_lattice_stats(const sp_lattice* lat, int64_t* total_topplings, int64_t* max_odometer,
                                  int64_t* materialized);
/* Text grid of the z slice of the box, top row the largest y. */
SP_API sp_status sp_lattice_slice(const sp_lattice* lat, const int64_t lo[3], const int64_t hi[3], int64_t z,
                                  char** out);
/* `x,y,z,chips` for every non-zero site of the box. */
SP_API sp_status sp_lattice_csv(const sp_lattice* lat, const int64_t lo[3], const int64_t hi[3], char** out);
/* `x,y,z,odometer` for every site that toppled. */
SP_API sp_status sp_lattice_odometer_csv(const sp_lattice* lat, char** out);
/* Smallest box holding every materialized site. */
SP_API sp_status sp_lattice_bounds(const sp_lattice* lat, int64_t lo[3], int64_t hi[3]);

/* ---- Deciders ---- */

typedef struct {
  char vertex;   /* 'Y', 'N' or 'C' (conditional) */
  char global;
  char local;
  int origin_fired;
  int64_t trace_length;
} sp_periodic_answer;

/* Periodic background given as PF text; the delta section must be empty. */
SP_API sp_status sp_decide_periodic(const char* pf_text, sp_periodic_answer* out);

typedef struct {
  int halts;
  int64_t cap;
  int64_t topplings;
} sp_finite_answer;

/* Graph text: `vertices N`, `edge A B` lines, then `chips c0 c1 ...`. */
SP_API sp_status sp_decide_finite(const char* graph_text, sp_finite_answer* out);

/* ---- Gadgets ---- */

/* name: wire:L, diode, diode:S, and:K, or:K, wait1, wait2. `fire` is a
 * comma-separated port list. The report lists toppled ports, fired
 * outputs, back-fired inputs, the off-footprint deposit bound and the
 * z = 0 slice after the run. */
SP_API sp_status sp_verify_gadget(const char* name, const char* fire, int64_t budget, char** report, int* ok);

/* ---- Compiler ---- */

/* Plan text (target / machine / window / side); machine paths resolve
 * against base_dir. */
SP_API sp_status sp_compile_plan(const char* plan_text, const char* base_dir, sp_design** out);
SP_API sp_status sp_compile_machine(const char* machine_text, sp_target target, int64_t X, int64_t T, int K,
                                    sp_design** out);
SP_API void sp_design_free(sp_design* d);
SP_API sp_status sp_design_info(const sp_design* d, int64_t* n, int* K, int64_t* tile_sites, int64_t* delta_sites);
SP_API sp_status sp_design_pf(const sp_design* d, char** out);
SP_API sp_status sp_design_port_map(const sp_design* d, char** out);
/* Lattice ready to simulate: windowed where the target is, else periodic. */
SP_API sp_status sp_design_lattice(const sp_design* d, sp_lattice** out);

/* ---- Pipeline ---- */

typedef struct {
  int stages_ok;          /* every comparison that ran agreed */
  sp_outcome outcome;
  int64_t topplings;
  int64_t origin_odometer;
  int64_t origin_step;    /* -1 when the origin did not topple */
  int64_t max_odometer;
  int64_t fired_and;
  int tm_halted;
} sp_pipeline_result;

/* X <= 0 picks the smallest window whose exact region holds the machine. */
SP_API sp_status sp_run_pipeline(const char* machine_text, sp_target target, int64_t X, int64_t T, int64_t budget,
                                 sp_pipeline_result* out, char** report);

#ifdef __cplusplus
}
#endif

#endif /* SANDPILE_C_H_ */
