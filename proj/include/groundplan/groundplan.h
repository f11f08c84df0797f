// Copyright 2026 The groundplan Authors
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

/* C interface to the groundplan library. Handles are opaque; every call
 * that can fail returns a gp_status and leaves a message for
 * gp_last_error() on the calling thread. Strings returned through char**
 * are owned by the caller and released with gp_string_free. */

#ifndef GROUNDPLAN_GROUNDPLAN_H_
#define GROUNDPLAN_GROUNDPLAN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GP_API __declspec(dllexport)
#else
#define GP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gp_status {
  GP_OK = 0,
  GP_ERR_INVALID_ARGUMENT = 1,
  GP_ERR_NOT_FOUND = 2,
  GP_ERR_PARSE = 3,
  GP_ERR_UNSOLVABLE = 4,
  GP_ERR_BUDGET_EXCEEDED = 5,
  GP_ERR_MISSING_APPLIANCE = 6,
  GP_ERR_NO_PATH = 7,
  GP_ERR_UNKNOWN_TOKEN = 8,
  GP_ERR_IO = 9,
  GP_ERR_INTERNAL = 10
} gp_status;

typedef struct gp_scene gp_scene;
typedef struct gp_dataset gp_dataset;
typedef struct gp_model gp_model;
typedef struct gp_report gp_report;

GP_API const char* gp_version(void);
GP_API const char* gp_status_name(gp_status status);
/* Message of the last failed call on this thread; "" when none. */
GP_API const char* gp_last_error(void);
GP_API void gp_string_free(char* s);

/* ---- scenes ---------------------------------------------------------- */

typedef struct gp_world_config {
  int width;
  int height;
  double cell_size;
  double interaction_range;
} gp_world_config;

GP_API gp_world_config gp_world_config_default(void);

/* room: "kitchen", "bathroom", "bedroom", "living_room", or NULL to derive
 * it from the seed. config may be NULL. */
GP_API gp_status gp_scene_generate(uint64_t seed, const char* room, const gp_world_config* config, gp_scene** out);
GP_API gp_status gp_scene_parse(const char* text, gp_scene** out);
GP_API gp_status gp_scene_load(const char* path, gp_scene** out);
GP_API gp_status gp_scene_to_text(const gp_scene* scene, char** out);
GP_API void gp_scene_free(gp_scene* scene);

/* ---- tasks, plans and grounding ---------------------------------------
 * Tasks travel as JSON objects:
 *   {"category": "pick_and_place", "target": "apple", "receptacle": "sink",
 *    "movable_receptacle": "bowl" (optional), "sliced": false, "template": 0}
 * Plans travel as text, e.g. "0.GotoLocation(sink) 1.PickupObject(apple)". */

/* category NULL samples any feasible category. */
GP_API gp_status gp_task_sample(const gp_scene* scene, uint64_t seed, const char* category, char** task_json);
GP_API gp_status gp_task_goal(const char* task_json, char** goal);
/* Shortest plan under the node budget (0 for the default). */
GP_API gp_status gp_plan_solve(const gp_scene* scene, const char* task_json, size_t node_budget, char** plan);
/* variant: none, scene_knowledge, scene_graph, full_context, first_step_hint.
 * gold_plan is needed by first_step_hint only and may be NULL otherwise. */
GP_API gp_status gp_context_emit(const gp_scene* scene, const char* task_json, const char* variant,
                                 const char* gold_plan, char** context);
/* Runs a plan; try_all grounds each step against every instance in turn.
 * all_succeeded and goal_reached may be NULL; task_json may be NULL, which
 * leaves goal_reached at 0. */
GP_API gp_status gp_execute(const gp_scene* scene, const char* plan, int try_all, const char* task_json,
                            char** trace, int* all_succeeded, int* goal_reached);
GP_API gp_status gp_pddl_export(const gp_scene* scene, const char* task_json, char** domain, char** problem);

/* ---- datasets -------------------------------------------------------- */

typedef struct gp_dataset_config {
  size_t n;
  uint64_t seed;
  const char* variant; /* NULL for none */
  double train_ratio;
  int jobs;
} gp_dataset_config;

GP_API gp_dataset_config gp_dataset_config_default(void);
GP_API gp_status gp_dataset_generate(const gp_dataset_config* config, gp_dataset** out);
GP_API gp_status gp_dataset_load(const char* dir, gp_dataset** out);
GP_API gp_status gp_dataset_save(const gp_dataset* dataset, const char* dir);
/* split: train, seen or unseen. */
GP_API gp_status gp_dataset_size(const gp_dataset* dataset, const char* split, size_t* out);
/* Serialized sample (goal, context, plan) of one record for a variant. */
GP_API gp_status gp_dataset_sample(const gp_dataset* dataset, const char* split, size_t index, const char* variant,
                                   char** out);
GP_API void gp_dataset_free(gp_dataset* dataset);

/* ---- models and decoding --------------------------------------------- */

typedef struct gp_model_config {
  int order;
  double add_k;
} gp_model_config;

/* Experiment defaults. */
GP_API gp_model_config gp_model_config_default(void);
/* Trains on the dataset's train split with contexts for the variant. */
GP_API gp_status gp_model_train(const gp_dataset* dataset, const char* variant, const gp_model_config* config,
                                gp_model** out);
GP_API gp_status gp_model_save(const gp_model* model, const char* path);
GP_API gp_status gp_model_load(const char* path, gp_model** out);
GP_API size_t gp_model_vocab_size(const gp_model* model);
GP_API void gp_model_free(gp_model* model);

typedef struct gp_strategy {
  int sampled; /* 0 greedy, 1 top-k/top-p */
  int k;
  double p;
  uint64_t seed;
} gp_strategy;

GP_API gp_strategy gp_strategy_greedy(void);
GP_API gp_strategy gp_strategy_sampled(int k, double p, uint64_t seed);

/* "goal: [<SEP> context] <BOS>"; context may be NULL. */
GP_API gp_status gp_prompt(const char* goal, const char* context, char** out);
/* Prompt plus generated tokens up to an end token or max_len tokens. */
GP_API gp_status gp_generate(const gp_model* model, const char* prompt, const gp_strategy* strategy, size_t max_len,
                             char** out);

/* ---- evaluation ------------------------------------------------------ */

typedef struct gp_experiment_config {
  size_t train;
  size_t seen;
  size_t unseen;
  uint64_t seed;
  const char* variants; /* comma separated; NULL for all */
  const char* splits;   /* comma separated; NULL for "seen,unseen" */
  int sample_seeds;
  int k;
  double p;
  int baseline;
  size_t node_budget;
  int jobs;
  const char* out_dir;     /* may be NULL */
  const char* dataset_dir; /* load instead of generating; may be NULL */
  const char* model_dir;   /* load <variant>.gpm instead of training; may be NULL */
  gp_model_config model;
} gp_experiment_config;

GP_API gp_experiment_config gp_experiment_config_default(void);
GP_API gp_status gp_experiment_run(const gp_experiment_config* config, gp_report** out);
GP_API gp_status gp_report_csv(const gp_report* report, char** out);
GP_API gp_status gp_report_table(const gp_report* report, char** out);
/* Threshold checks for one split. passed is 1 when no check failed; the
 * summary lists one "PASS|FAIL|SKIP name: detail" line per check. */
GP_API gp_status gp_report_check(const gp_report* report, const char* split, int* passed, char** summary);
GP_API void gp_report_free(gp_report* report);

/* File name a model for this variant gets inside a model directory. */
GP_API gp_status gp_model_path(const char* dir, const char* variant, char** out);

typedef struct gp_bench_result {
  size_t iterations;
  double seconds;
  double iterations_per_second;
  size_t tokens;
} gp_bench_result;

/* One generation per record of the split, prompted for the variant. limit
 * caps the records used (0 for all). */
GP_API gp_status gp_bench(const gp_model* model, const gp_dataset* dataset, const char* split, const char* variant,
                          const gp_strategy* strategy, size_t max_len, size_t limit, gp_bench_result* out);
/* 200 without context, 1024 otherwise. */
GP_API size_t gp_default_max_len(const char* variant);

#ifdef __cplusplus
}
#endif

#endif /* GROUNDPLAN_GROUNDPLAN_H_ */
