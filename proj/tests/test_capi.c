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
/* Exercises the C interface from C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "groundplan/groundplan.h"

static int failures = 0;

#define CHECK(cond)                                                      \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: CHECK(%s) failed (%s)\n", __FILE__, __LINE__, \
              #cond, gp_last_error());                                   \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

static void scenes_and_tasks(void) {
  gp_scene* scene = NULL;
  CHECK(gp_scene_generate(7, "kitchen", NULL, &scene) == GP_OK);
  char* text = NULL;
  CHECK(gp_scene_to_text(scene, &text) == GP_OK);
  gp_scene* again = NULL;
  CHECK(gp_scene_parse(text, &again) == GP_OK);
  char* text2 = NULL;
  CHECK(gp_scene_to_text(again, &text2) == GP_OK);
  CHECK(text && text2 && strcmp(text, text2) == 0);
  gp_string_free(text);
  gp_string_free(text2);
  gp_scene_free(again);

  char* task = NULL;
  CHECK(gp_task_sample(scene, 3, "pick_and_place", &task) == GP_OK);
  CHECK(task && strstr(task, "\"pick_and_place\"") != NULL);
  char* goal = NULL;
  CHECK(gp_task_goal(task, &goal) == GP_OK);
  CHECK(goal && goal[strlen(goal) - 1] == ':');

  char* plan = NULL;
  CHECK(gp_plan_solve(scene, task, 0, &plan) == GP_OK);
  char* trace = NULL;
  int ok = 0, reached = 0;
  CHECK(gp_execute(scene, plan, 1, task, &trace, &ok, &reached) == GP_OK);
  CHECK(ok == 1);
  CHECK(reached == 1);

  char* context = NULL;
  CHECK(gp_context_emit(scene, task, "scene_graph", NULL, &context) == GP_OK);
  gp_string_free(context);
  context = NULL;
  CHECK(gp_context_emit(scene, task, "first_step_hint", plan, &context) == GP_OK);
  CHECK(context && strncmp(context, "walk to the", 11) == 0);
  CHECK(gp_context_emit(scene, task, "first_step_hint", NULL, &context) == GP_ERR_INVALID_ARGUMENT);
  CHECK(gp_context_emit(scene, task, "everything", NULL, &context) == GP_ERR_INVALID_ARGUMENT);

  char *domain = NULL, *problem = NULL;
  CHECK(gp_pddl_export(scene, task, &domain, &problem) == GP_OK);
  CHECK(domain && strstr(domain, "(define (domain") != NULL);
  CHECK(problem && strstr(problem, "(:goal") != NULL);

  CHECK(gp_execute(scene, "0.Fly(sink)", 1, NULL, &trace, NULL, NULL) == GP_ERR_PARSE);
  CHECK(strlen(gp_last_error()) > 0);
  CHECK(gp_task_sample(scene, 3, "juggle", &task) == GP_ERR_INVALID_ARGUMENT);
  CHECK(gp_plan_solve(scene, "{not json", 0, &plan) == GP_ERR_PARSE);
  CHECK(gp_scene_generate(1, "garage", NULL, &again) == GP_ERR_INVALID_ARGUMENT);
  CHECK(gp_scene_load("/nonexistent/scene.txt", &again) == GP_ERR_IO);
  CHECK(gp_scene_to_text(NULL, &text) == GP_ERR_INVALID_ARGUMENT);

  gp_string_free(domain);
  gp_string_free(problem);
  gp_string_free(context);
  gp_string_free(trace);
  gp_string_free(plan);
  gp_string_free(goal);
  gp_string_free(task);
  gp_scene_free(scene);
}

static void datasets_and_models(void) {
  gp_dataset_config dc = gp_dataset_config_default();
  dc.n = 120;
  dc.seed = 5;
  gp_dataset* ds = NULL;
  CHECK(gp_dataset_generate(&dc, &ds) == GP_OK);
  size_t n = 0;
  CHECK(gp_dataset_size(ds, "train", &n) == GP_OK && n == 96);
  CHECK(gp_dataset_size(ds, "seen", &n) == GP_OK && n == 12);
  CHECK(gp_dataset_size(ds, "test", &n) == GP_ERR_INVALID_ARGUMENT);
  char* sample = NULL;
  CHECK(gp_dataset_sample(ds, "train", 0, "scene_knowledge", &sample) == GP_OK);
  CHECK(sample && strstr(sample, "<SEP>") && strstr(sample, "<BOS>") && strstr(sample, "<EOS>"));
  gp_string_free(sample);

  gp_model_config mc = gp_model_config_default();
  gp_model* model = NULL;
  CHECK(gp_model_train(ds, "none", &mc, &model) == GP_OK);
  CHECK(gp_model_vocab_size(model) > 10);

  char* prompt = NULL;
  CHECK(gp_prompt("Put the soap into the drawer", NULL, &prompt) == GP_OK);
  CHECK(prompt && strcmp(prompt, "Put the soap into the drawer: <BOS>") == 0);
  gp_strategy greedy = gp_strategy_greedy();
  char *a = NULL, *b = NULL;
  CHECK(gp_generate(model, prompt, &greedy, 200, &a) == GP_OK);
  CHECK(a && strncmp(a, prompt, strlen(prompt)) == 0);
  gp_strategy sampled = gp_strategy_sampled(10, 0.9, 42);
  gp_string_free(a);
  CHECK(gp_generate(model, prompt, &sampled, 200, &a) == GP_OK);
  CHECK(gp_generate(model, prompt, &sampled, 200, &b) == GP_OK);
  CHECK(a && b && strcmp(a, b) == 0);
  CHECK(gp_generate(model, "Put the zebra away: <BOS>", &greedy, 200, &b) == GP_ERR_UNKNOWN_TOKEN);

  const char* path = "test_capi_model.gpm";
  CHECK(gp_model_save(model, path) == GP_OK);
  gp_model* loaded = NULL;
  CHECK(gp_model_load(path, &loaded) == GP_OK);
  remove(path);
  char* c = NULL;
  CHECK(gp_generate(loaded, prompt, &sampled, 200, &c) == GP_OK);
  CHECK(a && c && strcmp(a, c) == 0);

  gp_bench_result br;
  CHECK(gp_bench(model, ds, "unseen", "none", &greedy, gp_default_max_len("none"), 5, &br) == GP_OK);
  CHECK(br.iterations == 5 && br.iterations_per_second > 0.0);
  CHECK(gp_default_max_len("full_context") == 1024);

  gp_string_free(a);
  gp_string_free(b);
  gp_string_free(c);
  gp_string_free(prompt);
  gp_model_free(loaded);
  gp_model_free(model);
  gp_dataset_free(ds);
}

static void experiment(void) {
  gp_experiment_config ec = gp_experiment_config_default();
  ec.train = 150;
  ec.seen = 20;
  ec.unseen = 20;
  ec.variants = "none,first_step_hint";
  ec.splits = "unseen";
  ec.sample_seeds = 1;
  gp_report* report = NULL;
  CHECK(gp_experiment_run(&ec, &report) == GP_OK);
  char* csv = NULL;
  CHECK(gp_report_csv(report, &csv) == GP_OK);
  CHECK(csv && strstr(csv, "first_step_hint") != NULL);
  int passed = -1;
  char* summary = NULL;
  CHECK(gp_report_check(report, "unseen", &passed, &summary) == GP_OK);
  CHECK(passed == 0 || passed == 1);
  CHECK(summary && strstr(summary, "full <= min") != NULL);
  gp_string_free(summary);
  gp_string_free(csv);
  gp_report_free(report);

  ec.variants = "telepathy";
  CHECK(gp_experiment_run(&ec, &report) == GP_ERR_INVALID_ARGUMENT);
  ec.variants = NULL;
  ec.dataset_dir = "/nonexistent/dataset";
  CHECK(gp_experiment_run(&ec, &report) == GP_ERR_IO);
}

int main(void) {
  CHECK(strcmp(gp_status_name(GP_ERR_NO_PATH), "no_path") == 0);
  scenes_and_tasks();
  datasets_and_models();
  experiment();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C interface checks passed\n");
  return 0;
}
