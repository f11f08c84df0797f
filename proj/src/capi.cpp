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
#include "groundplan/groundplan.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "eval.hpp"

using namespace groundplan;

struct gp_scene {
  WorldState state;
};
struct gp_dataset {
  Dataset data;
};
struct gp_model {
  SequenceModel model;
};
struct gp_report {
  EvalReport report;
};

namespace {

thread_local std::string last_error;

template <class F>
gp_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return GP_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<gp_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return GP_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  require(out, "output pointer");
  *out = copy_out(s);
}

ContextVariant variant_of(const char* name) {
  if (!name) return ContextVariant::kNone;
  auto v = parse_context_variant(name);
  if (!v) fail(ErrorCode::kInvalidArgument, std::string("unknown context variant '") + name + "'");
  return *v;
}

Plan plan_of(const char* text) {
  require(text, "plan");
  auto parsed = parse_plan(text);
  if (!parsed.ok()) fail(ErrorCode::kParse, "bad plan: " + parsed.error->message);
  return parsed.plan;
}

TaskSpec task_of(const char* json) {
  require(json, "task");
  return task_from_json(json);
}

DecodingStrategy strategy_of(const gp_strategy* s) {
  if (!s || !s->sampled) return DecodingStrategy::greedy();
  return DecodingStrategy::sampled(s->k, s->p, s->seed);
}

LmOptions lm_of(const gp_model_config* c) {
  LmOptions o = experiment_lm_options();
  if (c) {
    o.order = c->order;
    o.add_k = c->add_k;
  }
  return o;
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = text; *p; ++p) {
    if (*p == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += *p;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

extern "C" {

const char* gp_version(void) { return "0.1.0"; }

const char* gp_status_name(gp_status status) {
  switch (status) {
    case GP_OK: return "ok";
    case GP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GP_ERR_NOT_FOUND: return "not_found";
    case GP_ERR_PARSE: return "parse";
    case GP_ERR_UNSOLVABLE: return "unsolvable";
    case GP_ERR_BUDGET_EXCEEDED: return "budget_exceeded";
    case GP_ERR_MISSING_APPLIANCE: return "missing_appliance";
    case GP_ERR_NO_PATH: return "no_path";
    case GP_ERR_UNKNOWN_TOKEN: return "unknown_token";
    case GP_ERR_IO: return "io";
    case GP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* gp_last_error(void) { return last_error.c_str(); }

void gp_string_free(char* s) { std::free(s); }

gp_world_config gp_world_config_default(void) {
  WorldConfig c;
  return {c.width, c.height, c.cell_size, c.interaction_range};
}

gp_status gp_scene_generate(uint64_t seed, const char* room, const gp_world_config* config, gp_scene** out) {
  return guard([&] {
    require(out, "output pointer");
    WorldConfig wc;
    if (config) {
      if (config->width <= 0 || config->height <= 0 || !(config->cell_size > 0) || !(config->interaction_range > 0))
        fail(ErrorCode::kInvalidArgument, "world config values must be positive");
      wc.width = config->width;
      wc.height = config->height;
      wc.cell_size = config->cell_size;
      wc.interaction_range = config->interaction_range;
    }
    RoomKind kind = room_for(seed);
    if (room) {
      auto r = parse_room(room);
      if (!r) fail(ErrorCode::kInvalidArgument, std::string("unknown room '") + room + "'");
      kind = *r;
    }
    *out = new gp_scene{generate_scene(seed, kind, wc)};
  });
}

gp_status gp_scene_parse(const char* text, gp_scene** out) {
  return guard([&] {
    require(text, "scene text");
    require(out, "output pointer");
    *out = new gp_scene{parse_scene(text)};
  });
}

gp_status gp_scene_load(const char* path, gp_scene** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new gp_scene{parse_scene(read_file(path))};
  });
}

gp_status gp_scene_to_text(const gp_scene* scene, char** out) {
  return guard([&] {
    require(scene, "scene");
    emit(out, serialize_scene(scene->state));
  });
}

void gp_scene_free(gp_scene* scene) { delete scene; }

gp_status gp_task_sample(const gp_scene* scene, uint64_t seed, const char* category, char** task_json) {
  return guard([&] {
    require(scene, "scene");
    TaskSpec t;
    if (category) {
      auto c = parse_task_category(category);
      if (!c) fail(ErrorCode::kInvalidArgument, std::string("unknown task category '") + category + "'");
      t = sample_task(seed, scene->state, *c);
    } else {
      t = sample_task(seed, scene->state);
    }
    emit(task_json, task_to_json(t));
  });
}

gp_status gp_task_goal(const char* task_json, char** goal) {
  return guard([&] { emit(goal, render_goal(task_of(task_json))); });
}

gp_status gp_plan_solve(const gp_scene* scene, const char* task_json, size_t node_budget, char** plan) {
  return guard([&] {
    require(scene, "scene");
    PlannerOptions o;
    if (node_budget) o.node_budget = node_budget;
    emit(plan, serialize_plan(solve(task_of(task_json), scene->state, o)));
  });
}

gp_status gp_context_emit(const gp_scene* scene, const char* task_json, const char* variant, const char* gold_plan,
                          char** context) {
  return guard([&] {
    require(scene, "scene");
    std::optional<Plan> gold;
    if (gold_plan) gold = plan_of(gold_plan);
    emit(context, emit_context(variant_of(variant), scene->state, task_of(task_json), gold ? &*gold : nullptr));
  });
}

gp_status gp_execute(const gp_scene* scene, const char* plan, int try_all, const char* task_json, char** trace,
                     int* all_succeeded, int* goal_reached) {
  return guard([&] {
    require(scene, "scene");
    std::optional<TaskSpec> task;
    if (task_json) task = task_of(task_json);
    auto t = execute_plan(plan_of(plan), scene->state, try_all != 0);
    emit(trace, format_trace(t));
    if (all_succeeded) *all_succeeded = t.all_succeeded() ? 1 : 0;
    if (goal_reached)
      *goal_reached = task && goal_satisfied(abstract(t.final_state), task->goal_conditions) ? 1 : 0;
  });
}

gp_status gp_pddl_export(const gp_scene* scene, const char* task_json, char** domain, char** problem) {
  return guard([&] {
    require(scene, "scene");
    require(domain, "output pointer");
    require(problem, "output pointer");
    auto text = export_pddl(task_of(task_json), scene->state);
    *domain = copy_out(text.domain);
    try {
      *problem = copy_out(text.problem);
    } catch (...) {
      std::free(*domain);
      *domain = nullptr;
      throw;
    }
  });
}

gp_dataset_config gp_dataset_config_default(void) {
  DatasetConfig c;
  return {c.n, c.seed, nullptr, c.train_ratio, c.jobs};
}

gp_status gp_dataset_generate(const gp_dataset_config* config, gp_dataset** out) {
  return guard([&] {
    require(config, "config");
    require(out, "output pointer");
    DatasetConfig c;
    c.n = config->n;
    c.seed = config->seed;
    c.variant = variant_of(config->variant);
    c.train_ratio = config->train_ratio;
    c.jobs = config->jobs > 0 ? config->jobs : 1;
    *out = new gp_dataset{gen_dataset(c)};
  });
}

gp_status gp_dataset_load(const char* dir, gp_dataset** out) {
  return guard([&] {
    require(dir, "directory");
    require(out, "output pointer");
    *out = new gp_dataset{load_dataset(dir)};
  });
}

gp_status gp_dataset_save(const gp_dataset* dataset, const char* dir) {
  return guard([&] {
    require(dataset, "dataset");
    require(dir, "directory");
    save_dataset(dataset->data, dir);
  });
}

gp_status gp_dataset_size(const gp_dataset* dataset, const char* split, size_t* out) {
  return guard([&] {
    require(dataset, "dataset");
    require(split, "split");
    require(out, "output pointer");
    *out = dataset->data.split(split).size();
  });
}

gp_status gp_dataset_sample(const gp_dataset* dataset, const char* split, size_t index, const char* variant,
                            char** out) {
  return guard([&] {
    require(dataset, "dataset");
    require(split, "split");
    const auto& records = dataset->data.split(split);
    if (index >= records.size()) fail(ErrorCode::kInvalidArgument, "record index out of range");
    auto v = variant_of(variant);
    DatasetRecord r = records[index];
    if (v != dataset->data.variant && v != ContextVariant::kNone) {
      auto scene = scene_of(r);
      r.context = emit_context(v, scene, r.task, &r.plan);
    }
    emit(out, serialize_sample(to_sample(r, v)));
  });
}

void gp_dataset_free(gp_dataset* dataset) { delete dataset; }

gp_model_config gp_model_config_default(void) {
  LmOptions o = experiment_lm_options();
  return {o.order, o.add_k};
}

gp_status gp_model_train(const gp_dataset* dataset, const char* variant, const gp_model_config* config,
                         gp_model** out) {
  return guard([&] {
    require(dataset, "dataset");
    require(out, "output pointer");
    auto v = variant_of(variant);
    Dataset d = v == dataset->data.variant ? dataset->data : with_variant(dataset->data, v);
    std::vector<std::string> corpus;
    corpus.reserve(d.train.size());
    for (const auto& r : d.train) corpus.push_back(serialize_sample(to_sample(r, v)));
    *out = new gp_model{SequenceModel::train(corpus, Tokenizer::build(corpus, model_lexicon()), lm_of(config))};
  });
}

gp_status gp_model_save(const gp_model* model, const char* path) {
  return guard([&] {
    require(model, "model");
    require(path, "path");
    model->model.save(path);
  });
}

gp_status gp_model_load(const char* path, gp_model** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new gp_model{SequenceModel::load(path)};
  });
}

size_t gp_model_vocab_size(const gp_model* model) { return model ? model->model.vocab_size() : 0; }

void gp_model_free(gp_model* model) { delete model; }

gp_strategy gp_strategy_greedy(void) { return {0, 1, 1.0, 0}; }

gp_strategy gp_strategy_sampled(int k, double p, uint64_t seed) { return {1, k, p, seed}; }

gp_status gp_prompt(const char* goal, const char* context, char** out) {
  return guard([&] {
    require(goal, "goal");
    emit(out, serialize_prompt(goal, context ? std::optional<std::string>(context) : std::nullopt));
  });
}

gp_status gp_generate(const gp_model* model, const char* prompt, const gp_strategy* strategy, size_t max_len,
                      char** out) {
  return guard([&] {
    require(model, "model");
    require(prompt, "prompt");
    emit(out, generate(model->model, prompt, strategy_of(strategy), max_len));
  });
}

gp_experiment_config gp_experiment_config_default(void) {
  ExperimentConfig c;
  gp_experiment_config out{};
  out.train = c.train;
  out.seen = c.seen;
  out.unseen = c.unseen;
  out.seed = c.seed;
  out.sample_seeds = c.sample_seeds;
  out.k = c.k;
  out.p = c.p;
  out.baseline = c.baseline ? 1 : 0;
  out.node_budget = c.planner.node_budget;
  out.jobs = c.jobs;
  out.model = gp_model_config_default();
  return out;
}

gp_status gp_experiment_run(const gp_experiment_config* config, gp_report** out) {
  return guard([&] {
    require(config, "config");
    require(out, "output pointer");
    ExperimentConfig c;
    c.train = config->train;
    c.seen = config->seen;
    c.unseen = config->unseen;
    c.seed = config->seed;
    if (config->variants) {
      c.variants.clear();
      for (const auto& name : split_list(config->variants)) c.variants.push_back(variant_of(name.c_str()));
    }
    if (config->splits) c.splits = split_list(config->splits);
    c.sample_seeds = config->sample_seeds;
    c.k = config->k;
    c.p = config->p;
    c.baseline = config->baseline != 0;
    if (config->node_budget) c.planner.node_budget = config->node_budget;
    c.jobs = config->jobs > 0 ? config->jobs : 1;
    if (config->out_dir) c.out_dir = config->out_dir;
    if (config->dataset_dir) c.dataset_dir = config->dataset_dir;
    if (config->model_dir) c.model_dir = config->model_dir;
    c.lm = lm_of(&config->model);
    *out = new gp_report{run_experiment(c)};
  });
}

gp_status gp_report_csv(const gp_report* report, char** out) {
  return guard([&] {
    require(report, "report");
    emit(out, report->report.to_csv());
  });
}

gp_status gp_report_table(const gp_report* report, char** out) {
  return guard([&] {
    require(report, "report");
    emit(out, report->report.to_table());
  });
}

gp_status gp_report_check(const gp_report* report, const char* split, int* passed, char** summary) {
  return guard([&] {
    require(report, "report");
    require(passed, "output pointer");
    std::string text;
    bool ok = true;
    for (const auto& c : check_report(report->report, split ? split : "unseen")) {
      const char* tag = c.status == ReportCheck::Status::kPass ? "PASS" : c.status == ReportCheck::Status::kFail ? "FAIL" : "SKIP";
      ok = ok && c.status != ReportCheck::Status::kFail;
      text += std::string(tag) + " " + c.name + ": " + c.detail + "\n";
    }
    if (summary) *summary = copy_out(text);
    *passed = ok ? 1 : 0;
  });
}

void gp_report_free(gp_report* report) { delete report; }

gp_status gp_model_path(const char* dir, const char* variant, char** out) {
  return guard([&] {
    require(dir, "directory");
    emit(out, model_file(dir, variant_of(variant)));
  });
}

gp_status gp_bench(const gp_model* model, const gp_dataset* dataset, const char* split, const char* variant,
                   const gp_strategy* strategy, size_t max_len, size_t limit, gp_bench_result* out) {
  return guard([&] {
    require(model, "model");
    require(dataset, "dataset");
    require(split, "split");
    require(out, "output pointer");
    auto v = variant_of(variant);
    const auto& records = dataset->data.split(split);
    std::size_t n = limit ? std::min(limit, records.size()) : records.size();
    std::vector<DatasetRecord> subset(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(n));
    if (v != dataset->data.variant && v != ContextVariant::kNone) {
      Dataset tmp;
      tmp.variant = dataset->data.variant;
      tmp.train = std::move(subset);
      subset = with_variant(tmp, v).train;
    }
    std::vector<std::string> prompts;
    prompts.reserve(subset.size());
    for (const auto& r : subset) prompts.push_back(prompt_of(r, v));
    auto r = bench(model->model, prompts, strategy_of(strategy), max_len);
    *out = {r.iterations, r.seconds, r.iterations_per_second, r.tokens};
  });
}

size_t gp_default_max_len(const char* variant) {
  auto v = variant ? parse_context_variant(variant) : std::optional(ContextVariant::kNone);
  return default_max_len(v.value_or(ContextVariant::kNone));
}

}  // extern "C"
