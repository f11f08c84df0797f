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
// groundplan command line. Talks to the library only through its C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "groundplan/groundplan.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheck = 3;

struct RuntimeFailure {
  std::string message;
};

void check(gp_status s, const std::string& what) {
  if (s != GP_OK) throw RuntimeFailure{what + ": " + gp_status_name(s) + ": " + gp_last_error()};
}

// Owns strings and handles coming back from the C API.
struct Text {
  char* p = nullptr;
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { gp_string_free(p); }
  char** out() {
    gp_string_free(p);
    p = nullptr;
    return &p;
  }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() {
    Free(p);
    p = nullptr;
    return &p;
  }
};
using Scene = Handle<gp_scene, gp_scene_free>;
using DatasetH = Handle<gp_dataset, gp_dataset_free>;
using Model = Handle<gp_model, gp_model_free>;
using Report = Handle<gp_report, gp_report_free>;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw RuntimeFailure{"cannot write " + path.string()};
}

struct Globals {
  std::uint64_t seed = 1;
  int jobs = 0;  // 0: per-command default
  std::string scenes_dir = "scenes";
  std::string datasets_dir = "datasets";
  std::string models_dir = "models";
  std::string reports_dir = "reports";
  double cell_size = 0.25;
  double interaction_range = 1.5;
  std::size_t node_budget = 1000000;
};

int evaluation_jobs(const Globals& g) {
  if (g.jobs > 0) return g.jobs;
  unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 1;
}

gp_world_config world_config(const Globals& g) {
  gp_world_config c = gp_world_config_default();
  c.cell_size = g.cell_size;
  c.interaction_range = g.interaction_range;
  return c;
}

// Where scene and task come from for execute / export-pddl.
struct SceneSource {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::string room;
  std::string task_json;
  std::optional<std::uint64_t> task_seed;
  std::string category;
};

const std::vector<std::string> kCategories = {"look_at_obj",
                                              "pick_and_place",
                                              "pick_two_obj_and_place",
                                              "pick_and_place_with_movable_recep",
                                              "pick_clean_then_place",
                                              "pick_cool_then_place",
                                              "pick_heat_then_place"};

void add_scene_options(CLI::App* cmd, SceneSource& src) {
  cmd->add_option("--scene", src.file, "Scene file written by gen-scenes")->check(CLI::ExistingFile);
  cmd->add_option("--scene-seed", src.seed, "Generate the scene from this seed (default: --seed)");
  cmd->add_option("--room", src.room, "Room for a generated scene (default: derived from the seed)");
  cmd->add_option("--task", src.task_json, "Task as JSON");
  cmd->add_option("--task-seed", src.task_seed, "Sample the task from this seed (default: --seed)");
  cmd->add_option("--category", src.category, "Task category to sample")->check(CLI::IsMember(kCategories));
}

void load_scene(const SceneSource& src, const Globals& g, Scene& scene) {
  if (!src.file.empty()) {
    check(gp_scene_load(src.file.c_str(), scene.out()), "loading scene");
    return;
  }
  auto wc = world_config(g);
  check(gp_scene_generate(src.seed.value_or(g.seed), src.room.empty() ? nullptr : src.room.c_str(), &wc, scene.out()),
        "generating scene");
}

std::string load_task(const SceneSource& src, const Globals& g, const Scene& scene) {
  if (!src.task_json.empty()) return src.task_json;
  Text t;
  check(gp_task_sample(scene.p, src.task_seed.value_or(g.seed), src.category.empty() ? nullptr : src.category.c_str(),
                       t.out()),
        "sampling task");
  return t.str();
}

gp_strategy make_strategy(const std::string& name, int k, double p, std::uint64_t seed) {
  return name == "greedy" ? gp_strategy_greedy() : gp_strategy_sampled(k, p, seed);
}

// Model for a variant: an explicit file, <models>/<variant>.gpm, or one
// trained on the spot from a generated dataset.
void obtain_model(const std::string& explicit_path, const std::string& variant, const Globals& g,
                  std::size_t fallback_samples, Model& model) {
  std::string path = explicit_path;
  if (path.empty()) {
    Text p;
    check(gp_model_path(g.models_dir.c_str(), variant.c_str(), p.out()), "model path");
    path = p.str();
  }
  if (fs::exists(path)) {
    check(gp_model_load(path.c_str(), model.out()), "loading model " + path);
    return;
  }
  if (!explicit_path.empty()) throw RuntimeFailure{"model file not found: " + path};
  std::cerr << "no model at " << path << "; training on " << fallback_samples << " generated samples\n";
  gp_dataset_config dc = gp_dataset_config_default();
  dc.n = fallback_samples;
  dc.seed = g.seed;
  dc.variant = variant.c_str();
  dc.jobs = g.jobs > 0 ? g.jobs : 1;
  DatasetH ds;
  check(gp_dataset_generate(&dc, ds.out()), "generating dataset");
  gp_model_config mc = gp_model_config_default();
  check(gp_model_train(ds.p, variant.c_str(), &mc, model.out()), "training model");
}

const std::vector<std::string> kVariants = {"none", "scene_knowledge", "scene_graph", "full_context",
                                            "first_step_hint"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groundplan: grounded plan generation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Config file (TOML/INI); command-line flags take precedence");
  app.set_version_flag("--version", std::string(gp_version()));

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (default: all cores for evaluate, 1 otherwise)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--scenes-dir", g.scenes_dir, "Scene directory")->capture_default_str();
  app.add_option("--datasets-dir", g.datasets_dir, "Dataset directory")->capture_default_str();
  app.add_option("--models-dir", g.models_dir, "Model directory")->capture_default_str();
  app.add_option("--reports-dir", g.reports_dir, "Report directory")->capture_default_str();
  app.add_option("--cell-size", g.cell_size, "Grid cell size in metres")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--interaction-range", g.interaction_range, "Reach of the agent in metres")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--node-budget", g.node_budget, "Planner node budget")->check(CLI::PositiveNumber)->capture_default_str();

  // gen-scenes
  auto* gen_scenes = app.add_subcommand("gen-scenes", "Generate scene files");
  std::size_t scene_count = 10;
  std::string scene_room, scene_out;
  gen_scenes->add_option("--count", scene_count, "Number of scenes")->check(CLI::PositiveNumber)->capture_default_str();
  gen_scenes->add_option("--room", scene_room, "Room kind (default: derived from each seed)");
  gen_scenes->add_option("--out", scene_out, "Output directory (default: --scenes-dir)");

  // gen-dataset
  auto* gen_dataset = app.add_subcommand("gen-dataset", "Generate a train/seen/unseen dataset");
  std::size_t ds_n = 1000;
  double ds_ratio = 0.8;
  std::string ds_variant = "none", ds_out;
  gen_dataset->add_option("--n", ds_n, "Total samples")->check(CLI::PositiveNumber)->capture_default_str();
  gen_dataset->add_option("--train-ratio", ds_ratio, "Share of training samples")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_dataset->add_option("--variant", ds_variant, "Context variant stored with the samples")
      ->check(CLI::IsMember(kVariants))
      ->capture_default_str();
  gen_dataset->add_option("--out", ds_out, "Output directory (default: --datasets-dir)");

  // train
  auto* train = app.add_subcommand("train", "Train a sequence model on a dataset");
  std::string tr_dataset, tr_variant = "none", tr_out;
  gp_model_config tr_model = gp_model_config_default();
  train->add_option("--dataset", tr_dataset, "Dataset directory (default: --datasets-dir)");
  train->add_option("--variant,--context-variant", tr_variant, "Context variant")
      ->check(CLI::IsMember(kVariants))
      ->capture_default_str();
  train->add_option("--order", tr_model.order, "n-gram order")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--add-k", tr_model.add_k, "Add-k smoothing constant")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--out", tr_out, "Model file (default: <models-dir>/<variant>.gpm)");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a plan for a goal");
  std::string gen_goal, gen_context, gen_variant = "none", gen_model, gen_strategy = "greedy";
  int gen_k = 10;
  double gen_p = 0.9;
  std::optional<std::size_t> gen_max_len;
  std::size_t gen_fallback = 1000;
  SceneSource gen_src;
  gen->add_option("--goal", gen_goal, "Goal instruction")->required();
  gen->add_option("--context", gen_context, "Context text placed after <SEP>");
  gen->add_option("--variant", gen_variant, "Context variant")->check(CLI::IsMember(kVariants))->capture_default_str();
  gen->add_option("--model", gen_model, "Model file (default: <models-dir>/<variant>.gpm)");
  gen->add_option("--strategy", gen_strategy, "Decoding strategy")
      ->check(CLI::IsMember({"greedy", "sample"}))
      ->capture_default_str();
  gen->add_option("--k", gen_k, "Top-k for sampling")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--p", gen_p, "Top-p for sampling")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--max-len", gen_max_len, "Token limit (default: 200 without context, else 1024)");
  gen->add_option("--fallback-samples", gen_fallback, "Training samples when no model file exists")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--scene", gen_src.file, "Scene to describe when --context is not given")->check(CLI::ExistingFile);
  gen->add_option("--scene-seed", gen_src.seed, "Generate the scene to describe from this seed");
  gen->add_option("--task", gen_src.task_json, "Task JSON used to build the context");

  // execute
  auto* exec = app.add_subcommand("execute", "Run a plan in the simulator and print the trace");
  SceneSource ex_src;
  std::string ex_plan;
  bool ex_first_only = false;
  add_scene_options(exec, ex_src);
  exec->add_option("--plan", ex_plan, "Plan text (default: the planner's plan for the task)");
  exec->add_flag("--first-only", ex_first_only, "Ground each step to the nearest instance only");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Train, evaluate and report");
  gp_experiment_config ev = gp_experiment_config_default();
  std::vector<std::string> ev_variants, ev_splits;
  std::string ev_strategy = "all", ev_dataset, ev_models, ev_out;
  bool ev_check = false, ev_no_baseline = false;
  eval->add_option("--train", ev.train, "Training samples")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--seen", ev.seen, "Seen-split samples")->capture_default_str();
  eval->add_option("--unseen", ev.unseen, "Unseen-split samples")->capture_default_str();
  eval->add_option("--variant", ev_variants, "Context variants (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kVariants));
  eval->add_option("--split", ev_splits, "Splits (default: seen,unseen)")
      ->delimiter(',')
      ->check(CLI::IsMember({"seen", "unseen", "train"}));
  eval->add_option("--strategy", ev_strategy, "greedy, sample (greedy plus sampled runs) or all")
      ->check(CLI::IsMember({"greedy", "sample", "all"}))
      ->capture_default_str();
  eval->add_option("--sample-seeds", ev.sample_seeds, "Sampled repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--k", ev.k, "Top-k")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--p", ev.p, "Top-p")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  eval->add_option("--order", ev.model.order, "n-gram order")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--dataset", ev_dataset, "Evaluate on this dataset instead of generating one");
  eval->add_option("--model-dir", ev_models, "Load <variant>.gpm models from here instead of training");
  eval->add_option("--out", ev_out, "Report directory (default: --reports-dir)");
  eval->add_flag("--no-baseline", ev_no_baseline, "Skip the planner baseline rows");
  eval->add_flag("--check", ev_check, "Exit with 3 when an acceptance threshold is violated");

  // export-pddl
  auto* pddl = app.add_subcommand("export-pddl", "Write PDDL domain and problem files");
  SceneSource px_src;
  std::string px_out;
  add_scene_options(pddl, px_src);
  pddl->add_option("--out", px_out, "Directory for domain.pddl and problem.pddl (default: print)");

  // bench
  auto* bench = app.add_subcommand("bench", "Measure generation throughput");
  std::vector<std::string> bn_variants = {"none", "full_context"};
  std::string bn_dataset, bn_split = "train", bn_strategy = "greedy";
  std::size_t bn_n = 1000, bn_limit = 800;
  bench->add_option("--variant", bn_variants, "Variants to measure")->delimiter(',')->check(CLI::IsMember(kVariants));
  bench->add_option("--dataset", bn_dataset, "Dataset directory (default: generate --n samples)");
  bench->add_option("--n", bn_n, "Samples to generate without --dataset")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--split", bn_split, "Split providing the prompts")
      ->check(CLI::IsMember({"train", "seen", "unseen"}))
      ->capture_default_str();
  bench->add_option("--samples", bn_limit, "Prompts to generate for")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--strategy", bn_strategy, "Decoding strategy")
      ->check(CLI::IsMember({"greedy", "sample"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (dynamic_cast<const CLI::RequiredError*>(&e) && app.get_subcommands().empty()) std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_scenes) {
      fs::path dir = scene_out.empty() ? g.scenes_dir : scene_out;
      auto wc = world_config(g);
      for (std::size_t i = 0; i < scene_count; ++i) {
        std::uint64_t seed = g.seed + i;
        Scene scene;
        check(gp_scene_generate(seed, scene_room.empty() ? nullptr : scene_room.c_str(), &wc, scene.out()),
              "generating scene " + std::to_string(seed));
        Text text;
        check(gp_scene_to_text(scene.p, text.out()), "serializing scene");
        fs::path path = dir / ("scene_" + std::to_string(seed) + ".txt");
        write_text(path, text.str());
        std::cout << path.string() << "\n";
      }
    } else if (*gen_dataset) {
      gp_dataset_config dc = gp_dataset_config_default();
      dc.n = ds_n;
      dc.seed = g.seed;
      dc.variant = ds_variant.c_str();
      dc.train_ratio = ds_ratio;
      dc.jobs = evaluation_jobs(g);
      DatasetH ds;
      check(gp_dataset_generate(&dc, ds.out()), "generating dataset");
      std::string dir = ds_out.empty() ? g.datasets_dir : ds_out;
      check(gp_dataset_save(ds.p, dir.c_str()), "saving dataset");
      std::size_t n[3];
      const char* names[3] = {"train", "seen", "unseen"};
      for (int i = 0; i < 3; ++i) check(gp_dataset_size(ds.p, names[i], &n[i]), "dataset size");
      std::cout << dir << ": train " << n[0] << ", seen " << n[1] << ", unseen " << n[2] << "\n";
    } else if (*train) {
      std::string dir = tr_dataset.empty() ? g.datasets_dir : tr_dataset;
      DatasetH ds;
      check(gp_dataset_load(dir.c_str(), ds.out()), "loading dataset " + dir);
      Model model;
      check(gp_model_train(ds.p, tr_variant.c_str(), &tr_model, model.out()), "training");
      std::string path = tr_out;
      if (path.empty()) {
        Text p;
        check(gp_model_path(g.models_dir.c_str(), tr_variant.c_str(), p.out()), "model path");
        path = p.str();
      }
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      check(gp_model_save(model.p, path.c_str()), "saving model");
      std::cout << path << ": vocabulary " << gp_model_vocab_size(model.p) << "\n";
    } else if (*gen) {
      std::optional<std::string> context;
      if (!gen_context.empty()) {
        context = gen_context;
      } else if (gen_variant != "none") {
        if (gen_src.task_json.empty())
          throw RuntimeFailure{"variant " + gen_variant + " needs --context, or --task with --scene/--scene-seed"};
        Scene scene;
        load_scene(gen_src, g, scene);
        Text gold, ctx;
        if (gen_variant == "first_step_hint")
          check(gp_plan_solve(scene.p, gen_src.task_json.c_str(), g.node_budget, gold.out()), "planning");
        check(gp_context_emit(scene.p, gen_src.task_json.c_str(), gen_variant.c_str(), gold.p, ctx.out()),
              "building context");
        context = ctx.str();
      }
      Model model;
      obtain_model(gen_model, gen_variant, g, gen_fallback, model);
      Text prompt, out;
      check(gp_prompt(gen_goal.c_str(), context ? context->c_str() : nullptr, prompt.out()), "building prompt");
      auto strategy = make_strategy(gen_strategy, gen_k, gen_p, g.seed);
      std::size_t max_len = gen_max_len.value_or(gp_default_max_len(gen_variant.c_str()));
      check(gp_generate(model.p, prompt.p, &strategy, max_len, out.out()), "generating");
      std::cout << out.str() << "\n";
    } else if (*exec) {
      Scene scene;
      load_scene(ex_src, g, scene);
      std::string task = load_task(ex_src, g, scene);
      std::string plan = ex_plan;
      if (plan.empty()) {
        Text p;
        check(gp_plan_solve(scene.p, task.c_str(), g.node_budget, p.out()), "planning");
        plan = p.str();
      }
      Text goal, trace;
      check(gp_task_goal(task.c_str(), goal.out()), "rendering goal");
      int ok = 0, reached = 0;
      check(gp_execute(scene.p, plan.c_str(), ex_first_only ? 0 : 1, task.c_str(), trace.out(), &ok, &reached),
            "executing");
      std::cout << "task: " << task << "\ngoal: " << goal.str() << "\nplan: " << plan << "\n"
                << trace.str() << "all_succeeded: " << ok << "\ngoal_reached: " << reached << "\n";
    } else if (*eval) {
      std::string joined_variants, joined_splits;
      for (const auto& v : ev_variants) joined_variants += (joined_variants.empty() ? "" : ",") + v;
      for (const auto& s : ev_splits) joined_splits += (joined_splits.empty() ? "" : ",") + s;
      std::string out_dir = ev_out.empty() ? g.reports_dir : ev_out;
      ev.seed = g.seed;
      ev.jobs = evaluation_jobs(g);
      ev.node_budget = g.node_budget;
      ev.baseline = ev_no_baseline ? 0 : 1;
      if (ev_strategy == "greedy") ev.sample_seeds = 0;
      ev.variants = joined_variants.empty() ? nullptr : joined_variants.c_str();
      ev.splits = joined_splits.empty() ? nullptr : joined_splits.c_str();
      ev.out_dir = out_dir.c_str();
      ev.dataset_dir = ev_dataset.empty() ? nullptr : ev_dataset.c_str();
      ev.model_dir = ev_models.empty() ? nullptr : ev_models.c_str();
      Report report;
      check(gp_experiment_run(&ev, report.out()), "evaluation");
      Text table;
      check(gp_report_table(report.p, table.out()), "formatting report");
      std::cout << table.str() << "reports written to " << out_dir << "\n";
      if (ev_check) {
        std::string split = ev_splits.empty() ? "unseen" : ev_splits.back();
        int passed = 0;
        Text summary;
        check(gp_report_check(report.p, split.c_str(), &passed, summary.out()), "checking report");
        std::cout << summary.str();
        if (!passed) return kExitCheck;
      }
    } else if (*pddl) {
      Scene scene;
      load_scene(px_src, g, scene);
      std::string task = load_task(px_src, g, scene);
      Text domain, problem;
      check(gp_pddl_export(scene.p, task.c_str(), domain.out(), problem.out()), "exporting PDDL");
      if (px_out.empty()) {
        std::cout << domain.str() << "\n" << problem.str();
      } else {
        write_text(fs::path(px_out) / "domain.pddl", domain.str());
        write_text(fs::path(px_out) / "problem.pddl", problem.str());
        std::cout << (fs::path(px_out) / "domain.pddl").string() << "\n"
                  << (fs::path(px_out) / "problem.pddl").string() << "\n";
      }
    } else if (*bench) {
      DatasetH ds;
      if (!bn_dataset.empty()) {
        check(gp_dataset_load(bn_dataset.c_str(), ds.out()), "loading dataset " + bn_dataset);
      } else {
        gp_dataset_config dc = gp_dataset_config_default();
        dc.n = bn_n;
        dc.seed = g.seed;
        dc.jobs = evaluation_jobs(g);
        check(gp_dataset_generate(&dc, ds.out()), "generating dataset");
      }
      auto strategy = make_strategy(bn_strategy, 10, 0.9, g.seed);
      std::printf("%-16s %8s %10s %10s %10s %10s\n", "variant", "max_len", "samples", "seconds", "it/s", "tokens");
      for (const auto& v : bn_variants) {
        Model model;
        Text path;
        check(gp_model_path(g.models_dir.c_str(), v.c_str(), path.out()), "model path");
        if (fs::exists(path.str())) {
          check(gp_model_load(path.p, model.out()), "loading model");
        } else {
          gp_model_config mc = gp_model_config_default();
          check(gp_model_train(ds.p, v.c_str(), &mc, model.out()), "training " + v);
        }
        std::size_t max_len = gp_default_max_len(v.c_str());
        gp_bench_result r{};
        check(gp_bench(model.p, ds.p, bn_split.c_str(), v.c_str(), &strategy, max_len, bn_limit, &r), "bench " + v);
        std::printf("%-16s %8zu %10zu %10.3f %10.2f %10zu\n", v.c_str(), max_len, r.iterations, r.seconds,
                    r.iterations_per_second, r.tokens);
      }
    }
  } catch (const RuntimeFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
