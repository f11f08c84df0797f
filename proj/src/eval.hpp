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
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graph2nl.hpp"
#include "grounding.hpp"
#include "lm.hpp"
#include "planner.hpp"
#include "plandsl.hpp"
#include "task.hpp"
#include "world.hpp"

namespace groundplan {

// One (scene, task, gold plan) sample. Scenes are stored by seed and room and
// regenerated on demand.
struct DatasetRecord {
  std::string split;  // train, seen or unseen
  std::uint64_t scene_seed = 0;
  RoomKind room = RoomKind::kKitchen;
  std::uint64_t task_seed = 0;
  TaskSpec task;
  std::string goal;
  Plan plan;
  std::string context;  // for the dataset's context variant
};

struct Dataset {
  ContextVariant variant = ContextVariant::kNone;
  std::vector<DatasetRecord> train, seen, unseen;
  const std::vector<DatasetRecord>& split(std::string_view name) const;  // throws kInvalidArgument
};

struct DatasetConfig {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  ContextVariant variant = ContextVariant::kNone;
  double train_ratio = 0.8;  // the rest splits evenly into seen and unseen
  std::optional<std::size_t> seen;  // fixes the seen count; unseen takes the rest
  int jobs = 1;
  ContextOptions context;
};

// Deterministic in the config (jobs only changes speed). Unseen scenes use
// seeds disjoint from the training scenes; seen samples reuse training
// scenes with freshly sampled tasks.
Dataset gen_dataset(const DatasetConfig& config, const DomainKnowledge& dk = DomainKnowledge::builtin());
// Same records with contexts recomputed for another variant.
Dataset with_variant(const Dataset& d, ContextVariant variant, const ContextOptions& options = {}, int jobs = 1,
                     const DomainKnowledge& dk = DomainKnowledge::builtin());

// Room a dataset scene seed is generated in.
RoomKind room_for(std::uint64_t scene_seed);

WorldState scene_of(const DatasetRecord& r, const DomainKnowledge& dk = DomainKnowledge::builtin());
Sample to_sample(const DatasetRecord& r, ContextVariant variant);
std::string prompt_of(const DatasetRecord& r, ContextVariant variant);

// {"category", "target", "receptacle", "movable_receptacle"?, "sliced", "template"}
std::string task_to_json(const TaskSpec& task);
TaskSpec task_from_json(std::string_view text);  // throws kParse

std::string record_to_json(const DatasetRecord& r);
DatasetRecord record_from_json(std::string_view line);  // throws kParse
// <dir>/train.jsonl, seen.jsonl, unseen.jsonl and meta.json.
void save_dataset(const Dataset& d, const std::string& dir);
Dataset load_dataset(const std::string& dir);  // throws kIo / kParse

// Words the tokenizer should know beyond the training corpus: categories,
// aliases, relation symbols, room names, action names and template words.
std::vector<std::string> model_lexicon(const DomainKnowledge& dk = DomainKnowledge::builtin());

// Condensed relation symbol -> its distance bin letter, for the model's
// delexicalized context features.
std::map<std::string, std::string> relation_token_classes();
// Model options used by experiments: defaults plus relation_token_classes().
LmOptions experiment_lm_options();

// Per-plan correctness. Arguments compare after alias resolution.
struct PlanScore {
  bool action = false;
  bool argument = false;
  bool full = false;
};
PlanScore plan_accuracy(const Plan& predicted, const Plan& reference,
                        const DomainKnowledge& dk = DomainKnowledge::builtin());
// Scores generated text; a truncated or unparseable plan scores zero.
PlanScore score_generation(std::string_view generated, const Plan& reference,
                           const DomainKnowledge& dk = DomainKnowledge::builtin());

struct AccuracyTriple {
  double action = 0.0;
  double argument = 0.0;
  double full = 0.0;
  std::size_t count = 0;
};
AccuracyTriple aggregate(const std::vector<PlanScore>& scores);

// Per-action sub-task success over GotoLocation, PickupObject, PutObject,
// SliceObject and ToggleObject. Composite steps are left out.
struct SuccessRates {
  std::map<HighLevelAction, std::pair<int, int>> counts;  // successes, attempts
  std::optional<double> rate(HighLevelAction a) const;   // nullopt without attempts
};
inline constexpr HighLevelAction kScoredActions[] = {
    HighLevelAction::kGotoLocation, HighLevelAction::kPickupObject, HighLevelAction::kPutObject,
    HighLevelAction::kSliceObject, HighLevelAction::kToggleObject,
};
SuccessRates success_rates(const std::vector<ExecutionTrace>& traces);

struct Episode {
  TaskCategory category = TaskCategory::kPickAndPlace;
  PlanScore score;
  ExecutionTrace trace;
  bool goal_reached = false;
  std::string generated;
};

// Generates, scores and executes (try-all grounding) one episode per record.
std::vector<Episode> evaluate_model(const SequenceModel& model, const std::vector<DatasetRecord>& records,
                                    ContextVariant variant, const DecodingStrategy& strategy, std::size_t max_len,
                                    int jobs = 1, const DomainKnowledge& dk = DomainKnowledge::builtin());
// Baseline planner run on the same records and node budget.
std::vector<Episode> evaluate_baseline(const std::vector<DatasetRecord>& records, const PlannerOptions& options,
                                       int jobs = 1, const DomainKnowledge& dk = DomainKnowledge::builtin());

struct ReportRow {
  std::string model;     // context variant name or "baseline"
  std::string split;
  std::string category;  // task category name or "all"
  std::string strategy;  // "greedy" or "sample:<seed>"
  AccuracyTriple accuracy;
  SuccessRates success;
  double goal_success = 0.0;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  const ReportRow* find(std::string_view model, std::string_view split, std::string_view category,
                        std::string_view strategy) const;
  std::string to_csv() const;
  std::string to_table() const;
};

// One row per category plus an "all" row.
std::vector<ReportRow> summarize(const std::string& model, const std::string& split, const std::string& strategy,
                                 const std::vector<Episode>& episodes);

struct ExperimentConfig {
  std::size_t train = 5000;
  std::size_t seen = 500;
  std::size_t unseen = 500;
  std::uint64_t seed = 1;
  std::vector<ContextVariant> variants{std::begin(kAllContextVariants), std::end(kAllContextVariants)};
  std::vector<std::string> splits{"seen", "unseen"};
  LmOptions lm = experiment_lm_options();
  int sample_seeds = 3;  // top-k/top-p repetitions; 0 disables
  int k = 10;
  double p = 0.9;
  bool baseline = true;
  PlannerOptions planner;
  int jobs = 1;
  std::string out_dir;  // report.csv and report.txt when set
  std::string dataset_dir;  // load instead of generating when set
  std::string model_dir;    // load <variant>.gpm instead of training when set
};

std::string model_file(const std::string& dir, ContextVariant v);

std::size_t default_max_len(ContextVariant v);  // 200 without context, else 1024

// Trains one model per variant and evaluates it on the configured splits.
EvalReport run_experiment(const ExperimentConfig& config, const DomainKnowledge& dk = DomainKnowledge::builtin());

inline constexpr double kMinActionAccuracy = 0.80;
inline constexpr double kSampleTolerance = 0.05;
inline constexpr double kSampleMaxGain = 0.02;

struct ReportCheck {
  enum class Status { kPass, kFail, kSkip };  // skip: rows missing
  std::string name;
  Status status = Status::kSkip;
  std::string detail;
};
// Threshold checks on the greedy and sampled "all" rows of one split.
std::vector<ReportCheck> check_report(const EvalReport& report, const std::string& split = "unseen");

struct BenchResult {
  std::size_t iterations = 0;  // generations
  double seconds = 0.0;
  double iterations_per_second = 0.0;
  std::size_t tokens = 0;  // generated tokens
};
// Generation throughput averaged over the prompts.
BenchResult bench(const SequenceModel& model, const std::vector<std::string>& prompts,
                  const DecodingStrategy& strategy, std::size_t max_len);

}  // namespace groundplan
