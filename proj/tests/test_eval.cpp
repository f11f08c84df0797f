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
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "common.hpp"
#include "doctest.h"
#include "eval.hpp"

using namespace groundplan;

namespace {

Plan plan_of(std::string_view text) {
  auto parsed = parse_plan(text);
  REQUIRE(parsed.ok());
  return parsed.plan;
}

const Dataset& small_dataset() {
  static const Dataset d = [] {
    DatasetConfig cfg;
    cfg.n = 1000;
    cfg.seed = 3;
    cfg.jobs = 2;
    return gen_dataset(cfg);
  }();
  return d;
}

TraceEntry entry(HighLevelAction a, bool ok) {
  TraceEntry e;
  e.step = make_step(a, "apple", arity(a) == 2 ? "sink" : "");
  e.success = ok;
  return e;
}

}  // namespace

TEST_CASE("plan accuracy examples") {
  auto gold = plan_of("0.GotoLocation(countertop) 1.PickupObject(soap) 2.GotoLocation(drawer) 3.PutObject(soap,drawer)");
  auto s = plan_accuracy(gold, gold);
  CHECK((s.action && s.argument && s.full));

  auto wrong_arg =
      plan_of("0.GotoLocation(countertop) 1.PickupObject(soap) 2.GotoLocation(cabinet) 3.PutObject(soap,drawer)");
  s = plan_accuracy(wrong_arg, gold);
  CHECK((s.action && !s.argument && !s.full));

  auto extra = gold;
  extra.steps.push_back(make_step(HighLevelAction::kGotoLocation, "sink"));
  s = plan_accuracy(extra, gold);
  CHECK((!s.action && !s.argument && !s.full));

  auto alias = plan_of(
      "0.GotoLocation(countertop) 1.PickupObject(soapbar) 2.GotoLocation(drawer) 3.PutObject(soapbar,drawer)");
  CHECK(plan_accuracy(alias, gold).full);

  auto wrong_action =
      plan_of("0.GotoLocation(countertop) 1.PickupObject(soap) 2.GotoLocation(drawer) 3.ToggleObject(soap)");
  s = plan_accuracy(wrong_action, gold);
  CHECK((!s.action && !s.full));

  CHECK_FALSE(score_generation("goal: <BOS> 0.GotoLocation(countertop) 1.PickupObject(", gold).action);
  CHECK_FALSE(score_generation("goal: <BOS> 0.Fly(countertop) <EOS>", gold).action);
  CHECK(score_generation("goal: <BOS> " + serialize_plan(gold) + " <EOS>", gold).full);
}

TEST_CASE("aggregate bounds and order independence") {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    std::vector<PlanScore> scores(1 + rng.index(40));
    for (auto& s : scores) {
      s.action = rng.chance(0.7);
      s.argument = rng.chance(0.5);
      s.full = s.action && s.argument;
    }
    auto a = aggregate(scores);
    CHECK(a.count == scores.size());
    CHECK(a.full <= std::min(a.action, a.argument));
    rng.shuffle(scores);
    auto b = aggregate(scores);
    CHECK(a.action == b.action);
    CHECK(a.argument == b.argument);
    CHECK(a.full == b.full);
  }
  CHECK(aggregate({}).count == 0);
}

TEST_CASE("success rates") {
  ExecutionTrace ok, bad;
  for (auto a : {HighLevelAction::kGotoLocation, HighLevelAction::kPickupObject, HighLevelAction::kPutObject}) {
    ok.entries.push_back(entry(a, true));
    bad.entries.push_back(entry(a, a != HighLevelAction::kPutObject));
  }
  ok.entries.push_back(entry(HighLevelAction::kHeatObject, true));
  auto clean = success_rates({ok});
  CHECK(clean.rate(HighLevelAction::kPutObject) == 1.0);
  CHECK_FALSE(clean.rate(HighLevelAction::kHeatObject).has_value());
  CHECK_FALSE(clean.rate(HighLevelAction::kSliceObject).has_value());
  auto mixed = success_rates({ok, bad});
  CHECK(mixed.rate(HighLevelAction::kPutObject) == 0.5);
  CHECK(mixed.rate(HighLevelAction::kGotoLocation) == 1.0);
  CHECK(success_rates({bad, ok}).counts == mixed.counts);
}

TEST_CASE("dataset split sizes, scenes and determinism") {
  const auto& d = small_dataset();
  CHECK(d.train.size() == 800);
  CHECK(d.seen.size() == 100);
  CHECK(d.unseen.size() == 100);
  std::set<std::uint64_t> train_scenes;
  for (const auto& r : d.train) train_scenes.insert(r.scene_seed);
  for (const auto& r : d.unseen) CHECK(train_scenes.count(r.scene_seed) == 0);
  for (const auto& r : d.seen) CHECK(train_scenes.count(r.scene_seed) == 1);
  for (const auto& r : d.train) CHECK(r.split == "train");
  CHECK(&d.split("unseen") == &d.unseen);
  CHECK_THROWS_AS(d.split("test"), Error);

  std::set<TaskCategory> categories;
  for (const auto& r : d.train) categories.insert(r.task.category);
  CHECK(categories.size() == 7);

  DatasetConfig cfg;
  cfg.n = 40;
  cfg.seed = 3;
  auto a = gen_dataset(cfg);
  cfg.jobs = 3;
  auto b = gen_dataset(cfg);
  for (std::size_t i = 0; i < a.train.size(); ++i) CHECK(record_to_json(a.train[i]) == record_to_json(b.train[i]));
  for (std::size_t i = 0; i < a.unseen.size(); ++i)
    CHECK(record_to_json(a.unseen[i]) == record_to_json(b.unseen[i]));
}

TEST_CASE("records survive json and directory round trips") {
  DatasetConfig cfg;
  cfg.n = 30;
  cfg.seed = 4;
  cfg.variant = ContextVariant::kSceneGraph;
  auto d = gen_dataset(cfg);
  for (const auto& r : d.train) CHECK(record_to_json(record_from_json(record_to_json(r))) == record_to_json(r));
  CHECK_THROWS_AS(record_from_json("{not json"), Error);

  auto dir = (std::filesystem::temp_directory_path() / "groundplan_test_dataset").string();
  save_dataset(d, dir);
  auto back = load_dataset(dir);
  std::filesystem::remove_all(dir);
  CHECK(back.variant == d.variant);
  REQUIRE(back.train.size() == d.train.size());
  REQUIRE(back.unseen.size() == d.unseen.size());
  for (std::size_t i = 0; i < d.train.size(); ++i) CHECK(record_to_json(back.train[i]) == record_to_json(d.train[i]));
  CHECK_THROWS_AS(load_dataset(dir), Error);
}

TEST_CASE("gold plans score perfectly and every sub-task succeeds") {
  const auto& d = small_dataset();
  for (const auto* part : {&d.train, &d.unseen}) {
    for (std::size_t i = 0; i < 100; ++i) {
      const auto& r = (*part)[i];
      auto text = serialize_sample(to_sample(r, ContextVariant::kNone));
      auto s = score_generation(text, r.plan);
      CHECK((s.action && s.argument && s.full));
      auto trace = execute_plan(r.plan, scene_of(r), true);
      CHECK(trace.all_succeeded());
      CHECK(goal_satisfied(abstract(trace.final_state), derive_goal_conditions(r.task)));
    }
  }
}

TEST_CASE("baseline matches gold and report rows are consistent") {
  const auto& d = small_dataset();
  std::vector<DatasetRecord> recs(d.unseen.begin(), d.unseen.begin() + 40);
  auto eps = evaluate_baseline(recs, {});
  auto rows = summarize("baseline", "unseen", "greedy", eps);
  const auto& all = rows.back();
  CHECK(all.category == "all");
  CHECK(all.accuracy.full == 1.0);
  CHECK(all.goal_success == 1.0);
  for (auto a : kScoredActions)
    if (auto r = all.success.rate(a)) CHECK(*r == 1.0);
  std::size_t per_category = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) per_category += rows[i].accuracy.count;
  CHECK(per_category == recs.size());

  EvalReport report{rows};
  for (const auto& row : report.rows) CHECK(row.accuracy.full <= std::min(row.accuracy.action, row.accuracy.argument));
  CHECK(report.find("baseline", "unseen", "all", "greedy") != nullptr);
  CHECK(report.find("none", "unseen", "all", "greedy") == nullptr);
  auto csv = report.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size() + 1));
  CHECK(report.to_table().find("baseline") != std::string::npos);
}

TEST_CASE("model evaluation end to end on a small split") {
  const auto& d = small_dataset();
  auto dv = with_variant(d, ContextVariant::kFirstStepHint);
  std::vector<std::string> corpus;
  for (const auto& r : dv.train) corpus.push_back(serialize_sample(to_sample(r, dv.variant)));
  auto m = SequenceModel::train(corpus, Tokenizer::build(corpus, model_lexicon()), experiment_lm_options());
  std::vector<DatasetRecord> recs(dv.unseen.begin(), dv.unseen.begin() + 30);
  auto eps = evaluate_model(m, recs, dv.variant, DecodingStrategy::greedy(), default_max_len(dv.variant), 2);
  REQUIRE(eps.size() == recs.size());
  auto serial = evaluate_model(m, recs, dv.variant, DecodingStrategy::greedy(), default_max_len(dv.variant), 1);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(eps[i].generated == serial[i].generated);
    CHECK(eps[i].generated.rfind(prompt_of(recs[i], dv.variant), 0) == 0);
    if (eps[i].score.full) CHECK(eps[i].trace.all_succeeded());
  }
  for (const auto& row : summarize("first_step_hint", "unseen", "greedy", eps))
    CHECK(row.accuracy.full <= std::min(row.accuracy.action, row.accuracy.argument));
  CHECK(default_max_len(ContextVariant::kNone) == 200);
  CHECK(default_max_len(ContextVariant::kFullContext) == 1024);

  std::vector<std::string> prompts;
  for (const auto& r : recs) prompts.push_back(prompt_of(r, dv.variant));
  auto b = bench(m, prompts, DecodingStrategy::greedy(), 1024);
  CHECK(b.iterations == prompts.size());
  CHECK(std::isfinite(b.iterations_per_second));
  CHECK(b.iterations_per_second > 0.0);
}
