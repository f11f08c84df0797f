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
#include "eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace groundplan {

namespace {

using json = nlohmann::json;

// Runs fn(i) for i in [0, n) on up to jobs threads. Results must be written
// by index so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  auto workers = static_cast<std::size_t>(std::max(1, jobs));
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

RoomKind room_for(std::uint64_t scene_seed) { return all_rooms()[splitmix64(scene_seed ^ 0x726f6f6dull) % 4]; }

namespace {

// First scene/task pair from the seed stream that admits a task.
DatasetRecord make_record(const std::string& split, std::uint64_t stream, std::uint64_t fixed_scene, bool reuse_scene,
                          std::uint64_t task_salt, const DomainKnowledge& dk) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    DatasetRecord r;
    r.split = split;
    r.scene_seed = reuse_scene ? fixed_scene : mix_seed(stream, attempt);
    r.room = room_for(r.scene_seed);
    r.task_seed = mix_seed(r.scene_seed, task_salt + attempt * 0x10000);
    WorldState w = generate_scene(r.scene_seed, r.room, {}, dk);
    try {
      r.task = sample_task(r.task_seed, w, dk);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsolvable) throw;
      continue;
    }
    r.goal = render_goal(r.task, dk);
    r.plan = solve(r.task, w, {}, dk);
    return r;
  }
  fail(ErrorCode::kUnsolvable, "no feasible task in 64 scene attempts");
}

void fill_contexts(std::vector<DatasetRecord>& records, ContextVariant v, const ContextOptions& options, int jobs,
                   const DomainKnowledge& dk) {
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    DatasetRecord& r = records[i];
    r.context = emit_context(v, scene_of(r, dk), r.task, &r.plan, dk, options);
  });
}

}  // namespace

const std::vector<DatasetRecord>& Dataset::split(std::string_view name) const {
  if (name == "train") return train;
  if (name == "seen") return seen;
  if (name == "unseen") return unseen;
  fail(ErrorCode::kInvalidArgument, "unknown split '" + std::string(name) + "'");
}

Dataset gen_dataset(const DatasetConfig& config, const DomainKnowledge& dk) {
  if (config.n == 0) fail(ErrorCode::kInvalidArgument, "dataset size must be positive");
  if (!(config.train_ratio > 0.0 && config.train_ratio <= 1.0))
    fail(ErrorCode::kInvalidArgument, "train ratio must be in (0, 1]");
  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(config.n) * config.train_ratio));
  n_train = std::max<std::size_t>(1, std::min(n_train, config.n));
  std::size_t n_seen = config.seen ? std::min(*config.seen, config.n - n_train) : (config.n - n_train) / 2;
  std::size_t n_unseen = config.n - n_train - n_seen;

  Dataset d;
  d.variant = config.variant;
  d.train.resize(n_train);
  d.seen.resize(n_seen);
  d.unseen.resize(n_unseen);
  const std::uint64_t train_stream = mix_seed(config.seed, 0x747261696eull);
  const std::uint64_t unseen_stream = mix_seed(config.seed, 0x756e7365656eull);
  parallel_for(n_train, config.jobs, [&](std::size_t i) {
    d.train[i] = make_record("train", mix_seed(train_stream, i), 0, false, 1, dk);
  });
  Rng pick(mix_seed(config.seed, 0x7365656eull));
  std::vector<std::size_t> hosts(n_seen);
  for (auto& h : hosts) h = pick.index(n_train);
  parallel_for(n_seen, config.jobs, [&](std::size_t j) {
    d.seen[j] = make_record("seen", 0, d.train[hosts[j]].scene_seed, true, 0x5ee0000ull + j, dk);
  });
  std::set<std::uint64_t> train_scenes;
  for (const auto& r : d.train) train_scenes.insert(r.scene_seed);
  parallel_for(n_unseen, config.jobs, [&](std::size_t j) {
    std::uint64_t stream = mix_seed(unseen_stream, j);
    for (std::uint64_t salt = 0;; ++salt) {
      DatasetRecord r = make_record("unseen", mix_seed(stream, salt), 0, false, 1, dk);
      if (!train_scenes.count(r.scene_seed)) {
        d.unseen[j] = std::move(r);
        return;
      }
    }
  });
  for (auto* part : {&d.train, &d.seen, &d.unseen}) fill_contexts(*part, config.variant, config.context, config.jobs, dk);
  return d;
}

Dataset with_variant(const Dataset& d, ContextVariant variant, const ContextOptions& options, int jobs,
                     const DomainKnowledge& dk) {
  Dataset out = d;
  out.variant = variant;
  for (auto* part : {&out.train, &out.seen, &out.unseen}) fill_contexts(*part, variant, options, jobs, dk);
  return out;
}

WorldState scene_of(const DatasetRecord& r, const DomainKnowledge& dk) {
  return generate_scene(r.scene_seed, r.room, {}, dk);
}

Sample to_sample(const DatasetRecord& r, ContextVariant variant) {
  Sample s;
  s.goal = r.goal;
  if (variant != ContextVariant::kNone) s.context = r.context;
  s.plan = r.plan;
  return s;
}

std::string prompt_of(const DatasetRecord& r, ContextVariant variant) {
  return serialize_prompt(r.goal, variant == ContextVariant::kNone ? std::nullopt : std::optional(r.context));
}

// ---------------------------------------------------------------------------
// Files

namespace {

void put_task(json& j, const TaskSpec& t) {
  j["category"] = std::string(task_category_name(t.category));
  j["target"] = t.target;
  j["receptacle"] = t.receptacle;
  if (t.movable_receptacle) j["movable_receptacle"] = *t.movable_receptacle;
  j["sliced"] = t.sliced;
  j["template"] = t.template_index;
}

TaskSpec get_task(const json& j) {
  TaskSpec t;
  auto cat = parse_task_category(j.at("category").get<std::string>());
  if (!cat) fail(ErrorCode::kParse, "unknown task category '" + j.at("category").get<std::string>() + "'");
  t.category = *cat;
  t.target = j.at("target").get<std::string>();
  t.receptacle = j.at("receptacle").get<std::string>();
  if (j.contains("movable_receptacle")) t.movable_receptacle = j["movable_receptacle"].get<std::string>();
  t.sliced = j.value("sliced", false);
  t.template_index = j.value("template", 0);
  t.goal_conditions = derive_goal_conditions(t);
  return t;
}

}  // namespace

std::string task_to_json(const TaskSpec& task) {
  json j;
  put_task(j, task);
  return j.dump();
}

TaskSpec task_from_json(std::string_view text) {
  try {
    return get_task(json::parse(text));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad task: ") + e.what());
  }
}

std::string record_to_json(const DatasetRecord& r) {
  json j;
  j["split"] = r.split;
  j["scene_seed"] = r.scene_seed;
  j["room"] = std::string(room_name(r.room));
  j["task_seed"] = r.task_seed;
  put_task(j, r.task);
  j["goal"] = r.goal;
  j["plan"] = serialize_plan(r.plan);
  j["context"] = r.context;
  return j.dump();
}

DatasetRecord record_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    DatasetRecord r;
    r.split = j.at("split").get<std::string>();
    r.scene_seed = j.at("scene_seed").get<std::uint64_t>();
    auto room = parse_room(j.at("room").get<std::string>());
    if (!room) fail(ErrorCode::kParse, "unknown room in dataset record");
    r.room = *room;
    r.task_seed = j.at("task_seed").get<std::uint64_t>();
    r.task = get_task(j);
    r.goal = j.at("goal").get<std::string>();
    auto parsed = parse_plan(j.at("plan").get<std::string>());
    if (!parsed.ok()) fail(ErrorCode::kParse, "bad plan in dataset record: " + parsed.error->message);
    r.plan = parsed.plan;
    r.context = j.at("context").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad dataset record: ") + e.what());
  }
}

void save_dataset(const Dataset& d, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const char* name : {"train", "seen", "unseen"}) {
    std::string text;
    for (const auto& r : d.split(name)) text += record_to_json(r) + "\n";
    write_file(dir + "/" + name + ".jsonl", text);
  }
  json meta;
  meta["variant"] = std::string(context_variant_name(d.variant));
  meta["train"] = d.train.size();
  meta["seen"] = d.seen.size();
  meta["unseen"] = d.unseen.size();
  write_file(dir + "/meta.json", meta.dump(2) + "\n");
}

Dataset load_dataset(const std::string& dir) {
  Dataset d;
  try {
    json meta = json::parse(read_file(dir + "/meta.json"));
    auto v = parse_context_variant(meta.at("variant").get<std::string>());
    if (!v) fail(ErrorCode::kParse, "unknown context variant in meta.json");
    d.variant = *v;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad meta.json: ") + e.what());
  }
  for (auto [name, part] : {std::pair{"train", &d.train}, {"seen", &d.seen}, {"unseen", &d.unseen}}) {
    std::istringstream in(read_file(dir + "/" + name + ".jsonl"));
    for (std::string line; std::getline(in, line);)
      if (!trim(line).empty()) part->push_back(record_from_json(line));
  }
  return d;
}

std::vector<std::string> model_lexicon(const DomainKnowledge& dk) {
  std::set<std::string> words;
  for (auto& w : dk.lexicon()) {
    words.insert(w);
    words.insert(dk.surface(w));
  }
  for (auto& s : condensed_symbols()) words.insert(s);
  for (const auto& r : all_relations())
    for (auto& w : split_ws(relation_to_text(r, false))) words.insert(w);
  for (auto room : all_rooms()) words.insert(std::string(room_display_name(room)));
  for (auto a : kAllActions) words.insert(std::string(action_name(a)));
  for (int i = 0; i < 100; ++i) words.insert(std::to_string(i));
  for (auto cat : kAllTaskCategories)
    for (bool sliced : {false, true})
      for (const auto& t : goal_templates(cat, sliced))
        for (auto& piece : Tokenizer::pieces(t)) words.insert(std::string(trim(piece)));
  for (auto a : kAllActions)
    for (auto& piece : Tokenizer::pieces(describe_step(make_step(a, "x", "y")))) words.insert(std::string(trim(piece)));
  for (const char* p : {"(", ")", ",", ".", ":", ";", "-", "[", "]", "=", "{", "}"}) words.insert(p);
  words.erase("");
  return {words.begin(), words.end()};
}

std::map<std::string, std::string> relation_token_classes() {
  std::map<std::string, std::string> out;
  for (const auto& s : condensed_symbols()) out[s] = "#" + s.substr(0, 1);
  return out;
}

LmOptions experiment_lm_options() {
  LmOptions o;
  o.token_classes = relation_token_classes();
  o.context_weight = 0.0;
  o.pointer_weight = 2.0;
  return o;
}

// ---------------------------------------------------------------------------
// Metrics

PlanScore plan_accuracy(const Plan& predicted, const Plan& reference, const DomainKnowledge& dk) {
  PlanScore s;
  if (predicted.steps.size() != reference.steps.size()) return s;
  s.action = s.argument = true;
  for (std::size_t i = 0; i < predicted.steps.size(); ++i) {
    const auto& a = predicted.steps[i];
    const auto& b = reference.steps[i];
    if (a.action != b.action) s.action = false;
    if (a.args.size() != b.args.size()) {
      s.argument = false;
      continue;
    }
    for (std::size_t k = 0; k < a.args.size(); ++k)
      if (dk.canonical(a.args[k]) != dk.canonical(b.args[k])) s.argument = false;
  }
  s.full = s.action && s.argument;
  return s;
}

PlanScore score_generation(std::string_view generated, const Plan& reference, const DomainKnowledge& dk) {
  auto ex = extract_between_markers(generated);
  if (ex.status != Extraction::Status::kOk) return {};
  auto parsed = parse_plan(ex.plan_text);
  if (!parsed.ok()) return {};
  return plan_accuracy(parsed.plan, reference, dk);
}

AccuracyTriple aggregate(const std::vector<PlanScore>& scores) {
  AccuracyTriple t;
  t.count = scores.size();
  if (scores.empty()) return t;
  for (const auto& s : scores) {
    t.action += s.action;
    t.argument += s.argument;
    t.full += s.full;
  }
  auto n = static_cast<double>(scores.size());
  t.action /= n;
  t.argument /= n;
  t.full /= n;
  return t;
}

std::optional<double> SuccessRates::rate(HighLevelAction a) const {
  auto it = counts.find(a);
  if (it == counts.end() || it->second.second == 0) return std::nullopt;
  return static_cast<double>(it->second.first) / it->second.second;
}

SuccessRates success_rates(const std::vector<ExecutionTrace>& traces) {
  SuccessRates r;
  for (const auto& t : traces)
    for (const auto& e : t.entries) {
      if (classify(e.step.action) == TaskKind::kComposite) continue;
      auto& c = r.counts[e.step.action];
      c.first += e.success ? 1 : 0;
      ++c.second;
    }
  return r;
}

namespace {

Episode run_plan(const Plan& plan, const DatasetRecord& r, const DomainKnowledge& dk) {
  Episode ep;
  ep.category = r.task.category;
  WorldState w = scene_of(r, dk);
  ep.trace = execute_plan(plan, w, true, dk);
  ep.goal_reached = true;
  for (const auto& c : r.task.goal_conditions)
    if (!check_condition(ep.trace.final_state, c, dk)) ep.goal_reached = false;
  return ep;
}

}  // namespace

std::vector<Episode> evaluate_model(const SequenceModel& model, const std::vector<DatasetRecord>& records,
                                    ContextVariant variant, const DecodingStrategy& strategy, std::size_t max_len,
                                    int jobs, const DomainKnowledge& dk) {
  std::vector<Episode> out(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    const DatasetRecord& r = records[i];
    std::string prompt = prompt_of(r, variant);
    DecodingStrategy s = strategy;
    s.seed = mix_seed(strategy.seed, i);
    auto prompt_len = model.tokenizer().encode(prompt).size();
    std::string text = generate(model, prompt, s, std::max(max_len, prompt_len));
    Plan predicted;
    auto ex = extract_between_markers(text);
    if (ex.status == Extraction::Status::kOk) {
      auto parsed = parse_plan(ex.plan_text);
      if (parsed.ok()) predicted = parsed.plan;
    }
    Episode ep = run_plan(predicted, r, dk);
    ep.score = score_generation(text, r.plan, dk);
    ep.generated = std::move(text);
    out[i] = std::move(ep);
  });
  return out;
}

std::vector<Episode> evaluate_baseline(const std::vector<DatasetRecord>& records, const PlannerOptions& options,
                                       int jobs, const DomainKnowledge& dk) {
  std::vector<Episode> out(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    const DatasetRecord& r = records[i];
    auto result = search(r.task, scene_of(r, dk), options, dk);
    Plan plan = result.status == SolveResult::Status::kSolved ? result.plan : Plan{};
    Episode ep = run_plan(plan, r, dk);
    ep.score = plan_accuracy(plan, r.plan, dk);
    ep.generated = serialize_plan(plan);
    out[i] = std::move(ep);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reports

std::vector<ReportRow> summarize(const std::string& model, const std::string& split, const std::string& strategy,
                                 const std::vector<Episode>& episodes) {
  std::vector<ReportRow> rows;
  auto make = [&](const std::string& category, auto keep) {
    std::vector<PlanScore> scores;
    std::vector<ExecutionTrace> traces;
    int reached = 0;
    for (const auto& e : episodes)
      if (keep(e)) {
        scores.push_back(e.score);
        traces.push_back(e.trace);
        reached += e.goal_reached;
      }
    if (scores.empty()) return;
    ReportRow row{model, split, category, strategy, aggregate(scores), success_rates(traces),
                  static_cast<double>(reached) / static_cast<double>(scores.size())};
    rows.push_back(std::move(row));
  };
  for (auto cat : kAllTaskCategories)
    make(std::string(task_category_name(cat)), [cat](const Episode& e) { return e.category == cat; });
  make("all", [](const Episode&) { return true; });
  return rows;
}

const ReportRow* EvalReport::find(std::string_view model, std::string_view split, std::string_view category,
                                  std::string_view strategy) const {
  for (const auto& r : rows)
    if (r.model == model && r.split == split && r.category == category && r.strategy == strategy) return &r;
  return nullptr;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "model,split,category,strategy,count,action_acc,argument_acc,full_plan_acc,goal_success";
  for (auto a : kScoredActions) out << ",success_" << action_name(a);
  out << "\n";
  for (const auto& r : rows) {
    out << r.model << "," << r.split << "," << r.category << "," << r.strategy << "," << r.accuracy.count << ","
        << fmt(r.accuracy.action) << "," << fmt(r.accuracy.argument) << "," << fmt(r.accuracy.full) << ","
        << fmt(r.goal_success);
    for (auto a : kScoredActions) out << "," << fmt(r.success.rate(a));
    out << "\n";
  }
  return out.str();
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "model" << std::setw(8) << "split" << std::setw(36) << "category"
      << std::setw(11) << "strategy" << std::right << std::setw(6) << "n" << std::setw(8) << "action"
      << std::setw(8) << "args" << std::setw(8) << "full" << std::setw(8) << "goal";
  for (auto a : kScoredActions) out << std::setw(8) << std::string(action_name(a)).substr(0, 6);
  out << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(16) << r.model << std::setw(8) << r.split << std::setw(36) << r.category
        << std::setw(11) << r.strategy << std::right << std::setw(6) << r.accuracy.count << std::setw(8)
        << fmt(r.accuracy.action) << std::setw(8) << fmt(r.accuracy.argument) << std::setw(8)
        << fmt(r.accuracy.full) << std::setw(8) << fmt(r.goal_success);
    for (auto a : kScoredActions) {
      auto v = r.success.rate(a);
      out << std::setw(8) << (v ? fmt(*v) : std::string("-"));
    }
    out << "\n";
  }
  return out.str();
}

std::size_t default_max_len(ContextVariant v) { return v == ContextVariant::kNone ? 200 : 1024; }

std::string model_file(const std::string& dir, ContextVariant v) {
  return dir + "/" + std::string(context_variant_name(v)) + ".gpm";
}

EvalReport run_experiment(const ExperimentConfig& config, const DomainKnowledge& dk) {
  Dataset base;
  if (!config.dataset_dir.empty()) {
    base = load_dataset(config.dataset_dir);
  } else {
    if (config.train == 0) fail(ErrorCode::kInvalidArgument, "experiment needs training samples");
    DatasetConfig dc;
    dc.n = config.train + config.seen + config.unseen;
    dc.seed = config.seed;
    dc.train_ratio = static_cast<double>(config.train) / static_cast<double>(dc.n);
    dc.seen = config.seen;
    dc.jobs = config.jobs;
    base = gen_dataset(dc, dk);
  }
  const auto lexicon = model_lexicon(dk);

  EvalReport report;
  if (config.baseline)
    for (const auto& split : config.splits) {
      auto rows = summarize("baseline", split, "planner", evaluate_baseline(base.split(split), config.planner, config.jobs, dk));
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
  for (auto variant : config.variants) {
    Dataset d = with_variant(base, variant, {}, config.jobs, dk);
    SequenceModel model;
    if (!config.model_dir.empty()) {
      model = SequenceModel::load(model_file(config.model_dir, variant));
    } else {
      std::vector<std::string> corpus;
      corpus.reserve(d.train.size());
      for (const auto& r : d.train) corpus.push_back(serialize_sample(to_sample(r, variant)));
      model = SequenceModel::train(corpus, Tokenizer::build(corpus, lexicon), config.lm);
    }
    const std::string name(context_variant_name(variant));
    for (const auto& split : config.splits) {
      const auto& records = d.split(split);
      auto add = [&](const std::string& strategy_name, const DecodingStrategy& s) {
        auto rows = summarize(name, split, strategy_name,
                              evaluate_model(model, records, variant, s, default_max_len(variant), config.jobs, dk));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      };
      add("greedy", DecodingStrategy::greedy());
      for (int i = 0; i < config.sample_seeds; ++i)
        add("sample:" + std::to_string(i + 1),
            DecodingStrategy::sampled(config.k, config.p, mix_seed(config.seed, 0x5a000ull + static_cast<std::uint64_t>(i))));
    }
  }
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_file(config.out_dir + "/report.csv", report.to_csv());
    write_file(config.out_dir + "/report.txt", report.to_table());
  }
  return report;
}

std::vector<ReportCheck> check_report(const EvalReport& report, const std::string& split) {
  std::vector<ReportCheck> out;
  auto add = [&](std::string name, ReportCheck::Status st, std::string detail) {
    out.push_back({std::move(name), st, std::move(detail)});
  };
  using St = ReportCheck::Status;
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return std::string(buf);
  };
  auto greedy = [&](ContextVariant v) { return report.find(context_variant_name(v), split, "all", "greedy"); };

  {
    bool ok = true;
    std::string detail;
    for (const auto& r : report.rows)
      if (r.accuracy.full > std::min(r.accuracy.action, r.accuracy.argument) + 1e-12) {
        ok = false;
        detail = r.model + "/" + r.split + "/" + r.category + "/" + r.strategy;
        break;
      }
    add("full <= min(action, argument) on every row", ok ? St::kPass : St::kFail,
        ok ? std::to_string(report.rows.size()) + " rows" : "violated by " + detail);
  }
  {
    std::string detail;
    bool ok = true, any = false;
    for (auto v : kAllContextVariants)
      if (const auto* r = greedy(v)) {
        any = true;
        detail += std::string(context_variant_name(v)) + "=" + fmt(r->accuracy.action) + " ";
        ok = ok && r->accuracy.action >= kMinActionAccuracy;
      }
    add("action accuracy >= " + fmt(kMinActionAccuracy) + " for every variant", !any ? St::kSkip : ok ? St::kPass : St::kFail,
        detail);
  }
  if (const auto* none = greedy(ContextVariant::kNone)) {
    std::string detail = "none=" + fmt(none->accuracy.argument);
    bool ok = true, any = false;
    for (auto v : {ContextVariant::kSceneKnowledge, ContextVariant::kSceneGraph, ContextVariant::kFullContext})
      if (const auto* r = greedy(v)) {
        any = true;
        detail += " " + std::string(context_variant_name(v)) + "=" + fmt(r->accuracy.argument);
        ok = ok && r->accuracy.argument > none->accuracy.argument;
      }
    add("context variants beat none on argument accuracy", any ? (ok ? St::kPass : St::kFail) : St::kSkip, detail);
  } else {
    add("context variants beat none on argument accuracy", St::kSkip, "no none row");
  }
  if (const auto* hint = greedy(ContextVariant::kFirstStepHint)) {
    std::string detail = "first_step_hint=" + fmt(hint->accuracy.full);
    bool ok = true;
    for (auto v : kAllContextVariants)
      if (const auto* r = greedy(v); r && v != ContextVariant::kFirstStepHint) {
        detail += " " + std::string(context_variant_name(v)) + "=" + fmt(r->accuracy.full);
        ok = ok && hint->accuracy.full > r->accuracy.full;
      }
    add("first_step_hint has the highest full-plan accuracy", ok ? St::kPass : St::kFail, detail);
  } else {
    add("first_step_hint has the highest full-plan accuracy", St::kSkip, "no first_step_hint row");
  }
  {
    bool ok = true, any = false;
    double worst = 0.0;
    std::string detail;
    for (const auto& r : report.rows) {
      if (r.split != split || r.category != "all" || r.strategy.rfind("sample:", 0) != 0) continue;
      const auto* g = report.find(r.model, split, "all", "greedy");
      if (!g) continue;
      any = true;
      double diff = r.accuracy.full - g->accuracy.full;
      if (std::abs(diff) > std::abs(worst)) worst = diff;
      if (std::abs(diff) > kSampleTolerance || diff > kSampleMaxGain) {
        ok = false;
        detail = r.model + " " + r.strategy + " differs by " + fmt(diff);
      }
    }
    if (ok) detail = "largest difference " + fmt(worst);
    add("sampling within " + fmt(kSampleTolerance) + " of greedy, gain <= " + fmt(kSampleMaxGain),
        any ? (ok ? St::kPass : St::kFail) : St::kSkip, detail);
  }
  return out;
}

BenchResult bench(const SequenceModel& model, const std::vector<std::string>& prompts, const DecodingStrategy& strategy,
                  std::size_t max_len) {
  if (prompts.empty()) fail(ErrorCode::kInvalidArgument, "bench needs at least one prompt");
  BenchResult r;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    auto prompt_len = model.tokenizer().encode(prompts[i]).size();
    DecodingStrategy s = strategy;
    s.seed = mix_seed(strategy.seed, i);
    std::string text = generate(model, prompts[i], s, std::max(max_len, prompt_len));
    r.tokens += model.tokenizer().encode(text).size() - prompt_len;
    ++r.iterations;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.iterations_per_second = r.seconds > 0 ? static_cast<double>(r.iterations) / r.seconds : 0.0;
  return r;
}

}  // namespace groundplan
