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
// Acceptance run: one PASS/FAIL line per criterion, each with its own
// runtime limit. Exit status is nonzero when any criterion fails.
//
//   acceptance [--report-dir DIR] [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "common.hpp"
#include "eval.hpp"
#include "graph2nl.hpp"
#include "grounding.hpp"
#include "lm.hpp"
#include "planner.hpp"
#include "plandsl.hpp"
#include "scenegraph.hpp"
#include "scenes.hpp"

using namespace groundplan;

namespace {

// Pinned tolerances.
constexpr double kBinEdgeEps = 1e-6;
constexpr double kSoftmaxSumTol = 1e-9;
constexpr double kSoftmaxShiftTol = 1e-12;
constexpr int kTopK = 10;
constexpr double kTopP = 0.9;
constexpr int kDraws = 100000;
constexpr int kRoundTripPlans = 1000;
constexpr int kFuzzInputs = 100000;
constexpr int kGrids = 200;
constexpr int kSoundnessPairs = 500;
constexpr int kOracleHorizon = 6;
constexpr std::size_t kTrain = 5000, kSeen = 500, kUnseen = 500;
constexpr int kSampleSeeds = 3;
constexpr std::size_t kBenchSamples = 800;

// Runtime limits in seconds, per criterion.
constexpr double kLimit[13] = {0, 1, 1, 10, 30, 5, 10, 5, 300, 900, 900, 900, 900};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 1;
}

// ---------------------------------------------------------------------------

Outcome golden_example() {
  const auto& dk = DomainKnowledge::builtin();
  SceneGraph g = connect_agent(infuse_domain_knowledge(build_graph(testing::golden_scene()), dk), &dk);
  std::string verbose = describe_target(g, "soapbar", 2, false);
  std::string condensed = describe_target(g, "soapbar", 2, true);
  auto has = [](const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
      if (l == line || l == line + "]") return true;
    return false;
  };
  bool v = has(verbose, "- closer below left sink near below back soapbar");
  bool c = has(condensed, "- fnk sink dnj soapbar");
  return {v && c, std::string("verbose ") + (v ? "ok" : "missing") + ", condensed " + (c ? "ok" : "missing")};
}

Outcome mapping_table() {
  int round_trips = 0;
  std::set<std::string> symbols;
  for (const auto& r : all_relations()) {
    auto w = parse_relation(relation_to_text(r, false));
    auto s = parse_relation(relation_to_text(r, true));
    if (w && s && *w == r && *s == r) ++round_trips;
    symbols.insert(relation_to_text(r, true));
  }
  int edges = 0, edge_ok = 0;
  auto expect = [&](bool ok) {
    ++edges;
    edge_ok += ok;
  };
  const double d_edges[] = {5, 4, 3, 2, 1, 0.5, 0.1};
  for (double e : d_edges) {
    auto lo = map_relation(e - kBinEdgeEps, 0, 0).distance, at = map_relation(e, 0, 0).distance,
         hi = map_relation(e + kBinEdgeEps, 0, 0).distance;
    expect(lo == at && hi != at);
  }
  for (double e : {45.0, 135.0, 225.0, 315.0}) {
    auto lo = map_relation(1, e - kBinEdgeEps, 0).yaw, at = map_relation(1, e, 0).yaw,
         hi = map_relation(1, e + kBinEdgeEps, 0).yaw;
    expect(lo != at && hi == at);
  }
  {
    auto lo = map_relation(1, 0, -kBinEdgeEps).pitch, at = map_relation(1, 0, 0).pitch,
         hi = map_relation(1, 0, kBinEdgeEps).pitch;
    expect(lo != at && hi == at);
  }
  bool ok = round_trips == 64 && symbols.size() == 64 && edge_ok == edges;
  return {ok, std::to_string(round_trips) + "/64 round trips, " + std::to_string(edge_ok) + "/" +
                  std::to_string(edges) + " bin edges"};
}

Outcome plan_dsl() {
  Rng rng(31);
  const char* words[] = {"apple", "sink", "countertop", "soap", "fridge", "drawer", "mug", "knife", "diningtable"};
  int identical = 0;
  for (int i = 0; i < kRoundTripPlans; ++i) {
    Plan p;
    int n = rng.range(0, 12);
    for (int k = 0; k < n; ++k) {
      auto a = kAllActions[rng.index(kAllActions.size())];
      p.steps.push_back(make_step(a, words[rng.index(9)], arity(a) == 2 ? words[rng.index(9)] : ""));
    }
    auto back = parse_plan(serialize_plan(p));
    identical += back.ok() && back.plan == p;
  }
  const std::string alphabet = "0123456789.,;() abcGotoLocationPutObjectPickupHeat<>BOSEOS";
  int survived = 0;
  for (int i = 0; i < kFuzzInputs; ++i) {
    std::string s;
    int n = rng.range(0, 80);
    for (int k = 0; k < n; ++k)
      s.push_back(rng.chance(0.1) ? static_cast<char>(rng.range(0, 255)) : alphabet[rng.index(alphabet.size())]);
    auto r = parse_plan(s);
    (void)extract_between_markers(s);
    survived += !r.error || r.error->position <= s.size();
  }
  return {identical == kRoundTripPlans && survived == kFuzzInputs,
          std::to_string(identical) + "/" + std::to_string(kRoundTripPlans) + " round trips, " +
              std::to_string(survived) + "/" + std::to_string(kFuzzInputs) + " fuzz inputs"};
}

Outcome decoding() {
  Rng rng(41);
  double worst_sum = 0.0, worst_shift = 0.0;
  int greedy_match = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s(2 + rng.index(400));
    for (auto& x : s) x = (rng.uniform01() - 0.5) * 30.0;
    auto p = softmax(s);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
    auto t = s;
    double c = (rng.uniform01() - 0.5) * 2000.0;
    for (auto& x : t) x += c;
    auto q = softmax(t);
    for (std::size_t j = 0; j < p.size(); ++j) worst_shift = std::max(worst_shift, std::abs(p[j] - q[j]));
    Rng r1(i), r2(i);
    greedy_match += select_next(p, DecodingStrategy::greedy(), r1) ==
                    select_next(p, DecodingStrategy::sampled(1, rng.uniform01(), rng.next()), r2);
  }
  // Membership: reference prefix built by sorting, separate from the library.
  std::vector<double> dist(60);
  for (auto& x : dist) x = std::pow(rng.uniform01(), 4.0);
  double z = std::accumulate(dist.begin(), dist.end(), 0.0);
  for (auto& x : dist) x /= z;
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] > dist[b]; });
  std::set<int> allowed;
  double mass = 0.0;
  for (int i = 0; i < kTopK; ++i) {
    allowed.insert(order[i]);
    mass += dist[order[i]];
    if (mass >= kTopP) break;
  }
  Rng draw(43);
  int inside = 0;
  for (int i = 0; i < kDraws; ++i) inside += allowed.count(select_next(dist, DecodingStrategy::sampled(kTopK, kTopP, 0), draw));
  bool ok = worst_sum <= kSoftmaxSumTol && worst_shift <= kSoftmaxShiftTol && greedy_match == 1000 && inside == kDraws;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max |sum-1| %.1e, max shift diff %.1e, greedy=k1 %d/1000, %d/%d draws in prefix of %zu",
                worst_sum, worst_shift, greedy_match, inside, kDraws, allowed.size());
  return {ok, buf};
}

Outcome degenerate_corpus() {
  std::vector<std::string> samples = {
      "Put the soap into the drawer: <BOS> 0.GotoLocation(countertop) 1.PickupObject(soap) "
      "2.GotoLocation(drawer) 3.PutObject(soap,drawer) <EOS>"};
  DatasetConfig dc;
  dc.n = 10;
  dc.seed = 5;
  dc.variant = ContextVariant::kFullContext;
  auto d = gen_dataset(dc);
  samples.push_back(serialize_sample(to_sample(d.train[0], ContextVariant::kFullContext)));
  int reproduced = 0;
  for (const auto& s : samples) {
    std::vector<std::string> corpus(20, s);
    auto m = SequenceModel::train(corpus, Tokenizer::build(corpus), experiment_lm_options());
    std::string prompt = s.substr(0, s.find("<BOS>") + 5);
    auto out = generate(m, prompt, DecodingStrategy::greedy());
    reproduced += extract_between_markers(out).plan_text == extract_between_markers(s).plan_text && out == s;
  }
  return {reproduced == static_cast<int>(samples.size()),
          std::to_string(reproduced) + "/" + std::to_string(samples.size()) + " samples reproduced"};
}

int bfs_cost(int w, int h, const std::vector<std::uint8_t>& free, Cell a, Cell b) {
  std::vector<int> d(static_cast<std::size_t>(w * h), -1);
  std::deque<Cell> q{a};
  d[static_cast<std::size_t>(a.y * w + a.x)] = 0;
  while (!q.empty()) {
    Cell c = q.front();
    q.pop_front();
    if (c == b) return d[static_cast<std::size_t>(c.y * w + c.x)];
    const int dx[] = {0, 1, 0, -1}, dy[] = {1, 0, -1, 0};
    for (int k = 0; k < 4; ++k) {
      Cell n{c.x + dx[k], c.y + dy[k]};
      if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h) continue;
      auto i = static_cast<std::size_t>(n.y * w + n.x);
      if (!free[i] || d[i] >= 0) continue;
      d[i] = d[static_cast<std::size_t>(c.y * w + c.x)] + 1;
      q.push_back(n);
    }
  }
  return -1;
}

Outcome astar() {
  Rng rng(51);
  int agree = 0, nopath = 0, disconnected = 0;
  for (int t = 0; t < kGrids; ++t) {
    std::vector<std::uint8_t> free(900);
    for (auto& f : free) f = rng.chance(0.35) ? 0 : 1;
    Cell a{rng.range(0, 29), rng.range(0, 29)}, b{rng.range(0, 29), rng.range(0, 29)};
    free[static_cast<std::size_t>(a.y * 30 + a.x)] = 1;
    free[static_cast<std::size_t>(b.y * 30 + b.x)] = 1;
    NavigationGraph g(30, 30, free);
    int oracle = bfs_cost(30, 30, free, a, b);
    if (oracle < 0) {
      ++disconnected;
      try {
        shortest_path(g, a, b);
      } catch (const Error& e) {
        nopath += e.code() == ErrorCode::kNoPath;
      }
      continue;
    }
    agree += static_cast<int>(shortest_path(g, a, b).size()) - 1 == oracle;
  }
  // One guaranteed disconnected instance.
  std::vector<std::uint8_t> walled(900, 1);
  for (int y = 0; y < 30; ++y) walled[static_cast<std::size_t>(y * 30 + 15)] = 0;
  ++disconnected;
  try {
    shortest_path(NavigationGraph(30, 30, walled), {0, 0}, {29, 29});
  } catch (const Error& e) {
    nopath += e.code() == ErrorCode::kNoPath;
  }
  int connected = kGrids + 1 - disconnected;
  return {agree == connected && nopath == disconnected,
          std::to_string(agree) + "/" + std::to_string(connected) + " costs match, " + std::to_string(nopath) + "/" +
              std::to_string(disconnected) + " NoPath"};
}

Outcome composites() {
  using K = LowLevelAction::Kind;
  const std::vector<K> expected{K::kToggleObject, K::kPutObject,    K::kToggleObject,
                                K::kToggleObject, K::kPickupObject, K::kToggleObject};
  struct Case {
    const char* appliance;
    HighLevelAction action;
    StateFlag flag;
  };
  int ok = 0;
  std::string detail;
  for (Case c : {Case{"microwave", HighLevelAction::kHeatObject, StateFlag::kHot},
                 Case{"fridge", HighLevelAction::kCoolObject, StateFlag::kCold},
                 Case{"sink", HighLevelAction::kCleanObject, StateFlag::kClean}}) {
    WorldState w = testing::appliance_scene(c.appliance);
    apply_action(w, LowLevelAction::interact(K::kPickupObject, "apple_1"));
    apply_action(w, LowLevelAction::move(K::kRotateCW));
    auto seq = expand_composite(make_step(c.action, "apple"), w);
    std::vector<K> kinds;
    for (const auto& a : seq) kinds.push_back(a.kind);
    auto trace = execute_plan(Plan{{make_step(c.action, "apple")}}, w, false);
    bool pass = kinds == expected && trace.all_succeeded() && get_flag(trace.final_state.get("apple_1").state, c.flag);
    ok += pass;
    detail += std::string(action_name(c.action)) + (pass ? " ok " : " FAILED ");
  }
  return {ok == 3, detail};
}

Outcome baseline_soundness() {
  Rng rng(61);
  int executed = 0, oracle_checked = 0, oracle_agree = 0, attempts = 0;
  std::map<TaskCategory, int> per_category;
  for (int i = 0; i < kSoundnessPairs; ++i) {
    auto cat = kAllTaskCategories[static_cast<std::size_t>(i) % 7];
    for (;;) {
      ++attempts;
      std::uint64_t seed = rng.next();
      WorldState w = generate_scene(seed, room_for(seed));
      TaskSpec t;
      try {
        t = sample_task(rng.next(), w, cat);
      } catch (const Error&) {
        continue;
      }
      Plan p = solve(t, w);
      auto trace = execute_plan(p, w, false);
      bool goal = goal_satisfied(abstract(trace.final_state), t.goal_conditions);
      executed += trace.all_succeeded() && goal;
      ++per_category[cat];
      if (static_cast<int>(p.steps.size()) <= kOracleHorizon) {
        ++oracle_checked;
        auto m = exhaustive_min_length(t, w, kOracleHorizon);
        oracle_agree += m && *m == static_cast<int>(p.steps.size());
      }
      break;
    }
  }
  bool ok = executed == kSoundnessPairs && oracle_agree == oracle_checked && oracle_checked > 0 &&
            per_category.size() == 7;
  return {ok, std::to_string(executed) + "/" + std::to_string(kSoundnessPairs) + " plans fully succeed, " +
                  std::to_string(oracle_agree) + "/" + std::to_string(oracle_checked) + " match the horizon-" +
                  std::to_string(kOracleHorizon) + " oracle"};
}

// Criteria 9 to 11 share one dataset on disk.
struct Shared {
  std::string dir;
  EvalReport greedy_report;
  bool have_report = false;
};

std::string all_rows(const EvalReport& r, const std::string& split, const std::string& strategy,
                     const std::function<double(const AccuracyTriple&)>& field) {
  std::string out;
  for (auto v : kAllContextVariants)
    if (const auto* row = r.find(context_variant_name(v), split, "all", strategy))
      out += std::string(context_variant_name(v)) + "=" + fmt(field(row->accuracy), 3) + " ";
  return out;
}

Outcome learning_experiment(Shared& sh, const std::string& report_dir) {
  DatasetConfig dc;
  dc.n = kTrain + kSeen + kUnseen;
  dc.seed = 1;
  dc.train_ratio = static_cast<double>(kTrain) / static_cast<double>(dc.n);
  dc.seen = kSeen;
  dc.jobs = jobs();
  auto d = gen_dataset(dc);
  if (d.train.size() != kTrain || d.seen.size() != kSeen || d.unseen.size() != kUnseen)
    return {false, "dataset split sizes differ from the request"};
  sh.dir = (std::filesystem::temp_directory_path() / "groundplan_acceptance_dataset").string();
  save_dataset(d, sh.dir);

  ExperimentConfig ec;
  ec.dataset_dir = sh.dir;
  ec.sample_seeds = 0;
  ec.jobs = jobs();
  if (!report_dir.empty()) ec.out_dir = report_dir + "/greedy";
  sh.greedy_report = run_experiment(ec);
  sh.have_report = true;
  bool ok = true;
  std::string detail;
  for (const auto& c : check_report(sh.greedy_report, "unseen")) {
    if (c.name.rfind("sampling", 0) == 0 || c.name.rfind("full <=", 0) == 0) continue;
    ok = ok && c.status == ReportCheck::Status::kPass;
  }
  detail = "unseen action: " + all_rows(sh.greedy_report, "unseen", "greedy", [](auto& a) { return a.action; }) +
           "| argument: " + all_rows(sh.greedy_report, "unseen", "greedy", [](auto& a) { return a.argument; }) +
           "| full: " + all_rows(sh.greedy_report, "unseen", "greedy", [](auto& a) { return a.full; });
  return {ok, detail};
}

Outcome metric_consistency(const Shared& sh) {
  if (!sh.have_report) return {false, "criterion 9 produced no report"};
  std::size_t bad_rows = 0;
  for (const auto& r : sh.greedy_report.rows)
    if (r.accuracy.full > std::min(r.accuracy.action, r.accuracy.argument)) ++bad_rows;
  auto d = load_dataset(sh.dir);
  int perfect = 0, succeeded = 0;
  for (const auto& r : d.unseen) {
    auto s = score_generation(serialize_sample(to_sample(r, ContextVariant::kNone)), r.plan);
    perfect += s.action && s.argument && s.full;
    succeeded += execute_plan(r.plan, scene_of(r), true).all_succeeded();
  }
  int n = static_cast<int>(d.unseen.size());
  return {bad_rows == 0 && perfect == n && succeeded == n,
          std::to_string(sh.greedy_report.rows.size() - bad_rows) + "/" + std::to_string(sh.greedy_report.rows.size()) +
              " rows with full <= min, gold scores (1,1,1) " + std::to_string(perfect) + "/" + std::to_string(n) +
              ", gold sub-tasks succeed " + std::to_string(succeeded) + "/" + std::to_string(n)};
}

Outcome sampling_ablation(const Shared& sh, const std::string& report_dir) {
  if (sh.dir.empty()) return {false, "criterion 9 produced no dataset"};
  ExperimentConfig ec;
  ec.dataset_dir = sh.dir;
  ec.splits = {"unseen"};
  ec.sample_seeds = kSampleSeeds;
  ec.k = kTopK;
  ec.p = kTopP;
  ec.baseline = false;
  ec.jobs = jobs();
  if (!report_dir.empty()) ec.out_dir = report_dir + "/sampled";
  auto report = run_experiment(ec);
  double worst = 0.0;
  bool ok = true;
  std::string detail;
  for (auto v : kAllContextVariants) {
    const auto* g = report.find(context_variant_name(v), "unseen", "all", "greedy");
    if (!g) return {false, "missing greedy row"};
    detail += std::string(context_variant_name(v)) + " " + fmt(g->accuracy.full) + " vs";
    for (int s = 1; s <= kSampleSeeds; ++s) {
      const auto* r = report.find(context_variant_name(v), "unseen", "all", "sample:" + std::to_string(s));
      if (!r) return {false, "missing sampled row"};
      double diff = r->accuracy.full - g->accuracy.full;
      if (std::abs(diff) > std::abs(worst)) worst = diff;
      ok = ok && std::abs(diff) <= kSampleTolerance && diff <= kSampleMaxGain;
      detail += " " + fmt(r->accuracy.full);
    }
    detail += "; ";
  }
  return {ok, detail + "largest difference " + fmt(worst)};
}

Outcome benchmark() {
  DatasetConfig dc;
  dc.n = 1000;
  dc.seed = 2;
  dc.jobs = jobs();
  auto base = gen_dataset(dc);
  auto rate = [&](ContextVariant v, double& again) {
    auto d = with_variant(base, v, {}, jobs());
    std::vector<std::string> corpus, prompts;
    for (const auto& r : d.train) corpus.push_back(serialize_sample(to_sample(r, v)));
    auto m = SequenceModel::train(corpus, Tokenizer::build(corpus, model_lexicon()), experiment_lm_options());
    for (std::size_t i = 0; i < kBenchSamples && i < d.train.size(); ++i) prompts.push_back(prompt_of(d.train[i], v));
    double first = bench(m, prompts, DecodingStrategy::greedy(), default_max_len(v)).iterations_per_second;
    again = bench(m, prompts, DecodingStrategy::greedy(), default_max_len(v)).iterations_per_second;
    return first;
  };
  double none2 = 0, full2 = 0;
  double none = rate(ContextVariant::kNone, none2);
  double full = rate(ContextVariant::kFullContext, full2);
  bool ok = std::isfinite(none) && std::isfinite(full) && none > 0 && full > 0 && full < none;
  return {ok, "no context (max 200): " + fmt(none, 1) + " it/s, full context (max 1024): " + fmt(full, 1) +
                  " it/s over " + std::to_string(kBenchSamples) + " samples; repeat run " + fmt(none2, 1) + " / " +
                  fmt(full2, 1) + " it/s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_dir;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--report-dir" && i + 1 < argc) {
      report_dir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::string list = argv[++i];
      std::replace(list.begin(), list.end(), ',', ' ');
      for (const auto& part : split_ws(list)) only.insert(std::stoi(part));
    } else {
      std::cerr << "usage: acceptance [--report-dir DIR] [--only N[,N...]]\n";
      return 2;
    }
  }
  if (only.count(10) || only.count(11)) only.insert(9);

  Shared shared;
  int failed = 0;
  auto run = [&](int id, const std::string& name, const std::function<Outcome()>& body) {
    if (!only.empty() && !only.count(id)) return;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < kLimit[id];
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s [%.2f s, limit %.0f s%s] %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), secs, kLimit[id],
                in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  };

  run(1, "graph2nl golden example", golden_example);
  run(2, "relation mapping table", mapping_table);
  run(3, "plan DSL round trip and fuzz", plan_dsl);
  run(4, "softmax and decoding", decoding);
  run(5, "degenerate corpus reproduction", degenerate_corpus);
  run(6, "A* against BFS oracle", astar);
  run(7, "composite grounding", composites);
  run(8, "baseline planner soundness", baseline_soundness);
  run(9, "end-to-end learning experiment", [&] { return learning_experiment(shared, report_dir); });
  run(10, "metric consistency", [&] { return metric_consistency(shared); });
  run(11, "sampling ablation", [&] { return sampling_ablation(shared, report_dir); });
  run(12, "benchmark harness", benchmark);

  if (!shared.dir.empty()) std::filesystem::remove_all(shared.dir);
  std::printf("%s: %d criterion(s) failed\n", failed ? "FAILED" : "ALL PASSED", failed);
  return failed ? 1 : 0;
}
