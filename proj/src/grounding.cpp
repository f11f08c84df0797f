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

#include "grounding.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <queue>
#include <sstream>
#include <tuple>

#include "common.hpp"

namespace groundplan {

std::string_view task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::kNavigation: return "navigation";
    case TaskKind::kManipulation: return "manipulation";
    case TaskKind::kComposite: return "composite";
  }
  return "navigation";
}

TaskKind classify(HighLevelAction action) {
  switch (action) {
    case HighLevelAction::kGotoLocation: return TaskKind::kNavigation;
    case HighLevelAction::kPickupObject:
    case HighLevelAction::kPutObject:
    case HighLevelAction::kToggleObject:
    case HighLevelAction::kSliceObject: return TaskKind::kManipulation;
    case HighLevelAction::kHeatObject:
    case HighLevelAction::kCoolObject:
    case HighLevelAction::kCleanObject: return TaskKind::kComposite;
  }
  return TaskKind::kManipulation;
}

TaskKind classify(const PlanStep& step) { return classify(step.action); }

// ---------------------------------------------------------------------------
// Navigation

NavigationGraph::NavigationGraph(int width, int height, std::vector<std::uint8_t> free)
    : width_(width), height_(height), free_(std::move(free)) {
  if (free_.size() != static_cast<std::size_t>(width * height))
    fail(ErrorCode::kInvalidArgument, "navigation grid size mismatch");
}

bool NavigationGraph::contains(Cell c) const {
  return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_ && free_[index(c)] != 0;
}

std::vector<Cell> NavigationGraph::neighbors(Cell c) const {
  std::vector<Cell> out;
  for (int h = 0; h < 4; ++h) {
    Cell d = heading_offset(static_cast<Heading>(h));
    Cell n{c.x + d.x, c.y + d.y};
    if (contains(n)) out.push_back(n);
  }
  return out;
}

NavigationGraph build_navgraph(const WorldState& state) {
  std::vector<std::uint8_t> free(state.blocked.size());
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = state.blocked[i] ? 0 : 1;
  return NavigationGraph(state.config.width, state.config.height, std::move(free));
}

std::vector<Cell> shortest_path(const NavigationGraph& g, Cell from, Cell to) {
  if (!g.contains(from) || !g.contains(to)) fail(ErrorCode::kInvalidArgument, "path endpoint is not a free cell");
  auto h = [&](Cell c) { return std::abs(c.x - to.x) + std::abs(c.y - to.y); };
  const std::size_t n = static_cast<std::size_t>(g.width() * g.height());
  std::vector<int> cost(n, kUnreachable);
  std::vector<std::size_t> came(n, n);
  std::vector<char> closed(n, 0);
  // (f, g-tiebreak, insertion order) keeps expansion order deterministic.
  using Entry = std::tuple<int, int, long, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  long order = 0;
  cost[g.index(from)] = 0;
  open.emplace(h(from), 0, order++, from.x, from.y);
  while (!open.empty()) {
    auto [f, neg_g, ord, x, y] = open.top();
    open.pop();
    Cell c{x, y};
    std::size_t ci = g.index(c);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (c == to) break;
    for (Cell nb : g.neighbors(c)) {
      std::size_t ni = g.index(nb);
      int nc = cost[ci] + 1;
      if (nc < cost[ni]) {
        cost[ni] = nc;
        came[ni] = ci;
        open.emplace(nc + h(nb), -nc, order++, nb.x, nb.y);
      }
    }
  }
  if (!closed[g.index(to)]) fail(ErrorCode::kNoPath, "no path between cells");
  std::vector<Cell> path;
  for (std::size_t i = g.index(to); i != n; i = came[i])
    path.push_back({static_cast<int>(i % static_cast<std::size_t>(g.width())),
                    static_cast<int>(i / static_cast<std::size_t>(g.width()))});
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> distance_map(const NavigationGraph& g, Cell from) {
  std::vector<int> dist(static_cast<std::size_t>(g.width() * g.height()), kUnreachable);
  if (!g.contains(from)) return dist;
  std::deque<Cell> queue{from};
  dist[g.index(from)] = 0;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (Cell nb : g.neighbors(c)) {
      if (dist[g.index(nb)] != kUnreachable) continue;
      dist[g.index(nb)] = dist[g.index(c)] + 1;
      queue.push_back(nb);
    }
  }
  return dist;
}

std::vector<LowLevelAction> rotations(Heading from, Heading to) {
  int diff = (static_cast<int>(to) - static_cast<int>(from) + 4) % 4;
  using K = LowLevelAction::Kind;
  switch (diff) {
    case 1: return {LowLevelAction::move(K::kRotateCW)};
    case 2: return {LowLevelAction::move(K::kRotateCW), LowLevelAction::move(K::kRotateCW)};
    case 3: return {LowLevelAction::move(K::kRotateCCW)};
    default: return {};
  }
}

namespace {

std::optional<Heading> heading_between(Cell a, Cell b) {
  for (int h = 0; h < 4; ++h) {
    Cell d = heading_offset(static_cast<Heading>(h));
    if (a.x + d.x == b.x && a.y + d.y == b.y) return static_cast<Heading>(h);
  }
  return std::nullopt;
}

}  // namespace

std::vector<LowLevelAction> to_motion(const std::vector<Cell>& path, Heading start) {
  std::vector<LowLevelAction> out;
  Heading facing = start;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto h = heading_between(path[i - 1], path[i]);
    if (!h) fail(ErrorCode::kInvalidArgument, "path is not contiguous");
    auto turn = rotations(facing, *h);
    out.insert(out.end(), turn.begin(), turn.end());
    out.push_back(LowLevelAction::move(LowLevelAction::Kind::kMoveForward));
    facing = *h;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geometric grounding

namespace {

std::optional<Approach> approach_with(const WorldState& s, const std::vector<int>& dist,
                                      std::string_view object_id) {
  const ObjectInstance& root = s.root_of(object_id);
  if (s.held && root.id == *s.held) return Approach{s.agent.cell, s.agent.facing, 0};
  Cell rc = s.cell_of(root.position);
  std::optional<Approach> best;
  for (int h = 0; h < 4; ++h) {
    Cell d = heading_offset(static_cast<Heading>(h));
    Cell n{rc.x - d.x, rc.y - d.y};  // standing here and facing h looks at rc
    if (s.is_blocked(n)) continue;
    int c = dist[static_cast<std::size_t>(n.y * s.config.width + n.x)];
    if (c == kUnreachable) continue;
    if (!best || c < best->cost) best = Approach{n, static_cast<Heading>(h), c};
  }
  return best;
}

}  // namespace

std::optional<Approach> approach(const WorldState& state, std::string_view object_id) {
  auto dist = distance_map(build_navgraph(state), state.agent.cell);
  return approach_with(state, dist, object_id);
}

std::vector<std::string> ground_args(std::string_view symbol, const WorldState& state,
                                     const DomainKnowledge& dk) {
  std::string category = dk.canonical(symbol);
  auto dist = distance_map(build_navgraph(state), state.agent.cell);
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& o : state.objects) {
    if (o.category != category) continue;
    auto a = approach_with(state, dist, o.id);
    ranked.emplace_back(a ? a->cost : kUnreachable, o.id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  for (auto& r : ranked) out.push_back(std::move(r.second));
  return out;
}

std::vector<LowLevelAction> navigate_to(const WorldState& state, std::string_view object_id) {
  auto g = build_navgraph(state);
  auto a = approach_with(state, distance_map(g, state.agent.cell), object_id);
  if (!a) fail(ErrorCode::kNoPath, "no free cell next to " + std::string(object_id) + " is reachable");
  auto path = shortest_path(g, state.agent.cell, a->cell);
  auto out = to_motion(path, state.agent.facing);
  Heading facing = state.agent.facing;
  if (path.size() > 1) facing = *heading_between(path[path.size() - 2], path.back());
  auto turn = rotations(facing, a->facing);
  out.insert(out.end(), turn.begin(), turn.end());
  return out;
}

namespace {

ApplianceEffect composite_effect(HighLevelAction a) {
  switch (a) {
    case HighLevelAction::kHeatObject: return ApplianceEffect::kHeat;
    case HighLevelAction::kCoolObject: return ApplianceEffect::kCool;
    case HighLevelAction::kCleanObject: return ApplianceEffect::kClean;
    default: break;
  }
  fail(ErrorCode::kInvalidArgument, "not a composite action");
}

StateFlag effect_flag(ApplianceEffect e) {
  switch (e) {
    case ApplianceEffect::kHeat: return StateFlag::kHot;
    case ApplianceEffect::kCool: return StateFlag::kCold;
    case ApplianceEffect::kClean: return StateFlag::kClean;
  }
  return StateFlag::kClean;
}

std::string composite_object(const PlanStep& step, const WorldState& s, const DomainKnowledge& dk) {
  std::string want = step.args.empty() ? "" : dk.canonical(step.args[0]);
  if (s.held && s.get(*s.held).category == want) return *s.held;
  auto c = ground_args(want, s, dk);
  if (!c.empty()) return c.front();
  return want;
}

std::vector<LowLevelAction> composite_for(const WorldState& s, const std::string& appliance,
                                          const std::string& object) {
  using K = LowLevelAction::Kind;
  std::vector<LowLevelAction> out;
  if (!is_visible(s, appliance)) out = navigate_to(s, appliance);
  auto toggle = LowLevelAction::interact(K::kToggleObject, appliance);
  out.push_back(toggle);
  out.push_back(LowLevelAction::interact(K::kPutObject, appliance));
  out.push_back(toggle);
  out.push_back(toggle);
  out.push_back(LowLevelAction::interact(K::kPickupObject, object));
  out.push_back(toggle);
  return out;
}

std::string appliance_category(const PlanStep& step, const DomainKnowledge& dk) {
  auto effect = composite_effect(step.action);
  auto appliance = dk.appliance_for(effect);
  if (!appliance) fail(ErrorCode::kMissingAppliance, "domain defines no appliance for " + std::string(action_name(step.action)));
  return *appliance;
}

}  // namespace

std::vector<LowLevelAction> expand_composite(const PlanStep& step, const WorldState& state,
                                             const DomainKnowledge& dk) {
  std::string appliance = appliance_category(step, dk);
  auto candidates = ground_args(appliance, state, dk);
  if (candidates.empty()) fail(ErrorCode::kMissingAppliance, "missing appliance: " + appliance);
  return composite_for(state, candidates.front(), composite_object(step, state, dk));
}

// ---------------------------------------------------------------------------
// Execution

bool ExecutionTrace::all_succeeded() const {
  return std::all_of(entries.begin(), entries.end(), [](const TraceEntry& e) { return e.success; });
}

namespace {

struct Attempt {
  bool success = false;
  std::vector<LowLevelAction> actions;
  std::string message;
};

// Applies actions in order, stopping at the first failure.
Attempt run(WorldState& s, std::vector<LowLevelAction> actions, const DomainKnowledge& dk) {
  Attempt a;
  for (auto& act : actions) {
    StepResult r = apply_action(s, act, dk);
    a.actions.push_back(act);
    if (!r.success) {
      a.message = to_string(act) + ": " + r.message;
      return a;
    }
  }
  a.success = true;
  return a;
}

Attempt attempt_step(WorldState& s, const PlanStep& step, const std::string& candidate,
                     const DomainKnowledge& dk) {
  using K = LowLevelAction::Kind;
  try {
    switch (step.action) {
      case HighLevelAction::kGotoLocation: return run(s, navigate_to(s, candidate), dk);
      case HighLevelAction::kPickupObject:
        return run(s, {LowLevelAction::interact(K::kPickupObject, candidate)}, dk);
      case HighLevelAction::kPutObject:
        return run(s, {LowLevelAction::interact(K::kPutObject, candidate)}, dk);
      case HighLevelAction::kToggleObject:
        return run(s, {LowLevelAction::interact(K::kToggleObject, candidate)}, dk);
      case HighLevelAction::kSliceObject:
        return run(s, {LowLevelAction::interact(K::kSliceObject, candidate)}, dk);
      case HighLevelAction::kHeatObject:
      case HighLevelAction::kCoolObject:
      case HighLevelAction::kCleanObject: {
        std::string object = composite_object(step, s, dk);
        Attempt a = run(s, composite_for(s, candidate, object), dk);
        StateFlag flag = effect_flag(composite_effect(step.action));
        const ObjectInstance* o = s.find(object);
        if (a.success && !(o && get_flag(o->state, flag))) {
          a.success = false;
          a.message = object + " did not become " + std::string(state_flag_name(flag));
        }
        return a;
      }
    }
  } catch (const Error& e) {
    return {false, {}, e.what()};
  }
  return {false, {}, "unsupported step"};
}

}  // namespace

ExecutionTrace execute_plan(const Plan& plan, const WorldState& state, bool try_all,
                            const DomainKnowledge& dk) {
  ExecutionTrace trace;
  WorldState s = state;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& step = plan.steps[i];
    TraceEntry e;
    e.step_index = static_cast<int>(i);
    e.step = step;
    e.kind = classify(step);

    std::vector<std::string> candidates;
    if (static_cast<int>(step.args.size()) != arity(step.action)) {
      e.message = "wrong number of arguments";
    } else if (e.kind == TaskKind::kComposite) {
      try {
        candidates = ground_args(appliance_category(step, dk), s, dk);
        if (candidates.empty()) e.message = "missing appliance: " + appliance_category(step, dk);
      } catch (const Error& err) {
        e.message = err.what();
      }
    } else if (step.action == HighLevelAction::kPutObject) {
      std::string want = dk.canonical(step.args[0]);
      if (!s.held || s.get(*s.held).category != want) e.message = "not holding " + step.args[0];
      else candidates = ground_args(step.args[1], s, dk);
    } else {
      candidates = ground_args(step.args[0], s, dk);
    }
    if (candidates.empty() && e.message.empty()) e.message = "no instance of " + step.args.back();
    if (!try_all && candidates.size() > 1) candidates.resize(1);

    Snapshot before = snapshot(s);
    for (const auto& c : candidates) {
      ++e.attempts;
      Attempt a = attempt_step(s, step, c, dk);
      if (a.success) {
        e.success = true;
        e.grounded = c;
        e.actions = std::move(a.actions);
        e.message.clear();
        break;
      }
      e.message = a.message;
      s = restore(before);
      ++e.rollbacks;
    }
    trace.rollbacks += e.rollbacks;
    trace.entries.push_back(std::move(e));
  }
  trace.final_state = std::move(s);
  return trace;
}

std::string format_trace(const ExecutionTrace& trace) {
  std::ostringstream out;
  out << "trace steps=" << trace.entries.size() << " rollbacks=" << trace.rollbacks
      << " success=" << (trace.all_succeeded() ? 1 : 0) << "\n";
  for (const auto& e : trace.entries) {
    out << "step " << e.step_index << " " << to_string(e.step) << " kind=" << task_kind_name(e.kind)
        << " result=" << (e.success ? "ok" : "fail") << " grounded=" << (e.grounded.empty() ? "-" : e.grounded)
        << " attempts=" << e.attempts << " rollbacks=" << e.rollbacks << "\n";
    out << "  actions";
    for (const auto& a : e.actions) out << " " << to_string(a);
    out << "\n";
    if (!e.message.empty()) out << "  message " << e.message << "\n";
  }
  return out.str();
}

}  // namespace groundplan
