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

// Symbolic model of the simulator at the level of plan steps. Each operator's
// precondition is written so that, when it holds, grounding the step with the
// first candidate (no retries) succeeds in the simulator, and its effect is
// what that execution does. Visibility reduces to "rooted at the fixture the
// agent faces and not enclosed by a closed appliance": fixtures are at least
// three cells apart, so the agent's cell touches exactly one of them.

#include "planner.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "common.hpp"
#include "grounding.hpp"

namespace groundplan {

// ---------------------------------------------------------------------------
// Symbolic state

bool SymbolicState::operator==(const SymbolicState& o) const {
  bool same_table = table == o.table || (table && o.table && table->ids == o.table->ids &&
                                         table->categories == o.table->categories);
  return same_table && agent_cell == o.agent_cell && facing == o.facing && at == o.at &&
         held == o.held && parent == o.parent && state == o.state;
}

int SymbolicState::index_of(std::string_view id) const {
  auto it = std::lower_bound(table->ids.begin(), table->ids.end(), id);
  if (it == table->ids.end() || *it != id) return -1;
  return static_cast<int>(it - table->ids.begin());
}

int SymbolicState::root_of(int i) const {
  for (std::size_t hops = 0; parent[static_cast<std::size_t>(i)] >= 0 && hops <= size(); ++hops)
    i = parent[static_cast<std::size_t>(i)];
  return i;
}

std::vector<std::string> SymbolicState::predicates() const {
  std::vector<std::string> out;
  out.push_back("at(agent," + (at >= 0 ? id(at) : std::string("start")) + ")");
  if (held >= 0) out.push_back("holding(" + id(held) + ")");
  for (std::size_t i = 0; i < size(); ++i) {
    const std::string& name = table->ids[i];
    if (parent[i] >= 0) out.push_back("in(" + name + "," + id(parent[i]) + ")");
    const ObjectState& st = state[i];
    if (st.is_clean) out.push_back("clean(" + name + ")");
    if (st.is_hot) out.push_back("hot(" + name + ")");
    if (st.is_cold) out.push_back("cold(" + name + ")");
    if (st.is_sliced) out.push_back("sliced(" + name + ")");
    if (st.is_toggled_on) out.push_back("on(" + name + ")");
    if (st.is_open) out.push_back("open(" + name + ")");
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SymbolicState::key() const {
  std::string k;
  k.reserve(16 + size() * 3);
  auto put = [&](int v) {
    k.push_back(static_cast<char>(v & 0xff));
    k.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  put(agent_cell.x);
  put(agent_cell.y);
  put(static_cast<int>(facing));
  put(at);
  put(held);
  for (std::size_t i = 0; i < size(); ++i) {
    put(parent[i]);
    const ObjectState& st = state[i];
    k.push_back(static_cast<char>(st.is_clean | st.is_hot << 1 | st.is_cold << 2 | st.is_sliced << 3 |
                                  st.is_toggled_on << 4 | st.is_open << 5));
  }
  return k;
}

SymbolicState abstract(const WorldState& w) {
  auto table = std::make_shared<ObjectTable>();
  std::vector<const ObjectInstance*> objs;
  for (const auto& o : w.objects) objs.push_back(&o);
  std::sort(objs.begin(), objs.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* o : objs) {
    table->ids.push_back(o->id);
    table->categories.push_back(o->category);
    table->caps.push_back(o->flags);
    table->fixture.push_back(!o->parent && !o->flags.pickupable && !(w.held && *w.held == o->id));
    table->cells.push_back(w.cell_of(o->position));
  }
  SymbolicState s;
  s.table = table;
  s.agent_cell = w.agent.cell;
  s.facing = w.agent.facing;
  s.parent.assign(objs.size(), -1);
  s.state.resize(objs.size());
  for (std::size_t i = 0; i < objs.size(); ++i) {
    if (objs[i]->parent) s.parent[i] = s.index_of(*objs[i]->parent);
    s.state[i] = objs[i]->state;
  }
  if (w.held) s.held = s.index_of(*w.held);
  Cell d = heading_offset(w.agent.facing);
  Cell front{w.agent.cell.x + d.x, w.agent.cell.y + d.y};
  for (std::size_t i = 0; i < objs.size(); ++i)
    if (table->fixture[i] && table->cells[i] == front) s.at = static_cast<int>(i);
  return s;
}

namespace {

bool carries(const ObjectState& st, const std::vector<StateFlag>& flags) {
  return std::all_of(flags.begin(), flags.end(), [&](StateFlag f) { return get_flag(st, f); });
}

}  // namespace

bool goal_satisfied(const SymbolicState& s, const std::vector<SubtaskCondition>& goal,
                    const DomainKnowledge& dk) {
  for (const auto& c : goal) {
    std::string object = dk.canonical(c.object);
    bool ok = false;
    switch (c.kind) {
      case SubtaskCondition::Kind::kPlaced: {
        std::string rec = dk.canonical(c.receptacle);
        int n = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          int p = s.parent[i];
          if (s.table->categories[i] == object && p >= 0 && s.category(p) == rec && carries(s.state[i], c.with_states)) ++n;
        }
        ok = n >= c.min_count;
        break;
      }
      case SubtaskCondition::Kind::kHolding:
        ok = s.held >= 0 && s.category(s.held) == object && carries(s.state[static_cast<std::size_t>(s.held)], c.with_states);
        break;
      case SubtaskCondition::Kind::kStateIs:
        for (std::size_t i = 0; i < s.size() && !ok; ++i)
          ok = s.table->categories[i] == object && get_flag(s.state[i], c.flag) == c.value;
        break;
      case SubtaskCondition::Kind::kAgentNear:
        for (std::size_t i = 0; i < s.size() && !ok; ++i)
          ok = s.table->categories[i] == object && s.at >= 0 && s.root_of(static_cast<int>(i)) == s.at;
        break;
    }
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Operators

namespace {

class Model {
 public:
  Model(const TaskSpec& task, const WorldState& world, const DomainKnowledge& dk)
      : world_(world), dk_(dk), nav_(build_navgraph(world)), initial_(abstract(world)) {
    goal_ = task.goal_conditions.empty() ? derive_goal_conditions(task) : task.goal_conditions;
    for (auto& g : goal_) {
      g.object = dk.canonical(g.object);
      if (!g.receptacle.empty()) g.receptacle = dk.canonical(g.receptacle);
    }
    relevant_.insert(dk.canonical(task.target));
    if (task.sliced) relevant_.insert(dk.slice_tool());
    if (task.movable_receptacle) relevant_.insert(dk.canonical(*task.movable_receptacle));
    std::set<std::string> fixtures;
    for (std::size_t i = 0; i < initial_.size(); ++i)
      if (initial_.table->fixture[i]) fixtures.insert(initial_.table->categories[i]);
    fixture_categories_.assign(fixtures.begin(), fixtures.end());
  }

  const SymbolicState& initial() const { return initial_; }
  bool is_goal(const SymbolicState& s) const { return goal_satisfied(s, goal_, dk_); }

  using Successor = std::pair<PlanStep, SymbolicState>;
  std::vector<Successor> successors(const SymbolicState& s) {
    std::vector<Successor> out;
    pickups(s, out);
    puts(s, out);
    slices(s, out);
    composites(s, out);
    toggles(s, out);
    gotos(s, out);
    return out;
  }

 private:
  const Capabilities& caps(int i) const { return initial_.table->caps[static_cast<std::size_t>(i)]; }
  std::string surface(int i, const SymbolicState& s) const { return dk_.surface(s.category(i)); }

  bool enclosed(const SymbolicState& s, int i) const {
    for (int p = s.parent[static_cast<std::size_t>(i)]; p >= 0; p = s.parent[static_cast<std::size_t>(p)])
      if (caps(p).openable && !s.state[static_cast<std::size_t>(p)].is_open) return true;
    return false;
  }

  // First grounding candidate of `category` when the agent is at a fixture:
  // the lowest id among instances at approach cost zero, i.e. rooted at the
  // anchor fixture or travelling with the held object.
  int first_candidate(const SymbolicState& s, const std::string& category) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.table->categories[i] != category) continue;
      int r = s.root_of(static_cast<int>(i));
      if (r == s.at || (s.held >= 0 && r == s.held)) return static_cast<int>(i);
    }
    return -1;
  }

  bool in_hand_subtree(const SymbolicState& s, int i) const {
    return s.held >= 0 && s.root_of(i) == s.held;
  }

  void pickups(const SymbolicState& s, std::vector<Successor>& out) const {
    if (s.held >= 0 || s.at < 0) return;
    for (const auto& cat : relevant_) {
      int i = first_candidate(s, cat);
      if (i < 0 || !caps(i).pickupable || enclosed(s, i)) continue;
      SymbolicState n = s;
      n.parent[static_cast<std::size_t>(i)] = -1;
      n.held = i;
      out.emplace_back(make_step(HighLevelAction::kPickupObject, surface(i, s)), std::move(n));
    }
  }

  void put_into(const SymbolicState& s, int target, std::vector<Successor>& out) const {
    SymbolicState n = s;
    n.parent[static_cast<std::size_t>(s.held)] = target;
    n.held = -1;
    out.emplace_back(make_step(HighLevelAction::kPutObject, surface(s.held, s), surface(target, s)), std::move(n));
  }

  void puts(const SymbolicState& s, std::vector<Successor>& out) const {
    if (s.held < 0 || s.at < 0) return;
    const std::string& held_cat = s.category(s.held);
    // The anchor fixture first, then movable receptacles resting on it.
    const auto& fc = caps(s.at);
    if (fc.receptacle && !fc.openable && dk_.compatible(s.category(s.at), held_cat)) put_into(s, s.at, out);
    for (const auto& cat : relevant_) {
      if (cat == held_cat || cat == s.category(s.at)) continue;
      int r = first_candidate(s, cat);
      if (r < 0 || in_hand_subtree(s, r)) continue;
      if (!caps(r).receptacle || caps(r).openable || enclosed(s, r) || !dk_.compatible(cat, held_cat)) continue;
      put_into(s, r, out);
    }
  }

  void slices(const SymbolicState& s, std::vector<Successor>& out) const {
    if (s.held < 0 || s.at < 0 || s.category(s.held) != dk_.slice_tool()) return;
    for (const auto& cat : relevant_) {
      if (cat == dk_.slice_tool()) continue;
      int i = first_candidate(s, cat);
      if (i < 0 || in_hand_subtree(s, i) || !caps(i).sliceable || enclosed(s, i)) continue;
      if (s.state[static_cast<std::size_t>(i)].is_sliced) continue;
      SymbolicState n = s;
      n.state[static_cast<std::size_t>(i)].is_sliced = true;
      out.emplace_back(make_step(HighLevelAction::kSliceObject, surface(i, s)), std::move(n));
    }
  }

  static void apply_effect(SymbolicState& s, int appliance, ApplianceEffect e) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool inside = false;
      for (int p = s.parent[i]; p >= 0 && !inside; p = s.parent[static_cast<std::size_t>(p)]) inside = p == appliance;
      if (!inside) continue;
      auto& st = s.state[i];
      switch (e) {
        case ApplianceEffect::kHeat: st.is_hot = true; st.is_cold = false; break;
        case ApplianceEffect::kCool: st.is_cold = true; st.is_hot = false; break;
        case ApplianceEffect::kClean: st.is_clean = true; break;
      }
    }
  }

  // Toggle, Put, Toggle, Toggle, Pickup, Toggle on the anchor appliance.
  void composites(const SymbolicState& s, std::vector<Successor>& out) const {
    if (s.held < 0 || s.at < 0) return;
    auto effect = dk_.appliance_effect(s.category(s.at));
    if (!effect) return;
    const int app = s.at;
    const int obj = s.held;
    const auto& ac = caps(app);
    SymbolicState n = s;
    auto& ast = n.state[static_cast<std::size_t>(app)];
    auto toggle = [&]() {
      if (ac.openable) {
        ast.is_open = !ast.is_open;
        if (!ast.is_open && *effect != ApplianceEffect::kClean) apply_effect(n, app, *effect);
      } else {
        ast.is_toggled_on = !ast.is_toggled_on;
        if (ast.is_toggled_on) apply_effect(n, app, *effect);
      }
    };
    if (!ac.openable && !ac.toggleable) return;
    toggle();
    if (!ac.receptacle || (ac.openable && !ast.is_open)) return;
    n.parent[static_cast<std::size_t>(obj)] = app;
    n.held = -1;
    toggle();
    toggle();
    if (enclosed(n, obj)) return;
    n.parent[static_cast<std::size_t>(obj)] = -1;
    n.held = obj;
    toggle();
    StateFlag flag = *effect == ApplianceEffect::kHeat   ? StateFlag::kHot
                     : *effect == ApplianceEffect::kCool ? StateFlag::kCold
                                                         : StateFlag::kClean;
    if (!get_flag(n.state[static_cast<std::size_t>(obj)], flag)) return;
    HighLevelAction a = *effect == ApplianceEffect::kHeat   ? HighLevelAction::kHeatObject
                        : *effect == ApplianceEffect::kCool ? HighLevelAction::kCoolObject
                                                            : HighLevelAction::kCleanObject;
    out.emplace_back(make_step(a, surface(obj, s)), std::move(n));
  }

  void toggles(const SymbolicState& s, std::vector<Successor>& out) const {
    if (s.at < 0) return;
    const auto& c = caps(s.at);
    if (!c.toggleable || c.openable || dk_.appliance_effect(s.category(s.at))) return;
    SymbolicState n = s;
    auto& st = n.state[static_cast<std::size_t>(s.at)];
    st.is_toggled_on = !st.is_toggled_on;
    out.emplace_back(make_step(HighLevelAction::kToggleObject, surface(s.at, s)), std::move(n));
  }

  const std::vector<int>& dist(Cell c) {
    auto key = std::make_pair(c.x, c.y);
    auto it = dist_cache_.find(key);
    if (it == dist_cache_.end()) it = dist_cache_.emplace(key, distance_map(nav_, c)).first;
    return it->second;
  }

  std::optional<Approach> fixture_approach(const SymbolicState& s, int f, const std::vector<int>& d) const {
    Cell rc = initial_.table->cells[static_cast<std::size_t>(f)];
    std::optional<Approach> best;
    for (int h = 0; h < 4; ++h) {
      Cell o = heading_offset(static_cast<Heading>(h));
      Cell n{rc.x - o.x, rc.y - o.y};
      if (world_.is_blocked(n)) continue;
      int c = d[static_cast<std::size_t>(n.y * world_.config.width + n.x)];
      if (c == kUnreachable) continue;
      if (!best || c < best->cost) best = Approach{n, static_cast<Heading>(h), c};
    }
    (void)s;
    return best;
  }

  void gotos(const SymbolicState& s, std::vector<Successor>& out) {
    const auto& d = dist(s.agent_cell);
    struct Option {
      int rank;
      int cost;
      std::string category;
      int fixture;
      Approach a;
    };
    std::vector<Option> options;
    for (const auto& cat : fixture_categories_) {
      // Nearest instance by approach cost then id, as ground_args orders it.
      int best = -1;
      std::optional<Approach> best_a;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.table->fixture[i] || s.table->categories[i] != cat) continue;
        auto a = fixture_approach(s, static_cast<int>(i), d);
        int cost = a ? a->cost : kUnreachable;
        int best_cost = best_a ? best_a->cost : kUnreachable;
        if (best < 0 || cost < best_cost) {
          best = static_cast<int>(i);
          best_a = a;
        }
      }
      if (best < 0 || !best_a) continue;
      if (best_a->cell == s.agent_cell && best_a->facing == s.facing) continue;
      bool hosts = false;
      for (std::size_t i = 0; i < s.size() && !hosts; ++i)
        hosts = relevant_.count(s.table->categories[i]) && static_cast<int>(i) != s.held &&
                !in_hand_subtree(s, static_cast<int>(i)) && s.root_of(static_cast<int>(i)) == best;
      options.push_back({hosts ? 0 : 1, best_a->cost, cat, best, *best_a});
    }
    std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
      return std::tie(a.rank, a.cost, a.category) < std::tie(b.rank, b.cost, b.category);
    });
    for (const auto& o : options) {
      SymbolicState n = s;
      n.agent_cell = o.a.cell;
      n.facing = o.a.facing;
      n.at = o.fixture;
      out.emplace_back(make_step(HighLevelAction::kGotoLocation, dk_.surface(o.category)), std::move(n));
    }
  }

  const WorldState& world_;
  const DomainKnowledge& dk_;
  NavigationGraph nav_;
  SymbolicState initial_;
  std::vector<SubtaskCondition> goal_;
  std::set<std::string> relevant_;
  std::vector<std::string> fixture_categories_;
  std::map<std::pair<int, int>, std::vector<int>> dist_cache_;
};

}  // namespace

SolveResult search(const TaskSpec& task, const WorldState& state, const PlannerOptions& options,
                   const DomainKnowledge& dk) {
  Model model(task, state, dk);
  SolveResult result;
  if (model.is_goal(model.initial())) {
    result.status = SolveResult::Status::kSolved;
    return result;
  }
  struct Node {
    SymbolicState s;
    int parent;
    PlanStep step;
  };
  std::vector<Node> nodes;
  nodes.push_back({model.initial(), -1, {}});
  std::unordered_set<std::string> seen{model.initial().key()};
  std::deque<int> queue{0};
  auto reconstruct = [&](int i) {
    Plan p;
    for (; nodes[static_cast<std::size_t>(i)].parent >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      p.steps.push_back(nodes[static_cast<std::size_t>(i)].step);
    std::reverse(p.steps.begin(), p.steps.end());
    return p;
  };
  while (!queue.empty()) {
    if (result.expanded >= options.node_budget) {
      result.status = SolveResult::Status::kBudgetExceeded;
      return result;
    }
    int cur = queue.front();
    queue.pop_front();
    ++result.expanded;
    auto succ = model.successors(nodes[static_cast<std::size_t>(cur)].s);
    for (auto& [step, next] : succ) {
      if (!seen.insert(next.key()).second) continue;
      bool goal = model.is_goal(next);
      nodes.push_back({std::move(next), cur, std::move(step)});
      int idx = static_cast<int>(nodes.size() - 1);
      if (goal) {
        result.status = SolveResult::Status::kSolved;
        result.plan = reconstruct(idx);
        return result;
      }
      queue.push_back(idx);
    }
  }
  result.status = SolveResult::Status::kUnsolvable;
  return result;
}

Plan solve(const TaskSpec& task, const WorldState& state, const PlannerOptions& options,
           const DomainKnowledge& dk) {
  auto r = search(task, state, options, dk);
  if (r.status == SolveResult::Status::kBudgetExceeded)
    fail(ErrorCode::kBudgetExceeded, "node budget of " + std::to_string(options.node_budget) + " exhausted");
  if (r.status == SolveResult::Status::kUnsolvable) fail(ErrorCode::kUnsolvable, "no plan reaches the goal");
  return r.plan;
}

std::optional<int> exhaustive_min_length(const TaskSpec& task, const WorldState& state, int max_length,
                                         const DomainKnowledge& dk) {
  Model model(task, state, dk);
  // Depth-first to each bound; a state is re-expanded only when reached with
  // more remaining depth than before, which keeps the search complete.
  for (int bound = 0; bound <= max_length; ++bound) {
    std::unordered_map<std::string, int> best_remaining;
    std::function<bool(const SymbolicState&, int)> dfs = [&](const SymbolicState& s, int remaining) {
      if (model.is_goal(s)) return true;
      if (remaining == 0) return false;
      auto [it, inserted] = best_remaining.emplace(s.key(), remaining);
      if (!inserted) {
        if (it->second >= remaining) return false;
        it->second = remaining;
      }
      for (auto& [step, next] : model.successors(s))
        if (dfs(next, remaining - 1)) return true;
      return false;
    };
    if (dfs(model.initial(), bound)) return bound;
  }
  return std::nullopt;
}

int canonical_plan_length(const TaskSpec& task) {
  switch (task.category) {
    case TaskCategory::kLookAtObject: return 4;
    case TaskCategory::kPickAndPlace: return task.sliced ? 8 : 4;
    case TaskCategory::kPickTwoAndPlace: return 8;
    case TaskCategory::kPickAndPlaceMovable: return 7;
    case TaskCategory::kPickCleanPlace:
    case TaskCategory::kPickCoolPlace:
    case TaskCategory::kPickHeatPlace: return 6;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Task sampling

namespace {

struct SceneFacts {
  std::map<std::string, std::vector<const ObjectInstance*>> by_category;
  std::vector<std::string> fixture_categories;
  std::vector<std::string> item_categories;

  bool has(const std::string& c) const { return by_category.count(c) > 0; }
  int count(const std::string& c) const {
    auto it = by_category.find(c);
    return it == by_category.end() ? 0 : static_cast<int>(it->second.size());
  }
};

SceneFacts scene_facts(const WorldState& w) {
  SceneFacts f;
  std::set<std::string> fixtures, items;
  for (const auto& o : w.objects) {
    f.by_category[o.category].push_back(&o);
    if (!o.parent && !o.flags.pickupable) fixtures.insert(o.category);
    if (o.flags.pickupable) items.insert(o.category);
  }
  f.fixture_categories.assign(fixtures.begin(), fixtures.end());
  f.item_categories.assign(items.begin(), items.end());
  return f;
}

// Place targets for `item`: present fixtures that can hold it, excluding
// appliances and openable receptacles, none already holding an instance.
std::vector<std::string> place_targets(const WorldState& w, const SceneFacts& f, const DomainKnowledge& dk,
                                       const std::string& item) {
  std::vector<std::string> out;
  for (const auto& r : f.fixture_categories) {
    const auto& info = dk.category(r);
    if (!info.caps.receptacle || info.caps.openable || dk.appliance_effect(r)) continue;
    if (!dk.compatible(r, item)) continue;
    bool already = false;
    for (const auto* o : f.by_category.at(item))
      if (o->parent && w.get(*o->parent).category == r) already = true;
    if (!already) out.push_back(r);
  }
  return out;
}

std::string light_source(const SceneFacts& f, const DomainKnowledge& dk) {
  for (const auto& c : f.fixture_categories) {
    const auto& info = dk.category(c);
    if (info.caps.toggleable && !info.caps.openable && !dk.appliance_effect(c)) return c;
  }
  return "";
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.index(v.size())];
}

std::optional<TaskSpec> propose(Rng& rng, TaskCategory cat, const WorldState& w, const SceneFacts& f,
                                const DomainKnowledge& dk) {
  TaskSpec t;
  t.category = cat;
  auto present_from = [&](const std::vector<std::string>& pool) {
    std::vector<std::string> out;
    for (const auto& c : pool)
      if (f.has(c)) out.push_back(c);
    return out;
  };
  auto with_targets = [&](const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& c : items)
      if (!place_targets(w, f, dk, c).empty()) out.push_back(c);
    return out;
  };

  switch (cat) {
    case TaskCategory::kLookAtObject: {
      std::string lamp = light_source(f, dk);
      auto targets = present_from(dk.task_targets("look"));
      if (lamp.empty() || targets.empty()) return std::nullopt;
      t.target = pick(rng, targets);
      t.receptacle = lamp;
      break;
    }
    case TaskCategory::kPickAndPlace: {
      bool sliced = f.has(dk.slice_tool()) && rng.chance(0.25);
      std::vector<std::string> pool;
      if (sliced) {
        pool = with_targets(present_from(dk.task_targets("slice")));
      } else {
        for (const auto& c : f.item_categories)
          if (!dk.category(c).caps.receptacle) pool.push_back(c);
        pool = with_targets(pool);
      }
      if (pool.empty()) return std::nullopt;
      t.sliced = sliced;
      t.target = pick(rng, pool);
      t.receptacle = pick(rng, place_targets(w, f, dk, t.target));
      break;
    }
    case TaskCategory::kPickTwoAndPlace: {
      std::vector<std::string> pool;
      for (const auto& c : f.item_categories)
        if (f.count(c) >= 2 && !dk.category(c).caps.receptacle) pool.push_back(c);
      pool = with_targets(pool);
      if (pool.empty()) return std::nullopt;
      t.target = pick(rng, pool);
      t.receptacle = pick(rng, place_targets(w, f, dk, t.target));
      break;
    }
    case TaskCategory::kPickAndPlaceMovable: {
      auto movables = with_targets(present_from(dk.task_targets("movable")));
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& m : movables)
        for (const auto& c : f.item_categories)
          if (c != m && dk.compatible(m, c) && !dk.category(c).caps.receptacle) pairs.emplace_back(m, c);
      if (pairs.empty()) return std::nullopt;
      auto [m, c] = pick(rng, pairs);
      t.movable_receptacle = m;
      t.target = c;
      t.receptacle = pick(rng, place_targets(w, f, dk, m));
      break;
    }
    case TaskCategory::kPickCleanPlace:
    case TaskCategory::kPickCoolPlace:
    case TaskCategory::kPickHeatPlace: {
      ApplianceEffect e = cat == TaskCategory::kPickCleanPlace  ? ApplianceEffect::kClean
                          : cat == TaskCategory::kPickCoolPlace ? ApplianceEffect::kCool
                                                                : ApplianceEffect::kHeat;
      const char* family = e == ApplianceEffect::kClean ? "clean" : e == ApplianceEffect::kCool ? "cool" : "heat";
      auto appliance = dk.appliance_for(e);
      if (!appliance || !f.has(*appliance)) return std::nullopt;
      auto pool = with_targets(present_from(dk.task_targets(family)));
      if (pool.empty()) return std::nullopt;
      t.target = pick(rng, pool);
      t.receptacle = pick(rng, place_targets(w, f, dk, t.target));
      break;
    }
  }
  t.template_index = static_cast<int>(rng.index(goal_templates(cat, t.sliced).size()));
  t.goal_conditions = derive_goal_conditions(t);
  return t;
}

bool acceptable(const TaskSpec& t, const WorldState& w, const DomainKnowledge& dk) {
  PlannerOptions opt;
  opt.node_budget = 200'000;
  auto r = search(t, w, opt, dk);
  return r.status == SolveResult::Status::kSolved &&
         static_cast<int>(r.plan.steps.size()) == canonical_plan_length(t);
}

}  // namespace

TaskSpec sample_task(std::uint64_t seed, const WorldState& state, TaskCategory category,
                     const DomainKnowledge& dk) {
  Rng rng(mix_seed(seed, 0x7a5cULL + static_cast<std::uint64_t>(category)));
  SceneFacts f = scene_facts(state);
  for (int attempt = 0; attempt < 24; ++attempt) {
    auto t = propose(rng, category, state, f, dk);
    if (!t) break;
    if (acceptable(*t, state, dk)) return *t;
  }
  fail(ErrorCode::kUnsolvable, "category " + std::string(task_category_name(category)) + " is not feasible here");
}

TaskSpec sample_task(std::uint64_t seed, const WorldState& state, const DomainKnowledge& dk) {
  Rng rng(mix_seed(seed, 0x7a5b0000ULL));
  std::vector<TaskCategory> order(kAllTaskCategories.begin(), kAllTaskCategories.end());
  rng.shuffle(order);
  for (auto c : order) {
    try {
      return sample_task(rng.next(), state, c, dk);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsolvable) throw;
    }
  }
  fail(ErrorCode::kUnsolvable, "no task category is feasible in this scene");
}

std::vector<std::string> goal_templates(TaskCategory category, bool sliced) {
  switch (category) {
    case TaskCategory::kLookAtObject:
      return {"Look at the {t} under the lamp:", "Examine the {t} in the light of the lamp:",
              "Pick up the {t} and turn on the lamp:"};
    case TaskCategory::kPickAndPlace:
      if (sliced)
        return {"Put a sliced {t} into the {r}:", "Slice the {t} and place it in the {r}:",
                "Place a piece of sliced {t} in the {r}:"};
      return {"Put the {t} into the {r}:", "Place the {t} in the {r}:", "Move the {t} to the {r}:"};
    case TaskCategory::kPickTwoAndPlace:
      return {"Put two {t} into the {r}:", "Place a pair of {t} in the {r}:", "Move both {t} to the {r}:"};
    case TaskCategory::kPickAndPlaceMovable:
      return {"Put the {t} in a {m} into the {r}:", "Place the {m} with the {t} in the {r}:",
              "Move the {t} inside a {m} to the {r}:"};
    case TaskCategory::kPickCleanPlace:
      return {"Put a clean {t} into the {r}:", "Rinse the {t} and place it in the {r}:",
              "Wash the {t} then move it to the {r}:"};
    case TaskCategory::kPickCoolPlace:
      return {"Put a cold {t} into the {r}:", "Chill the {t} and place it in the {r}:",
              "Cool the {t} then move it to the {r}:"};
    case TaskCategory::kPickHeatPlace:
      return {"Put a hot {t} into the {r}:", "Heat the {t} and place it in the {r}:",
              "Warm the {t} then move it to the {r}:"};
  }
  return {};
}

std::string render_goal(const TaskSpec& task, const DomainKnowledge& dk) {
  auto templates = goal_templates(task.category, task.sliced);
  std::string out = templates[static_cast<std::size_t>(task.template_index) % templates.size()];
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size()))
      out.replace(pos, key.size(), value);
  };
  replace("{t}", dk.surface(task.target));
  replace("{r}", dk.surface(task.receptacle));
  if (task.movable_receptacle) replace("{m}", dk.surface(*task.movable_receptacle));
  return out;
}

// ---------------------------------------------------------------------------
// PDDL

namespace {

const char* kPddlActions = R"PDDL(  (:action goto
    :parameters (?from - place ?to - fixture)
    :precondition (at ?from)
    :effect (and (not (at ?from)) (at ?to)))
  (:action pickup
    :parameters (?o - item ?f - fixture)
    :precondition (and (at ?f) (handempty) (located ?o ?f))
    :effect (and (holding ?o) (not (handempty)) (not (located ?o ?f))
                 (forall (?r - physical) (when (in ?o ?r) (not (in ?o ?r))))
                 (forall (?c - item) (when (in ?c ?o) (not (located ?c ?f))))))
  (:action put-fixture
    :parameters (?o - item ?f - fixture)
    :precondition (and (at ?f) (holding ?o) (receptacle ?f) (not (openable ?f)))
    :effect (and (in ?o ?f) (located ?o ?f) (handempty) (not (holding ?o))
                 (forall (?c - item) (when (in ?c ?o) (located ?c ?f)))))
  (:action put-item
    :parameters (?o - item ?r - item ?f - fixture)
    :precondition (and (at ?f) (holding ?o) (located ?r ?f) (receptacle ?r) (not (= ?o ?r)))
    :effect (and (in ?o ?r) (located ?o ?f) (handempty) (not (holding ?o))))
  (:action slice
    :parameters (?o - item ?k - item ?f - fixture)
    :precondition (and (at ?f) (located ?o ?f) (holding ?k) (slicer ?k) (sliceable ?o) (not (sliced ?o)))
    :effect (sliced ?o))
  (:action toggle
    :parameters (?f - fixture)
    :precondition (and (at ?f) (lightsource ?f))
    :effect (and (when (on ?f) (not (on ?f))) (when (not (on ?f)) (on ?f))))
  (:action heat
    :parameters (?o - item ?f - fixture)
    :precondition (and (at ?f) (holding ?o) (heater ?f) (not (open ?f)))
    :effect (and (hot ?o) (not (cold ?o))))
  (:action cool
    :parameters (?o - item ?f - fixture)
    :precondition (and (at ?f) (holding ?o) (cooler ?f) (not (open ?f)))
    :effect (and (cold ?o) (not (hot ?o))))
  (:action clean
    :parameters (?o - item ?f - fixture)
    :precondition (and (at ?f) (holding ?o) (washer ?f) (not (toggled ?f)))
    :effect (clean ?o))
)PDDL";

std::string pddl_name(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    if (ch == '_') ch = '-';
  return out;
}

std::string flag_predicate(StateFlag f) {
  switch (f) {
    case StateFlag::kClean: return "clean";
    case StateFlag::kHot: return "hot";
    case StateFlag::kCold: return "cold";
    case StateFlag::kSliced: return "sliced";
    case StateFlag::kToggledOn: return "on";
    case StateFlag::kOpen: return "open";
  }
  return "clean";
}

std::string render_atom(const std::string& pred, std::initializer_list<std::string> args) {
  std::string out = pred + "(";
  bool first = true;
  for (const auto& a : args) {
    if (!first) out += ",";
    out += a;
    first = false;
  }
  return out + ")";
}

std::string atom_to_pddl(const std::string& atom) {
  auto open = atom.find('(');
  std::string out = "(" + atom.substr(0, open);
  std::string args = atom.substr(open + 1, atom.size() - open - 2);
  std::size_t start = 0;
  while (start <= args.size() && !args.empty()) {
    auto comma = args.find(',', start);
    out += " " + args.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out + ")";
}

std::string goal_to_pddl(const SubtaskCondition& c, const DomainKnowledge& dk, int& var) {
  std::string obj = pddl_name(dk.canonical(c.object));
  auto v = [&]() { return "?v" + std::to_string(var++); };
  auto with = [&](const std::string& o) {
    std::string s;
    for (auto f : c.with_states) s += " (" + flag_predicate(f) + " " + o + ")";
    return s;
  };
  switch (c.kind) {
    case SubtaskCondition::Kind::kPlaced: {
      std::string rec = pddl_name(dk.canonical(c.receptacle));
      std::string params, body;
      std::vector<std::string> objs;
      for (int i = 0; i < std::max(1, c.min_count); ++i) {
        std::string o = v(), r = v();
        params += (params.empty() ? "" : " ") + o + " - " + obj + " " + r + " - " + rec;
        body += " (in " + o + " " + r + ")" + with(o);
        for (const auto& prev : objs) body += " (not (= " + prev + " " + o + "))";
        objs.push_back(o);
      }
      return "(exists (" + params + ") (and" + body + "))";
    }
    case SubtaskCondition::Kind::kHolding: {
      std::string o = v();
      return "(exists (" + o + " - " + obj + ") (and (holding " + o + ")" + with(o) + "))";
    }
    case SubtaskCondition::Kind::kStateIs: {
      std::string o = v();
      std::string atom = "(" + flag_predicate(c.flag) + " " + o + ")";
      return "(exists (" + o + " - " + obj + ") " + (c.value ? atom : "(not " + atom + ")") + ")";
    }
    case SubtaskCondition::Kind::kAgentNear: {
      std::string o = v(), f = v();
      return "(exists (" + o + " - " + obj + " " + f + " - fixture) (and (at " + f + ") (located " + o + " " + f + ")))";
    }
  }
  return "";
}

}  // namespace

std::vector<std::string> pddl_init_atoms(const SymbolicState& s, const DomainKnowledge& dk) {
  std::vector<std::string> out;
  auto name = [&](int i) { return pddl_name(s.id(i)); };
  out.push_back(render_atom("at", {s.at >= 0 ? name(s.at) : std::string("agent-start")}));
  if (s.held >= 0) out.push_back(render_atom("holding", {name(s.held)}));
  else out.push_back("handempty()");
  for (std::size_t k = 0; k < s.size(); ++k) {
    int i = static_cast<int>(k);
    const auto& caps = s.table->caps[k];
    const auto& cat = s.table->categories[k];
    if (s.parent[k] >= 0) out.push_back(render_atom("in", {name(i), name(s.parent[k])}));
    int root = s.root_of(i);
    if (!s.table->fixture[k] && root != i && root != s.held && s.table->fixture[static_cast<std::size_t>(root)])
      out.push_back(render_atom("located", {name(i), name(root)}));
    if (caps.receptacle) out.push_back(render_atom("receptacle", {name(i)}));
    if (caps.openable) out.push_back(render_atom("openable", {name(i)}));
    if (caps.sliceable) out.push_back(render_atom("sliceable", {name(i)}));
    auto effect = dk.appliance_effect(cat);
    if (effect == ApplianceEffect::kHeat) out.push_back(render_atom("heater", {name(i)}));
    if (effect == ApplianceEffect::kCool) out.push_back(render_atom("cooler", {name(i)}));
    if (effect == ApplianceEffect::kClean) out.push_back(render_atom("washer", {name(i)}));
    if (caps.toggleable && !caps.openable && !effect && s.table->fixture[k])
      out.push_back(render_atom("lightsource", {name(i)}));
    if (cat == dk.slice_tool()) out.push_back(render_atom("slicer", {name(i)}));
    const auto& st = s.state[k];
    if (st.is_clean) out.push_back(render_atom("clean", {name(i)}));
    if (st.is_hot) out.push_back(render_atom("hot", {name(i)}));
    if (st.is_cold) out.push_back(render_atom("cold", {name(i)}));
    if (st.is_sliced) out.push_back(render_atom("sliced", {name(i)}));
    if (st.is_toggled_on) out.push_back(render_atom(effect ? "toggled" : "on", {name(i)}));
    if (st.is_open) out.push_back(render_atom("open", {name(i)}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PddlText export_pddl(const TaskSpec& task, const WorldState& state, const DomainKnowledge& dk) {
  std::ostringstream d;
  d << "(define (domain groundplan-household)\n";
  d << "  (:requirements :typing :adl)\n";
  d << "  (:types place physical - object\n";
  d << "          fixture - place\n";
  d << "          item - physical\n";
  std::vector<std::string> fixtures, items;
  for (const auto& [name, info] : dk.categories()) (info.caps.pickupable ? items : fixtures).push_back(pddl_name(name));
  d << "         ";
  for (const auto& f : fixtures) d << " " << f;
  d << " - fixture\n         ";
  for (const auto& i : items) d << " " << i;
  d << " - item)\n";
  d << "  (:constants agent-start - place)\n";
  d << "  (:predicates (at ?p - place) (handempty) (holding ?o - item) (in ?o - item ?r - physical)\n"
       "               (located ?o - item ?f - fixture) (receptacle ?r - physical) (openable ?r - physical)\n"
       "               (open ?r - physical) (on ?f - fixture) (toggled ?f - fixture) (lightsource ?f - fixture)\n"
       "               (heater ?f - fixture) (cooler ?f - fixture) (washer ?f - fixture) (slicer ?k - item)\n"
       "               (sliceable ?o - item) (clean ?o - item) (hot ?o - item) (cold ?o - item) (sliced ?o - item))\n";
  d << kPddlActions;
  d << ")\n";

  SymbolicState s = abstract(state);
  std::ostringstream p;
  p << "(define (problem groundplan-task)\n";
  p << "  (:domain groundplan-household)\n";
  p << "  (:objects";
  for (std::size_t i = 0; i < s.size(); ++i)
    p << "\n    " << pddl_name(s.table->ids[i]) << " - " << pddl_name(s.table->categories[i]);
  p << ")\n";
  p << "  (:init";
  for (const auto& a : pddl_init_atoms(s, dk)) p << "\n    " << atom_to_pddl(a);
  p << ")\n";
  auto goal = task.goal_conditions.empty() ? derive_goal_conditions(task) : task.goal_conditions;
  p << "  (:goal (and";
  int var = 0;
  for (const auto& g : goal) p << "\n    " << goal_to_pddl(g, dk, var);
  p << ")))\n";
  return {d.str(), p.str()};
}

// ---------------------------------------------------------------------------
// PDDL subset parser

std::vector<SExpr> parse_sexprs(std::string_view text) {
  std::vector<std::vector<SExpr>> stack(1);
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.size() < 2) fail(ErrorCode::kParse, "unbalanced ')' at offset " + std::to_string(i));
      SExpr e;
      e.list = std::move(stack.back());
      stack.pop_back();
      stack.back().push_back(std::move(e));
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')' && text[i] != ';')
        ++i;
      SExpr e;
      e.atom = std::string(text.substr(start, i - start));
      stack.back().push_back(std::move(e));
    }
  }
  if (stack.size() != 1) fail(ErrorCode::kParse, "unbalanced '(' in PDDL text");
  return std::move(stack.front());
}

std::string to_string(const SExpr& e) {
  if (e.list.empty()) return e.atom.empty() ? "()" : e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) out += (i ? " " : "") + to_string(e.list[i]);
  return out + ")";
}

namespace {

const SExpr& single_define(const std::vector<SExpr>& top) {
  if (top.size() != 1 || top[0].list.empty() || top[0].list[0].atom != "define")
    fail(ErrorCode::kParse, "expected one (define ...) form");
  return top[0];
}

// "a b - t c - u" -> (a,t) (b,t) (c,u); untyped entries get "object".
std::vector<std::pair<std::string, std::string>> typed_list(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> pending;
  for (std::size_t i = from; i < items.size(); ++i) {
    const auto& a = items[i];
    if (!a.is_atom()) fail(ErrorCode::kParse, "expected a name in typed list");
    if (a.atom == "-") {
      if (i + 1 >= items.size() || !items[i + 1].is_atom()) fail(ErrorCode::kParse, "dangling '-' in typed list");
      for (auto& n : pending) out.emplace_back(std::move(n), items[i + 1].atom);
      pending.clear();
      ++i;
    } else {
      pending.push_back(a.atom);
    }
  }
  for (auto& n : pending) out.emplace_back(std::move(n), "object");
  return out;
}

std::string head(const SExpr& e) { return e.list.empty() ? "" : e.list[0].atom; }

}  // namespace

PddlDomain parse_pddl_domain(std::string_view text) {
  auto top = parse_sexprs(text);
  const SExpr& def = single_define(top);
  PddlDomain d;
  for (std::size_t i = 1; i < def.list.size(); ++i) {
    const SExpr& sec = def.list[i];
    std::string h = head(sec);
    if (h == "domain" && sec.list.size() == 2) {
      d.name = sec.list[1].atom;
    } else if (h == ":requirements") {
      for (std::size_t k = 1; k < sec.list.size(); ++k) d.requirements.push_back(sec.list[k].atom);
    } else if (h == ":types") {
      d.types = typed_list(sec.list, 1);
    } else if (h == ":constants") {
      // Constants are types-only bookkeeping for this subset.
    } else if (h == ":predicates") {
      d.predicates.assign(sec.list.begin() + 1, sec.list.end());
    } else if (h == ":action") {
      PddlAction a;
      if (sec.list.size() < 2) fail(ErrorCode::kParse, "action without a name");
      a.name = sec.list[1].atom;
      for (std::size_t k = 2; k + 1 < sec.list.size(); k += 2) {
        const std::string& key = sec.list[k].atom;
        const SExpr& val = sec.list[k + 1];
        if (key == ":parameters") a.parameters = typed_list(val.list, 0);
        else if (key == ":precondition") a.precondition = val;
        else if (key == ":effect") a.effect = val;
        else fail(ErrorCode::kParse, "unknown action field " + key);
      }
      d.actions.push_back(std::move(a));
    } else {
      fail(ErrorCode::kParse, "unsupported domain section " + h);
    }
  }
  if (d.name.empty()) fail(ErrorCode::kParse, "domain has no name");
  return d;
}

PddlProblem parse_pddl_problem(std::string_view text) {
  auto top = parse_sexprs(text);
  const SExpr& def = single_define(top);
  PddlProblem p;
  for (std::size_t i = 1; i < def.list.size(); ++i) {
    const SExpr& sec = def.list[i];
    std::string h = head(sec);
    if (h == "problem" && sec.list.size() == 2) {
      p.name = sec.list[1].atom;
    } else if (h == ":domain" && sec.list.size() == 2) {
      p.domain = sec.list[1].atom;
    } else if (h == ":objects") {
      p.objects = typed_list(sec.list, 1);
    } else if (h == ":init") {
      for (std::size_t k = 1; k < sec.list.size(); ++k) {
        const SExpr& a = sec.list[k];
        if (a.list.empty()) fail(ErrorCode::kParse, "init entries must be atoms");
        std::string atom = a.list[0].atom + "(";
        for (std::size_t j = 1; j < a.list.size(); ++j) atom += (j > 1 ? "," : "") + a.list[j].atom;
        p.init.push_back(atom + ")");
      }
      std::sort(p.init.begin(), p.init.end());
    } else if (h == ":goal" && sec.list.size() == 2) {
      p.goal = sec.list[1];
    } else {
      fail(ErrorCode::kParse, "unsupported problem section " + h);
    }
  }
  if (p.name.empty() || p.domain.empty()) fail(ErrorCode::kParse, "problem needs a name and a domain");
  return p;
}

}  // namespace groundplan
