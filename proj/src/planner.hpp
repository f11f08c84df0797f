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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domain.hpp"
#include "plandsl.hpp"
#include "task.hpp"
#include "world.hpp"

namespace groundplan {

// Per-scene constants shared by every symbolic state of one search.
struct ObjectTable {
  std::vector<std::string> ids;  // sorted
  std::vector<std::string> categories;
  std::vector<Capabilities> caps;
  std::vector<char> fixture;  // not pickupable and not contained
  std::vector<Cell> cells;    // fixture cells
};

// What the planner reasons over: the agent's pose and anchor fixture, the
// held object, containment and state bits.
struct SymbolicState {
  std::shared_ptr<const ObjectTable> table;
  Cell agent_cell;
  Heading facing = Heading::kNorth;
  int at = -1;    // fixture the agent stands at and faces
  int held = -1;
  std::vector<int> parent;  // index into table, -1 for none
  std::vector<ObjectState> state;

  bool operator==(const SymbolicState& o) const;

  std::size_t size() const { return parent.size(); }
  int index_of(std::string_view id) const;
  int root_of(int i) const;
  const std::string& id(int i) const { return table->ids[static_cast<std::size_t>(i)]; }
  const std::string& category(int i) const { return table->categories[static_cast<std::size_t>(i)]; }
  // Ground atoms, sorted: at(agent,drawer_1), holding(soapbar_1),
  // in(soapbar_1,drawer_1), clean(x), hot(x), cold(x), sliced(x), on(x), open(x).
  std::vector<std::string> predicates() const;
  std::string key() const;
};

SymbolicState abstract(const WorldState& state);

bool goal_satisfied(const SymbolicState& s, const std::vector<SubtaskCondition>& goal,
                    const DomainKnowledge& dk = DomainKnowledge::builtin());

struct PlannerOptions {
  std::size_t node_budget = 1'000'000;
};

struct SolveResult {
  enum class Status { kSolved, kUnsolvable, kBudgetExceeded };
  Status status = Status::kUnsolvable;
  Plan plan;
  std::size_t expanded = 0;
};

// Breadth-first search over the high-level operators; shortest plan first.
SolveResult search(const TaskSpec& task, const WorldState& state, const PlannerOptions& options = {},
                   const DomainKnowledge& dk = DomainKnowledge::builtin());
// Throws kUnsolvable or kBudgetExceeded.
Plan solve(const TaskSpec& task, const WorldState& state, const PlannerOptions& options = {},
           const DomainKnowledge& dk = DomainKnowledge::builtin());

// Length of the shortest plan with at most `max_length` steps, found by
// iterative deepening over the same operators.
std::optional<int> exhaustive_min_length(const TaskSpec& task, const WorldState& state, int max_length,
                                         const DomainKnowledge& dk = DomainKnowledge::builtin());

// Plan length every task of this shape has once sampling filters are applied.
int canonical_plan_length(const TaskSpec& task);

// Throws kUnsolvable when no category is feasible in the scene.
TaskSpec sample_task(std::uint64_t seed, const WorldState& state,
                     const DomainKnowledge& dk = DomainKnowledge::builtin());
// Samples with a fixed category; throws kUnsolvable when infeasible.
TaskSpec sample_task(std::uint64_t seed, const WorldState& state, TaskCategory category,
                     const DomainKnowledge& dk = DomainKnowledge::builtin());

std::vector<std::string> goal_templates(TaskCategory category, bool sliced);
std::string render_goal(const TaskSpec& task, const DomainKnowledge& dk = DomainKnowledge::builtin());

struct PddlText {
  std::string domain;
  std::string problem;
};

PddlText export_pddl(const TaskSpec& task, const WorldState& state,
                     const DomainKnowledge& dk = DomainKnowledge::builtin());

// S-expression tree for the PDDL subset the exporter emits.
struct SExpr {
  std::string atom;  // set for leaves
  std::vector<SExpr> list;
  bool is_atom() const { return list.empty() && !atom.empty(); }
  bool operator==(const SExpr&) const = default;
};

std::vector<SExpr> parse_sexprs(std::string_view text);  // throws kParse
std::string to_string(const SExpr& e);

struct PddlAction {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;  // (?var, type)
  SExpr precondition;
  SExpr effect;
};

struct PddlDomain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<std::pair<std::string, std::string>> types;  // (type, parent)
  std::vector<SExpr> predicates;
  std::vector<PddlAction> actions;
};

struct PddlProblem {
  std::string name;
  std::string domain;
  std::vector<std::pair<std::string, std::string>> objects;  // (name, type)
  std::vector<std::string> init;  // ground atoms rendered "pred(a,b)"
  SExpr goal;
};

PddlDomain parse_pddl_domain(std::string_view text);
PddlProblem parse_pddl_problem(std::string_view text);

// init atoms the exporter writes for a state, in "pred(a,b)" form.
std::vector<std::string> pddl_init_atoms(const SymbolicState& s, const DomainKnowledge& dk = DomainKnowledge::builtin());

}  // namespace groundplan
