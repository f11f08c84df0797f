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

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domain.hpp"
#include "plandsl.hpp"
#include "world.hpp"

namespace groundplan {

enum class TaskKind { kNavigation, kManipulation, kComposite };

std::string_view task_kind_name(TaskKind k);
TaskKind classify(const PlanStep& step);
TaskKind classify(HighLevelAction action);

// Free cells with 4-neighbour adjacency.
class NavigationGraph {
 public:
  NavigationGraph() = default;
  NavigationGraph(int width, int height, std::vector<std::uint8_t> free);

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(Cell c) const;
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y * width_ + c.x); }
  std::vector<Cell> neighbors(Cell c) const;  // N, E, S, W order

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> free_;
};

NavigationGraph build_navgraph(const WorldState& state);

// A* with the Manhattan heuristic. The path includes both endpoints; throws
// kNoPath when `to` cannot be reached and kInvalidArgument for cells outside
// the graph.
std::vector<Cell> shortest_path(const NavigationGraph& g, Cell from, Cell to);

inline constexpr int kUnreachable = INT_MAX;
// Breadth-first step counts from `from`; kUnreachable elsewhere.
std::vector<int> distance_map(const NavigationGraph& g, Cell from);

// Minimal rotations taking `from` to `to` (a half turn is two RotateCW).
std::vector<LowLevelAction> rotations(Heading from, Heading to);

// Rotations plus forward moves along a contiguous path; ends facing the last
// movement direction. Throws kInvalidArgument for a non-contiguous path.
std::vector<LowLevelAction> to_motion(const std::vector<Cell>& path, Heading start);

// Instances of a category (aliases resolved), nearest first by path distance
// from the agent to a free cell next to the object's outermost container;
// ties by id. Unreachable instances come last.
std::vector<std::string> ground_args(std::string_view symbol, const WorldState& state,
                                     const DomainKnowledge& dk = DomainKnowledge::builtin());

// Where GotoLocation ends up for one object: the closest free cell beside the
// object's outermost container, facing it. nullopt when unreachable.
struct Approach {
  Cell cell;
  Heading facing = Heading::kNorth;
  int cost = 0;
};
std::optional<Approach> approach(const WorldState& state, std::string_view object_id);

// Low-level actions bringing the agent to approach(object_id). Empty when the
// object is already the agent's held object. Throws kNoPath.
std::vector<LowLevelAction> navigate_to(const WorldState& state, std::string_view object_id);

// Six interactions on the nearest appliance for HeatObject / CoolObject /
// CleanObject, preceded by navigation when the appliance is out of view.
// Throws kMissingAppliance naming the appliance category, kInvalidArgument for
// non-composite steps.
std::vector<LowLevelAction> expand_composite(const PlanStep& step, const WorldState& state,
                                             const DomainKnowledge& dk = DomainKnowledge::builtin());

struct TraceEntry {
  int step_index = 0;
  PlanStep step;
  TaskKind kind = TaskKind::kNavigation;
  bool success = false;
  std::string grounded;  // object id the step was finally grounded to
  int attempts = 0;
  int rollbacks = 0;
  std::vector<LowLevelAction> actions;  // committed low-level actions
  std::string message;
};

struct ExecutionTrace {
  std::vector<TraceEntry> entries;
  WorldState final_state;
  int rollbacks = 0;
  bool all_succeeded() const;
};

// Runs the plan step by step. A step is atomic: when it fails the world is
// restored to the snapshot taken before it. With try_all every candidate
// instance is attempted in ground_args order; otherwise only the first.
ExecutionTrace execute_plan(const Plan& plan, const WorldState& state, bool try_all,
                            const DomainKnowledge& dk = DomainKnowledge::builtin());

// Line-structured per-episode log.
std::string format_trace(const ExecutionTrace& trace);

}  // namespace groundplan
