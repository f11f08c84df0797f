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

#include "task.hpp"

#include "common.hpp"

namespace groundplan {

std::string_view task_category_name(TaskCategory c) {
  switch (c) {
    case TaskCategory::kLookAtObject: return "look_at_obj";
    case TaskCategory::kPickAndPlace: return "pick_and_place";
    case TaskCategory::kPickTwoAndPlace: return "pick_two_obj_and_place";
    case TaskCategory::kPickAndPlaceMovable: return "pick_and_place_with_movable_recep";
    case TaskCategory::kPickCleanPlace: return "pick_clean_then_place";
    case TaskCategory::kPickCoolPlace: return "pick_cool_then_place";
    case TaskCategory::kPickHeatPlace: return "pick_heat_then_place";
  }
  return "pick_and_place";
}

std::optional<TaskCategory> parse_task_category(std::string_view name) {
  for (auto c : kAllTaskCategories)
    if (task_category_name(c) == name) return c;
  return std::nullopt;
}

void validate_task(const TaskSpec& task) {
  if (task.target.empty()) fail(ErrorCode::kInvalidArgument, "task has no target");
  if (task.receptacle.empty()) fail(ErrorCode::kInvalidArgument, "task has no receptacle");
  if (task.category == TaskCategory::kPickAndPlaceMovable && !task.movable_receptacle)
    fail(ErrorCode::kInvalidArgument, "movable-receptacle task needs a movable receptacle");
  if (task.sliced && task.category != TaskCategory::kPickAndPlace)
    fail(ErrorCode::kInvalidArgument, "only pick-and-place tasks take the sliced modifier");
}

std::vector<SubtaskCondition> derive_goal_conditions(const TaskSpec& task) {
  validate_task(task);
  using C = SubtaskCondition;
  switch (task.category) {
    case TaskCategory::kLookAtObject:
      return {C::holding(task.target), C::state_is(task.receptacle, StateFlag::kToggledOn)};
    case TaskCategory::kPickAndPlace:
      if (task.sliced) return {C::placed(task.target, task.receptacle, 1, {StateFlag::kSliced})};
      return {C::placed(task.target, task.receptacle)};
    case TaskCategory::kPickTwoAndPlace: return {C::placed(task.target, task.receptacle, 2)};
    case TaskCategory::kPickAndPlaceMovable:
      return {C::placed(task.target, *task.movable_receptacle),
              C::placed(*task.movable_receptacle, task.receptacle)};
    case TaskCategory::kPickCleanPlace:
      return {C::placed(task.target, task.receptacle, 1, {StateFlag::kClean})};
    case TaskCategory::kPickCoolPlace:
      return {C::placed(task.target, task.receptacle, 1, {StateFlag::kCold})};
    case TaskCategory::kPickHeatPlace:
      return {C::placed(task.target, task.receptacle, 1, {StateFlag::kHot})};
  }
  return {};
}

}  // namespace groundplan
