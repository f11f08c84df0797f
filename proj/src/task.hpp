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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "world.hpp"

namespace groundplan {

enum class TaskCategory {
  kLookAtObject,
  kPickAndPlace,
  kPickTwoAndPlace,
  kPickAndPlaceMovable,
  kPickCleanPlace,
  kPickCoolPlace,
  kPickHeatPlace,
};

inline constexpr std::array<TaskCategory, 7> kAllTaskCategories = {
    TaskCategory::kLookAtObject,   TaskCategory::kPickAndPlace,  TaskCategory::kPickTwoAndPlace,
    TaskCategory::kPickAndPlaceMovable, TaskCategory::kPickCleanPlace, TaskCategory::kPickCoolPlace,
    TaskCategory::kPickHeatPlace,
};

std::string_view task_category_name(TaskCategory c);  // "pick_and_place", ...
std::optional<TaskCategory> parse_task_category(std::string_view name);

// Target, receptacle and movable receptacle are domain categories (not
// aliases). For look-at-object tasks `receptacle` names the light source.
struct TaskSpec {
  TaskCategory category = TaskCategory::kPickAndPlace;
  std::string target;
  std::string receptacle;
  std::optional<std::string> movable_receptacle;
  bool sliced = false;  // pick-and-place of a sliced target
  std::vector<SubtaskCondition> goal_conditions;
  int template_index = 0;

  bool operator==(const TaskSpec&) const = default;
};

// Goal conditions implied by the other fields.
std::vector<SubtaskCondition> derive_goal_conditions(const TaskSpec& task);

// Throws kInvalidArgument when a category-specific field is missing.
void validate_task(const TaskSpec& task);

}  // namespace groundplan
