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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace groundplan {

enum class RoomKind { kKitchen, kBathroom, kBedroom, kLivingroom };

std::string_view room_name(RoomKind kind);       // "kitchen"
std::string_view room_display_name(RoomKind kind);  // "Kitchen"
std::optional<RoomKind> parse_room(std::string_view name);
const std::vector<RoomKind>& all_rooms();

struct Capabilities {
  bool pickupable = false;
  bool receptacle = false;
  bool openable = false;
  bool toggleable = false;
  bool sliceable = false;

  bool operator==(const Capabilities&) const = default;
};

struct CategoryInfo {
  std::string name;
  double height = 0.0;  // absolute z for fixtures, offset above parent for items
  Capabilities caps;
};

enum class ApplianceEffect { kHeat, kCool, kClean };

struct RoomInventory {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> items;
};

/// Category registry plus the relational knowledge Graph2NL may infuse:
/// which receptacles may hold which categories and what each room contains.
/// Loaded from the versioned text table in data/domain_knowledge.txt; a copy
/// of that table is compiled into the library as the builtin default.
class DomainKnowledge {
 public:
  static const DomainKnowledge& builtin();
  static DomainKnowledge parse(std::string_view text);
  static DomainKnowledge load(const std::string& path);

  int version() const { return version_; }

  bool has_category(std::string_view name) const;
  const CategoryInfo& category(std::string_view name) const;  // throws kNotFound
  const std::map<std::string, CategoryInfo, std::less<>>& categories() const { return categories_; }

  // Alias resolution: "soap" -> "soapbar". Unknown names pass through.
  std::string canonical(std::string_view name) const;
  // Preferred surface name for plans and goal text: "soapbar" -> "soap".
  std::string surface(std::string_view category) const;

  bool compatible(std::string_view receptacle, std::string_view item) const;
  const std::map<std::string, std::set<std::string>, std::less<>>& receptacle_compatibility() const {
    return contains_;
  }
  const RoomInventory& room_inventory(RoomKind kind) const;

  std::optional<ApplianceEffect> appliance_effect(std::string_view category) const;
  std::optional<std::string> appliance_for(ApplianceEffect effect) const;
  const std::string& slice_tool() const { return slice_tool_; }

  // Candidate target categories for the task families (heat, cool, clean,
  // slice, look, movable).
  const std::vector<std::string>& task_targets(std::string_view family) const;

  // Every surface word the domain can produce (categories and aliases).
  std::vector<std::string> lexicon() const;

 private:
  int version_ = 0;
  std::map<std::string, CategoryInfo, std::less<>> categories_;
  std::map<std::string, std::set<std::string>, std::less<>> contains_;
  std::map<RoomKind, RoomInventory> rooms_;
  std::map<std::string, std::string, std::less<>> alias_to_category_;
  std::map<std::string, std::string, std::less<>> category_to_surface_;
  std::map<std::string, ApplianceEffect, std::less<>> appliances_;
  std::map<std::string, std::vector<std::string>, std::less<>> task_targets_;
  std::string slice_tool_;
};

}  // namespace groundplan
