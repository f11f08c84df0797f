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

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace groundplan {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

// Compass headings, clockwise. North is +y.
enum class Heading : int { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

inline Heading rotate_cw(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }
inline Heading rotate_ccw(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
inline double heading_degrees(Heading h) { return 90.0 * static_cast<int>(h); }
Cell heading_offset(Heading h);

struct Vec3 {
  double x = 0, y = 0, z = 0;
  bool operator==(const Vec3&) const = default;
};

struct ObjectState {
  bool is_clean = false;
  bool is_hot = false;
  bool is_cold = false;
  bool is_sliced = false;
  bool is_toggled_on = false;
  bool is_open = false;
  bool operator==(const ObjectState&) const = default;
};

enum class StateFlag { kClean, kHot, kCold, kSliced, kToggledOn, kOpen };
std::string_view state_flag_name(StateFlag f);  // "is_clean", ...
std::optional<StateFlag> parse_state_flag(std::string_view name);
bool get_flag(const ObjectState& s, StateFlag f);

struct ObjectInstance {
  std::string id;
  std::string category;
  Vec3 position;
  double rotation = 0.0;  // yaw, degrees
  Capabilities flags;
  ObjectState state;
  std::optional<std::string> parent;
  bool operator==(const ObjectInstance&) const = default;
};

struct AgentPose {
  Cell cell;
  Heading facing = Heading::kNorth;
  bool operator==(const AgentPose&) const = default;
};

struct WorldConfig {
  int width = 24;
  int height = 24;
  double cell_size = 0.25;
  double interaction_range = 1.5;
  double agent_height = 0.875;
  bool operator==(const WorldConfig&) const = default;
};

class WorldState {
 public:
  RoomKind room = RoomKind::kKitchen;
  WorldConfig config;
  std::vector<std::uint8_t> blocked;  // row-major, width * height
  std::vector<ObjectInstance> objects;
  AgentPose agent;
  std::optional<std::string> held;

  bool operator==(const WorldState&) const = default;

  // Empty room with no blocked cells.
  static WorldState empty(RoomKind room, const WorldConfig& config = {});

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < config.width && c.y < config.height;
  }
  bool is_blocked(Cell c) const {
    return !in_bounds(c) || blocked[static_cast<std::size_t>(c.y * config.width + c.x)] != 0;
  }
  void set_blocked(Cell c, bool value);

  Vec3 cell_center(Cell c, double z = 0.0) const;
  Cell cell_of(const Vec3& p) const;
  Vec3 agent_position() const { return cell_center(agent.cell, config.agent_height); }

  const ObjectInstance* find(std::string_view id) const;
  ObjectInstance* find(std::string_view id);
  const ObjectInstance& get(std::string_view id) const;  // throws kNotFound

  // Outermost ancestor (the object itself when it has no parent).
  const ObjectInstance& root_of(std::string_view id) const;
  bool is_descendant(std::string_view id, std::string_view ancestor) const;
  std::vector<std::string> children_of(std::string_view id) const;

  // Places a fixture: blocks its cell and sets its position at the cell center.
  ObjectInstance& add_fixture(const DomainKnowledge& dk, std::string id, std::string_view category,
                              Cell cell, double rotation = 0.0);
  // Places an item inside/on a receptacle (or at a free position when parent is empty).
  ObjectInstance& add_item(const DomainKnowledge& dk, std::string id, std::string_view category,
                           std::string_view parent_id);
};

struct LowLevelAction {
  enum class Kind {
    kMoveForward, kMoveBackward, kMoveLeft, kMoveRight, kRotateCW, kRotateCCW,
    kPickupObject, kPutObject, kToggleObject, kSliceObject,
  };
  Kind kind = Kind::kMoveForward;
  std::optional<std::string> target;

  bool operator==(const LowLevelAction&) const = default;

  static LowLevelAction move(Kind k) { return {k, std::nullopt}; }
  static LowLevelAction interact(Kind k, std::string target) { return {k, std::move(target)}; }
  bool is_interaction() const;
  bool well_formed() const { return is_interaction() == target.has_value(); }
};

std::string_view action_kind_name(LowLevelAction::Kind k);
std::string to_string(const LowLevelAction& a);

struct StepResult {
  bool success = false;
  std::string message;
};

// Visible = inside the interaction range and the 90 degree facing cone, and not
// enclosed by a closed openable receptacle.
bool is_visible(const WorldState& state, std::string_view object_id);

// In-place transition; failed actions leave the state untouched.
StepResult apply_action(WorldState& state, const LowLevelAction& action,
                        const DomainKnowledge& dk = DomainKnowledge::builtin());
std::pair<WorldState, StepResult> step(const WorldState& state, const LowLevelAction& action,
                                       const DomainKnowledge& dk = DomainKnowledge::builtin());

WorldState generate_scene(std::uint64_t seed, RoomKind room, const WorldConfig& config = {},
                          const DomainKnowledge& dk = DomainKnowledge::builtin());
WorldState generate_scene(std::uint64_t seed, std::string_view room, const WorldConfig& config = {},
                          const DomainKnowledge& dk = DomainKnowledge::builtin());

// Free cells reachable from `from` over 4-neighbour moves.
std::vector<std::uint8_t> flood_fill(const WorldState& state, Cell from);

struct SubtaskCondition {
  enum class Kind { kPlaced, kHolding, kStateIs, kAgentNear };
  Kind kind = Kind::kPlaced;
  std::string object;      // category (aliases allowed)
  std::string receptacle;  // kPlaced only
  StateFlag flag = StateFlag::kClean;  // kStateIs only
  bool value = true;
  int min_count = 1;       // kPlaced: number of distinct instances required
  std::vector<StateFlag> with_states;  // extra flags the matching instance must carry

  bool operator==(const SubtaskCondition&) const = default;

  static SubtaskCondition placed(std::string object, std::string receptacle, int count = 1,
                                 std::vector<StateFlag> with = {});
  static SubtaskCondition holding(std::string object, std::vector<StateFlag> with = {});
  static SubtaskCondition state_is(std::string object, StateFlag flag, bool value = true);
  static SubtaskCondition agent_near(std::string object);
};

std::string to_string(const SubtaskCondition& c);

// Throws kNotFound when a referenced category is unknown to the domain.
bool check_condition(const WorldState& state, const SubtaskCondition& cond,
                     const DomainKnowledge& dk = DomainKnowledge::builtin());

// Immutable copy of a state. restore(snapshot(s)) == s.
class Snapshot {
 public:
  const WorldState& state() const { return *state_; }

 private:
  friend Snapshot snapshot(const WorldState&);
  std::shared_ptr<const WorldState> state_;
};

Snapshot snapshot(const WorldState& state);
WorldState restore(const Snapshot& snap);

// Scene file: line records under a "groundplan-scene <version>" header.
std::string serialize_scene(const WorldState& state);
WorldState parse_scene(std::string_view text);

}  // namespace groundplan
