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

#include "world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "common.hpp"

namespace groundplan {

Cell heading_offset(Heading h) {
  switch (h) {
    case Heading::kNorth: return {0, 1};
    case Heading::kEast: return {1, 0};
    case Heading::kSouth: return {0, -1};
    case Heading::kWest: return {-1, 0};
  }
  return {0, 1};
}

std::string_view state_flag_name(StateFlag f) {
  switch (f) {
    case StateFlag::kClean: return "is_clean";
    case StateFlag::kHot: return "is_hot";
    case StateFlag::kCold: return "is_cold";
    case StateFlag::kSliced: return "is_sliced";
    case StateFlag::kToggledOn: return "is_toggled_on";
    case StateFlag::kOpen: return "is_open";
  }
  return "is_clean";
}

std::optional<StateFlag> parse_state_flag(std::string_view name) {
  for (auto f : {StateFlag::kClean, StateFlag::kHot, StateFlag::kCold, StateFlag::kSliced,
                 StateFlag::kToggledOn, StateFlag::kOpen})
    if (state_flag_name(f) == name) return f;
  return std::nullopt;
}

bool get_flag(const ObjectState& s, StateFlag f) {
  switch (f) {
    case StateFlag::kClean: return s.is_clean;
    case StateFlag::kHot: return s.is_hot;
    case StateFlag::kCold: return s.is_cold;
    case StateFlag::kSliced: return s.is_sliced;
    case StateFlag::kToggledOn: return s.is_toggled_on;
    case StateFlag::kOpen: return s.is_open;
  }
  return false;
}

// ---------------------------------------------------------------------------
// WorldState

WorldState WorldState::empty(RoomKind room, const WorldConfig& config) {
  if (config.width <= 0 || config.height <= 0 || config.cell_size <= 0 ||
      config.interaction_range <= 0)
    fail(ErrorCode::kInvalidArgument, "world config values must be positive");
  WorldState s;
  s.room = room;
  s.config = config;
  s.blocked.assign(static_cast<std::size_t>(config.width * config.height), 0);
  return s;
}

void WorldState::set_blocked(Cell c, bool value) {
  if (!in_bounds(c)) fail(ErrorCode::kInvalidArgument, "cell out of bounds");
  blocked[static_cast<std::size_t>(c.y * config.width + c.x)] = value ? 1 : 0;
}

Vec3 WorldState::cell_center(Cell c, double z) const {
  return {(c.x + 0.5) * config.cell_size, (c.y + 0.5) * config.cell_size, z};
}

Cell WorldState::cell_of(const Vec3& p) const {
  return {static_cast<int>(std::floor(p.x / config.cell_size)),
          static_cast<int>(std::floor(p.y / config.cell_size))};
}

const ObjectInstance* WorldState::find(std::string_view id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

ObjectInstance* WorldState::find(std::string_view id) {
  for (auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

const ObjectInstance& WorldState::get(std::string_view id) const {
  const auto* o = find(id);
  if (!o) fail(ErrorCode::kNotFound, "no object '" + std::string(id) + "'");
  return *o;
}

const ObjectInstance& WorldState::root_of(std::string_view id) const {
  const ObjectInstance* o = &get(id);
  // Containment is a forest, so the walk terminates within |objects| hops.
  for (std::size_t hops = 0; o->parent && hops <= objects.size(); ++hops) o = &get(*o->parent);
  return *o;
}

bool WorldState::is_descendant(std::string_view id, std::string_view ancestor) const {
  const ObjectInstance* o = find(id);
  for (std::size_t hops = 0; o && o->parent && hops <= objects.size(); ++hops) {
    if (*o->parent == ancestor) return true;
    o = find(*o->parent);
  }
  return false;
}

std::vector<std::string> WorldState::children_of(std::string_view id) const {
  std::vector<std::string> out;
  for (const auto& o : objects)
    if (o.parent && *o.parent == id) out.push_back(o.id);
  std::sort(out.begin(), out.end());
  return out;
}

ObjectInstance& WorldState::add_fixture(const DomainKnowledge& dk, std::string id,
                                        std::string_view category, Cell cell, double rotation) {
  if (find(id)) fail(ErrorCode::kInvalidArgument, "duplicate object id " + id);
  if (!in_bounds(cell)) fail(ErrorCode::kInvalidArgument, "fixture cell out of bounds");
  const auto& info = dk.category(category);
  ObjectInstance o;
  o.id = std::move(id);
  o.category = info.name;
  o.position = cell_center(cell, info.height);
  o.rotation = rotation;
  o.flags = info.caps;
  set_blocked(cell, true);
  objects.push_back(std::move(o));
  return objects.back();
}

namespace {

// Slot offsets inside a receptacle footprint (cell is 0.25 m wide).
Vec3 slot_position(const WorldState& s, const ObjectInstance& parent, const CategoryInfo& item,
                   std::size_t slot) {
  double step = std::min(0.05, s.config.cell_size / 5.0);
  int k = static_cast<int>(slot % 9);
  return {parent.position.x + ((k % 3) - 1) * step, parent.position.y + ((k / 3) - 1) * step,
          parent.position.z + item.height};
}

void move_subtree(WorldState& s, const std::string& id, const Vec3& target) {
  ObjectInstance* o = s.find(id);
  Vec3 d{target.x - o->position.x, target.y - o->position.y, target.z - o->position.z};
  for (auto& other : s.objects) {
    if (other.id == id || s.is_descendant(other.id, id)) {
      other.position.x += d.x;
      other.position.y += d.y;
      other.position.z += d.z;
    }
  }
}

}  // namespace

ObjectInstance& WorldState::add_item(const DomainKnowledge& dk, std::string id,
                                     std::string_view category, std::string_view parent_id) {
  if (find(id)) fail(ErrorCode::kInvalidArgument, "duplicate object id " + id);
  const auto& info = dk.category(category);
  const ObjectInstance& parent = get(parent_id);
  ObjectInstance o;
  o.id = std::move(id);
  o.category = info.name;
  o.position = slot_position(*this, parent, info, children_of(parent_id).size());
  o.rotation = 0.0;
  o.flags = info.caps;
  o.parent = std::string(parent_id);
  objects.push_back(std::move(o));
  return objects.back();
}

// ---------------------------------------------------------------------------
// Actions

bool LowLevelAction::is_interaction() const {
  switch (kind) {
    case Kind::kPickupObject:
    case Kind::kPutObject:
    case Kind::kToggleObject:
    case Kind::kSliceObject: return true;
    default: return false;
  }
}

std::string_view action_kind_name(LowLevelAction::Kind k) {
  using K = LowLevelAction::Kind;
  switch (k) {
    case K::kMoveForward: return "MoveForward";
    case K::kMoveBackward: return "MoveBackward";
    case K::kMoveLeft: return "MoveLeft";
    case K::kMoveRight: return "MoveRight";
    case K::kRotateCW: return "RotateCW";
    case K::kRotateCCW: return "RotateCCW";
    case K::kPickupObject: return "PickupObject";
    case K::kPutObject: return "PutObject";
    case K::kToggleObject: return "ToggleObject";
    case K::kSliceObject: return "SliceObject";
  }
  return "?";
}

std::string to_string(const LowLevelAction& a) {
  std::string s(action_kind_name(a.kind));
  if (a.target) s += "(" + *a.target + ")";
  return s;
}

bool is_visible(const WorldState& state, std::string_view object_id) {
  const ObjectInstance* o = state.find(object_id);
  if (!o) return false;
  if (state.held && (*state.held == object_id || state.is_descendant(object_id, *state.held)))
    return false;
  for (const ObjectInstance* p = o; p->parent;) {
    p = state.find(*p->parent);
    if (!p) break;
    if (p->flags.openable && !p->state.is_open) return false;
  }
  Vec3 a = state.agent_position();
  double dx = o->position.x - a.x, dy = o->position.y - a.y, dz = o->position.z - a.z;
  double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (dist > state.config.interaction_range + 1e-9) return false;
  double horizontal = std::hypot(dx, dy);
  if (horizontal < 1e-9) return true;
  double bearing = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
  double rel = std::fmod(bearing - heading_degrees(state.agent.facing) + 540.0, 360.0) - 180.0;
  return std::abs(rel) <= 45.0 + 1e-9;
}

namespace {

StepResult ok() { return {true, ""}; }
StepResult failure(std::string msg) { return {false, std::move(msg)}; }

void apply_appliance(WorldState& s, const ObjectInstance& appliance, ApplianceEffect effect) {
  for (auto& o : s.objects) {
    if (!s.is_descendant(o.id, appliance.id)) continue;
    switch (effect) {
      case ApplianceEffect::kHeat:
        o.state.is_hot = true;
        o.state.is_cold = false;
        break;
      case ApplianceEffect::kCool:
        o.state.is_cold = true;
        o.state.is_hot = false;
        break;
      case ApplianceEffect::kClean: o.state.is_clean = true; break;
    }
  }
}

}  // namespace

StepResult apply_action(WorldState& s, const LowLevelAction& action, const DomainKnowledge& dk) {
  using K = LowLevelAction::Kind;
  if (!action.well_formed()) return failure("malformed action");
  switch (action.kind) {
    case K::kRotateCW: s.agent.facing = rotate_cw(s.agent.facing); return ok();
    case K::kRotateCCW: s.agent.facing = rotate_ccw(s.agent.facing); return ok();
    case K::kMoveForward:
    case K::kMoveBackward:
    case K::kMoveLeft:
    case K::kMoveRight: {
      Heading h = s.agent.facing;
      if (action.kind == K::kMoveBackward) h = rotate_cw(rotate_cw(h));
      if (action.kind == K::kMoveLeft) h = rotate_ccw(h);
      if (action.kind == K::kMoveRight) h = rotate_cw(h);
      Cell d = heading_offset(h);
      Cell next{s.agent.cell.x + d.x, s.agent.cell.y + d.y};
      if (s.is_blocked(next)) return failure("blocked");
      s.agent.cell = next;
      if (s.held) move_subtree(s, *s.held, s.agent_position());
      return ok();
    }
    default: break;
  }

  const std::string& tid = *action.target;
  ObjectInstance* target = s.find(tid);
  if (!target) return failure("unknown target " + tid);

  switch (action.kind) {
    case K::kPickupObject: {
      if (s.held) return failure("hand not empty");
      if (!target->flags.pickupable) return failure(tid + " is not pickupable");
      if (!is_visible(s, tid)) return failure(tid + " not visible");
      target->parent.reset();
      s.held = tid;
      move_subtree(s, tid, s.agent_position());
      return ok();
    }
    case K::kPutObject: {
      if (!s.held) return failure("nothing held");
      if (!target->flags.receptacle) return failure(tid + " is not a receptacle");
      if (*s.held == tid || s.is_descendant(tid, *s.held)) return failure("cannot put into itself");
      if (!is_visible(s, tid)) return failure(tid + " not visible");
      if (target->flags.openable && !target->state.is_open) return failure(tid + " is closed");
      std::string item = *s.held;
      Vec3 dest = slot_position(s, *target, dk.category(s.get(item).category),
                                s.children_of(tid).size());
      s.find(item)->parent = tid;
      s.held.reset();
      move_subtree(s, item, dest);
      return ok();
    }
    case K::kToggleObject: {
      if (!target->flags.openable && !target->flags.toggleable)
        return failure(tid + " is not toggleable");
      if (!is_visible(s, tid)) return failure(tid + " not visible");
      auto effect = dk.appliance_effect(target->category);
      if (target->flags.openable) {
        target->state.is_open = !target->state.is_open;
        if (!target->state.is_open && effect && *effect != ApplianceEffect::kClean)
          apply_appliance(s, *target, *effect);
      } else {
        target->state.is_toggled_on = !target->state.is_toggled_on;
        if (target->state.is_toggled_on && effect) apply_appliance(s, *target, *effect);
      }
      return ok();
    }
    case K::kSliceObject: {
      if (!target->flags.sliceable) return failure(tid + " is not sliceable");
      if (target->state.is_sliced) return failure(tid + " already sliced");
      if (!s.held || s.get(*s.held).category != dk.slice_tool())
        return failure("slicing needs a " + dk.slice_tool());
      if (!is_visible(s, tid)) return failure(tid + " not visible");
      target->state.is_sliced = true;
      return ok();
    }
    default: break;
  }
  return failure("unsupported action");
}

std::pair<WorldState, StepResult> step(const WorldState& state, const LowLevelAction& action,
                                       const DomainKnowledge& dk) {
  WorldState next = state;
  StepResult r = apply_action(next, action, dk);
  if (!r.success) return {state, r};
  return {std::move(next), r};
}

// ---------------------------------------------------------------------------
// Scene generation

std::vector<std::uint8_t> flood_fill(const WorldState& s, Cell from) {
  std::vector<std::uint8_t> seen(s.blocked.size(), 0);
  if (s.is_blocked(from)) return seen;
  std::deque<Cell> queue{from};
  seen[static_cast<std::size_t>(from.y * s.config.width + from.x)] = 1;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (int h = 0; h < 4; ++h) {
      Cell d = heading_offset(static_cast<Heading>(h));
      Cell n{c.x + d.x, c.y + d.y};
      if (s.is_blocked(n)) continue;
      auto idx = static_cast<std::size_t>(n.y * s.config.width + n.x);
      if (seen[idx]) continue;
      seen[idx] = 1;
      queue.push_back(n);
    }
  }
  return seen;
}

namespace {

int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

bool fixture_reachable(const WorldState& s, const std::vector<std::uint8_t>& reach, Cell c) {
  for (int h = 0; h < 4; ++h) {
    Cell d = heading_offset(static_cast<Heading>(h));
    Cell n{c.x + d.x, c.y + d.y};
    if (!s.is_blocked(n) && reach[static_cast<std::size_t>(n.y * s.config.width + n.x)]) return true;
  }
  return false;
}

std::string next_id(std::map<std::string, int>& counters, const std::string& category) {
  return category + "_" + std::to_string(++counters[category]);
}

// Fixtures that can hold `item`, excluding openable appliances so that every
// item starts out visible.
std::vector<const ObjectInstance*> item_hosts(const WorldState& s, const DomainKnowledge& dk,
                                              const std::string& item) {
  std::vector<const ObjectInstance*> out;
  for (const auto& o : s.objects)
    if (!o.parent && o.flags.receptacle && !o.flags.pickupable && !o.flags.openable &&
        dk.compatible(o.category, item))
      out.push_back(&o);
  return out;
}

bool present(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<std::string> intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto& x : a)
    if (present(b, x)) out.push_back(x);
  return out;
}

}  // namespace

WorldState generate_scene(std::uint64_t seed, RoomKind room, const WorldConfig& config,
                          const DomainKnowledge& dk) {
  const RoomInventory& inv = dk.room_inventory(room);
  if (inv.required.empty()) fail(ErrorCode::kInvalidArgument, "room has no inventory");
  if (config.width < 12 || config.height < 12)
    fail(ErrorCode::kInvalidArgument, "scene generation needs at least a 12x12 grid");
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(room) + 1));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    WorldState s = WorldState::empty(room, config);
    std::map<std::string, int> counters;

    std::vector<std::string> fixtures = inv.required;
    for (const auto& opt : inv.optional)
      if (rng.chance(0.6)) fixtures.push_back(opt);

    std::vector<Cell> placed;
    bool ok_layout = true;
    for (const auto& cat : fixtures) {
      bool done = false;
      for (int tries = 0; tries < 400 && !done; ++tries) {
        Cell c{rng.range(1, config.width - 2), rng.range(1, config.height - 2)};
        bool spaced = std::all_of(placed.begin(), placed.end(),
                                  [&](Cell p) { return chebyshev(p, c) >= 3; });
        if (!spaced) continue;
        s.add_fixture(dk, next_id(counters, cat), cat, c, 90.0 * rng.range(0, 3));
        placed.push_back(c);
        done = true;
      }
      if (!done) ok_layout = false;
    }
    if (!ok_layout) continue;

    // A few short interior wall segments, kept off the fixture neighbourhoods.
    int walls = rng.range(0, 3);
    for (int w = 0; w < walls; ++w) {
      Cell start{rng.range(2, config.width - 3), rng.range(2, config.height - 3)};
      Heading dir = rng.chance(0.5) ? Heading::kEast : Heading::kNorth;
      int len = rng.range(2, 4);
      for (int i = 0; i < len; ++i) {
        Cell d = heading_offset(dir);
        Cell c{start.x + d.x * i, start.y + d.y * i};
        if (!s.in_bounds(c)) break;
        bool near_fixture = std::any_of(placed.begin(), placed.end(),
                                        [&](Cell p) { return chebyshev(p, c) <= 1; });
        if (!near_fixture) s.set_blocked(c, true);
      }
    }

    std::vector<Cell> starts;
    for (int y = 0; y < config.height; ++y)
      for (int x = 0; x < config.width; ++x) {
        Cell c{x, y};
        if (s.is_blocked(c)) continue;
        if (std::all_of(placed.begin(), placed.end(), [&](Cell p) { return chebyshev(p, c) >= 2; }))
          starts.push_back(c);
      }
    if (starts.empty()) continue;
    s.agent.cell = starts[rng.index(starts.size())];
    s.agent.facing = static_cast<Heading>(rng.range(0, 3));

    auto reach = flood_fill(s, s.agent.cell);
    if (!std::all_of(placed.begin(), placed.end(),
                     [&](Cell c) { return fixture_reachable(s, reach, c); }))
      continue;

    // Items: first one guaranteed target per task family the room supports,
    // then a duplicate (pick-two), then uniform filler.
    std::vector<std::string> items;
    auto has_fixture = [&](const std::string& cat) { return present(fixtures, cat); };
    auto pick_from = [&](const std::vector<std::string>& pool) -> std::optional<std::string> {
      if (pool.empty()) return std::nullopt;
      return pool[rng.index(pool.size())];
    };
    for (auto [family, effect] : {std::pair{"heat", ApplianceEffect::kHeat},
                                  std::pair{"cool", ApplianceEffect::kCool},
                                  std::pair{"clean", ApplianceEffect::kClean}}) {
      auto appliance = dk.appliance_for(effect);
      if (!appliance || !has_fixture(*appliance)) continue;
      if (auto c = pick_from(intersect(dk.task_targets(family), inv.items))) items.push_back(*c);
    }
    if (present(inv.items, dk.slice_tool())) {
      items.push_back(dk.slice_tool());
      if (auto c = pick_from(intersect(dk.task_targets("slice"), inv.items))) items.push_back(*c);
    }
    if (auto c = pick_from(intersect(dk.task_targets("look"), inv.items))) items.push_back(*c);
    if (auto m = pick_from(intersect(dk.task_targets("movable"), inv.items))) {
      items.push_back(*m);
      std::vector<std::string> contents;
      for (const auto& i : inv.items)
        if (dk.compatible(*m, i)) contents.push_back(i);
      if (auto c = pick_from(contents)) items.push_back(*c);
    }
    if (!items.empty()) items.push_back(items[rng.index(items.size())]);
    int filler = rng.range(3, 6);
    for (int i = 0; i < filler; ++i) items.push_back(inv.items[rng.index(inv.items.size())]);

    for (const auto& item : items) {
      auto hosts = item_hosts(s, dk, item);
      if (hosts.empty()) continue;
      std::string host = hosts[rng.index(hosts.size())]->id;
      s.add_item(dk, next_id(counters, item), item, host);
    }
    return s;
  }
  fail(ErrorCode::kInternal, "scene generation did not converge");
}

WorldState generate_scene(std::uint64_t seed, std::string_view room, const WorldConfig& config,
                          const DomainKnowledge& dk) {
  auto kind = parse_room(room);
  if (!kind) fail(ErrorCode::kInvalidArgument, "unsupported room kind '" + std::string(room) + "'");
  return generate_scene(seed, *kind, config, dk);
}

// ---------------------------------------------------------------------------
// Conditions

SubtaskCondition SubtaskCondition::placed(std::string object, std::string receptacle, int count,
                                          std::vector<StateFlag> with) {
  SubtaskCondition c;
  c.kind = Kind::kPlaced;
  c.object = std::move(object);
  c.receptacle = std::move(receptacle);
  c.min_count = count;
  c.with_states = std::move(with);
  return c;
}

SubtaskCondition SubtaskCondition::holding(std::string object, std::vector<StateFlag> with) {
  SubtaskCondition c;
  c.kind = Kind::kHolding;
  c.object = std::move(object);
  c.with_states = std::move(with);
  return c;
}

SubtaskCondition SubtaskCondition::state_is(std::string object, StateFlag flag, bool value) {
  SubtaskCondition c;
  c.kind = Kind::kStateIs;
  c.object = std::move(object);
  c.flag = flag;
  c.value = value;
  return c;
}

SubtaskCondition SubtaskCondition::agent_near(std::string object) {
  SubtaskCondition c;
  c.kind = Kind::kAgentNear;
  c.object = std::move(object);
  return c;
}

std::string to_string(const SubtaskCondition& c) {
  std::string with;
  for (auto f : c.with_states) with += "," + std::string(state_flag_name(f));
  switch (c.kind) {
    case SubtaskCondition::Kind::kPlaced:
      return "Placed(" + c.object + "," + c.receptacle +
             (c.min_count != 1 ? ",count=" + std::to_string(c.min_count) : "") + with + ")";
    case SubtaskCondition::Kind::kHolding: return "Holding(" + c.object + with + ")";
    case SubtaskCondition::Kind::kStateIs:
      return "StateIs(" + c.object + "," + std::string(state_flag_name(c.flag)) + "=" +
             (c.value ? "true" : "false") + ")";
    case SubtaskCondition::Kind::kAgentNear: return "AgentNear(" + c.object + ")";
  }
  return "?";
}

bool check_condition(const WorldState& s, const SubtaskCondition& cond, const DomainKnowledge& dk) {
  std::string object = dk.canonical(cond.object);
  if (!dk.has_category(object)) fail(ErrorCode::kNotFound, "unknown category '" + cond.object + "'");
  std::string receptacle;
  if (cond.kind == SubtaskCondition::Kind::kPlaced) {
    receptacle = dk.canonical(cond.receptacle);
    if (!dk.has_category(receptacle))
      fail(ErrorCode::kNotFound, "unknown category '" + cond.receptacle + "'");
  }
  auto carries = [&](const ObjectInstance& o) {
    return std::all_of(cond.with_states.begin(), cond.with_states.end(),
                       [&](StateFlag f) { return get_flag(o.state, f); });
  };
  switch (cond.kind) {
    case SubtaskCondition::Kind::kPlaced: {
      int n = 0;
      for (const auto& o : s.objects) {
        if (o.category != object || !o.parent || !carries(o)) continue;
        const ObjectInstance* p = s.find(*o.parent);
        if (p && p->category == receptacle) ++n;
      }
      return n >= cond.min_count;
    }
    case SubtaskCondition::Kind::kHolding:
      return s.held && s.get(*s.held).category == object && carries(s.get(*s.held));
    case SubtaskCondition::Kind::kStateIs:
      for (const auto& o : s.objects)
        if (o.category == object && get_flag(o.state, cond.flag) == cond.value) return true;
      return false;
    case SubtaskCondition::Kind::kAgentNear:
      for (const auto& o : s.objects)
        if (o.category == object && is_visible(s, o.id)) return true;
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Snapshots

Snapshot snapshot(const WorldState& state) {
  Snapshot snap;
  snap.state_ = std::make_shared<const WorldState>(state);
  return snap;
}

WorldState restore(const Snapshot& snap) { return snap.state(); }

}  // namespace groundplan
