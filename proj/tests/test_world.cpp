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
#include <set>

#include "common.hpp"
#include "doctest.h"
#include "world.hpp"

using namespace groundplan;

namespace {

using K = LowLevelAction::Kind;

}  // namespace

TEST_CASE("seed mixing and rng helpers") {
  CHECK(splitmix64(1) != splitmix64(2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    int v = r.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(trim("  a b ") == "a b");
  CHECK(collapse_ws(" a \n\t b ") == "a b");
  CHECK(split_ws(" a  b c").size() == 3);
  CHECK(join({"a", "b"}, "-") == "a-b");
}

TEST_CASE("generated scenes satisfy their layout rules") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (RoomKind room : all_rooms()) {
      WorldState w = generate_scene(seed, room);
      CHECK(w == generate_scene(seed, room));
      CHECK_FALSE(w.is_blocked(w.agent.cell));
      std::set<std::string> ids;
      std::vector<Cell> fixtures;
      for (const auto& o : w.objects) {
        CHECK(ids.insert(o.id).second);
        if (o.parent) {
          const auto& p = w.get(*o.parent);
          CHECK_FALSE(p.flags.openable);
          CHECK(DomainKnowledge::builtin().compatible(p.category, o.category));
        } else {
          Cell c = w.cell_of(o.position);
          CHECK(w.is_blocked(c));
          fixtures.push_back(c);
        }
      }
      for (std::size_t i = 0; i < fixtures.size(); ++i)
        for (std::size_t j = i + 1; j < fixtures.size(); ++j)
          CHECK(std::max(std::abs(fixtures[i].x - fixtures[j].x), std::abs(fixtures[i].y - fixtures[j].y)) >= 3);
      // Every fixture has a reachable free neighbour.
      auto reach = flood_fill(w, w.agent.cell);
      for (Cell c : fixtures) {
        bool ok = false;
        for (int h = 0; h < 4; ++h) {
          Cell d = heading_offset(static_cast<Heading>(h));
          Cell n{c.x + d.x, c.y + d.y};
          if (w.in_bounds(n) && reach[static_cast<std::size_t>(n.y * w.config.width + n.x)]) ok = true;
        }
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("failed actions leave the state untouched") {
  WorldState w = generate_scene(3, RoomKind::kKitchen);
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    LowLevelAction a;
    int k = rng.range(0, 9);
    a.kind = static_cast<K>(k);
    if (a.is_interaction()) a.target = w.objects[rng.index(w.objects.size())].id;
    auto [next, res] = step(w, a);
    if (!res.success) CHECK(next == w);
    else w = next;
    CHECK_FALSE(w.is_blocked(w.agent.cell));
  }
}

TEST_CASE("pickup, put and visibility") {
  const auto& dk = DomainKnowledge::builtin();
  WorldState w = WorldState::empty(RoomKind::kKitchen);
  w.agent.cell = {10, 10};
  w.add_fixture(dk, "countertop_1", "countertop", {10, 11});
  w.add_fixture(dk, "fridge_1", "fridge", {11, 10});
  w.add_item(dk, "apple_1", "apple", "countertop_1");
  CHECK(is_visible(w, "apple_1"));
  CHECK_FALSE(is_visible(w, "fridge_1"));
  CHECK(apply_action(w, LowLevelAction::interact(K::kPickupObject, "apple_1")).success);
  CHECK(w.held == std::optional<std::string>("apple_1"));
  CHECK_FALSE(is_visible(w, "apple_1"));
  CHECK(apply_action(w, LowLevelAction::move(K::kRotateCW)).success);
  CHECK(is_visible(w, "fridge_1"));
  // Closed fridge refuses the put.
  CHECK_FALSE(apply_action(w, LowLevelAction::interact(K::kPutObject, "fridge_1")).success);
  CHECK(apply_action(w, LowLevelAction::interact(K::kToggleObject, "fridge_1")).success);
  CHECK(w.get("fridge_1").state.is_open);
  CHECK(apply_action(w, LowLevelAction::interact(K::kPutObject, "fridge_1")).success);
  CHECK(w.get("apple_1").parent == std::optional<std::string>("fridge_1"));
  CHECK(apply_action(w, LowLevelAction::interact(K::kToggleObject, "fridge_1")).success);
  CHECK(w.get("apple_1").state.is_cold);
  CHECK_FALSE(is_visible(w, "apple_1"));
  CHECK(check_condition(w, SubtaskCondition::placed("apple", "fridge", 1, {StateFlag::kCold})));
  CHECK_FALSE(check_condition(w, SubtaskCondition::placed("apple", "fridge", 2)));
  CHECK_THROWS_AS(check_condition(w, SubtaskCondition::holding("unicorn")), Error);
}

TEST_CASE("snapshots and scene text round trip") {
  WorldState w = generate_scene(12, RoomKind::kBedroom);
  CHECK(restore(snapshot(w)) == w);
  CHECK(parse_scene(serialize_scene(w)) == w);
  CHECK_THROWS_AS(parse_scene("garbage"), Error);
}
