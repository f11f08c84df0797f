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

#include "scenegraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace groundplan {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double wrap360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0) w += 360.0;
  // fmod can hand back 360 - ulp rounding to 360.0 after the add.
  return w >= 360.0 ? 0.0 : w;
}

// A fixture is reachable when one of its 4-neighbours is; a contained or held
// object inherits reachability from its root.
bool cell_reachable(const WorldState& s, const std::vector<std::uint8_t>& reach, Cell c) {
  auto ok = [&](Cell n) {
    return !s.is_blocked(n) && reach[static_cast<std::size_t>(n.y * s.config.width + n.x)];
  };
  if (ok(c)) return true;
  for (int h = 0; h < 4; ++h) {
    Cell d = heading_offset(static_cast<Heading>(h));
    if (ok({c.x + d.x, c.y + d.y})) return true;
  }
  return false;
}

}  // namespace

bool SceneGraph::has_edge(int from, int to) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const GraphEdge& e) { return e.from == from && e.to == to; });
}

bool SceneGraph::add_edge(int from, int to, EdgeOrigin origin) {
  if (from == to || has_edge(from, to)) return false;
  edges.push_back({from, to, relate(nodes[static_cast<std::size_t>(from)], nodes[static_cast<std::size_t>(to)]), origin});
  return true;
}

EdgeAttributes relate(const GraphNode& from, const GraphNode& to) {
  double dx = to.position.x - from.position.x;
  double dy = to.position.y - from.position.y;
  double dz = to.position.z - from.position.z;
  double horizontal = std::hypot(dx, dy);
  EdgeAttributes a;
  a.distance = std::sqrt(dx * dx + dy * dy + dz * dz);
  double bearing = horizontal > 0 ? std::atan2(dx, dy) * kRadToDeg : 0.0;
  a.yaw = wrap360(bearing - from.rotation);
  a.pitch = (horizontal > 0 || dz != 0) ? std::atan2(dz, horizontal) * kRadToDeg : 0.0;
  return a;
}

SceneGraph build_graph(const WorldState& state) {
  SceneGraph g;
  g.room = state.room;
  auto reach = flood_fill(state, state.agent.cell);

  GraphNode agent;
  agent.id = "agent";
  agent.category = "agent";
  agent.position = state.agent_position();
  agent.rotation = heading_degrees(state.agent.facing);
  g.nodes.push_back(agent);

  std::vector<const ObjectInstance*> objects;
  for (const auto& o : state.objects) objects.push_back(&o);
  // Node order is by id so the graph does not depend on object-list order.
  std::sort(objects.begin(), objects.end(),
            [](const ObjectInstance* a, const ObjectInstance* b) { return a->id < b->id; });
  for (const auto* o : objects) {
    GraphNode n;
    n.id = o->id;
    n.category = o->category;
    n.position = o->position;
    n.rotation = o->rotation;
    const ObjectInstance& root = state.root_of(o->id);
    n.reachable = (state.held && (root.id == *state.held)) ||
                  cell_reachable(state, reach, state.cell_of(root.position));
    g.nodes.push_back(std::move(n));
  }

  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
      if (g.nodes[i].id == id) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    const auto& o = state.get(g.nodes[i].id);
    if (o.parent) g.add_edge(index_of(*o.parent), static_cast<int>(i), EdgeOrigin::kContainment);
  }
  return g;
}

SceneGraph infuse_domain_knowledge(SceneGraph g, const DomainKnowledge& dk) {
  for (std::size_t r = 1; r < g.nodes.size(); ++r) {
    for (std::size_t c = 1; c < g.nodes.size(); ++c) {
      if (r == c) continue;
      if (dk.compatible(g.nodes[r].category, g.nodes[c].category))
        g.add_edge(static_cast<int>(r), static_cast<int>(c), EdgeOrigin::kDomain);
    }
  }
  return g;
}

SceneGraph connect_agent(SceneGraph g, const DomainKnowledge* dk) {
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    if (dk && !g.nodes[i].reachable) continue;
    g.add_edge(SceneGraph::kAgent, static_cast<int>(i), EdgeOrigin::kAgent);
  }
  return g;
}

}  // namespace groundplan
