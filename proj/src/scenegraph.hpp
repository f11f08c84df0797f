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

#include <string>
#include <vector>

#include "domain.hpp"
#include "world.hpp"

namespace groundplan {

struct GraphNode {
  std::string id;  // "agent" for the root node
  std::string category;
  Vec3 position;
  double rotation = 0.0;  // yaw in degrees, compass convention
  bool reachable = true;  // some free-cell path leads from the agent to it
  bool operator==(const GraphNode&) const = default;
};

struct EdgeAttributes {
  double distance = 0.0;  // metres, 3D
  double yaw = 0.0;       // degrees in [0, 360), source-local frame
  double pitch = 0.0;     // degrees in [-90, 90], from the altitude difference
  bool operator==(const EdgeAttributes&) const = default;
};

enum class EdgeOrigin { kContainment, kDomain, kAgent };

struct GraphEdge {
  int from = 0;
  int to = 0;
  EdgeAttributes attr;
  EdgeOrigin origin = EdgeOrigin::kContainment;
  bool operator==(const GraphEdge&) const = default;
};

/// Object-centric scene graph. Node 0 is always the agent.
struct SceneGraph {
  RoomKind room = RoomKind::kKitchen;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  bool operator==(const SceneGraph&) const = default;

  static constexpr int kAgent = 0;
  bool has_edge(int from, int to) const;
  // Adds from->to unless an edge between them already exists; returns whether it was added.
  bool add_edge(int from, int to, EdgeOrigin origin);
};

// Geometry of `to` seen from `from`: yaw relative to the source's heading.
EdgeAttributes relate(const GraphNode& from, const GraphNode& to);

// One node per object plus the agent; receptacle->content containment edges.
SceneGraph build_graph(const WorldState& state);
// Receptacle -> compatible-content edges from the domain table. Idempotent.
SceneGraph infuse_domain_knowledge(SceneGraph g, const DomainKnowledge& dk);
// Agent edges: to every reachable node when domain knowledge is given,
// otherwise to every node.
SceneGraph connect_agent(SceneGraph g, const DomainKnowledge* dk);

}  // namespace groundplan
