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

#include "graph2nl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "common.hpp"

namespace groundplan {

namespace {

struct DistanceRow {
  double above;  // lower bound, exclusive
  DistanceBin bin;
  const char* word;
  char symbol;
};

// Evaluated top-down, first match wins; "in" is the fallthrough.
constexpr DistanceRow kDistanceRows[] = {
    {5.0, DistanceBin::kDistant, "distant", 'a'}, {4.0, DistanceBin::kFar, "far", 'b'},
    {3.0, DistanceBin::kReachable, "reachable", 'c'}, {2.0, DistanceBin::kNear, "near", 'd'},
    {1.0, DistanceBin::kClose, "close", 'e'},     {0.5, DistanceBin::kCloser, "closer", 'f'},
    {0.1, DistanceBin::kNext, "next", 'g'},
};

constexpr const char* kYawWords[] = {"right", "back", "left", "front"};
constexpr char kYawSymbols[] = {'i', 'j', 'k', 'l'};
constexpr const char* kPitchWords[] = {"above", "below"};
constexpr char kPitchSymbols[] = {'m', 'n'};

}  // namespace

std::string_view distance_word(DistanceBin b) {
  if (b == DistanceBin::kIn) return "in";
  return kDistanceRows[static_cast<int>(b)].word;
}
char distance_symbol(DistanceBin b) {
  if (b == DistanceBin::kIn) return 'h';
  return kDistanceRows[static_cast<int>(b)].symbol;
}
std::string_view yaw_word(YawBin b) { return kYawWords[static_cast<int>(b)]; }
char yaw_symbol(YawBin b) { return kYawSymbols[static_cast<int>(b)]; }
std::string_view pitch_word(PitchBin b) { return kPitchWords[static_cast<int>(b)]; }
char pitch_symbol(PitchBin b) { return kPitchSymbols[static_cast<int>(b)]; }

GeoRelation map_relation(double distance, double yaw, double pitch) {
  if (!(distance >= 0) || !std::isfinite(distance))
    fail(ErrorCode::kInvalidArgument, "distance must be finite and non-negative");
  if (!(yaw >= 0 && yaw < 360)) fail(ErrorCode::kInvalidArgument, "yaw must lie in [0, 360)");
  if (!(pitch >= -90 && pitch <= 90)) fail(ErrorCode::kInvalidArgument, "pitch must lie in [-90, 90]");
  GeoRelation r;
  r.distance = DistanceBin::kIn;
  for (const auto& row : kDistanceRows) {
    if (distance > row.above) {
      r.distance = row.bin;
      break;
    }
  }
  if (yaw >= 45 && yaw < 135) r.yaw = YawBin::kRight;
  else if (yaw >= 135 && yaw < 225) r.yaw = YawBin::kBack;
  else if (yaw >= 225 && yaw < 315) r.yaw = YawBin::kLeft;
  else r.yaw = YawBin::kFront;
  r.pitch = pitch >= 0 ? PitchBin::kAbove : PitchBin::kBelow;
  return r;
}

std::string relation_to_text(const GeoRelation& r, bool condensed) {
  if (condensed) return {distance_symbol(r.distance), pitch_symbol(r.pitch), yaw_symbol(r.yaw)};
  std::string out(distance_word(r.distance));
  out += ' ';
  out += pitch_word(r.pitch);
  out += ' ';
  out += yaw_word(r.yaw);
  return out;
}

std::vector<GeoRelation> all_relations() {
  std::vector<GeoRelation> out;
  for (int d = 0; d < 8; ++d)
    for (int p = 0; p < 2; ++p)
      for (int y = 0; y < 4; ++y)
        out.push_back({static_cast<DistanceBin>(d), static_cast<PitchBin>(p), static_cast<YawBin>(y)});
  return out;
}

std::vector<std::string> condensed_symbols() {
  std::vector<std::string> out;
  for (const auto& r : all_relations()) out.push_back(relation_to_text(r, true));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<GeoRelation> parse_relation(std::string_view text) {
  auto words = split_ws(text);
  for (const auto& r : all_relations()) {
    if (words.size() == 1 && words[0] == relation_to_text(r, true)) return r;
    if (words.size() == 3 && words[0] == distance_word(r.distance) &&
        words[1] == pitch_word(r.pitch) && words[2] == yaw_word(r.yaw))
      return r;
  }
  return std::nullopt;
}

std::string describe_target(const SceneGraph& g, std::string_view target_category, int depth,
                            bool condensed, const DomainKnowledge& dk) {
  if (depth < 1) fail(ErrorCode::kInvalidArgument, "depth must be at least 1");
  std::string target = dk.canonical(target_category);
  bool present = std::any_of(g.nodes.begin() + 1, g.nodes.end(),
                             [&](const GraphNode& n) { return n.category == target; });
  if (!present) fail(ErrorCode::kNotFound, "target '" + std::string(target_category) + "' is not in the scene graph");

  std::vector<std::vector<int>> out_edges(g.nodes.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    out_edges[static_cast<std::size_t>(g.edges[i].from)].push_back(static_cast<int>(i));

  struct Line {
    double cost;
    std::vector<std::string> names;
    std::string text;
  };
  std::vector<Line> lines;
  std::vector<int> path_edges;
  std::vector<char> on_path(g.nodes.size(), 0);

  auto emit = [&]() {
    Line line{0.0, {}, "-"};
    for (int e : path_edges) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      const auto& to = g.nodes[static_cast<std::size_t>(edge.to)];
      line.cost += edge.attr.distance;
      line.names.push_back(to.category);
      line.text += " " + relation_to_text(map_relation(edge.attr.distance, edge.attr.yaw, edge.attr.pitch), condensed);
      line.text += " " + to.category;
    }
    lines.push_back(std::move(line));
  };

  auto dfs = [&](auto&& self, int node) -> void {
    if (static_cast<int>(path_edges.size()) == depth) return;
    for (int e : out_edges[static_cast<std::size_t>(node)]) {
      int next = g.edges[static_cast<std::size_t>(e)].to;
      if (on_path[static_cast<std::size_t>(next)]) continue;
      path_edges.push_back(e);
      on_path[static_cast<std::size_t>(next)] = 1;
      if (g.nodes[static_cast<std::size_t>(next)].category == target) emit();
      else self(self, next);
      on_path[static_cast<std::size_t>(next)] = 0;
      path_edges.pop_back();
    }
  };
  on_path[SceneGraph::kAgent] = 1;
  dfs(dfs, SceneGraph::kAgent);

  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::tie(a.cost, a.names, a.text) < std::tie(b.cost, b.names, b.text);
  });
  std::string out = "[" + std::string(room_display_name(g.room)) + "=";
  for (const auto& l : lines) out += "\n" + l.text;
  out += "]";
  return out;
}

std::string_view context_variant_name(ContextVariant v) {
  switch (v) {
    case ContextVariant::kNone: return "none";
    case ContextVariant::kSceneKnowledge: return "scene_knowledge";
    case ContextVariant::kSceneGraph: return "scene_graph";
    case ContextVariant::kFullContext: return "full_context";
    case ContextVariant::kFirstStepHint: return "first_step_hint";
  }
  return "none";
}

std::optional<ContextVariant> parse_context_variant(std::string_view name) {
  for (auto v : kAllContextVariants)
    if (context_variant_name(v) == name) return v;
  return std::nullopt;
}

std::string describe_step(const PlanStep& step) {
  const std::string a0 = step.args.empty() ? "" : step.args[0];
  const std::string a1 = step.args.size() > 1 ? step.args[1] : "";
  switch (step.action) {
    case HighLevelAction::kGotoLocation: return "walk to the " + a0;
    case HighLevelAction::kPickupObject: return "pick up the " + a0;
    case HighLevelAction::kPutObject: return "put the " + a0 + " in the " + a1;
    case HighLevelAction::kCoolObject: return "cool the " + a0;
    case HighLevelAction::kHeatObject: return "heat the " + a0;
    case HighLevelAction::kCleanObject: return "clean the " + a0;
    case HighLevelAction::kSliceObject: return "slice the " + a0;
    case HighLevelAction::kToggleObject: return "turn on the " + a0;
  }
  return "";
}

std::string emit_context(ContextVariant variant, const WorldState& state, const TaskSpec& task,
                         const Plan* gold, const DomainKnowledge& dk, const ContextOptions& options) {
  auto graph = [&]() { return connect_agent(infuse_domain_knowledge(build_graph(state), dk), &dk); };
  switch (variant) {
    case ContextVariant::kNone: return "";
    case ContextVariant::kSceneKnowledge: {
      std::set<std::string> cats;
      for (const auto& o : state.objects) cats.insert(o.category);
      return join({cats.begin(), cats.end()}, " ");
    }
    case ContextVariant::kSceneGraph:
      return describe_target(graph(), task.target, options.depth, options.condensed, dk);
    case ContextVariant::kFullContext: {
      SceneGraph g = graph();
      std::set<std::string> cats;
      for (const auto& o : state.objects)
        if (o.flags.pickupable) cats.insert(o.category);
      std::vector<std::string> parts;
      for (const auto& c : cats) parts.push_back(describe_target(g, c, options.depth, options.condensed, dk));
      return join(parts, "\n");
    }
    case ContextVariant::kFirstStepHint:
      if (!gold) fail(ErrorCode::kInvalidArgument, "first_step_hint context needs the gold plan");
      if (gold->steps.empty()) return "";
      return describe_step(gold->steps.front());
  }
  return "";
}

}  // namespace groundplan
