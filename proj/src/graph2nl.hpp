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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domain.hpp"
#include "plandsl.hpp"
#include "scenegraph.hpp"
#include "task.hpp"
#include "world.hpp"

namespace groundplan {

// Distance bins, nearest last: distant > far > reachable > near > close >
// closer > next > in.
enum class DistanceBin { kDistant, kFar, kReachable, kNear, kClose, kCloser, kNext, kIn };
enum class YawBin { kRight, kBack, kLeft, kFront };
enum class PitchBin { kAbove, kBelow };

struct GeoRelation {
  DistanceBin distance = DistanceBin::kIn;
  PitchBin pitch = PitchBin::kAbove;
  YawBin yaw = YawBin::kFront;
  bool operator==(const GeoRelation&) const = default;
};

std::string_view distance_word(DistanceBin b);
char distance_symbol(DistanceBin b);
std::string_view yaw_word(YawBin b);
char yaw_symbol(YawBin b);
std::string_view pitch_word(PitchBin b);
char pitch_symbol(PitchBin b);

// Throws kInvalidArgument for distance < 0, yaw outside [0, 360) or pitch
// outside [-90, 90].
GeoRelation map_relation(double distance, double yaw, double pitch);

// Verbose "closer below left" or condensed "fnk" (distance, pitch, yaw).
std::string relation_to_text(const GeoRelation& r, bool condensed);
// Accepts either form.
std::optional<GeoRelation> parse_relation(std::string_view text);

// All 64 configurations.
std::vector<GeoRelation> all_relations();
// The 64 condensed three-letter symbols, sorted.
std::vector<std::string> condensed_symbols();

// "[Kitchen=\n- fnk sink dnj soapbar\n...]": every simple path of at most
// `depth` edges from the agent to a node of the target category, cheapest
// first. Throws kNotFound when the graph has no such node.
std::string describe_target(const SceneGraph& g, std::string_view target_category, int depth,
                            bool condensed = true, const DomainKnowledge& dk = DomainKnowledge::builtin());

enum class ContextVariant { kNone, kSceneKnowledge, kSceneGraph, kFullContext, kFirstStepHint };

inline constexpr ContextVariant kAllContextVariants[] = {
    ContextVariant::kNone, ContextVariant::kSceneKnowledge, ContextVariant::kSceneGraph,
    ContextVariant::kFullContext, ContextVariant::kFirstStepHint,
};

std::string_view context_variant_name(ContextVariant v);  // "none", "scene_knowledge", ...
std::optional<ContextVariant> parse_context_variant(std::string_view name);

// "walk to the countertop" for GotoLocation(countertop), and so on.
std::string describe_step(const PlanStep& step);

struct ContextOptions {
  int depth = 2;
  bool condensed = true;
};

// Context text for one sample. Newlines from describe_target are kept; the
// sample serializer collapses them. first_step_hint needs `gold` and throws
// kInvalidArgument without it.
std::string emit_context(ContextVariant variant, const WorldState& state, const TaskSpec& task,
                         const Plan* gold, const DomainKnowledge& dk = DomainKnowledge::builtin(),
                         const ContextOptions& options = {});

}  // namespace groundplan
