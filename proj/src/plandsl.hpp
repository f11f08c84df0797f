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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace groundplan {

inline constexpr std::string_view kSepMarker = "<SEP>";
inline constexpr std::string_view kBosMarker = "<BOS>";
inline constexpr std::string_view kEosMarker = "<EOS>";

enum class HighLevelAction {
  kGotoLocation,
  kPickupObject,
  kPutObject,
  kCoolObject,
  kHeatObject,
  kCleanObject,
  kSliceObject,
  kToggleObject,
};

inline constexpr std::array<HighLevelAction, 8> kAllActions = {
    HighLevelAction::kGotoLocation, HighLevelAction::kPickupObject, HighLevelAction::kPutObject,
    HighLevelAction::kCoolObject,   HighLevelAction::kHeatObject,   HighLevelAction::kCleanObject,
    HighLevelAction::kSliceObject,  HighLevelAction::kToggleObject,
};

std::string_view action_name(HighLevelAction a);
std::optional<HighLevelAction> parse_action_name(std::string_view name);
// PutObject takes (object, receptacle); everything else one symbol.
int arity(HighLevelAction a);

struct PlanStep {
  HighLevelAction action = HighLevelAction::kGotoLocation;
  std::vector<std::string> args;
  bool operator==(const PlanStep&) const = default;
};

struct Plan {
  std::vector<PlanStep> steps;
  bool operator==(const Plan&) const = default;
};

PlanStep make_step(HighLevelAction a, std::string arg0, std::string arg1 = {});

// "0.GotoLocation(countertop) 1.PickupObject(soap) ..." (numbered, single spaces).
std::string serialize_plan(const Plan& plan);
std::string to_string(const PlanStep& step);

struct Sample {
  std::string goal;
  std::optional<std::string> context;
  Plan plan;
  bool operator==(const Sample&) const = default;
};

// Goal text is trimmed and carries exactly one trailing ':'.
std::string normalize_goal(std::string_view goal);

// goal [<SEP> context] <BOS> plan <EOS>; whitespace inside goal and context
// collapses to single spaces.
std::string serialize_sample(const Sample& s);
// Text up to and including <BOS>: what the model is prompted with.
std::string serialize_prompt(std::string_view goal, const std::optional<std::string>& context);

struct ParseError {
  enum class Kind { kUnknownAction, kBadArity, kTruncated, kSyntax };
  Kind kind = Kind::kSyntax;
  std::size_t position = 0;  // byte offset into the parsed text
  std::string message;
};

std::string_view parse_error_kind_name(ParseError::Kind k);

struct PlanParse {
  Plan plan;  // steps recovered before any error
  std::optional<ParseError> error;
  bool ok() const { return !error.has_value(); }
};

// Accepts numbered steps ("0.PickupObject(soap)") and the ';'-separated form
// ("PickupObject(soap); PutObject(soap,drawer)"), or any mix of the two.
// Never throws.
PlanParse parse_plan(std::string_view text);

struct Extraction {
  enum class Status { kOk, kTruncated, kNoBeginMarker };
  Status status = Status::kOk;
  std::string plan_text;
  bool truncated() const { return status == Status::kTruncated; }
};

// Plan text between the first <BOS> and the next <EOS>.
Extraction extract_between_markers(std::string_view generated);

// Inverse of serialize_sample for dataset loading; throws kParse.
Sample parse_sample(std::string_view text);

}  // namespace groundplan
