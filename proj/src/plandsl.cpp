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

#include "plandsl.hpp"

#include <cctype>

#include "common.hpp"

namespace groundplan {

std::string_view action_name(HighLevelAction a) {
  switch (a) {
    case HighLevelAction::kGotoLocation: return "GotoLocation";
    case HighLevelAction::kPickupObject: return "PickupObject";
    case HighLevelAction::kPutObject: return "PutObject";
    case HighLevelAction::kCoolObject: return "CoolObject";
    case HighLevelAction::kHeatObject: return "HeatObject";
    case HighLevelAction::kCleanObject: return "CleanObject";
    case HighLevelAction::kSliceObject: return "SliceObject";
    case HighLevelAction::kToggleObject: return "ToggleObject";
  }
  return "?";
}

std::optional<HighLevelAction> parse_action_name(std::string_view name) {
  for (auto a : kAllActions)
    if (action_name(a) == name) return a;
  return std::nullopt;
}

int arity(HighLevelAction a) { return a == HighLevelAction::kPutObject ? 2 : 1; }

PlanStep make_step(HighLevelAction a, std::string arg0, std::string arg1) {
  PlanStep s{a, {std::move(arg0)}};
  if (!arg1.empty()) s.args.push_back(std::move(arg1));
  return s;
}

std::string to_string(const PlanStep& step) {
  return std::string(action_name(step.action)) + "(" + join(step.args, ",") + ")";
}

std::string serialize_plan(const Plan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(i) + "." + to_string(plan.steps[i]);
  }
  return out;
}

std::string normalize_goal(std::string_view goal) {
  std::string g = collapse_ws(goal);
  while (!g.empty() && g.back() == ':') g.pop_back();
  g = trim(g);
  return g + ":";
}

std::string serialize_prompt(std::string_view goal, const std::optional<std::string>& context) {
  std::string out = normalize_goal(goal);
  if (context) {
    out += " ";
    out += kSepMarker;
    std::string c = collapse_ws(*context);
    if (!c.empty()) out += " " + c;
  }
  out += " ";
  out += kBosMarker;
  return out;
}

std::string serialize_sample(const Sample& s) {
  std::string out = serialize_prompt(s.goal, s.context);
  std::string body = serialize_plan(s.plan);
  if (!body.empty()) out += " " + body;
  out += " ";
  out += kEosMarker;
  return out;
}

std::string_view parse_error_kind_name(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::kUnknownAction: return "UnknownAction";
    case ParseError::Kind::kBadArity: return "BadArity";
    case ParseError::Kind::kTruncated: return "Truncated";
    case ParseError::Kind::kSyntax: return "Syntax";
  }
  return "Syntax";
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

class PlanParser {
 public:
  explicit PlanParser(std::string_view text) : text_(text) {}

  PlanParse run() {
    PlanParse out;
    skip_separators();
    while (pos_ < text_.size()) {
      auto err = parse_step(out.plan);
      if (err) {
        out.error = std::move(err);
        return out;
      }
      std::size_t before = pos_;
      skip_separators();
      if (pos_ < text_.size() && pos_ == before) {
        out.error = ParseError{ParseError::Kind::kSyntax, pos_, "expected separator between steps"};
        return out;
      }
    }
    return out;
  }

 private:
  void skip_separators() {
    while (pos_ < text_.size() && (is_space(text_[pos_]) || text_[pos_] == ';')) ++pos_;
  }
  void skip_spaces() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::optional<ParseError> parse_step(Plan& plan) {
    // Optional "<index>." prefix.
    std::size_t p = pos_;
    while (p < text_.size() && is_digit(text_[p])) ++p;
    if (p > pos_) {
      if (p >= text_.size()) return ParseError{ParseError::Kind::kTruncated, p, "step index without action"};
      if (text_[p] != '.') return ParseError{ParseError::Kind::kSyntax, p, "expected '.' after step index"};
      pos_ = p + 1;
      skip_spaces();
    }

    std::size_t name_start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view name = text_.substr(name_start, pos_ - name_start);
    if (name.empty()) {
      if (pos_ >= text_.size()) return ParseError{ParseError::Kind::kTruncated, pos_, "missing action"};
      return ParseError{ParseError::Kind::kSyntax, pos_, "expected action name"};
    }
    auto action = parse_action_name(name);
    if (!action)
      return ParseError{ParseError::Kind::kUnknownAction, name_start,
                        "unknown action '" + std::string(name) + "'"};

    skip_spaces();
    if (pos_ >= text_.size()) return ParseError{ParseError::Kind::kTruncated, pos_, "missing '('"};
    if (text_[pos_] != '(') return ParseError{ParseError::Kind::kSyntax, pos_, "expected '('"};
    std::size_t open = pos_++;

    PlanStep step;
    step.action = *action;
    while (true) {
      skip_spaces();
      std::size_t arg_start = pos_;
      while (pos_ < text_.size() && is_symbol_char(text_[pos_])) ++pos_;
      if (pos_ >= text_.size()) return ParseError{ParseError::Kind::kTruncated, pos_, "unterminated argument list"};
      if (pos_ == arg_start) return ParseError{ParseError::Kind::kSyntax, pos_, "expected argument"};
      step.args.emplace_back(text_.substr(arg_start, pos_ - arg_start));
      skip_spaces();
      if (pos_ >= text_.size()) return ParseError{ParseError::Kind::kTruncated, pos_, "unterminated argument list"};
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      return ParseError{ParseError::Kind::kSyntax, pos_, "expected ',' or ')'"};
    }
    if (static_cast<int>(step.args.size()) != arity(step.action))
      return ParseError{ParseError::Kind::kBadArity, open,
                        std::string(action_name(step.action)) + " takes " +
                            std::to_string(arity(step.action)) + " argument(s), got " +
                            std::to_string(step.args.size())};
    plan.steps.push_back(std::move(step));
    return std::nullopt;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PlanParse parse_plan(std::string_view text) { return PlanParser(text).run(); }

Extraction extract_between_markers(std::string_view generated) {
  Extraction out;
  auto bos = generated.find(kBosMarker);
  if (bos == std::string_view::npos) {
    out.status = Extraction::Status::kNoBeginMarker;
    return out;
  }
  auto rest = generated.substr(bos + kBosMarker.size());
  auto eos = rest.find(kEosMarker);
  if (eos == std::string_view::npos) {
    out.status = Extraction::Status::kTruncated;
    out.plan_text = trim(rest);
  } else {
    out.plan_text = trim(rest.substr(0, eos));
  }
  return out;
}

Sample parse_sample(std::string_view text) {
  auto bos = text.find(kBosMarker);
  if (bos == std::string_view::npos) fail(ErrorCode::kParse, "sample has no <BOS> marker");
  std::string_view head = text.substr(0, bos);
  Sample s;
  auto sep = head.find(kSepMarker);
  if (sep == std::string_view::npos) {
    s.goal = normalize_goal(head);
  } else {
    s.goal = normalize_goal(head.substr(0, sep));
    s.context = collapse_ws(head.substr(sep + kSepMarker.size()));
  }
  auto ex = extract_between_markers(text);
  if (ex.status != Extraction::Status::kOk) fail(ErrorCode::kParse, "sample has no <EOS> marker");
  auto parsed = parse_plan(ex.plan_text);
  if (!parsed.ok())
    fail(ErrorCode::kParse, std::string(parse_error_kind_name(parsed.error->kind)) + ": " + parsed.error->message);
  s.plan = std::move(parsed.plan);
  return s;
}

}  // namespace groundplan
