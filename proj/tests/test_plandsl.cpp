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
#include "common.hpp"
#include "doctest.h"
#include "plandsl.hpp"

using namespace groundplan;

namespace {

const char* kWords[] = {"apple", "sink", "countertop", "soap", "fridge", "drawer", "mug", "knife"};

Plan random_plan(Rng& rng) {
  Plan p;
  int n = rng.range(0, 10);
  for (int i = 0; i < n; ++i) {
    auto a = kAllActions[rng.index(kAllActions.size())];
    std::string x = kWords[rng.index(8)], y = kWords[rng.index(8)];
    p.steps.push_back(make_step(a, x, arity(a) == 2 ? y : std::string{}));
  }
  return p;
}

}  // namespace

TEST_CASE("serialize then parse is the identity") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    Plan p = random_plan(rng);
    auto r = parse_plan(serialize_plan(p));
    REQUIRE(r.ok());
    CHECK(r.plan == p);
  }
}

TEST_CASE("serialized form") {
  Plan p{{make_step(HighLevelAction::kGotoLocation, "countertop"), make_step(HighLevelAction::kPutObject, "soap", "sink")}};
  CHECK(serialize_plan(p) == "0.GotoLocation(countertop) 1.PutObject(soap,sink)");
  auto semi = parse_plan("GotoLocation(countertop); PutObject(soap, sink)");
  REQUIRE(semi.ok());
  CHECK(semi.plan == p);
}

TEST_CASE("parse errors are classified") {
  auto unknown = parse_plan("0.FlyObject(apple)");
  REQUIRE(unknown.error);
  CHECK(unknown.error->kind == ParseError::Kind::kUnknownAction);
  auto arity_err = parse_plan("0.PutObject(apple)");
  REQUIRE(arity_err.error);
  CHECK(arity_err.error->kind == ParseError::Kind::kBadArity);
  auto trunc = parse_plan("0.GotoLocation(sink) 1.PickupObject(app");
  REQUIRE(trunc.error);
  CHECK(trunc.error->kind == ParseError::Kind::kTruncated);
  CHECK(trunc.plan.steps.size() == 1);
}

TEST_CASE("parser survives fuzz input") {
  Rng rng(7);
  const std::string alphabet = "0123456789.,;() \tabcGotoLocationPutObjectPickup<>BOSEOS";
  std::string base = serialize_plan(random_plan(rng));
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    if (i % 2 == 0) {
      int n = rng.range(0, 60);
      for (int k = 0; k < n; ++k) s.push_back(rng.chance(0.1) ? static_cast<char>(rng.range(0, 255)) : alphabet[rng.index(alphabet.size())]);
    } else {
      s = base;
      int edits = rng.range(1, 4);
      for (int k = 0; k < edits && !s.empty(); ++k) {
        std::size_t pos = rng.index(s.size());
        switch (rng.range(0, 2)) {
          case 0: s.erase(pos, 1); break;
          case 1: s.insert(pos, 1, alphabet[rng.index(alphabet.size())]); break;
          default: s = s.substr(0, pos); break;
        }
      }
    }
    auto r = parse_plan(s);
    if (r.error) CHECK(r.error->position <= s.size());
    (void)extract_between_markers(s);
  }
}

TEST_CASE("samples and markers") {
  Sample s{"  Put the  soap into the sink", std::string("fnk sink\nhml soap"),
           Plan{{make_step(HighLevelAction::kPickupObject, "soap")}}};
  std::string text = serialize_sample(s);
  CHECK(text == "Put the soap into the sink: <SEP> fnk sink hml soap <BOS> 0.PickupObject(soap) <EOS>");
  Sample back = parse_sample(text);
  CHECK(back.goal == "Put the soap into the sink:");
  CHECK(back.context == std::optional<std::string>("fnk sink hml soap"));
  CHECK(back.plan == s.plan);
  CHECK(serialize_prompt("Go:", std::nullopt) == "Go: <BOS>");
  CHECK(normalize_goal("a  b::") == "a b:");
  auto ex = extract_between_markers("x <BOS> 0.GotoLocation(sink) <EOS> junk");
  CHECK(ex.status == Extraction::Status::kOk);
  CHECK(ex.plan_text == "0.GotoLocation(sink)");
  CHECK(extract_between_markers("x <BOS> 0.GotoLocation(sink)").truncated());
  CHECK(extract_between_markers("nothing").status == Extraction::Status::kNoBeginMarker);
  CHECK_THROWS_AS(parse_sample("no markers"), Error);
  for (auto a : kAllActions) CHECK(parse_action_name(action_name(a)) == a);
}
