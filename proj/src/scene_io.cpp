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

// Scene file layout (one scene per file):
//
//   groundplan-scene 1
//   room kitchen
//   grid <width> <height> <cell-size>
//   interaction <range> <agent-height>
//   agent <x> <y> <N|E|S|W>
//   held <id|->
//   row <y> <width chars of '.' free / '#' blocked>     (one per row, top first)
//   object <id> <category> <x> <y> <z> <yaw> <caps> <state> <parent|->
//   end
//
// caps is "PROTS" (pickupable, receptacle, openable, toggleable, sliceable)
// and state is "chksto" (clean, hot, cold, sliced, toggled-on, open), with
// '-' for an unset bit. Reals are written with 17 significant digits so a
// parse of a serialized scene is value-identical.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "common.hpp"
#include "world.hpp"

namespace groundplan {

namespace {

constexpr int kSceneVersion = 1;
constexpr char kCapsLetters[] = "PROTS";
constexpr char kStateLetters[] = "chksto";

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorCode::kParse, "scene: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') fail(ErrorCode::kParse, "scene: bad integer '" + s + "'");
  return static_cast<int>(v);
}

char heading_letter(Heading h) { return "NESW"[static_cast<int>(h)]; }

std::string caps_string(const Capabilities& c) {
  bool bits[] = {c.pickupable, c.receptacle, c.openable, c.toggleable, c.sliceable};
  std::string s;
  for (int i = 0; i < 5; ++i) s += bits[i] ? kCapsLetters[i] : '-';
  return s;
}

std::string state_string(const ObjectState& st) {
  bool bits[] = {st.is_clean, st.is_hot, st.is_cold, st.is_sliced, st.is_toggled_on, st.is_open};
  std::string s;
  for (int i = 0; i < 6; ++i) s += bits[i] ? kStateLetters[i] : '-';
  return s;
}

template <std::size_t N>
std::array<bool, N> parse_bits(const std::string& s, const char (&letters)[N + 1], const char* what) {
  if (s.size() != N) fail(ErrorCode::kParse, std::string("scene: bad ") + what + " field '" + s + "'");
  std::array<bool, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (s[i] == letters[i]) out[i] = true;
    else if (s[i] != '-') fail(ErrorCode::kParse, std::string("scene: bad ") + what + " field '" + s + "'");
  }
  return out;
}

}  // namespace

std::string serialize_scene(const WorldState& s) {
  std::ostringstream out;
  out << "groundplan-scene " << kSceneVersion << "\n";
  out << "room " << room_name(s.room) << "\n";
  out << "grid " << s.config.width << " " << s.config.height << " " << real(s.config.cell_size) << "\n";
  out << "interaction " << real(s.config.interaction_range) << " " << real(s.config.agent_height) << "\n";
  out << "agent " << s.agent.cell.x << " " << s.agent.cell.y << " " << heading_letter(s.agent.facing) << "\n";
  out << "held " << (s.held ? *s.held : "-") << "\n";
  for (int y = s.config.height - 1; y >= 0; --y) {
    out << "row " << y << " ";
    for (int x = 0; x < s.config.width; ++x) out << (s.is_blocked({x, y}) ? '#' : '.');
    out << "\n";
  }
  for (const auto& o : s.objects) {
    out << "object " << o.id << " " << o.category << " " << real(o.position.x) << " "
        << real(o.position.y) << " " << real(o.position.z) << " " << real(o.rotation) << " "
        << caps_string(o.flags) << " " << state_string(o.state) << " "
        << (o.parent ? *o.parent : "-") << "\n";
  }
  out << "end\n";
  return out.str();
}

WorldState parse_scene(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      auto tok = split_ws(line);
      if (!tok.empty()) return tok;
    }
    return {};
  };
  auto expect = [&](const std::vector<std::string>& tok, const char* key, std::size_t n) {
    if (tok.empty() || tok[0] != key || tok.size() != n)
      fail(ErrorCode::kParse, "scene line " + std::to_string(line_no) + ": expected '" + key + "' record");
  };

  auto tok = next();
  expect(tok, "groundplan-scene", 2);
  if (parse_int(tok[1]) != kSceneVersion)
    fail(ErrorCode::kParse, "scene: unsupported schema version " + tok[1]);
  tok = next();
  expect(tok, "room", 2);
  auto room = parse_room(tok[1]);
  if (!room) fail(ErrorCode::kParse, "scene: unknown room " + tok[1]);
  WorldConfig cfg;
  tok = next();
  expect(tok, "grid", 4);
  cfg.width = parse_int(tok[1]);
  cfg.height = parse_int(tok[2]);
  cfg.cell_size = parse_real(tok[3]);
  tok = next();
  expect(tok, "interaction", 3);
  cfg.interaction_range = parse_real(tok[1]);
  cfg.agent_height = parse_real(tok[2]);
  WorldState s = WorldState::empty(*room, cfg);

  tok = next();
  expect(tok, "agent", 4);
  s.agent.cell = {parse_int(tok[1]), parse_int(tok[2])};
  const std::string headings = "NESW";
  auto h = headings.find(tok[3]);
  if (tok[3].size() != 1 || h == std::string::npos) fail(ErrorCode::kParse, "scene: bad heading");
  s.agent.facing = static_cast<Heading>(h);
  tok = next();
  expect(tok, "held", 2);
  if (tok[1] != "-") s.held = tok[1];

  for (int i = 0; i < cfg.height; ++i) {
    tok = next();
    expect(tok, "row", 3);
    int y = parse_int(tok[1]);
    if (y < 0 || y >= cfg.height || static_cast<int>(tok[2].size()) != cfg.width)
      fail(ErrorCode::kParse, "scene: bad row record at line " + std::to_string(line_no));
    for (int x = 0; x < cfg.width; ++x) s.set_blocked({x, y}, tok[2][static_cast<std::size_t>(x)] == '#');
  }

  while (true) {
    tok = next();
    if (tok.empty()) fail(ErrorCode::kParse, "scene: missing 'end'");
    if (tok[0] == "end") break;
    expect(tok, "object", 10);
    ObjectInstance o;
    o.id = tok[1];
    o.category = tok[2];
    o.position = {parse_real(tok[3]), parse_real(tok[4]), parse_real(tok[5])};
    o.rotation = parse_real(tok[6]);
    auto caps = parse_bits<5>(tok[7], kCapsLetters, "caps");
    o.flags = {caps[0], caps[1], caps[2], caps[3], caps[4]};
    auto st = parse_bits<6>(tok[8], kStateLetters, "state");
    o.state = {st[0], st[1], st[2], st[3], st[4], st[5]};
    if (tok[9] != "-") o.parent = tok[9];
    if (s.find(o.id)) fail(ErrorCode::kParse, "scene: duplicate object id " + o.id);
    s.objects.push_back(std::move(o));
  }

  for (const auto& o : s.objects)
    if (o.parent && !s.find(*o.parent)) fail(ErrorCode::kParse, "scene: unknown parent " + *o.parent);
  for (const auto& o : s.objects) {
    const ObjectInstance* p = &o;
    for (std::size_t hops = 0; p->parent; ++hops) {
      if (hops > s.objects.size()) fail(ErrorCode::kParse, "scene: containment cycle at " + o.id);
      p = s.find(*p->parent);
    }
  }
  if (s.held && !s.find(*s.held)) fail(ErrorCode::kParse, "scene: unknown held object");
  if (s.is_blocked(s.agent.cell)) fail(ErrorCode::kParse, "scene: agent on a blocked cell");
  return s;
}

}  // namespace groundplan
