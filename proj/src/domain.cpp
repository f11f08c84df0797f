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

#include "domain.hpp"

#include <sstream>

#include "common.hpp"

namespace groundplan {

extern const char* const kBuiltinDomainKnowledge;  // generated from data/

namespace {

const std::vector<RoomKind> kRooms = {RoomKind::kKitchen, RoomKind::kBathroom,
                                      RoomKind::kBedroom, RoomKind::kLivingroom};

[[noreturn]] void bad_line(int line_no, const std::string& msg) {
  fail(ErrorCode::kParse, "domain knowledge line " + std::to_string(line_no) + ": " + msg);
}

// Splits "head ... : a b c" into the tokens before and after the colon.
std::pair<std::vector<std::string>, std::vector<std::string>> split_colon(
    const std::vector<std::string>& tokens) {
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  bool after = false;
  for (const auto& t : tokens) {
    if (t == ":") {
      after = true;
      continue;
    }
    (after ? out.second : out.first).push_back(t);
  }
  return out;
}

}  // namespace

std::string_view room_name(RoomKind kind) {
  switch (kind) {
    case RoomKind::kKitchen: return "kitchen";
    case RoomKind::kBathroom: return "bathroom";
    case RoomKind::kBedroom: return "bedroom";
    case RoomKind::kLivingroom: return "livingroom";
  }
  return "kitchen";
}

std::string_view room_display_name(RoomKind kind) {
  switch (kind) {
    case RoomKind::kKitchen: return "Kitchen";
    case RoomKind::kBathroom: return "Bathroom";
    case RoomKind::kBedroom: return "Bedroom";
    case RoomKind::kLivingroom: return "Livingroom";
  }
  return "Kitchen";
}

std::optional<RoomKind> parse_room(std::string_view name) {
  for (RoomKind k : kRooms)
    if (room_name(k) == name || room_display_name(k) == name) return k;
  return std::nullopt;
}

const std::vector<RoomKind>& all_rooms() { return kRooms; }

const DomainKnowledge& DomainKnowledge::builtin() {
  static const DomainKnowledge dk = parse(kBuiltinDomainKnowledge);
  return dk;
}

DomainKnowledge DomainKnowledge::load(const std::string& path) { return parse(read_file(path)); }

DomainKnowledge DomainKnowledge::parse(std::string_view text) {
  DomainKnowledge dk;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "version") {
      if (tok.size() != 2) bad_line(line_no, "version takes one value");
      dk.version_ = std::stoi(tok[1]);
    } else if (kind == "category") {
      if (tok.size() < 3) bad_line(line_no, "category needs name and height");
      CategoryInfo info;
      info.name = tok[1];
      info.height = std::stod(tok[2]);
      for (std::size_t i = 3; i < tok.size(); ++i) {
        const auto& f = tok[i];
        if (f == "pickupable") info.caps.pickupable = true;
        else if (f == "receptacle") info.caps.receptacle = true;
        else if (f == "openable") info.caps.openable = true;
        else if (f == "toggleable") info.caps.toggleable = true;
        else if (f == "sliceable") info.caps.sliceable = true;
        else bad_line(line_no, "unknown capability " + f);
      }
      dk.categories_[info.name] = info;
    } else if (kind == "contains") {
      auto [head, items] = split_colon(tok);
      if (head.size() != 2) bad_line(line_no, "contains <receptacle> : items");
      dk.contains_[head[1]].insert(items.begin(), items.end());
    } else if (kind == "room") {
      auto [head, items] = split_colon(tok);
      if (head.size() != 3) bad_line(line_no, "room <kind> <list> : items");
      auto room = parse_room(head[1]);
      if (!room) bad_line(line_no, "unknown room " + head[1]);
      auto& inv = dk.rooms_[*room];
      if (head[2] == "required") inv.required = items;
      else if (head[2] == "optional") inv.optional = items;
      else if (head[2] == "items") inv.items = items;
      else bad_line(line_no, "unknown room list " + head[2]);
    } else if (kind == "alias") {
      if (tok.size() != 3) bad_line(line_no, "alias <surface> <category>");
      dk.alias_to_category_[tok[1]] = tok[2];
      dk.category_to_surface_[tok[2]] = tok[1];
    } else if (kind == "appliance") {
      if (tok.size() != 3) bad_line(line_no, "appliance <category> <effect>");
      ApplianceEffect e;
      if (tok[2] == "heat") e = ApplianceEffect::kHeat;
      else if (tok[2] == "cool") e = ApplianceEffect::kCool;
      else if (tok[2] == "clean") e = ApplianceEffect::kClean;
      else bad_line(line_no, "unknown appliance effect " + tok[2]);
      dk.appliances_[tok[1]] = e;
    } else if (kind == "tool") {
      if (tok.size() != 3 || tok[1] != "slice") bad_line(line_no, "tool slice <category>");
      dk.slice_tool_ = tok[2];
    } else if (kind == "task") {
      auto [head, items] = split_colon(tok);
      if (head.size() != 2) bad_line(line_no, "task <family> : items");
      dk.task_targets_[head[1]] = items;
    } else {
      bad_line(line_no, "unknown record " + kind);
    }
  }
  if (dk.version_ != 1) fail(ErrorCode::kParse, "unsupported domain knowledge version");

  auto check = [&](const std::string& name, const std::string& where) {
    if (!dk.categories_.count(name))
      fail(ErrorCode::kParse, "domain knowledge: unknown category '" + name + "' in " + where);
  };
  for (const auto& [r, items] : dk.contains_) {
    check(r, "contains");
    for (const auto& i : items) check(i, "contains " + r);
  }
  for (const auto& [room, inv] : dk.rooms_) {
    for (const auto* list : {&inv.required, &inv.optional, &inv.items})
      for (const auto& c : *list) check(c, "room " + std::string(room_name(room)));
  }
  for (const auto& [a, c] : dk.alias_to_category_) check(c, "alias " + a);
  for (const auto& [c, e] : dk.appliances_) check(c, "appliance");
  for (const auto& [f, items] : dk.task_targets_)
    for (const auto& c : items) check(c, "task " + f);
  if (!dk.slice_tool_.empty()) check(dk.slice_tool_, "tool");
  return dk;
}

bool DomainKnowledge::has_category(std::string_view name) const {
  return categories_.find(name) != categories_.end();
}

const CategoryInfo& DomainKnowledge::category(std::string_view name) const {
  auto it = categories_.find(name);
  if (it == categories_.end()) fail(ErrorCode::kNotFound, "unknown category '" + std::string(name) + "'");
  return it->second;
}

std::string DomainKnowledge::canonical(std::string_view name) const {
  auto it = alias_to_category_.find(name);
  return it == alias_to_category_.end() ? std::string(name) : it->second;
}

std::string DomainKnowledge::surface(std::string_view category) const {
  auto it = category_to_surface_.find(category);
  return it == category_to_surface_.end() ? std::string(category) : it->second;
}

bool DomainKnowledge::compatible(std::string_view receptacle, std::string_view item) const {
  auto it = contains_.find(receptacle);
  return it != contains_.end() && it->second.count(std::string(item)) > 0;
}

const RoomInventory& DomainKnowledge::room_inventory(RoomKind kind) const {
  static const RoomInventory empty;
  auto it = rooms_.find(kind);
  return it == rooms_.end() ? empty : it->second;
}

std::optional<ApplianceEffect> DomainKnowledge::appliance_effect(std::string_view category) const {
  auto it = appliances_.find(category);
  if (it == appliances_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> DomainKnowledge::appliance_for(ApplianceEffect effect) const {
  for (const auto& [c, e] : appliances_)
    if (e == effect) return c;
  return std::nullopt;
}

const std::vector<std::string>& DomainKnowledge::task_targets(std::string_view family) const {
  static const std::vector<std::string> empty;
  auto it = task_targets_.find(family);
  return it == task_targets_.end() ? empty : it->second;
}

std::vector<std::string> DomainKnowledge::lexicon() const {
  std::vector<std::string> out;
  for (const auto& [name, info] : categories_) out.push_back(name);
  for (const auto& [alias, c] : alias_to_category_) out.push_back(alias);
  return out;
}

}  // namespace groundplan
