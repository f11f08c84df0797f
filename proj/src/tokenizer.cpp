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
#include "tokenizer.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "common.hpp"
#include "plandsl.hpp"

namespace groundplan {

namespace {

const std::array<std::string_view, 5> kSpecials = {kSepMarker, kBosMarker, kEosMarker, Tokenizer::kEndOfText,
                                                   Tokenizer::kUnknown};

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::size_t utf8_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xe) return 3;
  if ((c >> 3) == 0x1e) return 4;
  return 1;
}

std::vector<std::string> special_tokens() {
  std::vector<std::string> out;
  for (auto s : kSpecials) {
    out.emplace_back(s);
    out.push_back(" " + std::string(s));
  }
  return out;
}

}  // namespace

Tokenizer::Tokenizer() : Tokenizer(from_tokens(special_tokens())) {}

Tokenizer Tokenizer::from_tokens(std::vector<std::string> tokens) {
  auto specials = special_tokens();
  if (tokens.size() < specials.size() || !std::equal(specials.begin(), specials.end(), tokens.begin()))
    fail(ErrorCode::kInvalidArgument, "vocabulary must start with the special tokens");
  Tokenizer t(0);
  t.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < t.tokens_.size(); ++i)
    if (!t.index_.emplace(t.tokens_[i], static_cast<int>(i)).second)
      fail(ErrorCode::kInvalidArgument, "duplicate token '" + t.tokens_[i] + "'");
  return t;
}

Tokenizer Tokenizer::build(const std::vector<std::string>& corpus, const std::vector<std::string>& extra_words) {
  std::set<std::string> rest{" ", "\t", "\n", "\v", "\f", "\r"};
  for (const auto& text : corpus)
    for (auto& p : pieces(text)) rest.insert(std::move(p));
  for (const auto& w : extra_words) {
    if (w.empty()) continue;
    rest.insert(w);
    rest.insert(" " + w);
  }
  auto tokens = special_tokens();
  for (const auto& s : tokens) rest.erase(s);
  tokens.insert(tokens.end(), rest.begin(), rest.end());
  return from_tokens(std::move(tokens));
}

std::vector<std::string> Tokenizer::pieces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::string prefix;
    char c = text[i];
    if (c == ' ' && i + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[i + 1]))) {
      prefix = " ";
      ++i;
      c = text[i];
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    std::size_t start = i;
    bool special = false;
    if (c == '<') {
      for (auto s : kSpecials) {
        if (text.substr(i, s.size()) == s) {
          i += s.size();
          special = true;
          break;
        }
      }
    }
    if (!special) {
      if (is_word_char(static_cast<unsigned char>(c))) {
        while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
      } else {
        i += std::min(utf8_length(static_cast<unsigned char>(c)), text.size() - i);
      }
    }
    out.push_back(prefix + std::string(text.substr(start, i - start)));
  }
  return out;
}

int Tokenizer::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Tokenizer::encode(std::string_view text) const {
  std::vector<int> out;
  for (const auto& p : pieces(text)) {
    int i = id(p);
    if (i < 0) fail(ErrorCode::kUnknownToken, "unknown token '" + p + "'");
    out.push_back(i);
  }
  return out;
}

std::vector<int> Tokenizer::encode_lenient(std::string_view text) const {
  std::vector<int> out;
  for (const auto& p : pieces(text)) {
    int i = id(p);
    if (i < 0) i = p[0] == ' ' ? unk_ + 1 : unk_;
    out.push_back(i);
  }
  return out;
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
  std::string out;
  for (int i : ids) {
    if (i < 0 || static_cast<std::size_t>(i) >= tokens_.size())
      fail(ErrorCode::kInvalidArgument, "token id " + std::to_string(i) + " out of range");
    out += tokens_[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string_view Tokenizer::bare(int id) const {
  std::string_view t = tokens_.at(static_cast<std::size_t>(id));
  if (t.size() > 1 && t[0] == ' ') t.remove_prefix(1);
  return t;
}

}  // namespace groundplan
