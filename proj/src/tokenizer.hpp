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

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace groundplan {

// Word-level tokenizer in the GPT-2 manner: a token may carry one leading
// space, so decoding is plain concatenation. Markers, end-of-text and the
// unknown token are registered in bare and space-prefixed form. Other
// whitespace (newlines, repeated spaces) becomes single-character tokens.
class Tokenizer {
 public:
  static constexpr std::string_view kEndOfText = "<|endoftext|>";
  static constexpr std::string_view kUnknown = "<unk>";

  Tokenizer();  // specials only
  // Vocabulary = specials + whitespace characters + every piece of the
  // corpus + the extra words (bare and space-prefixed). Independent of corpus order.
  static Tokenizer build(const std::vector<std::string>& corpus, const std::vector<std::string>& extra_words = {});
  // Vocabulary in id order; ids [0, 10) are the specials.
  static Tokenizer from_tokens(std::vector<std::string> tokens);

  // Splits text into token strings without vocabulary lookup.
  static std::vector<std::string> pieces(std::string_view text);

  std::size_t size() const { return tokens_.size(); }
  int id(std::string_view token) const;  // -1 when not registered
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Throws kUnknownToken naming the first unregistered piece.
  std::vector<int> encode(std::string_view text) const;
  // Unregistered pieces map to <unk> (keeping their leading space).
  std::vector<int> encode_lenient(std::string_view text) const;
  std::string decode(const std::vector<int>& ids) const;

  int sep() const { return sep_; }
  int bos() const { return bos_; }
  int eos() const { return eos_; }
  int end_of_text() const { return eot_; }
  int unknown() const { return unk_; }

  // Token without its leading space.
  std::string_view bare(int id) const;
  bool is_sep(int id) const { return id == sep_ || id == sep_ + 1; }
  bool is_bos(int id) const { return id == bos_ || id == bos_ + 1; }
  bool is_stop(int id) const { return id == eos_ || id == eos_ + 1 || id == eot_ || id == eot_ + 1; }

 private:
  explicit Tokenizer(int) {}
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  int sep_ = 0, bos_ = 2, eos_ = 4, eot_ = 6, unk_ = 8;
};

}  // namespace groundplan
