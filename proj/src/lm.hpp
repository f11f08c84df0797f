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
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "tokenizer.hpp"

namespace groundplan {

struct LmOptions {
  int order = 4;            // tokens of conditioning history plus one
  double add_k = 0.01;      // unigram floor
  double backoff = 0.4;     // stupid-backoff discount per dropped order
  // Plan-prefix table: counts of the next token given the plan so far with
  // argument words masked. mu blends it with the n-gram estimate.
  bool use_skeleton = true;
  double skeleton_mu = 1.0;
  // Prompt features voting for the next token at plan positions whose
  // continuation varies across the corpus. Goal n-grams vote everywhere;
  // context n-grams only inside argument lists.
  double feature_weight = 1.0;
  double context_weight = 1.0;
  double feature_mu = 2.0;
  int context_ngram = 1;  // longest raw context n-gram feature
  // Context n-grams with goal words replaced by a placeholder and tokens
  // mapped through token_classes (e.g. relation symbols to their distance
  // bin), up to this length.
  int delex_ngram = 3;
  std::map<std::string, std::string> token_classes;
  // Pointer votes inside argument lists: a context word is scored by how
  // often words in the same delexicalized neighbourhood were the answer.
  double pointer_weight = 1.0;
  double pointer_alpha = 0.5;
};

// Count model over token sequences. Immutable after training; logits() is a
// pure function of the history.
class SequenceModel {
 public:
  // Throws kInvalidArgument for an empty corpus or order < 1.
  static SequenceModel train(const std::vector<std::string>& corpus, const Tokenizer& tokenizer,
                             const LmOptions& options = {});

  const Tokenizer& tokenizer() const { return tokenizer_; }
  const LmOptions& options() const { return options_; }
  std::size_t vocab_size() const { return tokenizer_.size(); }

  // One finite score per vocabulary entry.
  std::vector<double> logits(const std::vector<int>& history) const;

  // Sum over positions t >= start of log softmax(logits(x[0..t)))[x_t], in
  // one pass that shares prompt preprocessing.
  double sequence_log_prob(const std::vector<int>& tokens, std::size_t start = 1) const;

  void save(const std::string& path) const;
  static SequenceModel load(const std::string& path);  // throws kIo / kParse
  std::string serialize() const;
  static SequenceModel deserialize(std::string_view bytes);

  // Cached prompt-side state for incremental scoring.
  struct Session;
  // logits() for a history the session has advanced over.
  std::vector<double> logits_with(const std::vector<int>& history, const Session& session) const {
    return score(history, session);
  }

 private:
  struct Entry {
    std::uint32_t total = 0;
    std::vector<std::pair<std::int32_t, std::uint32_t>> next;  // sorted by token id
  };
  using Table = std::unordered_map<std::uint64_t, Entry>;

  friend struct Session;
  std::vector<double> score(const std::vector<int>& history, const Session& session) const;
  static void bump(Table& t, std::uint64_t key, int token);

  Tokenizer tokenizer_;
  LmOptions options_;
  std::vector<std::uint32_t> unigram_;
  std::uint64_t total_tokens_ = 0;
  Table ngrams_;    // keyed by (context length, context ids)
  Table skeleton_;  // keyed by masked plan prefix
  Table features_;  // keyed by (feature, masked plan prefix)
  // (hits, occurrences) keyed by (neighbourhood pattern, masked plan prefix)
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> pointer_;
};

// Prompt features and plan-prefix tracking for one sequence.
struct SequenceModel::Session {
  const SequenceModel* model = nullptr;
  std::size_t prompt_end = 0;  // index just past <BOS>; 0 when none
  std::vector<std::uint64_t> goal_features;
  std::vector<std::uint64_t> context_features;
  // Context words as bare-token ids with their neighbourhood patterns.
  std::vector<std::pair<int, std::vector<std::uint64_t>>> pointer_candidates;
  // Masked plan prefix hash for history[0..scanned).
  std::size_t scanned = 0;
  std::uint64_t skeleton = 0;
  bool in_args = false;
  bool finished = false;

  Session(const SequenceModel& m, const std::vector<int>& history);
  // Consumes history[scanned..upto).
  void advance(const std::vector<int>& history, std::size_t upto);
  void advance(const std::vector<int>& history) { advance(history, history.size()); }
};

std::vector<double> softmax(const std::vector<double>& scores);

struct DecodingStrategy {
  enum class Kind { kGreedy, kSampled };
  Kind kind = Kind::kGreedy;
  int k = 10;
  double p = 0.9;
  std::uint64_t seed = 0;

  static DecodingStrategy greedy() { return {}; }
  static DecodingStrategy sampled(int k, double p, std::uint64_t seed) { return {Kind::kSampled, k, p, seed}; }
};

// Highest-probability ids, at most k, cut to the shortest descending prefix
// whose mass reaches p. Ties order by lower id.
std::vector<int> candidate_set(const std::vector<double>& dist, int k, double p);
// Greedy: argmax with lowest-id tie break. Sampled: draw from the
// renormalized candidate set. Throws kInvalidArgument for k < 1 or p
// outside [0, 1].
int select_next(const std::vector<double>& dist, const DecodingStrategy& strategy, Rng& rng);

// Prompt followed by generated tokens, stopping after an end token or at
// max_len tokens in total. Throws kUnknownToken for unregistered prompt
// pieces and kInvalidArgument when max_len is below the prompt length.
std::string generate(const SequenceModel& model, std::string_view prompt, const DecodingStrategy& strategy,
                     std::size_t max_len = 1024);

}  // namespace groundplan
