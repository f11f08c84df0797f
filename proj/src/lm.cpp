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
#include "lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

namespace groundplan {

namespace {

constexpr std::int32_t kMask = -7;  // stands in for argument words in plan prefixes

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ (v + 0x9E3779B97F4A7C15ull)); }

std::uint64_t hash_text(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
  return splitmix64(h);
}

std::uint64_t ngram_key(const std::vector<int>& history, std::size_t end, std::size_t m) {
  std::uint64_t h = splitmix64(0x6e6772616dull + m);
  for (std::size_t i = end - m; i < end; ++i) h = combine(h, static_cast<std::uint64_t>(history[i]));
  return h;
}

const std::uint64_t kSkeletonSeed = splitmix64(0x736b656cull);
const std::uint64_t kAbsentPattern = splitmix64(0x616273656e74ull);

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Session

SequenceModel::Session::Session(const SequenceModel& m, const std::vector<int>& history) : model(&m) {
  const Tokenizer& tok = m.tokenizer_;
  std::size_t bos = history.size();
  for (std::size_t i = 0; i < history.size(); ++i)
    if (tok.is_bos(history[i])) {
      bos = i;
      break;
    }
  if (bos == history.size()) return;
  prompt_end = bos + 1;
  scanned = prompt_end;
  skeleton = kSkeletonSeed;

  std::vector<std::string> goal, context;
  std::vector<int> context_ids;
  bool after_sep = false;
  for (std::size_t i = 0; i < bos; ++i) {
    int t = history[i];
    if (tok.is_sep(t)) {
      after_sep = true;
      continue;
    }
    if (t < 10) continue;
    std::string_view w = tok.bare(t);
    if (!has_alnum(w)) continue;
    (after_sep ? context : goal).push_back(lower(w));
    if (after_sep) context_ids.push_back(tok.id(w));
  }
  auto add = [](std::vector<std::uint64_t>& out, const std::string& tag, const std::vector<std::string>& words, int n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= words.size(); ++i) {
      std::string f = tag;
      for (int j = 0; j < n; ++j) f += "|" + words[i + static_cast<std::size_t>(j)];
      out.push_back(hash_text(f));
    }
  };
  add(goal_features, "g1", goal, 1);
  add(goal_features, "g2", goal, 2);
  for (int n = 1; n <= m.options_.context_ngram; ++n) add(context_features, "c" + std::to_string(n), context, n);
  std::set<std::string> in_goal(goal.begin(), goal.end());
  std::vector<std::string> delex;
  delex.reserve(context.size());
  for (const auto& w : context) {
    auto it = m.options_.token_classes.find(w);
    delex.push_back(in_goal.count(w) ? "@" : it == m.options_.token_classes.end() ? w : it->second);
  }
  for (int n = 2; n <= m.options_.delex_ngram; ++n) add(context_features, "d" + std::to_string(n), delex, n);
  if (m.options_.pointer_weight != 0.0) {
    // Neighbour shapes: classes and the goal placeholder are kept, other
    // words collapse to "w".
    auto shape = [&](std::ptrdiff_t i) -> std::string {
      if (i < 0) return "^";
      if (i >= static_cast<std::ptrdiff_t>(delex.size())) return "$";
      const std::string& d = delex[static_cast<std::size_t>(i)];
      return d == context[static_cast<std::size_t>(i)] ? "w" : d;
    };
    std::map<int, std::set<std::uint64_t>> cands;
    for (std::size_t i = 0; i < context.size(); ++i) {
      int id = context_ids[i];
      if (id < 0) continue;
      auto k = static_cast<std::ptrdiff_t>(i);
      std::string l = shape(k - 1), r1 = shape(k + 1), r2 = shape(k + 2);
      auto& set = cands[id];
      set.insert(hash_text("p3|" + l + "|" + r1 + "|" + r2));
      set.insert(hash_text("p2r|" + r1 + "|" + r2));
      set.insert(hash_text("p2l|" + l + "|" + r1));
    }
    for (auto& [id, pats] : cands) pointer_candidates.emplace_back(id, std::vector<std::uint64_t>(pats.begin(), pats.end()));
  }
  for (auto* v : {&goal_features, &context_features}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
}

void SequenceModel::Session::advance(const std::vector<int>& history, std::size_t upto) {
  if (prompt_end == 0) return;
  const Tokenizer& tok = model->tokenizer_;
  for (; scanned < upto && !finished; ++scanned) {
    int t = history[scanned];
    std::string_view b = tok.bare(t);
    std::int32_t v = t;
    if (b == "(") in_args = true;
    else if (b == ")") in_args = false;
    else if (in_args && b != "," && has_alnum(b)) v = kMask;
    if (tok.is_stop(t)) finished = true;
    skeleton = combine(skeleton, static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
  }
}

// ---------------------------------------------------------------------------
// Training

void SequenceModel::bump(Table& t, std::uint64_t key, int token) {
  Entry& e = t[key];
  ++e.total;
  for (auto& [x, c] : e.next)
    if (x == token) {
      ++c;
      return;
    }
  e.next.emplace_back(token, 1);
}

SequenceModel SequenceModel::train(const std::vector<std::string>& corpus, const Tokenizer& tokenizer,
                                   const LmOptions& options) {
  if (corpus.empty()) fail(ErrorCode::kInvalidArgument, "training corpus is empty");
  if (options.order < 1) fail(ErrorCode::kInvalidArgument, "model order must be at least 1");
  if (options.add_k <= 0.0) fail(ErrorCode::kInvalidArgument, "add-k constant must be positive");
  SequenceModel m;
  m.tokenizer_ = tokenizer;
  m.options_ = options;
  m.unigram_.assign(tokenizer.size(), 0);

  std::vector<std::vector<int>> encoded;
  encoded.reserve(corpus.size());
  for (const auto& text : corpus) encoded.push_back(tokenizer.encode_lenient(text));

  const auto max_ctx = static_cast<std::size_t>(options.order - 1);
  for (const auto& seq : encoded) {
    Session s(m, seq);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      ++m.unigram_[static_cast<std::size_t>(seq[t])];
      ++m.total_tokens_;
      for (std::size_t k = 1; k <= std::min(max_ctx, t); ++k) bump(m.ngrams_, ngram_key(seq, t, k), seq[t]);
      if (s.prompt_end > 0 && t >= s.prompt_end) {
        s.advance(seq, t);
        if (!s.finished) bump(m.skeleton_, s.skeleton, seq[t]);
      }
    }
  }
  // Prompt features only where the plan prefix leaves the continuation open.
  for (const auto& seq : encoded) {
    Session s(m, seq);
    if (s.prompt_end == 0) continue;
    for (std::size_t t = s.prompt_end; t < seq.size(); ++t) {
      s.advance(seq, t);
      if (s.finished) break;
      auto it = m.skeleton_.find(s.skeleton);
      if (it == m.skeleton_.end() || it->second.next.size() < 2) continue;
      for (auto f : s.goal_features) bump(m.features_, combine(f, s.skeleton), seq[t]);
      if (!s.in_args) continue;
      for (auto f : s.context_features) bump(m.features_, combine(f, s.skeleton), seq[t]);
      bool listed = false;
      for (const auto& [id, pats] : s.pointer_candidates) {
        bool hit = id == seq[t];
        listed |= hit;
        for (auto p : pats) {
          auto& hc = m.pointer_[combine(p, s.skeleton)];
          hc.first += hit;
          ++hc.second;
        }
      }
      auto& absent = m.pointer_[combine(kAbsentPattern, s.skeleton)];
      absent.first += !listed;
      absent.second += static_cast<std::uint32_t>(m.tokenizer_.size() - s.pointer_candidates.size());
    }
  }
  for (Table* t : {&m.ngrams_, &m.skeleton_, &m.features_})
    for (auto& [k, e] : *t) std::sort(e.next.begin(), e.next.end());
  return m;
}

// ---------------------------------------------------------------------------
// Scoring

std::vector<double> SequenceModel::score(const std::vector<int>& history, const Session& session) const {
  const std::size_t V = tokenizer_.size();
  const auto max_ctx = static_cast<std::size_t>(options_.order - 1);
  std::vector<double> s(V);
  const double floor_scale = std::pow(options_.backoff, static_cast<double>(max_ctx));
  const double denom = static_cast<double>(total_tokens_) + options_.add_k * static_cast<double>(V);
  for (std::size_t x = 0; x < V; ++x) s[x] = floor_scale * (unigram_[x] + options_.add_k) / denom;
  for (std::size_t k = 1; k <= std::min(max_ctx, history.size()); ++k) {
    auto it = ngrams_.find(ngram_key(history, history.size(), k));
    if (it == ngrams_.end()) break;  // longer contexts cannot be present either
    double scale = std::pow(options_.backoff, static_cast<double>(max_ctx - k)) / it->second.total;
    for (auto [x, c] : it->second.next) s[static_cast<std::size_t>(x)] = scale * c;
  }
  double total = std::accumulate(s.begin(), s.end(), 0.0);
  for (auto& v : s) v /= total;

  if (session.prompt_end > 0 && history.size() >= session.prompt_end && !session.finished && options_.use_skeleton) {
    auto it = skeleton_.find(session.skeleton);
    if (it != skeleton_.end()) {
      const Entry& e = it->second;
      const double mu = options_.skeleton_mu;
      for (auto& v : s) v = mu * v / (e.total + mu);
      for (auto [x, c] : e.next) s[static_cast<std::size_t>(x)] += c / (e.total + mu);
      std::vector<double> out(V);
      for (std::size_t x = 0; x < V; ++x) out[x] = std::log(s[x]);
      if (e.next.size() >= 2) {
        auto vote = [&](const std::vector<std::uint64_t>& feats, double weight) {
          if (weight == 0.0) return;
          for (auto f : feats) {
            auto ft = features_.find(combine(f, session.skeleton));
            if (ft == features_.end()) continue;
            for (auto [x, c] : ft->second.next) {
              auto xi = static_cast<std::size_t>(x);
              out[xi] += weight * std::log1p(c / (options_.feature_mu * s[xi]));
            }
          }
        };
        vote(session.goal_features, options_.feature_weight);
        if (session.in_args) {
          vote(session.context_features, options_.context_weight);
          if (options_.pointer_weight != 0.0 && !session.pointer_candidates.empty()) {
            const double a = options_.pointer_alpha;
            auto rate = [&](std::uint64_t pattern) {
              auto it = pointer_.find(combine(pattern, session.skeleton));
              double hits = it == pointer_.end() ? 0.0 : it->second.first;
              double occ = it == pointer_.end() ? 0.0 : it->second.second;
              return std::log((hits + a) / (occ + 2.0 * a));
            };
            double base = rate(kAbsentPattern);
            for (const auto& [id, pats] : session.pointer_candidates) {
              double best = -1e300;
              for (auto p : pats) best = std::max(best, rate(p));
              out[static_cast<std::size_t>(id)] += options_.pointer_weight * (best - base);
            }
          }
        }
      }
      return out;
    }
  }
  for (auto& v : s) v = std::log(v);
  return s;
}

std::vector<double> SequenceModel::logits(const std::vector<int>& history) const {
  Session s(*this, history);
  s.advance(history);
  return score(history, s);
}

double SequenceModel::sequence_log_prob(const std::vector<int>& tokens, std::size_t start) const {
  Session s(*this, tokens);
  double total = 0.0;
  std::vector<int> prefix;
  prefix.reserve(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (t >= start) {
      s.advance(prefix);
      auto dist = softmax(score(prefix, s));
      total += std::log(dist[static_cast<std::size_t>(tokens[t])]);
    }
    prefix.push_back(tokens[t]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[4] = {'G', 'P', 'L', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  template <class T>
  void pod(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
  }
  void str(const std::string& s) {
    pod<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out += s;
  }
  std::string out;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <class T>
  T pod() {
    if (pos_ + sizeof(T) > in_.size()) fail(ErrorCode::kParse, "model file is truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string str() {
    auto n = pod<std::uint32_t>();
    if (pos_ + n > in_.size()) fail(ErrorCode::kParse, "model file is truncated");
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SequenceModel::serialize() const {
  Writer w;
  w.out.append(kMagic, 4);
  w.pod(kFormatVersion);
  w.pod<std::int32_t>(options_.order);
  w.pod(options_.add_k);
  w.pod(options_.backoff);
  w.pod<std::uint8_t>(options_.use_skeleton ? 1 : 0);
  w.pod(options_.skeleton_mu);
  w.pod(options_.feature_weight);
  w.pod(options_.feature_mu);
  w.pod(options_.context_weight);
  w.pod<std::int32_t>(options_.context_ngram);
  w.pod<std::int32_t>(options_.delex_ngram);
  w.pod(options_.pointer_weight);
  w.pod(options_.pointer_alpha);
  w.pod<std::uint64_t>(options_.token_classes.size());
  for (const auto& [k, v] : options_.token_classes) {
    w.str(k);
    w.str(v);
  }
  w.pod<std::uint64_t>(tokenizer_.size());
  for (const auto& t : tokenizer_.tokens()) w.str(t);
  for (auto c : unigram_) w.pod(c);
  w.pod(total_tokens_);
  for (const Table* t : {&ngrams_, &skeleton_, &features_}) {
    std::vector<std::uint64_t> keys;
    keys.reserve(t->size());
    for (const auto& [k, e] : *t) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    w.pod<std::uint64_t>(keys.size());
    for (auto k : keys) {
      const Entry& e = t->at(k);
      w.pod(k);
      w.pod(e.total);
      w.pod<std::uint32_t>(static_cast<std::uint32_t>(e.next.size()));
      for (auto [x, c] : e.next) {
        w.pod(x);
        w.pod(c);
      }
    }
  }
  std::vector<std::uint64_t> pkeys;
  for (const auto& [k, v] : pointer_) pkeys.push_back(k);
  std::sort(pkeys.begin(), pkeys.end());
  w.pod<std::uint64_t>(pkeys.size());
  for (auto k : pkeys) {
    w.pod(k);
    w.pod(pointer_.at(k).first);
    w.pod(pointer_.at(k).second);
  }
  return std::move(w.out);
}

SequenceModel SequenceModel::deserialize(std::string_view bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorCode::kParse, "not a model file");
  Reader r(bytes.substr(4));
  auto version = r.pod<std::uint32_t>();
  if (version != kFormatVersion) fail(ErrorCode::kParse, "unsupported model format version " + std::to_string(version));
  SequenceModel m;
  m.options_.order = r.pod<std::int32_t>();
  m.options_.add_k = r.pod<double>();
  m.options_.backoff = r.pod<double>();
  m.options_.use_skeleton = r.pod<std::uint8_t>() != 0;
  m.options_.skeleton_mu = r.pod<double>();
  m.options_.feature_weight = r.pod<double>();
  m.options_.feature_mu = r.pod<double>();
  m.options_.context_weight = r.pod<double>();
  m.options_.context_ngram = r.pod<std::int32_t>();
  m.options_.delex_ngram = r.pod<std::int32_t>();
  m.options_.pointer_weight = r.pod<double>();
  m.options_.pointer_alpha = r.pod<double>();
  auto classes = r.pod<std::uint64_t>();
  if (classes > (1u << 20)) fail(ErrorCode::kParse, "implausible token class count");
  for (std::uint64_t i = 0; i < classes; ++i) {
    std::string k = r.str();
    m.options_.token_classes[k] = r.str();
  }
  auto n = r.pod<std::uint64_t>();
  if (n > (1u << 24)) fail(ErrorCode::kParse, "implausible vocabulary size");
  std::vector<std::string> tokens(n);
  for (auto& t : tokens) t = r.str();
  m.tokenizer_ = Tokenizer::from_tokens(std::move(tokens));
  m.unigram_.resize(n);
  for (auto& c : m.unigram_) c = r.pod<std::uint32_t>();
  m.total_tokens_ = r.pod<std::uint64_t>();
  for (Table* t : {&m.ngrams_, &m.skeleton_, &m.features_}) {
    auto count = r.pod<std::uint64_t>();
    t->reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      auto key = r.pod<std::uint64_t>();
      Entry e;
      e.total = r.pod<std::uint32_t>();
      auto len = r.pod<std::uint32_t>();
      for (std::uint32_t j = 0; j < len; ++j) {
        auto x = r.pod<std::int32_t>();
        auto c = r.pod<std::uint32_t>();
        if (x < 0 || static_cast<std::uint64_t>(x) >= n) fail(ErrorCode::kParse, "token id out of range");
        e.next.emplace_back(x, c);
      }
      (*t)[key] = std::move(e);
    }
  }
  auto pcount = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < pcount; ++i) {
    auto key = r.pod<std::uint64_t>();
    auto hits = r.pod<std::uint32_t>();
    m.pointer_[key] = {hits, r.pod<std::uint32_t>()};
  }
  if (!r.done()) fail(ErrorCode::kParse, "trailing bytes in model file");
  if (m.options_.order < 1) fail(ErrorCode::kParse, "bad model order");
  return m;
}

void SequenceModel::save(const std::string& path) const { write_file(path, serialize()); }

SequenceModel SequenceModel::load(const std::string& path) { return deserialize(read_file(path)); }

// ---------------------------------------------------------------------------
// Decoding

std::vector<double> softmax(const std::vector<double>& scores) {
  if (scores.empty()) return {};
  double mx = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) sum += out[i] = std::exp(scores[i] - mx);
  for (auto& v : out) v /= sum;
  return out;
}

std::vector<int> candidate_set(const std::vector<double>& dist, int k, double p) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "top-k needs k >= 1");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kInvalidArgument, "top-p needs p in [0, 1]");
  std::vector<int> ids(dist.size());
  std::iota(ids.begin(), ids.end(), 0);
  auto kk = std::min(static_cast<std::size_t>(k), ids.size());
  auto before = [&](int a, int b) {
    auto da = dist[static_cast<std::size_t>(a)], db = dist[static_cast<std::size_t>(b)];
    return da != db ? da > db : a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(kk), ids.end(), before);
  ids.resize(kk);
  double mass = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    mass += dist[static_cast<std::size_t>(ids[i])];
    if (mass >= p) {
      ids.resize(i + 1);
      break;
    }
  }
  return ids;
}

int select_next(const std::vector<double>& dist, const DecodingStrategy& strategy, Rng& rng) {
  if (dist.empty()) fail(ErrorCode::kInvalidArgument, "empty distribution");
  if (strategy.kind == DecodingStrategy::Kind::kGreedy)
    return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  auto cands = candidate_set(dist, strategy.k, strategy.p);
  double mass = 0.0;
  for (int c : cands) mass += dist[static_cast<std::size_t>(c)];
  double u = rng.uniform01() * mass;
  for (int c : cands) {
    u -= dist[static_cast<std::size_t>(c)];
    if (u < 0.0) return c;
  }
  return cands.back();
}

std::string generate(const SequenceModel& model, std::string_view prompt, const DecodingStrategy& strategy,
                     std::size_t max_len) {
  std::vector<int> seq = model.tokenizer().encode(prompt);
  if (max_len < seq.size()) fail(ErrorCode::kInvalidArgument, "max_len is shorter than the prompt");
  Rng rng(strategy.seed);
  SequenceModel::Session session(model, seq);
  while (seq.size() < max_len) {
    session.advance(seq);
    int next = select_next(softmax(model.logits_with(seq, session)), strategy, rng);
    seq.push_back(next);
    if (model.tokenizer().is_stop(next)) break;
  }
  return model.tokenizer().decode(seq);
}

}  // namespace groundplan
