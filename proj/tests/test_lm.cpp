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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "common.hpp"
#include "doctest.h"
#include "eval.hpp"
#include "lm.hpp"
#include "plandsl.hpp"
#include "tokenizer.hpp"

using namespace groundplan;

namespace {

std::vector<double> random_scores(Rng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& x : s) x = (rng.uniform01() - 0.5) * 20.0;
  return s;
}

std::vector<double> random_dist(Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  for (auto& x : d) x = std::pow(rng.uniform01(), 3.0);
  double z = std::accumulate(d.begin(), d.end(), 0.0);
  for (auto& x : d) x /= z;
  return d;
}

// Reference top-k/top-p set: sort a copy, keep k, stop once the running
// mass reaches p.
std::set<int> reference_candidates(const std::vector<double>& dist, int k, double p) {
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] > dist[b]; });
  std::set<int> out;
  double mass = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(order.size()); ++i) {
    out.insert(order[i]);
    mass += dist[order[i]];
    if (mass >= p) break;
  }
  return out;
}

struct Corpus {
  Dataset data;
  std::vector<std::string> train, held_out;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    DatasetConfig cfg;
    cfg.n = 400;
    cfg.seed = 11;
    Corpus out;
    out.data = gen_dataset(cfg);
    for (const auto& r : out.data.train) out.train.push_back(serialize_sample(to_sample(r, ContextVariant::kNone)));
    for (const auto& r : out.data.unseen)
      out.held_out.push_back(serialize_sample(to_sample(r, ContextVariant::kNone)));
    return out;
  }();
  return c;
}

const SequenceModel& trained() {
  static const SequenceModel m =
      SequenceModel::train(corpus().train, Tokenizer::build(corpus().train, model_lexicon()), experiment_lm_options());
  return m;
}

}  // namespace

TEST_CASE("tokenizer round trip and specials") {
  const auto& c = corpus();
  auto tok = Tokenizer::build(c.train, model_lexicon());
  CHECK(tok.token(tok.sep()) == "<SEP>");
  CHECK(tok.token(tok.bos()) == "<BOS>");
  CHECK(tok.token(tok.eos()) == "<EOS>");
  CHECK(tok.token(tok.end_of_text()) == Tokenizer::kEndOfText);
  CHECK(tok.token(tok.unknown()) == Tokenizer::kUnknown);
  for (const auto& s : c.train) CHECK(tok.decode(tok.encode(s)) == s);
  std::string spaced = "Put  the apple\n in the sink: <BOS> 0.GotoLocation(sink) <EOS>";
  CHECK(tok.decode(tok.encode_lenient(spaced)) == spaced);

  // Bijection over registered tokens.
  std::set<std::string> seen(tok.tokens().begin(), tok.tokens().end());
  CHECK(seen.size() == tok.size());
  for (int i = 0; i < static_cast<int>(tok.size()); ++i) CHECK(tok.id(tok.token(i)) == i);

  auto copy = Tokenizer::from_tokens(tok.tokens());
  CHECK(copy.tokens() == tok.tokens());

  auto shuffled = c.train;
  Rng rng(3);
  rng.shuffle(shuffled);
  CHECK(Tokenizer::build(shuffled, model_lexicon()).tokens() == tok.tokens());
}

TEST_CASE("tokenizer rejects unregistered pieces") {
  auto tok = Tokenizer::build({"Put the apple in the sink: <BOS> 0.GotoLocation(sink) <EOS>"});
  try {
    tok.encode("Put the zebra in the sink:");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownToken);
    CHECK(std::string(e.what()).find("zebra") != std::string::npos);
  }
  auto ids = tok.encode_lenient("the zebra");
  REQUIRE(ids.size() == 2);
  CHECK(tok.bare(ids[1]) == Tokenizer::kUnknown);
  CHECK(Tokenizer::pieces("a(b,c) <BOS>") == std::vector<std::string>{"a", "(", "b", ",", "c", ")", " <BOS>"});
  CHECK_THROWS_AS(Tokenizer::from_tokens({"x", "y"}), Error);
}

TEST_CASE("softmax is normalized, stable and shift invariant") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto s = random_scores(rng, 1 + rng.index(300));
    auto p = softmax(s);
    double sum = 0.0;
    for (double x : p) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    auto shifted = s;
    double c = (rng.uniform01() - 0.5) * 2000.0;
    for (auto& x : shifted) x += c;
    auto q = softmax(shifted);
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(p[j] - q[j]) < 1e-12);
  }
  auto two = softmax({0.0, std::log(2.0)});
  CHECK(two[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (double x : softmax(std::vector<double>(8, 4.2))) CHECK(x == doctest::Approx(0.125));
  auto big = softmax({1000.0, 1000.0 + std::log(3.0)});
  CHECK(big[1] == doctest::Approx(0.75));
}

TEST_CASE("greedy selection and its equivalence to k=1") {
  Rng rng(1);
  CHECK(select_next({0.1, 0.7, 0.2}, DecodingStrategy::greedy(), rng) == 1);
  CHECK(select_next({0.4, 0.1, 0.4, 0.1}, DecodingStrategy::greedy(), rng) == 0);
  for (int i = 0; i < 1000; ++i) {
    auto d = random_dist(rng, 2 + rng.index(50));
    int g = select_next(d, DecodingStrategy::greedy(), rng);
    CHECK(g == static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin()));
    double p = rng.uniform01();
    CHECK(select_next(d, DecodingStrategy::sampled(1, p, rng.next()), rng) == g);
  }
  CHECK_THROWS_AS(select_next({0.5, 0.5}, DecodingStrategy::sampled(0, 0.9, 1), rng), Error);
  CHECK_THROWS_AS(select_next({0.5, 0.5}, DecodingStrategy::sampled(3, 1.5, 1), rng), Error);
}

TEST_CASE("top-p candidate set matches the minimal prefix and grows with p") {
  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    auto d = random_dist(rng, 5 + rng.index(60));
    int k = 1 + static_cast<int>(rng.index(15));
    double p1 = rng.uniform01(), p2 = rng.uniform01();
    if (p1 > p2) std::swap(p1, p2);
    auto c1 = candidate_set(d, k, p1), c2 = candidate_set(d, k, p2);
    CHECK(std::set<int>(c1.begin(), c1.end()) == reference_candidates(d, k, p1));
    for (int id : c1) CHECK(std::find(c2.begin(), c2.end(), id) != c2.end());
  }
}

TEST_CASE("sampled tokens stay inside the k=10 p=0.9 prefix") {
  Rng setup(21);
  auto d = random_dist(setup, 40);
  auto allowed = reference_candidates(d, 10, 0.9);
  Rng rng(77);
  auto strategy = DecodingStrategy::sampled(10, 0.9, 0);
  std::set<int> drawn;
  for (int i = 0; i < 100000; ++i) {
    int t = select_next(d, strategy, rng);
    REQUIRE(allowed.count(t) == 1);
    drawn.insert(t);
  }
  CHECK(drawn == allowed);
}

TEST_CASE("degenerate corpus is reproduced by greedy decoding") {
  std::string sample =
      "Put the soap into the drawer: <BOS> 0.GotoLocation(countertop) 1.PickupObject(soap) "
      "2.GotoLocation(drawer) 3.PutObject(soap,drawer) <EOS>";
  std::vector<std::string> corpus(50, sample);
  auto m = SequenceModel::train(corpus, Tokenizer::build(corpus));
  CHECK(generate(m, "Put the soap into the drawer: <BOS>", DecodingStrategy::greedy()) == sample);
  // A plain n-gram needs enough history to see the step number.
  auto plain = LmOptions{};
  plain.order = 8;
  plain.use_skeleton = false;
  plain.feature_weight = 0.0;
  plain.pointer_weight = 0.0;
  auto ngram_only = SequenceModel::train(corpus, Tokenizer::build(corpus), plain);
  CHECK(generate(ngram_only, "Put the soap into the drawer: <BOS>", DecodingStrategy::greedy()) == sample);
}

TEST_CASE("training is independent of corpus order") {
  auto shuffled = corpus().train;
  Rng rng(8);
  rng.shuffle(shuffled);
  auto opts = experiment_lm_options();
  auto a = SequenceModel::train(corpus().train, Tokenizer::build(corpus().train, model_lexicon()), opts);
  auto b = SequenceModel::train(shuffled, Tokenizer::build(shuffled, model_lexicon()), opts);
  CHECK(a.serialize() == b.serialize());
}

TEST_CASE("sequence probability factorizes into next-token probabilities") {
  const auto& m = trained();
  const auto& tok = m.tokenizer();
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const auto& text = corpus().held_out[rng.index(corpus().held_out.size())];
    auto ids = tok.encode_lenient(text);
    double step = 0.0;
    for (std::size_t t = 1; t < ids.size(); ++t) {
      std::vector<int> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(t));
      auto p = softmax(m.logits(prefix));
      step += std::log(p[static_cast<std::size_t>(ids[t])]);
    }
    CHECK(std::abs(m.sequence_log_prob(ids) - step) < 1e-9);
  }
}

TEST_CASE("logits are finite for any history") {
  const auto& m = trained();
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    std::vector<int> h(rng.index(40));
    for (auto& x : h) x = static_cast<int>(rng.index(m.vocab_size()));
    auto l = m.logits(h);
    REQUIRE(l.size() == m.vocab_size());
    for (double x : l) CHECK(std::isfinite(x));
  }
  CHECK(m.logits({}).size() == m.vocab_size());
}

TEST_CASE("argument tokens outscore action tokens after an open parenthesis") {
  const auto& m = trained();
  const auto& tok = m.tokenizer();
  auto l = m.logits(tok.encode("Put the apple in the fridge: <BOS> 0.GotoLocation(countertop) 1.PickupObject("));
  double best_action = -1e300, best_word = -1e300;
  std::set<std::string> actions;
  for (auto a : kAllActions) actions.insert(std::string(action_name(a)));
  auto lex = model_lexicon();
  std::set<std::string> words(lex.begin(), lex.end());
  for (int i = 0; i < static_cast<int>(tok.size()); ++i) {
    std::string b(tok.bare(i));
    if (actions.count(b)) best_action = std::max(best_action, l[static_cast<std::size_t>(i)]);
    else if (words.count(b)) best_word = std::max(best_word, l[static_cast<std::size_t>(i)]);
  }
  CHECK(best_word > best_action);
}

TEST_CASE("higher order lowers held-out perplexity") {
  LmOptions base;
  base.use_skeleton = false;
  base.feature_weight = 0.0;
  base.pointer_weight = 0.0;
  auto tok = Tokenizer::build(corpus().train, model_lexicon());
  auto nll = [&](int order) {
    auto o = base;
    o.order = order;
    auto m = SequenceModel::train(corpus().train, tok, o);
    double lp = 0.0;
    std::size_t n = 0;
    for (const auto& s : corpus().held_out) {
      auto ids = tok.encode_lenient(s);
      lp += m.sequence_log_prob(ids);
      n += ids.size() - 1;
    }
    return -lp / static_cast<double>(n);
  };
  double unigram = nll(1), fourgram = nll(4);
  CHECK(fourgram < unigram);
}

TEST_CASE("generation contract") {
  const auto& m = trained();
  std::string prompt = "Put the soap into the drawer: <BOS>";
  auto out = generate(m, prompt, DecodingStrategy::greedy());
  CHECK(out.rfind(prompt, 0) == 0);
  auto ex = extract_between_markers(out);
  REQUIRE(ex.status == Extraction::Status::kOk);
  auto parsed = parse_plan(ex.plan_text);
  CHECK(parsed.ok());
  CHECK(parsed.plan.steps.size() == 4);
  CHECK(generate(m, prompt, DecodingStrategy::greedy()) == out);

  auto prompt_len = m.tokenizer().encode(prompt).size();
  CHECK(generate(m, prompt, DecodingStrategy::greedy(), prompt_len) == prompt);
  CHECK_THROWS_AS(generate(m, prompt, DecodingStrategy::greedy(), prompt_len - 1), Error);
  CHECK_THROWS_AS(generate(m, "Put the zebra into the drawer: <BOS>", DecodingStrategy::greedy()), Error);

  auto s1 = generate(m, prompt, DecodingStrategy::sampled(10, 0.9, 5));
  CHECK(generate(m, prompt, DecodingStrategy::sampled(10, 0.9, 5)) == s1);
}

TEST_CASE("greedy output is invariant under positive logit rescaling") {
  const auto& m = trained();
  const auto& tok = m.tokenizer();
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& r = corpus().data.unseen[i];
    std::string prompt = prompt_of(r, ContextVariant::kNone);
    auto ids = tok.encode(prompt);
    Rng rng(0);
    while (ids.size() < 200) {
      auto l = m.logits(ids);
      for (auto& x : l) x *= 3.7;
      int next = select_next(softmax(l), DecodingStrategy::greedy(), rng);
      ids.push_back(next);
      if (tok.is_stop(next)) break;
    }
    CHECK(tok.decode(ids) == generate(m, prompt, DecodingStrategy::greedy(), 200));
  }
}

TEST_CASE("model persistence") {
  const auto& m = trained();
  auto copy = SequenceModel::deserialize(m.serialize());
  CHECK(copy.serialize() == m.serialize());
  std::string path = "test_lm_model.bin";
  m.save(path);
  auto loaded = SequenceModel::load(path);
  std::remove(path.c_str());
  std::string prompt = prompt_of(corpus().data.unseen[0], ContextVariant::kNone);
  CHECK(generate(loaded, prompt, DecodingStrategy::greedy()) == generate(m, prompt, DecodingStrategy::greedy()));
  CHECK_THROWS_AS(SequenceModel::deserialize("nope"), Error);
  CHECK_THROWS_AS(SequenceModel::load("/nonexistent/model.bin"), Error);
}

TEST_CASE("training preconditions") {
  CHECK_THROWS_AS(SequenceModel::train({}, Tokenizer()), Error);
  LmOptions o;
  o.order = 0;
  CHECK_THROWS_AS(SequenceModel::train({"a <BOS> b <EOS>"}, Tokenizer::build({"a <BOS> b <EOS>"}), o), Error);
}
