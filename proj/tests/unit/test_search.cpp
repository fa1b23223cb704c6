// Copyright 2026 The qdaif Authors.
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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/rng.hpp"
#include "qdaif/search.hpp"
#include "qdaif/serialize.hpp"
#include "qdaif/stats.hpp"

using namespace qdaif;

namespace {

const std::string kPresets = std::string(QDAIF_SOURCE_DIR) + "/presets/";

RunConfig synthetic(Method m, std::size_t iterations, std::uint64_t seed = 1) {
  RunConfig c = load_config(kPresets + "synthetic.toml");
  c.method = m;
  c.iterations = iterations;
  c.init_iterations = std::min<std::size_t>(c.init_iterations, iterations);
  c.seed = seed;
  return c;
}

RunLog run_oracle(const RunConfig& c) {
  auto backend = make_run_backend(c);
  return run(c, *backend);
}

// Plain O(nm) LCS over tokens, written without the rolling rows.
double rouge_reference(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::vector<std::vector<int>> t(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1
                                     : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  const double l = t[a.size()][b.size()];
  if (l == 0) return 0.0;
  const double p = l / a.size();
  const double r = l / b.size();
  return 2 * p * r / (p + r);
}

RunConfig poetry_oracle(Method m, std::size_t iterations) {
  RunConfig c;
  c.method = m;
  c.iterations = iterations;
  c.init_iterations = 3;
  c.seed = 5;
  c.seed_texts = {"0123401234", "5678956789", "0246802468"};
  c.archive = fx::config_poetry();
  for (auto& axis : c.archive.axes) {
    auto cat = axis.categorical();
    Json list = cat.labels;
    cat.question = "Which " + cat.name + " from the following list fits best? " +
                   list.dump();
    axis.kind = cat;
  }
  RatingQuality r;
  r.prompt = "Rate the quality of the above poem on a scale from 1 to 10. Answer in "
             "JSON with the key 'quality'.";
  c.quality = {r};
  c.sampling.max_tokens = 512;
  OracleParams op;
  op.target_length = 10;
  op.features = {{"low", "high", "01234"}, {"even", "odd", "02468"}};
  c.backend.kind = op;
  return c;
}

}  // namespace

TEST_CASE("novelty") {
  CHECK(novelty({0.5}, {{0.4}, {0.6}, {0.8}}, 2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(novelty({0.5}, {}, 15) == std::numeric_limits<double>::infinity());
  CHECK(novelty({0.3, 0.3}, {{0.3, 0.3}}, 15) == 0.0);
  CHECK(novelty({0.0, 0.0}, {{3.0, 4.0}}, 15) == doctest::Approx(5.0));
  CHECK_THROWS_AS(novelty({0.1}, {{0.1, 0.2}}, 1), ArgumentError);
  CHECK_THROWS_AS(novelty({0.1}, {{0.1}}, 0), ArgumentError);
}

TEST_CASE("novelty threshold adaptation") {
  NoveltyState s;
  for (int i = 0; i < 3; ++i) s = update_threshold(s, true);
  CHECK(s.threshold == doctest::Approx(0.0525).epsilon(1e-12));
  CHECK(s.consecutive_accepts == 0);

  NoveltyState r;
  for (int i = 0; i < 20; ++i) r = update_threshold(r, false);
  CHECK(r.threshold == 0.05);
  r = update_threshold(r, false);
  CHECK(r.threshold == doctest::Approx(0.0475).epsilon(1e-12));

  NoveltyState alt;
  for (int i = 0; i < 100; ++i) alt = update_threshold(alt, i % 2 == 0);
  CHECK(alt.threshold == 0.05);
}

TEST_CASE("rouge_l") {
  CHECK(rouge_l(tokenize("a b c d"), tokenize("a c d e")) == doctest::Approx(0.75));
  CHECK(rouge_l(tokenize("The Cat"), tokenize("the   cat")) == 1.0);
  CHECK(rouge_l({}, tokenize("x")) == 0.0);
  CHECK(rouge_l(tokenize("x"), tokenize("y")) == 0.0);
}

TEST_CASE("property: rouge_l matches a full LCS table") {
  Rng rng(12);
  const char* words[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 3000; ++i) {
    std::vector<std::string> x(rng.uniform_index(9)), y(rng.uniform_index(9));
    for (auto& w : x) w = words[rng.uniform_index(4)];
    for (auto& w : y) w = words[rng.uniform_index(4)];
    const double v = rouge_l(x, y);
    REQUIRE(std::abs(v - rouge_reference(x, y)) <= 1e-12);
    REQUIRE(std::abs(v - rouge_l(y, x)) <= 1e-12);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("uniformized coordinates") {
  const auto poetry = fx::config_poetry();
  const auto u = uniformized({{Categorical{0}, Categorical{4}}}, poetry);
  CHECK(u == std::vector<double>{0.1, 0.9});
  const auto c1 = fx::config_1d();
  CHECK(uniformized({{Continuous{0.35}}}, c1)[0] == doctest::Approx(0.475));
}

TEST_CASE("method names round-trip") {
  for (Method m : all_methods()) CHECK(method_from_string(to_string(m)) == m);
  CHECK(all_methods().size() == 14);
  CHECK_THROWS_AS(method_from_string("map-elites"), ArgumentError);
}

TEST_CASE("one record per iteration with sequential ids") {
  const auto log = run_oracle(synthetic(Method::kQdaifLmxNear, 120));
  REQUIRE(log.complete);
  REQUIRE(log.records.size() == 120);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    REQUIRE(r.iter == i);
    REQUIRE(r.id == i + 1);
    REQUIRE(r.init_phase == (i < 50));
  }
}

TEST_CASE("init-only run draws prompts from the seed texts") {
  auto c = synthetic(Method::kQdaifLmxNear, 20);
  c.init_iterations = 20;
  const auto log = run_oracle(c);
  REQUIRE(log.records.size() == 20);
  const std::set<std::string> seeds(c.seed_texts.begin(), c.seed_texts.end());
  for (const auto& r : log.records) {
    REQUIRE(r.init_phase);
    REQUIRE(r.parent_ids.empty());
    for (const auto& e : r.context) REQUIRE(seeds.contains(e));
  }
}

TEST_CASE("archive metrics never decrease without a schedule") {
  const auto log = run_oracle(synthetic(Method::kQdaifLmxNear, 300, 3));
  const auto t = timeline(log);
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    REQUIRE(t.points[i].qd_score >= t.points[i - 1].qd_score);
    REQUIRE(t.points[i].coverage >= t.points[i - 1].coverage);
  }
}

TEST_CASE("runs are deterministic per seed") {
  const auto c = synthetic(Method::kQdaifLmxNear, 150, 7);
  const auto a = run_oracle(c);
  const auto b = run_oracle(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    REQUIRE(record_to_json(a.records[i]) == record_to_json(b.records[i]));
  }
  CHECK(archive_to_json(*a.archive) == archive_to_json(*b.archive));
  const auto other = run_oracle(synthetic(Method::kQdaifLmxNear, 150, 8));
  CHECK(archive_to_json(*other.archive) != archive_to_json(*a.archive));
}

TEST_CASE("mock-driven run is deterministic and stops on exhaustion") {
  auto c = synthetic(Method::kQdaifLmxNear, 3);
  c.init_iterations = 3;
  std::vector<std::string> script;
  for (int i = 0; i < 2; ++i) {
    script.push_back(R"({"complete": "0123456789"})");
    script.push_back(R"({"logprobs": {"yes": -0.1, "no": -2.3}})");
    script.push_back(R"({"logprobs": {"low": -0.5, "high": -0.9}})");
  }
  MockBackend m1(script), m2(script);
  const auto a = run(c, m1);
  const auto b = run(c, m2);
  CHECK_FALSE(a.complete);
  CHECK(a.abort_reason.find("exhaust") != std::string::npos);
  REQUIRE(a.records.size() == 3);
  CHECK_FALSE(a.records[0].failed());
  CHECK(a.records[2].failed());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(record_to_json(a.records[i]) == record_to_json(b.records[i]));
  }
  CHECK(*a.records[0].quality == doctest::Approx(std::exp(-0.1) /
                                                 (std::exp(-0.1) + std::exp(-2.3))));
}

TEST_CASE("fixed few-shot reuses one prompt") {
  auto c = synthetic(Method::kFixedFewShot, 80);
  c.baseline_init = false;
  const auto log = run_oracle(c);
  for (const auto& r : log.records) REQUIRE(r.prompt == log.records[0].prompt);
  CHECK(log.records[0].context ==
        std::vector<std::string>(c.seed_texts.begin(), c.seed_texts.end()));
}

TEST_CASE("shuffling few-shot permutes the seed texts") {
  auto c = synthetic(Method::kShufflingFewShot, 60);
  c.baseline_init = false;
  const auto log = run_oracle(c);
  std::set<std::string> prompts;
  const std::multiset<std::string> seeds(c.seed_texts.begin(), c.seed_texts.end());
  for (const auto& r : log.records) {
    prompts.insert(r.prompt);
    REQUIRE(std::multiset<std::string>(r.context.begin(), r.context.end()) == seeds);
  }
  CHECK(prompts.size() > 1);
}

TEST_CASE("random search pool grows by one per evaluated text") {
  auto c = synthetic(Method::kRandomSearch, 100);
  const auto log = run_oracle(c);
  std::size_t expected = c.seed_texts.size();
  for (const auto& r : log.records) {
    if (!r.failed()) ++expected;
    REQUIRE(r.pool_size == expected);
  }
}

TEST_CASE("quality-only pool is capped") {
  auto c = synthetic(Method::kQualityOnly, 200);
  c.quality_pool_capacity = 10;
  const auto log = run_oracle(c);
  for (const auto& r : log.records) REQUIRE(r.pool_size <= 10);
  CHECK(log.records.back().pool_size == 10);
}

TEST_CASE("novelty search admits strictly above the threshold") {
  auto c = synthetic(Method::kNsaif, 300);
  const auto log = run_oracle(c);
  double threshold = c.novelty.initial_threshold;
  std::size_t admitted_count = 0;
  for (const auto& r : log.records) {
    if (r.failed()) continue;
    REQUIRE(r.novelty.has_value());
    REQUIRE(*r.pool_admitted == (*r.novelty > threshold));
    admitted_count += *r.pool_admitted;
    threshold = *r.threshold;
  }
  CHECK(admitted_count > 0);
  CHECK(admitted_count < log.records.size());
}

TEST_CASE("gated ROUGE filter checks both similarity and quality") {
  auto c = synthetic(Method::kRougeFilterQaif, 200);
  c.rouge_threshold = 0.79;
  const auto log = run_oracle(c);
  std::size_t admitted_count = 0;
  for (const auto& r : log.records) {
    if (r.failed()) continue;
    REQUIRE(r.rouge.has_value());
    const bool want = *r.rouge <= 0.79 && *r.quality > c.quality_gate;
    REQUIRE(*r.pool_admitted == want);
    admitted_count += want;
  }
  CHECK(admitted_count > 0);
}

TEST_CASE("LMX-Replace draws from the archive's top members") {
  auto c = synthetic(Method::kQdaifLmxReplace, 150);
  const auto log = run_oracle(c);
  const std::set<std::string> seeds(c.seed_texts.begin(), c.seed_texts.end());
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    if (r.init_phase || r.failed()) continue;
    const Archive before = replay(log, i);
    const auto pool = before.top_k_pool(3);
    std::set<std::string> texts;
    for (const auto& g : pool) texts.insert(g.text);
    REQUIRE(r.parent_ids.size() == 1);
    for (const auto& e : r.context) REQUIRE((texts.contains(e) || seeds.contains(e)));
    const Archive after = replay(log, i + 1);
    REQUIRE(r.pool_size == after.top_k_pool(3).size());
  }
}

TEST_CASE("guided rewrite names the parent labels and the drawn targets") {
  const auto c = poetry_oracle(Method::kQdaifGuided, 40);
  validate_run_config(c);
  const auto log = run_oracle(c);
  REQUIRE(log.complete);
  std::map<IndividualId, const IterationRecord*> by_id;
  const auto& genres = fx::kGenres;
  const auto& tones = fx::kTones;
  for (const auto& r : log.records) {
    by_id[r.id] = &r;
    if (r.init_phase) {
      REQUIRE(r.prompt.find(RewriteTemplates{}.rewrite) != std::string::npos);
      continue;
    }
    REQUIRE(r.parent_ids.size() == 1);
    const auto* parent = by_id.at(r.parent_ids[0]);
    const auto& coords = parent->descriptor->coords;
    const std::string parent_genre = genres[std::get<Categorical>(coords[0]).index];
    const std::string want = parent->text + "\nTranslate this " + parent_genre + " poem into a ";
    REQUIRE(r.prompt.starts_with(want));
    bool matched = false;
    for (const auto& g : genres) {
      for (const auto& t : tones) {
        matched = matched || r.prompt.ends_with(" poem into a " + t + " " + g +
                                                " poem of very high, award winning quality.");
      }
    }
    REQUIRE(matched);
  }
}

TEST_CASE("replay reproduces the final archive") {
  for (Method m : {Method::kQdaifLmxNear, Method::kQdaifLmxReplace, Method::kNsaif}) {
    const auto log = run_oracle(synthetic(m, 200, 11));
    CHECK(archive_to_json(replay(log)) == archive_to_json(*log.archive));
  }
  auto tampered = run_oracle(synthetic(Method::kQdaifLmxNear, 60, 11));
  for (auto& r : tampered.records) {
    if (!r.failed() && r.outcome == InsertOutcome::kFilledEmptyBin && r.iter > 0) {
      r.outcome = InsertOutcome::kRejected;
      break;
    }
  }
  CHECK_THROWS_AS(replay(tampered), ReplayError);
}

TEST_CASE("run config validation names the field") {
  auto c = synthetic(Method::kQdaifLmxNear, 10);
  c.init_iterations = 20;
  try {
    validate_run_config(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "run.init_iterations");
  }
  auto g = synthetic(Method::kQdaifGuided, 10);
  CHECK_THROWS_AS(validate_run_config(g), ConfigError);
}
