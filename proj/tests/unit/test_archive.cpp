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
#include <set>

#include "../support/naive_archive.hpp"
#include "fixtures.hpp"
#include "qdaif/archive.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/rng.hpp"

using namespace qdaif;

namespace {

BinKey key1(std::size_t i) { return BinKey{{i}}; }

double mid1(std::size_t i) { return fx::mid(fx::kTicks1d, i); }

naive::Outcome to_naive(InsertOutcome o) {
  switch (o) {
    case InsertOutcome::kFilledEmptyBin: return naive::Outcome::kFilled;
    case InsertOutcome::kReplacedElite: return naive::Outcome::kReplaced;
    case InsertOutcome::kAddedAtDepth: return naive::Outcome::kDepth;
    case InsertOutcome::kTieReplacedElite: return naive::Outcome::kTie;
    case InsertOutcome::kRejected: return naive::Outcome::kRejected;
  }
  return naive::Outcome::kRejected;
}

}  // namespace

TEST_CASE("insert outcomes") {
  Rng rng(1);
  Archive a(fx::config_1d(2));
  CHECK(a.insert(fx::at(1, 0.9, mid1(3)), rng) == InsertOutcome::kFilledEmptyBin);
  CHECK(a.insert(fx::at(2, 0.3, mid1(3)), rng) == InsertOutcome::kAddedAtDepth);
  // Full cell {0.9, 0.3}: 0.5 is kept and 0.3 is evicted.
  CHECK(a.insert(fx::at(3, 0.5, mid1(3)), rng) == InsertOutcome::kAddedAtDepth);
  const Cell* cell = a.cell(key1(3));
  REQUIRE(cell != nullptr);
  REQUIRE(cell->members.size() == 2);
  CHECK(cell->members[0].id == 1);
  CHECK(cell->members[1].id == 3);
  CHECK(a.elite(key1(3))->id == 1);
  // Below the minimum of a full cell.
  CHECK(a.insert(fx::at(4, 0.4, mid1(3)), rng) == InsertOutcome::kRejected);
  CHECK(a.rejection_count() == 1);
  CHECK(a.insert(fx::at(5, 0.95, mid1(3)), rng) == InsertOutcome::kReplacedElite);
  CHECK(a.elite(key1(3))->id == 5);
  CHECK(a.cell(key1(3))->members.size() == 2);
  CHECK(a.insertion_count() == 4);
}

TEST_CASE("insert rejects qualities outside the fitness range") {
  Rng rng(1);
  Archive a(fx::config_1d());
  CHECK_THROWS_AS(a.insert(fx::at(1, 1.5, 0.5), rng), RangeError);
  CHECK_THROWS_AS(a.insert(fx::at(1, -0.1, 0.5), rng), RangeError);
  CHECK_THROWS_AS(a.insert(fx::individual(1, 0.5, {Categorical{0}}), rng),
                  DescriptorError);
  CHECK(a.occupied() == 0);
}

TEST_CASE("tie replacement follows the configured probability") {
  auto cfg = fx::config_1d(5);
  cfg.tie_replace_probability = 1.0;
  Rng rng(1);
  Archive always(cfg);
  always.insert(fx::at(1, 0.5, 0.5), rng);
  CHECK(always.insert(fx::at(2, 0.5, 0.5), rng) == InsertOutcome::kTieReplacedElite);
  CHECK(always.elite(key1(10))->id == 2);

  cfg.tie_replace_probability = 0.0;
  Archive never(cfg);
  never.insert(fx::at(1, 0.5, 0.5), rng);
  CHECK(never.insert(fx::at(2, 0.5, 0.5), rng) == InsertOutcome::kAddedAtDepth);
  CHECK(never.elite(key1(10))->id == 1);

  cfg.tie_replace_probability = 0.5;
  int wins = 0;
  for (std::uint64_t s = 0; s < 4000; ++s) {
    Rng r(s);
    Archive a(cfg);
    a.insert(fx::at(1, 0.5, 0.5), r);
    wins += a.insert(fx::at(2, 0.5, 0.5), r) == InsertOutcome::kTieReplacedElite;
  }
  CHECK(wins > 1800);
  CHECK(wins < 2200);
}

TEST_CASE("elite and metrics") {
  Rng rng(1);
  Archive a(fx::config_1d());
  CHECK(a.elite(key1(0)) == nullptr);
  CHECK(a.qd_score() == 0.0);
  CHECK(a.coverage() == 0.0);
  CHECK_FALSE(a.best_quality().has_value());

  a.insert(fx::at(1, 0.5, mid1(0)), rng);
  a.insert(fx::at(2, 0.9, mid1(5)), rng);
  a.insert(fx::at(3, 0.98, mid1(19)), rng);
  CHECK(a.qd_score() == doctest::Approx(2.38).epsilon(1e-12));
  CHECK(a.best_quality() == 0.98);
  a.insert(fx::at(4, 0.1, mid1(7)), rng);
  a.insert(fx::at(5, 0.1, mid1(8)), rng);
  CHECK(a.coverage() == doctest::Approx(0.25));

  Archive depth(fx::config_1d());
  depth.insert(fx::at(1, 0.2, 0.5), rng);
  depth.insert(fx::at(2, 0.7, 0.5), rng);
  CHECK(depth.best_quality() == 0.7);
  CHECK(depth.elite(key1(10))->id == 2);
  CHECK(depth.size() == 2);
}

TEST_CASE("archive ceilings") {
  Rng rng(1);
  Archive a(fx::config_1d());
  for (std::size_t i = 0; i < 20; ++i) a.insert(fx::at(i + 1, 1.0, mid1(i)), rng);
  CHECK(a.qd_score() == 20.0);
  CHECK(a.coverage() == 1.0);

  Archive b(fx::config_2d());
  IndividualId id = 1;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      b.insert(fx::individual(id++, 1.0,
                              {Continuous{fx::mid(fx::kTicks2d, i)},
                               Continuous{fx::mid(fx::kTicks2d, j)}}),
               rng);
    }
  }
  CHECK(b.qd_score() == 100.0);
  CHECK(b.coverage() == 1.0);
}

TEST_CASE("sample_elites") {
  Rng rng(1);
  Archive one(fx::config_1d());
  one.insert(fx::at(1, 0.5, mid1(2)), rng);
  CHECK(one.sample_elites(3, rng).size() == 1);

  Archive full(fx::config_1d());
  for (std::size_t i = 0; i < 20; ++i) full.insert(fx::at(i + 1, 0.5, mid1(i)), rng);
  const auto s = full.sample_elites(3, rng);
  REQUIRE(s.size() == 3);
  std::set<BinKey> bins;
  for (const auto& e : s) bins.insert(e.bin);
  CHECK(bins.size() == 3);

  Rng r1(99), r2(99);
  const auto x = full.sample_elites(3, r1);
  const auto y = full.sample_elites(3, r2);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].id == y[i].id);
}

TEST_CASE("top_k_pool") {
  Rng rng(1);
  Archive a(fx::config_1d());
  CHECK(a.top_k_pool(3).empty());
  const double qs[] = {0.3, 0.9, 0.5, 0.7, 0.1};
  for (int i = 0; i < 5; ++i) a.insert(fx::at(i + 1, qs[i], mid1(4)), rng);
  auto pool = a.top_k_pool(3);
  REQUIRE(pool.size() == 3);
  CHECK(pool[0].text == "text 2");
  CHECK(pool[1].text == "text 4");
  CHECK(pool[2].text == "text 3");

  Archive b(fx::config_1d());
  b.insert(fx::at(1, 0.3, mid1(1)), rng);
  b.insert(fx::at(2, 0.3, mid1(2)), rng);
  b.insert(fx::at(3, 0.4, mid1(2)), rng);
  CHECK(b.top_k_pool(3).size() == 3);
}

TEST_CASE("remap") {
  Rng rng(5);
  Archive a(fx::config_1d(3));
  for (IndividualId id = 1; id <= 60; ++id) {
    a.insert(fx::at(id, rng.uniform01(), rng.uniform01()), rng);
  }
  const auto before = a.size();

  SUBCASE("identity keeps the metrics") {
    Rng r(1);
    auto b = remap(a, a.config(), nullptr, r);
    CHECK(b.qd_score() == a.qd_score());
    CHECK(b.coverage() == a.coverage());
    CHECK(b.size() == a.size());
  }

  SUBCASE("expansion re-evaluates only the new axis") {
    ArchiveConfig two;
    two.axes = {fx::continuous("sentiment", fx::kTicks2d),
                fx::continuous("length", fx::kTicks2d, "short", "long")};
    two.depth_limit = 3;
    std::vector<std::string> asked;
    auto reeval = [&](const Individual& ind, const AxisSpec& axis) -> AxisValue {
      asked.push_back(axis.name());
      return Continuous{static_cast<double>(ind.id % 10) / 10.0};
    };
    std::vector<RemapEntry> log;
    Rng r(2);
    auto b = remap(a, two, reeval, r, &log);
    CHECK(asked.size() == before);
    CHECK(std::all_of(asked.begin(), asked.end(),
                      [](const std::string& n) { return n == "length"; }));
    REQUIRE(log.size() == before);
    // Every old member is either present or was turned away by the rules.
    std::set<IndividualId> present;
    for (const auto& [k, cell] : b.cells()) {
      for (const auto& m : cell.members) present.insert(m.id);
    }
    for (const auto& e : log) {
      REQUIRE(e.outcome.has_value());
      CHECK((present.count(e.id) == 1) == admitted(*e.outcome));
    }
    for (const auto& [k, cell] : b.cells()) {
      for (const auto& m : cell.members) {
        CHECK(descriptor_to_binkey(m.eval.descriptor, b.config()) == k);
      }
    }
  }

  SUBCASE("switching to a different axis re-evaluates everything") {
    ArchiveConfig other;
    other.axes = {fx::continuous("genre", fx::kTicks1d, "horror", "romance")};
    other.depth_limit = 3;
    std::size_t calls = 0;
    auto reeval = [&](const Individual&, const AxisSpec& axis) -> AxisValue {
      ++calls;
      CHECK(axis.name() == "genre");
      return Continuous{0.42};
    };
    Rng r(3);
    auto b = remap(a, other, reeval, r);
    CHECK(calls == before);
    CHECK(b.occupied() == 1);
  }
}

TEST_CASE("restore checks snapshot structure") {
  Rng rng(1);
  Archive a(fx::config_1d());
  a.insert(fx::at(1, 0.4, mid1(2)), rng);
  a.insert(fx::at(2, 0.8, mid1(2)), rng);
  auto ok = Archive::restore(a.config(), a.cells(), 2, 0);
  CHECK(ok.qd_score() == a.qd_score());

  auto unsorted = a.cells();
  std::swap(unsorted.begin()->second.members[0], unsorted.begin()->second.members[1]);
  CHECK_THROWS_AS(Archive::restore(a.config(), unsorted, 2, 0), StructuralError);

  auto misplaced = a.cells();
  misplaced.begin()->second.members[0].eval.descriptor.coords[0] = Continuous{0.99};
  CHECK_THROWS_AS(Archive::restore(a.config(), misplaced, 2, 0), StructuralError);

  CHECK_THROWS_AS(Archive::restore(fx::config_1d(1), a.cells(), 2, 0), StructuralError);
}

TEST_CASE("property: archive matches the naive reference on random logs") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Rng gen(1000 + trial);
    const std::size_t depth = 1 + gen.uniform_index(6);
    auto cfg = fx::config_1d(depth);
    cfg.tie_replace_probability = trial % 3 == 0 ? 0.0 : (trial % 3 == 1 ? 0.5 : 1.0);
    const std::uint64_t seed = derive_seed(trial, "archive");
    Rng rng(seed);
    Archive lib(cfg);
    naive::Archive ref(20, depth, cfg.tie_replace_probability, seed);
    for (IndividualId id = 1; id <= 400; ++id) {
      const double q = static_cast<double>(gen.uniform_index(5)) / 4.0;
      const double x = gen.uniform01();
      const auto got = lib.insert(fx::at(id, q, x), rng);
      const auto want = ref.insert({naive::bin_of(x, fx::kTicks1d)}, id, q);
      REQUIRE(to_naive(got) == want);
      REQUIRE(lib.qd_score() == ref.qd_score());
      REQUIRE(lib.coverage() == ref.coverage());
      REQUIRE(lib.best_quality() == ref.best());
      const auto bin = naive::bin_of(x, fx::kTicks1d);
      REQUIRE(lib.elite(key1(bin))->id == *ref.elite_id({bin}));
      REQUIRE(lib.cell(key1(bin))->members.size() <= depth);
      REQUIRE(lib.cell(key1(bin))->members.size() == ref.cell_size({bin}));
    }
  }
}
