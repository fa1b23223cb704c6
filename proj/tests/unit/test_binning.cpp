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

#include <cmath>

#include "../support/naive_archive.hpp"
#include "fixtures.hpp"
#include "qdaif/binning.hpp"
#include "qdaif/core.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/rng.hpp"

using namespace qdaif;

TEST_CASE("grid presets carry the published tick lists") {
  const auto g1 = default_grid_1d();
  CHECK(std::vector<double>(g1.ticks().begin(), g1.ticks().end()) == fx::kTicks1d);
  CHECK(g1.bin_count() == 20);
  const auto g2 = default_grid_2d();
  CHECK(std::vector<double>(g2.ticks().begin(), g2.ticks().end()) == fx::kTicks2d);
  CHECK(g2.bin_count() == 10);
  const auto ge = embedding_grid_1d();
  CHECK(std::vector<double>(ge.ticks().begin(), ge.ticks().end()) ==
        fx::kTicksEmbedding);
  CHECK(TickGrid::preset("paper-1d-20") == g1);
  CHECK(TickGrid::preset("uniform-4") == uniform_grid(4));
  CHECK_THROWS_AS(TickGrid::preset("uniform-x"), ArgumentError);
  CHECK_THROWS_AS(TickGrid::preset("nope"), ArgumentError);
}

TEST_CASE("tick grid validation") {
  CHECK_THROWS_AS(TickGrid({0.0}), ArgumentError);
  CHECK_THROWS_AS(TickGrid({0.1, 1.0}), ArgumentError);
  CHECK_THROWS_AS(TickGrid({0.0, 0.9}), ArgumentError);
  CHECK_THROWS_AS(TickGrid({0.0, 0.5, 0.5, 1.0}), ArgumentError);
  CHECK_THROWS_AS(TickGrid({0.0, 0.6, 0.5, 1.0}), ArgumentError);
  CHECK_NOTHROW(TickGrid({0.0, 1.0}));
}

TEST_CASE("bin_index boundaries") {
  const auto g = default_grid_1d();
  CHECK(bin_index(0.0, g) == 0);
  CHECK(bin_index(1.0, g) == 19);
  CHECK(bin_index(0.35, g) == 9);
  CHECK(bin_index(0.20, g) == 9);
  CHECK(bin_index(0.9975, g) == 19);
  CHECK_THROWS_AS(bin_index(-0.01, g), RangeError);
  CHECK_THROWS_AS(bin_index(1.01, g), RangeError);
  CHECK_THROWS_AS(bin_index(std::nan(""), g), RangeError);
}

TEST_CASE("bin_index agrees with a linear scan") {
  for (const auto* ticks : {&fx::kTicks1d, &fx::kTicks2d, &fx::kTicksEmbedding}) {
    const TickGrid g(*ticks);
    for (int i = 0; i <= 100000; ++i) {
      const double v = i / 100000.0;
      REQUIRE(bin_index(v, g) == naive::bin_of(v, *ticks));
    }
    for (double t : *ticks) REQUIRE(bin_index(t, g) == naive::bin_of(t, *ticks));
  }
}

TEST_CASE("uniform_grid") {
  const auto g20 = uniform_grid(20);
  REQUIRE(g20.bin_count() == 20);
  for (std::size_t i = 1; i < g20.ticks().size(); ++i) {
    CHECK(g20.ticks()[i] - g20.ticks()[i - 1] == doctest::Approx(0.05).epsilon(1e-12));
  }
  CHECK(g20.ticks().front() == 0.0);
  CHECK(g20.ticks().back() == 1.0);
  const auto g1 = uniform_grid(1);
  CHECK(std::vector<double>(g1.ticks().begin(), g1.ticks().end()) ==
        std::vector<double>{0.0, 1.0});
  const auto g10 = uniform_grid(10);
  for (std::size_t i = 0; i <= 10; ++i) {
    CHECK(std::abs(g10.ticks()[i] - i / 10.0) < 1e-15);
  }
  CHECK_THROWS_AS(uniform_grid(0), ArgumentError);
}

TEST_CASE("to_uniform worked values") {
  const auto g = default_grid_1d();
  CHECK(std::abs(to_uniform(0.9975, g) - 0.975) <= 1e-12);
  CHECK(std::abs(to_uniform(0.35, g) - 0.475) <= 1e-12);
  CHECK(to_uniform(0.0, g) == 0.0);
  CHECK(to_uniform(1.0, g) == 1.0);
}

TEST_CASE("to_uniform properties") {
  for (const auto* ticks : {&fx::kTicks1d, &fx::kTicks2d, &fx::kTicksEmbedding}) {
    const TickGrid g(*ticks);
    const auto n = g.bin_count();
    const auto u = uniform_grid(n);
    double prev = -1.0;
    double prev_v = -1.0;
    for (int i = 0; i <= 10000; ++i) {
      const double v = i * 1e-4;
      const double t = to_uniform(v, g);
      REQUIRE(t >= 0.0);
      REQUIRE(t <= 1.0);
      REQUIRE(bin_index(v, g) == bin_index(t, u));
      if (prev_v >= 0.0) {
        REQUIRE(t >= prev);
        if (v > 0.0 && v < 1.0 && prev_v > 0.0) REQUIRE(t > prev);
      }
      prev = t;
      prev_v = v;
    }
  }
  Rng rng(3);
  for (std::size_t n : {1u, 7u, 10u, 20u}) {
    const auto u = uniform_grid(n);
    for (int i = 0; i < 1000; ++i) {
      const double v = rng.uniform01();
      REQUIRE(std::abs(to_uniform(v, u) - v) <= 1e-12);
    }
  }
}

TEST_CASE("descriptor_to_binkey") {
  const auto c1 = fx::config_1d();
  CHECK(descriptor_to_binkey({{Continuous{0.0}}}, c1).indices ==
        std::vector<std::size_t>{0});
  CHECK(descriptor_to_binkey({{Continuous{0.9975}}}, c1).indices ==
        std::vector<std::size_t>{naive::bin_of(0.9975, fx::kTicks1d)});
  CHECK(descriptor_to_binkey({{Continuous{0.9975}}}, c1).indices ==
        std::vector<std::size_t>{19});
  const auto cp = fx::config_poetry();
  CHECK(descriptor_to_binkey({{Categorical{4}, Categorical{1}}}, cp).indices ==
        std::vector<std::size_t>{4, 1});

  CHECK_THROWS_AS(descriptor_to_binkey({{Continuous{0.5}, Continuous{0.5}}}, c1),
                  DescriptorError);
  CHECK_THROWS_AS(descriptor_to_binkey({{Categorical{0}}}, c1), DescriptorError);
  CHECK_THROWS_AS(descriptor_to_binkey({{Continuous{1.5}}}, c1), DescriptorError);
  CHECK_THROWS_AS(descriptor_to_binkey({{Categorical{5}, Categorical{0}}}, cp),
                  DescriptorError);
  CHECK_THROWS_AS(descriptor_to_binkey({{Continuous{0.1}, Categorical{0}}}, cp),
                  DescriptorError);
}

TEST_CASE("descriptor_to_binkey is pure") {
  const auto c = fx::config_2d();
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    DiversityDescriptor d{{Continuous{rng.uniform01()}, Continuous{rng.uniform01()}}};
    const auto a = descriptor_to_binkey(d, c);
    const auto b = descriptor_to_binkey(d, c);
    REQUIRE(a == b);
    REQUIRE(a.indices[0] == naive::bin_of(std::get<Continuous>(d.coords[0]).value,
                                          fx::kTicks2d));
  }
}

TEST_CASE("axis and archive config validation") {
  auto cat = fx::categorical("genre", {"haiku"});
  CHECK_THROWS_AS(validate_axis(cat), ArgumentError);
  auto dup = fx::categorical("genre", {"haiku", "haiku"});
  CHECK_THROWS_AS(validate_axis(dup), ArgumentError);
  auto same = fx::continuous("s", fx::kTicks1d, "x", "x");
  CHECK_THROWS_AS(validate_axis(same), ArgumentError);

  ArchiveConfig c = fx::config_1d();
  c.depth_limit = 0;
  CHECK_THROWS_AS(validate_archive_config(c), ArgumentError);
  c = fx::config_1d();
  c.fitness_low = 1.0;
  c.fitness_high = 1.0;
  CHECK_THROWS_AS(validate_archive_config(c), ArgumentError);
  c = fx::config_1d();
  c.tie_replace_probability = 1.5;
  CHECK_THROWS_AS(validate_archive_config(c), ArgumentError);
  c = fx::config_1d();
  c.axes.push_back(fx::continuous("sentiment"));
  CHECK_THROWS_AS(validate_archive_config(c), ArgumentError);
  c.axes.clear();
  CHECK_THROWS_AS(validate_archive_config(c), ArgumentError);

  CHECK(fx::config_1d().total_bins() == 20);
  CHECK(fx::config_2d().total_bins() == 100);
  CHECK(fx::config_poetry().total_bins() == 25);
  CHECK(fx::config_2d().axis_index("ending") == std::optional<std::size_t>(1));
  CHECK_FALSE(fx::config_2d().axis_index("tone").has_value());
}
