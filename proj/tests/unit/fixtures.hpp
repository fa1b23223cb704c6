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

#ifndef QDAIF_TESTS_FIXTURES_HPP_
#define QDAIF_TESTS_FIXTURES_HPP_

#include <string>
#include <vector>

#include "qdaif/archive.hpp"
#include "qdaif/core.hpp"

namespace fx {

// Tick lists as printed in the hyperparameter tables.
inline const std::vector<double> kTicks1d = {
    0, 0.005, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05, 0.10, 0.20, 0.50,
    0.80, 0.90, 0.95, 0.96, 0.97, 0.98, 0.985, 0.99, 0.995, 1};
inline const std::vector<double> kTicks2d = {0,    0.005, 0.02, 0.05, 0.20, 0.50,
                                             0.80, 0.95,  0.98, 0.995, 1};
inline const std::vector<double> kTicksEmbedding = {
    0, 0.4, 0.41, 0.42, 0.43, 0.44, 0.45, 0.46, 0.47, 0.48, 0.50,
    0.52, 0.53, 0.54, 0.55, 0.56, 0.57, 0.58, 0.59, 0.60, 1};

inline const std::vector<std::string> kGenres = {"haiku", "sonnet", "ballad",
                                                 "limerick", "hymn"};
inline const std::vector<std::string> kTones = {"happy", "dark", "mysterious",
                                                "romantic", "reflective"};

inline qdaif::AxisSpec continuous(const std::string& name,
                                  const std::vector<double>& ticks = kTicks1d,
                                  std::string low = "negative",
                                  std::string high = "positive") {
  qdaif::ContinuousAxis a;
  a.name = name;
  a.grid = qdaif::TickGrid(ticks);
  a.eval_instruction = "Judge the " + name + ".";
  a.label_low = std::move(low);
  a.label_high = std::move(high);
  return {a};
}

inline qdaif::AxisSpec categorical(const std::string& name,
                                   const std::vector<std::string>& labels) {
  qdaif::CategoricalAxis a;
  a.name = name;
  a.key = name;
  a.labels = labels;
  a.question = "What " + name + " is this poem closest to?";
  return {a};
}

inline qdaif::ArchiveConfig config_1d(std::size_t depth = 100) {
  qdaif::ArchiveConfig c;
  c.axes = {continuous("sentiment")};
  c.depth_limit = depth;
  return c;
}

inline qdaif::ArchiveConfig config_2d() {
  qdaif::ArchiveConfig c;
  c.axes = {continuous("genre", kTicks2d, "horror", "romance"),
            continuous("ending", kTicks2d, "tragedy", "happy ending")};
  return c;
}

inline qdaif::ArchiveConfig config_poetry() {
  qdaif::ArchiveConfig c;
  c.axes = {categorical("genre", kGenres), categorical("tone", kTones)};
  c.fitness_low = 1.0;
  c.fitness_high = 10.0;
  c.tie_replace_probability = 0.5;
  return c;
}

inline qdaif::Individual individual(qdaif::IndividualId id, double quality,
                                    std::vector<qdaif::AxisValue> coords,
                                    std::string text = {}) {
  qdaif::Individual ind;
  ind.id = id;
  ind.genotype.text = text.empty() ? "text " + std::to_string(id) : text;
  ind.eval.quality = quality;
  ind.eval.descriptor.coords = std::move(coords);
  return ind;
}

inline qdaif::Individual at(qdaif::IndividualId id, double quality, double x) {
  return individual(id, quality, {qdaif::Continuous{x}});
}

// Middle of bin i of a tick list.
inline double mid(const std::vector<double>& ticks, std::size_t i) {
  return (ticks[i] + ticks[i + 1]) / 2.0;
}

}  // namespace fx

#endif  // QDAIF_TESTS_FIXTURES_HPP_
