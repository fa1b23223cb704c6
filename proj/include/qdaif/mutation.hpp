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

#ifndef QDAIF_MUTATION_HPP_
#define QDAIF_MUTATION_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdaif/archive.hpp"
#include "qdaif/core.hpp"
#include "qdaif/rng.hpp"

namespace qdaif {

struct LmxTemplate {
  std::string instruction_prefix;
  std::string separator = "\n###\n";
  std::size_t few_shot_count = 3;
};

void validate_template(const LmxTemplate& t);

struct PoolEntry {
  Genotype genotype;
  double quality = 0.0;
  // Uniformized descriptor coordinates; empty when unknown (seed texts).
  std::vector<double> novelty_coords;
};

struct PromptPool {
  std::vector<PoolEntry> entries;
  std::optional<std::size_t> capacity;

  std::size_t size() const { return entries.size(); }
};

PromptPool pool_from_texts(const std::vector<std::string>& texts,
                           double quality = 0.0);

struct FewShotContext {
  std::vector<std::string> examples;
  friend bool operator==(const FewShotContext&, const FewShotContext&) = default;
};

// prefix+example+separator for every example, then the prefix once more.
std::string render_lmx_prompt(const FewShotContext& ctx, const LmxTemplate& t);

// The prefix alone.
std::string zero_shot_init_prompt(const LmxTemplate& t);

// few_shot_count distinct archive elites, padded from `seed_pool` without
// replacement when the archive is too sparse; order shuffled. Ids of the
// elites used are appended to `parent_ids` when given.
FewShotContext lmx_near(const Archive& archive, const PromptPool& seed_pool,
                        const LmxTemplate& t, Rng& rng,
                        std::vector<IndividualId>* parent_ids = nullptr);

// few_shot_count distinct pool texts in random order.
FewShotContext sample_context(const PromptPool& pool, std::size_t count,
                              Rng& rng);

struct ReplaceResult {
  FewShotContext context;
  bool replaced = false;
  std::size_t position = 0;
};

// Copy of the parent's context with one uniformly chosen slot swapped for a
// uniformly chosen pool text that is not already in the context. Falls back
// to the unchanged context when no such text exists.
ReplaceResult lmx_replace(const FewShotContext& parent_context,
                          const PromptPool& pool, Rng& rng);

enum class RewriteMode { kRewrite, kGuided, kTargetedFresh, kRandomFresh };

// Instruction strings for instruction-following generation. Placeholders:
// {<key>} for a target label and {parent_<key>} for the parent's label, where
// <key> is a categorical axis key.
struct RewriteTemplates {
  std::string rewrite =
      "Inspired by this poem, write a new poem of very high, award winning "
      "quality with a different poetic genre (format and form) and tone "
      "compared to the poem above.";
  std::string guided =
      "Translate this {parent_genre} poem into a {tone} {genre} poem of very "
      "high, award winning quality.";
  std::string targeted =
      "Write a {tone} {genre} poem of very high, award winning quality.";
  std::string random = "Write a poem of very high, award winning quality.";
};

// Rewrite and Guided put the parent text first and the instruction on the
// next line. Throws ArgumentError when a required input or placeholder value
// is missing.
std::string rewrite_prompt(
    const std::optional<std::string>& parent_text,
    const std::map<std::string, std::string>& parent_labels,
    const std::map<std::string, std::string>& target, RewriteMode mode,
    const RewriteTemplates& templates = {});

struct Unbounded {};
struct QualityTopK {
  std::size_t k = 100;
};
struct TopPerBin {
  const Archive* archive = nullptr;
  std::size_t k = 3;
};
using PoolPolicy = std::variant<Unbounded, QualityTopK, TopPerBin>;

// Unbounded appends; QualityTopK appends and keeps the k best (stable on
// ties, so older entries survive); TopPerBin rebuilds from the archive.
PromptPool update_pool(PromptPool pool, PoolEntry candidate,
                       const PoolPolicy& policy);

}  // namespace qdaif

#endif  // QDAIF_MUTATION_HPP_
