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

#include "qdaif/mutation.hpp"

#include <algorithm>
#include <set>

#include "qdaif/errors.hpp"

namespace qdaif {
namespace {

std::string substitute(const std::string& pattern,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') {
      out += pattern[i];
      continue;
    }
    const auto close = pattern.find('}', i);
    if (close == std::string::npos) {
      out += pattern.substr(i);
      break;
    }
    const std::string name = pattern.substr(i + 1, close - i - 1);
    auto it = values.find(name);
    if (it == values.end()) {
      throw ArgumentError("no value for placeholder {" + name + "}");
    }
    out += it->second;
    i = close;
  }
  return out;
}

}  // namespace

void validate_template(const LmxTemplate& t) {
  if (t.instruction_prefix.empty()) {
    throw ArgumentError("LMX instruction prefix is empty");
  }
  if (t.few_shot_count < 1) throw ArgumentError("few_shot_count must be >= 1");
}

PromptPool pool_from_texts(const std::vector<std::string>& texts,
                           double quality) {
  PromptPool pool;
  for (const auto& text : texts) {
    PoolEntry e;
    e.genotype.text = text;
    e.quality = quality;
    pool.entries.push_back(std::move(e));
  }
  return pool;
}

std::string render_lmx_prompt(const FewShotContext& ctx, const LmxTemplate& t) {
  if (ctx.examples.empty()) throw ArgumentError("few-shot context is empty");
  std::string out;
  for (const auto& example : ctx.examples) {
    if (example.empty()) throw ArgumentError("few-shot example is empty");
    out += t.instruction_prefix;
    out += example;
    out += t.separator;
  }
  out += t.instruction_prefix;
  return out;
}

std::string zero_shot_init_prompt(const LmxTemplate& t) {
  return t.instruction_prefix;
}

FewShotContext lmx_near(const Archive& archive, const PromptPool& seed_pool,
                        const LmxTemplate& t, Rng& rng,
                        std::vector<IndividualId>* parent_ids) {
  const std::size_t k = t.few_shot_count;
  if (archive.occupied() + seed_pool.size() < k) {
    throw InsufficientParentsError(
        "need " + std::to_string(k) + " parents, archive has " +
        std::to_string(archive.occupied()) + " elites and seed pool " +
        std::to_string(seed_pool.size()));
  }
  FewShotContext ctx;
  for (const auto& elite : archive.sample_elites(k, rng)) {
    ctx.examples.push_back(elite.genotype.text);
    if (parent_ids != nullptr) parent_ids->push_back(elite.id);
  }
  if (ctx.examples.size() < k) {
    const std::size_t missing = k - ctx.examples.size();
    for (std::size_t idx : rng.sample_indices(seed_pool.size(), missing)) {
      ctx.examples.push_back(seed_pool.entries[idx].genotype.text);
    }
  }
  rng.shuffle(ctx.examples);
  return ctx;
}

FewShotContext sample_context(const PromptPool& pool, std::size_t count,
                              Rng& rng) {
  if (pool.size() == 0) throw InsufficientParentsError("prompt pool is empty");
  FewShotContext ctx;
  for (std::size_t idx : rng.sample_indices(pool.size(), count)) {
    ctx.examples.push_back(pool.entries[idx].genotype.text);
  }
  return ctx;
}

ReplaceResult lmx_replace(const FewShotContext& parent_context,
                          const PromptPool& pool, Rng& rng) {
  ReplaceResult out{parent_context, false, 0};
  if (parent_context.examples.empty()) return out;
  const std::set<std::string> present(parent_context.examples.begin(),
                                      parent_context.examples.end());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    if (!present.contains(pool.entries[i].genotype.text)) candidates.push_back(i);
  }
  if (candidates.empty()) return out;
  out.position = rng.uniform_index(parent_context.examples.size());
  const std::size_t pick = candidates[rng.uniform_index(candidates.size())];
  out.context.examples[out.position] = pool.entries[pick].genotype.text;
  out.replaced = true;
  return out;
}

std::string rewrite_prompt(
    const std::optional<std::string>& parent_text,
    const std::map<std::string, std::string>& parent_labels,
    const std::map<std::string, std::string>& target, RewriteMode mode,
    const RewriteTemplates& templates) {
  std::map<std::string, std::string> values = target;
  for (const auto& [key, label] : parent_labels) values["parent_" + key] = label;

  const bool needs_parent =
      mode == RewriteMode::kRewrite || mode == RewriteMode::kGuided;
  const bool needs_target =
      mode == RewriteMode::kGuided || mode == RewriteMode::kTargetedFresh;
  if (needs_parent && (!parent_text || parent_text->empty())) {
    throw ArgumentError("rewrite needs a parent text");
  }
  if (needs_target && target.empty()) {
    throw ArgumentError("guided and targeted prompts need a target");
  }
  switch (mode) {
    case RewriteMode::kRewrite:
      return *parent_text + "\n" + substitute(templates.rewrite, values);
    case RewriteMode::kGuided:
      return *parent_text + "\n" + substitute(templates.guided, values);
    case RewriteMode::kTargetedFresh:
      return substitute(templates.targeted, values);
    case RewriteMode::kRandomFresh:
      return substitute(templates.random, values);
  }
  return {};
}

PromptPool update_pool(PromptPool pool, PoolEntry candidate,
                       const PoolPolicy& policy) {
  if (std::holds_alternative<Unbounded>(policy)) {
    pool.entries.push_back(std::move(candidate));
    return pool;
  }
  if (const auto* topk = std::get_if<QualityTopK>(&policy)) {
    pool.entries.push_back(std::move(candidate));
    std::stable_sort(pool.entries.begin(), pool.entries.end(),
                     [](const PoolEntry& a, const PoolEntry& b) {
                       return a.quality > b.quality;
                     });
    if (pool.entries.size() > topk->k) pool.entries.resize(topk->k);
    pool.capacity = topk->k;
    return pool;
  }
  const auto& per_bin = std::get<TopPerBin>(policy);
  if (per_bin.archive == nullptr) throw ArgumentError("TopPerBin needs an archive");
  PromptPool rebuilt;
  rebuilt.capacity = pool.capacity;
  for (auto& g : per_bin.archive->top_k_pool(per_bin.k)) {
    PoolEntry e;
    e.genotype = std::move(g);
    rebuilt.entries.push_back(std::move(e));
  }
  // Qualities come from the archive members.
  std::size_t i = 0;
  for (const auto& [key, cell] : per_bin.archive->cells()) {
    const std::size_t take = std::min(per_bin.k, cell.members.size());
    for (std::size_t j = 0; j < take; ++j) {
      rebuilt.entries[i++].quality = cell.members[j].eval.quality;
    }
  }
  return rebuilt;
}

}  // namespace qdaif
