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

#ifndef QDAIF_SEARCH_HPP_
#define QDAIF_SEARCH_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdaif/archive.hpp"
#include "qdaif/backend.hpp"
#include "qdaif/core.hpp"
#include "qdaif/feedback.hpp"
#include "qdaif/mutation.hpp"

namespace qdaif {

enum class Method {
  kQdaifLmxNear,
  kQdaifLmxReplace,
  kQdaifRewrite,
  kQdaifGuided,
  kFixedFewShot,
  kShufflingFewShot,
  kRandomSearch,
  kQualityOnly,
  kRougeFilter,
  kNsaif,
  kRougeFilterQaif,
  kNsaifQaif,
  kRandomFresh,
  kTargetedFresh,
};

// Names as written in config files, e.g. "qdaif-lmx-near", "nsaif+qaif".
std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
std::vector<Method> all_methods();

bool is_qdaif(Method method);
// Methods that generate through chat with instruction prompts rather than
// few-shot completion.
bool uses_chat(Method method);

enum class InitMode { kSeeded, kZeroShot };

std::string_view to_string(InitMode mode);
InitMode init_mode_from_string(std::string_view name);

struct NoveltyParams {
  std::size_t k = 15;
  double initial_threshold = 0.05;
  double raise_factor = 1.05;
  double lower_factor = 0.95;
  std::size_t accept_streak = 3;
  std::size_t reject_streak = 21;
};

struct NoveltyState {
  double threshold = 0.05;
  std::size_t consecutive_accepts = 0;
  std::size_t consecutive_rejects = 0;
};

NoveltyState update_threshold(NoveltyState s, bool accepted,
                              const NoveltyParams& params = {});

// Mean Euclidean distance to the min(k, |pool|) nearest pool points;
// +infinity for an empty pool. Throws ArgumentError on dimension mismatch.
double novelty(const std::vector<double>& candidate,
               const std::vector<std::vector<double>>& pool, std::size_t k);

// Descriptor coordinates mapped onto [0, 1] with equal-width bins:
// continuous values through to_uniform on the axis grid, category i of n to
// (i + 0.5) / n.
std::vector<double> uniformized(const DiversityDescriptor& d,
                                const ArchiveConfig& config);

// Case-folded whitespace tokens.
std::vector<std::string> tokenize(std::string_view text);

// ROUGE-L F1 over token sequences; 0 when either side is empty.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference);

// Archive change effective at the start of `iteration`.
struct ScheduleEntry {
  std::uint64_t iteration = 0;
  ArchiveConfig archive;
};

struct RunConfig {
  Method method = Method::kQdaifLmxNear;
  InitMode init = InitMode::kSeeded;
  std::vector<std::string> seed_texts;
  std::size_t iterations = 2000;
  std::size_t init_iterations = 50;
  std::size_t zero_shot_pool_size = 10;
  // When false, baselines skip the init phase and apply their own rule from
  // the first iteration.
  bool baseline_init = true;

  ArchiveConfig archive;
  QualitySpec quality;
  LmxTemplate lmx;
  RewriteTemplates rewrite;
  SamplingParams sampling;
  SamplingParams judge{0.0, 1.0, 64, {}};
  BackendSpec backend;
  std::uint64_t seed = 0;
  std::vector<ScheduleEntry> schedule;

  // Baseline parameters.
  double rouge_threshold = 0.7;
  double quality_gate = 0.8;
  std::size_t gated_pool_capacity = 100;
  std::size_t quality_pool_capacity = 100;
  NoveltyParams novelty;
  std::size_t replace_pool_depth = 3;
};

// Throws ConfigError naming the offending field.
void validate_run_config(const RunConfig& config);

struct IterationRecord {
  std::uint64_t iter = 0;
  bool init_phase = false;
  IndividualId id = 0;
  std::vector<IndividualId> parent_ids;
  std::string prompt;
  std::string text;
  std::vector<std::string> context;

  // Set when generation or feedback failed; the evaluation fields are then
  // absent and nothing was inserted.
  std::string error;

  std::optional<double> quality;
  std::optional<DiversityDescriptor> descriptor;
  std::optional<BinKey> bin;
  std::optional<InsertOutcome> outcome;
  std::vector<FeedbackRecord> feedback;

  std::size_t pool_size = 0;
  std::optional<bool> pool_admitted;
  std::optional<double> novelty;
  std::optional<double> threshold;
  std::optional<double> rouge;
  bool context_unchanged = false;  // LMX-Replace found no replacement

  bool failed() const { return !error.empty(); }
};

struct RemapEvent {
  std::uint64_t iteration = 0;
  ArchiveConfig archive;
  std::vector<RemapEntry> entries;
};

struct RunLog {
  RunConfig config;
  std::vector<IterationRecord> records;
  std::vector<RemapEvent> remaps;
  bool complete = true;
  std::string abort_reason;
  std::size_t clamped_ratings = 0;
  std::optional<Archive> archive;  // final state
};

struct RunObserver {
  std::function<void(const IterationRecord&)> on_record;
  std::function<void(const RemapEvent&)> on_remap;
};

// Runs the configured method against `backend` (the run config's backend
// spec is not consulted). Backend exhaustion and transport failures end the
// run early with complete = false.
RunLog run(const RunConfig& config, Backend& backend,
           const RunObserver& observer = {});

// Random streams used by the run loop, derived from the run seed.
inline constexpr std::string_view kSelectionStream = "selection";
inline constexpr std::string_view kArchiveStream = "archive";

}  // namespace qdaif

#endif  // QDAIF_SEARCH_HPP_
