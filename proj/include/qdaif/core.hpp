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

#ifndef QDAIF_CORE_HPP_
#define QDAIF_CORE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdaif/binning.hpp"

namespace qdaif {

// Sequence numbers handed out by the run loop.
using IndividualId = std::uint64_t;

struct Genotype {
  std::string text;
  std::vector<IndividualId> parent_ids;
  std::string prompt_used;
  std::uint64_t created_at_iter = 0;
  // Few-shot examples the text was generated from (empty for zero-shot and
  // rewrite generations). LMX-Replace mutates this context.
  std::vector<std::string> context;

  friend bool operator==(const Genotype&, const Genotype&) = default;
};

struct Continuous {
  double value = 0.0;
  friend bool operator==(const Continuous&, const Continuous&) = default;
};

struct Categorical {
  std::size_t index = 0;
  friend bool operator==(const Categorical&, const Categorical&) = default;
};

using AxisValue = std::variant<Continuous, Categorical>;

struct DiversityDescriptor {
  std::vector<AxisValue> coords;
  friend bool operator==(const DiversityDescriptor&,
                         const DiversityDescriptor&) = default;
};

// One exchange with a judge model, kept for audit. `seq` is the backend call
// sequence number (a logical timestamp, so logs stay reproducible).
struct FeedbackRecord {
  std::string kind;  // "quality", "axis:<name>", "categorical", ...
  std::string prompt;
  std::string response;
  std::map<std::string, double> logprobs;
  std::uint64_t seq = 0;

  friend bool operator==(const FeedbackRecord&,
                         const FeedbackRecord&) = default;
};

struct Evaluation {
  double quality = 0.0;
  DiversityDescriptor descriptor;
  std::vector<FeedbackRecord> raw;
};

struct BinKey {
  std::vector<std::size_t> indices;
  friend auto operator<=>(const BinKey&, const BinKey&) = default;
  friend bool operator==(const BinKey&, const BinKey&) = default;
};

struct Individual {
  IndividualId id = 0;
  Genotype genotype;
  Evaluation eval;
  BinKey bin;
};

enum class AxisFeedback { kLogprob, kEmbedding };

// A diversity dimension scored by a pair of opposing labels. 0 is the
// low-label end, 1 the high-label end.
struct ContinuousAxis {
  std::string name;
  TickGrid grid = default_grid_1d();
  std::string eval_instruction;
  std::string label_low;
  std::string label_high;
  AxisFeedback feedback = AxisFeedback::kLogprob;
  // Embedding queries for the two ends, used when feedback is kEmbedding.
  std::string query_low;
  std::string query_high;
};

// A diversity dimension with an ordered list of labels, scored by asking the
// judge for a JSON object holding `key`.
struct CategoricalAxis {
  std::string name;
  std::string key;
  std::vector<std::string> labels;
  std::string question;
};

struct AxisSpec {
  std::variant<ContinuousAxis, CategoricalAxis> kind;

  const std::string& name() const;
  std::size_t bin_count() const;
  bool is_continuous() const {
    return std::holds_alternative<ContinuousAxis>(kind);
  }
  const ContinuousAxis& continuous() const {
    return std::get<ContinuousAxis>(kind);
  }
  const CategoricalAxis& categorical() const {
    return std::get<CategoricalAxis>(kind);
  }
};

// Throws ArgumentError if labels or grid violate the axis invariants.
void validate_axis(const AxisSpec& axis);

struct ArchiveConfig {
  std::vector<AxisSpec> axes;
  std::size_t depth_limit = 100;
  double fitness_low = 0.0;
  double fitness_high = 1.0;
  double tie_replace_probability = 0.0;

  std::size_t total_bins() const;
  // Index of the axis with this name, or nullopt.
  std::optional<std::size_t> axis_index(const std::string& name) const;
};

void validate_archive_config(const ArchiveConfig& config);

// Throws DescriptorError when the descriptor does not fit the config.
void validate_descriptor(const DiversityDescriptor& d,
                         const ArchiveConfig& config);

BinKey descriptor_to_binkey(const DiversityDescriptor& d,
                            const ArchiveConfig& config);

}  // namespace qdaif

#endif  // QDAIF_CORE_HPP_
