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

#ifndef QDAIF_FEEDBACK_HPP_
#define QDAIF_FEEDBACK_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdaif/backend.hpp"
#include "qdaif/core.hpp"

namespace qdaif {

// Stamped into run logs so that changes to the judge template are visible.
inline constexpr std::string_view kFeedbackTemplateVersion =
    "instruction-input-response/1";

struct BinaryQuality {
  std::string eval_instruction;
  std::string yes_label = "yes";
  std::string no_label = "no";
};

struct RatingQuality {
  // Appended on its own line after the text.
  std::string prompt;
  int min = 1;
  int max = 10;
  std::string key = "quality";
};

struct EmbeddingQuality {
  std::string query;
};

struct QualitySpec {
  std::variant<BinaryQuality, RatingQuality, EmbeddingQuality> kind;
};

// exp(lp+) / (exp(lp+) + exp(lp-)), shifted by the max for stability.
// Throws FeedbackShapeError if either label is missing.
double binary_score(const LabelLogprobs& lp, const std::string& positive,
                    const std::string& negative);

// "### Instruction:\n{instruction}\n\n### Input:\n{input}\n\n### Response:"
std::string build_feedback_prompt(std::string_view instruction,
                                  std::string_view input_text);

struct FeedbackPromptParts {
  std::string instruction;
  std::string input;
};

std::optional<FeedbackPromptParts> parse_feedback_prompt(
    std::string_view prompt);

// Text, then one question line per axis, then a line asking for JSON with the
// axes' keys.
std::string build_categorical_prompt(
    std::string_view text, std::span<const CategoricalAxis* const> axes);

// Text, then the rating request on the next line.
std::string build_rating_prompt(std::string_view text,
                                const RatingQuality& spec);

// Accepts a JSON object (possibly wrapped in prose or code fences) holding the
// axis key, or, when `allow_bare` is set, a bare label as the whole response.
// Throws FeedbackParseError.
std::size_t parse_categorical_response(std::string_view response,
                                       const CategoricalAxis& axis,
                                       bool allow_bare = true);

struct RatingParse {
  double value = 0.0;
  bool clamped = false;
};

RatingParse parse_rating_response(std::string_view response,
                                  const RatingQuality& spec);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// d_low / (d_low + d_high) with d = 1 - cosine similarity; 0.5 when both
// distances vanish.
double embedding_diversity(std::span<const double> doc,
                           std::span<const double> query_low,
                           std::span<const double> query_high);

template <typename T>
struct Scored {
  T value;
  FeedbackRecord record;
  bool clamped = false;
};

Scored<double> evaluate_continuous_axis(const Genotype& genotype,
                                        const ContinuousAxis& axis,
                                        Backend& backend);

Scored<std::size_t> evaluate_categorical_axis(const Genotype& genotype,
                                              const CategoricalAxis& axis,
                                              Backend& backend,
                                              const SamplingParams& judge = {});

Scored<double> evaluate_quality(const Genotype& genotype,
                                const QualitySpec& spec, Backend& backend,
                                const SamplingParams& judge = {});

struct FeedbackStats {
  std::size_t clamped_ratings = 0;
};

// Quality plus every axis of `config`. Categorical axes share one judge call.
Evaluation evaluate(const Genotype& genotype, const ArchiveConfig& config,
                    const QualitySpec& quality, Backend& backend,
                    const SamplingParams& judge,
                    FeedbackStats* stats = nullptr);

// One axis only, for archive remapping.
AxisValue evaluate_axis(const Genotype& genotype, const AxisSpec& axis,
                        Backend& backend, const SamplingParams& judge);

}  // namespace qdaif

#endif  // QDAIF_FEEDBACK_HPP_
