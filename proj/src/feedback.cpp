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

#include "qdaif/feedback.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qdaif/errors.hpp"

namespace qdaif {
namespace {

using nlohmann::json;

constexpr std::string_view kInstructionMarker = "### Instruction:\n";
constexpr std::string_view kInputMarker = "\n\n### Input:\n";
constexpr std::string_view kResponseMarker = "\n\n### Response:";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// The first {...} object in the response, if any parses.
std::optional<json> extract_object(std::string_view response) {
  const auto open = response.find('{');
  const auto close = response.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open) {
    return std::nullopt;
  }
  json j = json::parse(response.substr(open, close - open + 1), nullptr,
                       /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

const json* find_key(const json& obj, std::string_view key) {
  const std::string wanted = lower(key);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (lower(trim(it.key())) == wanted) return &it.value();
  }
  return nullptr;
}

std::optional<std::size_t> match_label(std::string_view token,
                                       const CategoricalAxis& axis) {
  const std::string needle = lower(trim(token));
  for (std::size_t i = 0; i < axis.labels.size(); ++i) {
    if (lower(trim(axis.labels[i])) == needle) return i;
  }
  return std::nullopt;
}

}  // namespace

double binary_score(const LabelLogprobs& lp, const std::string& positive,
                    const std::string& negative) {
  auto pos = lp.find(positive);
  auto neg = lp.find(negative);
  if (pos == lp.end() || neg == lp.end()) {
    throw FeedbackShapeError("log-probabilities lack label '" +
                             (pos == lp.end() ? positive : negative) + "'");
  }
  const double a = pos->second;
  const double b = neg->second;
  const double m = std::max(a, b);
  const double ea = std::exp(a - m);
  const double eb = std::exp(b - m);
  return ea / (ea + eb);
}

std::string build_feedback_prompt(std::string_view instruction,
                                  std::string_view input_text) {
  if (instruction.empty()) throw ArgumentError("feedback instruction is empty");
  if (input_text.empty()) throw ArgumentError("feedback input is empty");
  std::string out;
  out.reserve(instruction.size() + input_text.size() + 64);
  out += kInstructionMarker;
  out += instruction;
  out += kInputMarker;
  out += input_text;
  out += kResponseMarker;
  return out;
}

std::optional<FeedbackPromptParts> parse_feedback_prompt(
    std::string_view prompt) {
  if (!prompt.starts_with(kInstructionMarker) ||
      !prompt.ends_with(kResponseMarker)) {
    return std::nullopt;
  }
  std::string_view body = prompt.substr(
      kInstructionMarker.size(),
      prompt.size() - kInstructionMarker.size() - kResponseMarker.size());
  // The instruction is config text; the input is generated and may contain
  // anything, so split at the first input marker.
  const auto at = body.find(kInputMarker);
  if (at == std::string_view::npos) return std::nullopt;
  return FeedbackPromptParts{std::string(body.substr(0, at)),
                             std::string(body.substr(at + kInputMarker.size()))};
}

std::string build_categorical_prompt(
    std::string_view text, std::span<const CategoricalAxis* const> axes) {
  if (axes.empty()) throw ArgumentError("no categorical axes to ask about");
  std::string out(text);
  out += '\n';
  for (const auto* axis : axes) {
    out += axis->question;
    out += '\n';
  }
  out += "\nRespond in JSON with the ";
  out += axes.size() == 1 ? "key " : "keys ";
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i > 0) out += (i + 1 == axes.size()) ? (axes.size() > 2 ? ", and " : " and ") : ", ";
    out += '"' + axes[i]->key + '"';
  }
  out += '.';
  return out;
}

std::string build_rating_prompt(std::string_view text,
                                const RatingQuality& spec) {
  std::string out(text);
  out += '\n';
  out += spec.prompt;
  return out;
}

std::size_t parse_categorical_response(std::string_view response,
                                       const CategoricalAxis& axis,
                                       bool allow_bare) {
  if (auto obj = extract_object(response)) {
    const json* value = find_key(*obj, axis.key);
    if (value == nullptr) {
      throw FeedbackParseError("response has no key '" + axis.key + "'");
    }
    if (!value->is_string()) {
      throw FeedbackParseError("value for '" + axis.key + "' is not a string");
    }
    if (auto idx = match_label(value->get<std::string>(), axis)) return *idx;
    throw FeedbackParseError("unknown label '" + value->get<std::string>() +
                             "' for axis '" + axis.name + "'");
  }
  if (allow_bare) {
    std::string bare = trim(response);
    if (bare.size() >= 2 && (bare.front() == '"' || bare.front() == '\'') &&
        bare.back() == bare.front()) {
      bare = bare.substr(1, bare.size() - 2);
    }
    if (auto idx = match_label(bare, axis)) return *idx;
  }
  throw FeedbackParseError("cannot read a label for axis '" + axis.name +
                           "' from response");
}

RatingParse parse_rating_response(std::string_view response,
                                  const RatingQuality& spec) {
  std::optional<double> value;
  if (auto obj = extract_object(response)) {
    const json* v = find_key(*obj, spec.key);
    if (v == nullptr) {
      throw FeedbackParseError("response has no key '" + spec.key + "'");
    }
    if (v->is_number()) {
      value = v->get<double>();
    } else if (v->is_string()) {
      const std::string s = trim(v->get<std::string>());
      char* end = nullptr;
      const double d = std::strtod(s.c_str(), &end);
      if (end != s.c_str() && *end == '\0') value = d;
    }
  } else {
    const std::string s = trim(response);
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end != s.c_str() && *end == '\0') value = d;
  }
  if (!value || !std::isfinite(*value)) {
    throw FeedbackParseError("cannot read a rating from response");
  }
  RatingParse out{*value, false};
  if (out.value < spec.min) {
    out = {static_cast<double>(spec.min), true};
  } else if (out.value > spec.max) {
    out = {static_cast<double>(spec.max), true};
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ArgumentError("embedding vectors must be non-empty and equal length");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ArgumentError("zero embedding vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double embedding_diversity(std::span<const double> doc,
                           std::span<const double> query_low,
                           std::span<const double> query_high) {
  const double d_low = 1.0 - cosine_similarity(doc, query_low);
  const double d_high = 1.0 - cosine_similarity(doc, query_high);
  const double total = d_low + d_high;
  if (total == 0.0) return 0.5;
  return std::clamp(d_low / total, 0.0, 1.0);
}

Scored<double> evaluate_continuous_axis(const Genotype& genotype,
                                        const ContinuousAxis& axis,
                                        Backend& backend) {
  FeedbackRecord record;
  record.kind = "axis:" + axis.name;
  record.seq = backend.calls();
  if (axis.feedback == AxisFeedback::kEmbedding) {
    const auto doc = backend.embed(genotype.text);
    const auto low = backend.embed(axis.query_low);
    const auto high = backend.embed(axis.query_high);
    const double v = embedding_diversity(doc, low, high);
    record.prompt = genotype.text;
    record.response = json(v).dump();
    return {v, std::move(record)};
  }
  record.prompt = build_feedback_prompt(axis.eval_instruction, genotype.text);
  record.logprobs = backend.label_logprobs(record.prompt,
                                           {axis.label_high, axis.label_low});
  const double v = binary_score(record.logprobs, axis.label_high, axis.label_low);
  return {v, std::move(record)};
}

Scored<std::size_t> evaluate_categorical_axis(const Genotype& genotype,
                                              const CategoricalAxis& axis,
                                              Backend& backend,
                                              const SamplingParams& judge) {
  FeedbackRecord record;
  record.kind = "axis:" + axis.name;
  record.seq = backend.calls();
  const CategoricalAxis* axes[] = {&axis};
  record.prompt = build_categorical_prompt(genotype.text, axes);
  record.response = backend.chat({{"user", record.prompt}}, judge);
  const std::size_t idx = parse_categorical_response(record.response, axis);
  return {idx, std::move(record)};
}

Scored<double> evaluate_quality(const Genotype& genotype,
                                const QualitySpec& spec, Backend& backend,
                                const SamplingParams& judge) {
  FeedbackRecord record;
  record.kind = "quality";
  record.seq = backend.calls();
  if (const auto* binary = std::get_if<BinaryQuality>(&spec.kind)) {
    record.prompt = build_feedback_prompt(binary->eval_instruction, genotype.text);
    record.logprobs = backend.label_logprobs(
        record.prompt, {binary->yes_label, binary->no_label});
    const double q =
        binary_score(record.logprobs, binary->yes_label, binary->no_label);
    return {q, std::move(record)};
  }
  if (const auto* rating = std::get_if<RatingQuality>(&spec.kind)) {
    record.prompt = build_rating_prompt(genotype.text, *rating);
    record.response = backend.chat({{"user", record.prompt}}, judge);
    const RatingParse parsed = parse_rating_response(record.response, *rating);
    return {parsed.value, std::move(record), parsed.clamped};
  }
  const auto& emb = std::get<EmbeddingQuality>(spec.kind);
  const auto doc = backend.embed(genotype.text);
  const auto query = backend.embed(emb.query);
  const double q = std::clamp(cosine_similarity(doc, query), 0.0, 1.0);
  record.prompt = genotype.text;
  record.response = json(q).dump();
  return {q, std::move(record)};
}

Evaluation evaluate(const Genotype& genotype, const ArchiveConfig& config,
                    const QualitySpec& quality, Backend& backend,
                    const SamplingParams& judge, FeedbackStats* stats) {
  Evaluation eval;
  auto q = evaluate_quality(genotype, quality, backend, judge);
  eval.quality = q.value;
  eval.raw.push_back(std::move(q.record));
  if (q.clamped && stats != nullptr) ++stats->clamped_ratings;

  std::vector<const CategoricalAxis*> categorical;
  eval.descriptor.coords.resize(config.axes.size());
  for (std::size_t i = 0; i < config.axes.size(); ++i) {
    const auto& axis = config.axes[i];
    if (axis.is_continuous()) {
      auto s = evaluate_continuous_axis(genotype, axis.continuous(), backend);
      eval.descriptor.coords[i] = Continuous{s.value};
      eval.raw.push_back(std::move(s.record));
    } else {
      categorical.push_back(&axis.categorical());
    }
  }
  if (!categorical.empty()) {
    FeedbackRecord record;
    record.kind = "categorical";
    record.seq = backend.calls();
    record.prompt = build_categorical_prompt(genotype.text, categorical);
    record.response = backend.chat({{"user", record.prompt}}, judge);
    const bool bare_ok = categorical.size() == 1;
    for (std::size_t i = 0; i < config.axes.size(); ++i) {
      if (config.axes[i].is_continuous()) continue;
      eval.descriptor.coords[i] = Categorical{parse_categorical_response(
          record.response, config.axes[i].categorical(), bare_ok)};
    }
    eval.raw.push_back(std::move(record));
  }
  return eval;
}

AxisValue evaluate_axis(const Genotype& genotype, const AxisSpec& axis,
                        Backend& backend, const SamplingParams& judge) {
  if (axis.is_continuous()) {
    return Continuous{
        evaluate_continuous_axis(genotype, axis.continuous(), backend).value};
  }
  return Categorical{
      evaluate_categorical_axis(genotype, axis.categorical(), backend, judge)
          .value};
}

}  // namespace qdaif
