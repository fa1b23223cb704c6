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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdaif/backend.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/feedback.hpp"
#include "qdaif/rng.hpp"

namespace qdaif {
namespace {

using nlohmann::json;

std::vector<std::string> split(std::string_view text, std::string_view sep) {
  std::vector<std::string> out;
  if (sep.empty()) {
    out.emplace_back(text);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto at = text.find(sep, start);
    if (at == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, at - start));
    start = at + sep.size();
  }
}

std::vector<std::string> lines_of(std::string_view text) {
  return split(text, "\n");
}

// Quoted tokens ("..." or '...') in order of appearance.
std::vector<std::string> quoted_tokens(std::string_view line) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char q = line[i];
    if (q != '"' && q != '\'') continue;
    const auto end = line.find(q, i + 1);
    if (end == std::string_view::npos) break;
    out.emplace_back(line.substr(i + 1, end - i - 1));
    i = end;
  }
  return out;
}

}  // namespace

SyntheticOracle::SyntheticOracle(OracleParams params)
    : params_(std::move(params)) {
  if (params_.alphabet.empty()) throw ArgumentError("oracle alphabet is empty");
  if (params_.target_length == 0) {
    throw ArgumentError("oracle target length must be positive");
  }
}

double SyntheticOracle::quality_of(std::string_view text) const {
  const double L = static_cast<double>(params_.target_length);
  const double len = static_cast<double>(text.size());
  return std::clamp(1.0 - std::abs(len - L) / L, 0.0, 1.0);
}

double SyntheticOracle::feature_of(std::size_t feature,
                                   std::string_view text) const {
  const std::string& marked = params_.features.at(feature).marked;
  std::size_t total = 0;
  std::size_t hits = 0;
  for (char c : text) {
    if (params_.alphabet.find(c) == std::string::npos) continue;
    ++total;
    if (marked.find(c) != std::string::npos) ++hits;
  }
  return total == 0 ? 0.5
                    : static_cast<double>(hits) / static_cast<double>(total);
}

std::string SyntheticOracle::generate(const std::string& prompt,
                                      const std::vector<std::string>& segments,
                                      double temperature) {
  std::uint64_t call = 0;
  {
    std::lock_guard lock(mu_);
    call = generation_calls_++;
  }
  std::uint64_t stream = params_.seed ^ fnv1a(prompt);
  if (temperature > 0.0) stream ^= splitmix64(call + 1);
  Rng rng(splitmix64(stream));

  const std::size_t n_features = params_.features.size();
  std::vector<double> mean_f(n_features, 0.0);
  double mean_len = 0.0;
  std::size_t n_examples = 0;
  for (const auto& seg : segments) {
    std::size_t len = 0;
    for (char c : seg) {
      if (params_.alphabet.find(c) != std::string::npos) ++len;
    }
    if (len == 0) continue;
    ++n_examples;
    mean_len += static_cast<double>(len);
    for (std::size_t j = 0; j < n_features; ++j) mean_f[j] += feature_of(j, seg);
  }

  const double L = static_cast<double>(params_.target_length);
  std::vector<double> target_f(n_features);
  double length;
  if (n_examples == 0) {
    for (auto& f : target_f) f = rng.uniform01();
    length = L * (0.5 + rng.uniform01());
  } else {
    const double k = static_cast<double>(n_examples);
    for (std::size_t j = 0; j < n_features; ++j) {
      target_f[j] = std::clamp(
          mean_f[j] / k + params_.fraction_noise * temperature * rng.normal(),
          0.0, 1.0);
    }
    length = mean_len / k + params_.length_noise * temperature * rng.normal();
  }
  const auto n_chars = static_cast<std::size_t>(
      std::clamp(std::round(length), 1.0, 3.0 * L));

  std::string out;
  out.reserve(n_chars);
  std::vector<char> candidates;
  for (std::size_t i = 0; i < n_chars; ++i) {
    std::vector<bool> bits(n_features);
    for (std::size_t j = 0; j < n_features; ++j) bits[j] = rng.bernoulli(target_f[j]);
    candidates.clear();
    for (char c : params_.alphabet) {
      bool ok = true;
      for (std::size_t j = 0; j < n_features && ok; ++j) {
        const bool marked =
            params_.features[j].marked.find(c) != std::string::npos;
        ok = marked == bits[j];
      }
      if (ok) candidates.push_back(c);
    }
    if (candidates.empty()) {
      candidates.assign(params_.alphabet.begin(), params_.alphabet.end());
    }
    out.push_back(candidates[rng.uniform_index(candidates.size())]);
  }
  return out;
}

std::string SyntheticOracle::do_complete(const std::string& prompt,
                                         const SamplingParams& params) {
  return generate(prompt, split(prompt, params_.separator), params.temperature);
}

LabelLogprobs SyntheticOracle::do_label_logprobs(
    const std::string& prompt, const std::vector<std::string>& labels) {
  const auto parts = parse_feedback_prompt(prompt);
  const std::string text = parts ? parts->input : prompt;
  const double floor = params_.probability_floor;
  auto logp = [floor](double p) { return std::log(std::max(p, floor)); };

  LabelLogprobs out;
  for (const auto& label : labels) {
    double value = std::log(floor);
    if (label == params_.yes_label) {
      value = logp(quality_of(text));
    } else if (label == params_.no_label) {
      value = logp(1.0 - quality_of(text));
    } else {
      for (std::size_t j = 0; j < params_.features.size(); ++j) {
        if (label == params_.features[j].high_label) {
          value = logp(feature_of(j, text));
          break;
        }
        if (label == params_.features[j].low_label) {
          value = logp(1.0 - feature_of(j, text));
          break;
        }
      }
    }
    out.emplace(label, value);
  }
  return out;
}

std::string SyntheticOracle::judge_chat(const std::string& content) const {
  const auto lines = lines_of(content);
  std::size_t first_question = lines.size();
  bool categorical = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find("following list") != std::string::npos) {
      first_question = i;
      categorical = true;
      break;
    }
  }
  if (!categorical) {
    // Rating: the text is everything before the final line.
    const auto cut = content.rfind('\n');
    const std::string text =
        cut == std::string::npos ? content : content.substr(0, cut);
    int lo = 1, hi = 10;
    const std::string& ask = lines.back();
    if (auto at = ask.find("scale from "); at != std::string::npos) {
      std::istringstream in(ask.substr(at + 11));
      std::string to;
      in >> lo >> to >> hi;
      if (!in || hi <= lo) lo = 1, hi = 10;
    }
    const double q = quality_of(text);
    const int rating =
        static_cast<int>(std::lround(lo + (hi - lo) * q));
    return json{{"quality", rating}}.dump();
  }

  std::string text;
  for (std::size_t i = 0; i < first_question; ++i) {
    if (i > 0) text += '\n';
    text += lines[i];
  }
  std::vector<std::string> keys;
  std::vector<std::vector<std::string>> lists;
  for (std::size_t i = first_question; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (auto at = line.find('['); at != std::string::npos &&
                                  line.find("following list") != std::string::npos) {
      json list = json::parse(line.substr(at), nullptr, false);
      if (list.is_array()) lists.push_back(list.get<std::vector<std::string>>());
    } else if (line.find("Respond in JSON") != std::string::npos) {
      keys = quoted_tokens(line);
    }
  }
  json out = json::object();
  for (std::size_t i = 0; i < keys.size() && i < lists.size(); ++i) {
    const double f =
        i < params_.features.size() ? feature_of(i, text) : 0.5;
    const std::size_t n = lists[i].size();
    const std::size_t idx =
        std::min(static_cast<std::size_t>(f * static_cast<double>(n)), n - 1);
    out[keys[i]] = lists[i][idx];
  }
  return out.dump();
}

std::string SyntheticOracle::do_chat(const std::vector<ChatMessage>& messages,
                                     const SamplingParams& params) {
  const std::string& content = messages.back().content;
  if (content.find("following list") != std::string::npos ||
      content.find("'quality'") != std::string::npos ||
      content.find("\"quality\"") != std::string::npos) {
    return judge_chat(content);
  }
  // Generation request: the parent text (if any) is the only example.
  return generate(content, {content}, params.temperature);
}

std::vector<double> SyntheticOracle::do_embed(const std::string& text) {
  std::vector<double> v(params_.alphabet.size() + 1, 0.5);
  for (char c : text) {
    const auto at = params_.alphabet.find(c);
    v[at == std::string::npos ? params_.alphabet.size() : at] += 1.0;
  }
  return v;
}

}  // namespace qdaif
