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

#ifndef QDAIF_BACKEND_HPP_
#define QDAIF_BACKEND_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qdaif {

struct SamplingParams {
  double temperature = 0.8;
  double top_p = 1.0;
  int max_tokens = 50;
  std::vector<std::string> stop_sequences;
};

// The default stop-pattern list for few-shot generation.
std::vector<std::string> default_stop_sequences();

struct ChatMessage {
  std::string role;
  std::string content;
};

// label -> log-probability of the label continuing the prompt.
using LabelLogprobs = std::map<std::string, double>;

// Cuts `text` at the earliest occurrence of any stop sequence (the stop text
// itself is dropped). Idempotent.
std::string truncate_at_stop(std::string_view text,
                             std::span<const std::string> stops);

std::string trim(std::string_view text);

// Model access boundary. The public methods validate arguments and apply
// stop-sequence truncation; subclasses implement the raw transport.
class Backend {
 public:
  virtual ~Backend() = default;

  // Throws EmptyGenerationError when nothing is left after truncation.
  std::string complete(const std::string& prompt, const SamplingParams& params);
  LabelLogprobs label_logprobs(const std::string& prompt,
                               const std::vector<std::string>& labels);
  std::string chat(const std::vector<ChatMessage>& messages,
                   const SamplingParams& params);
  std::vector<double> embed(const std::string& text);

  virtual bool supports_logprobs() const { return true; }
  virtual bool supports_embeddings() const { return true; }

  // Number of queries issued so far; used as a logical timestamp.
  std::uint64_t calls() const { return calls_.load(); }

 protected:
  virtual std::string do_complete(const std::string& prompt,
                                  const SamplingParams& params) = 0;
  virtual LabelLogprobs do_label_logprobs(
      const std::string& prompt, const std::vector<std::string>& labels) = 0;
  virtual std::string do_chat(const std::vector<ChatMessage>& messages,
                              const SamplingParams& params) = 0;
  virtual std::vector<double> do_embed(const std::string& text) = 0;

 private:
  std::atomic<std::uint64_t> calls_{0};
};

// Replays an ordered list of scripted responses. Each script entry is a JSON
// object with exactly one of: "complete" (string), "chat" (string),
// "logprobs" (object label -> number), "embed" (array of numbers) or
// "error" (string; raised as a non-retryable BackendError).
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::vector<std::string> script_lines);
  static std::unique_ptr<MockBackend> from_file(
      const std::filesystem::path& path);

  std::size_t remaining() const;

 protected:
  std::string do_complete(const std::string& prompt,
                          const SamplingParams& params) override;
  LabelLogprobs do_label_logprobs(
      const std::string& prompt,
      const std::vector<std::string>& labels) override;
  std::string do_chat(const std::vector<ChatMessage>& messages,
                      const SamplingParams& params) override;
  std::vector<double> do_embed(const std::string& text) override;

 private:
  struct Entry;
  const Entry& next(std::string_view kind);

  std::vector<std::shared_ptr<Entry>> script_;
  std::size_t cursor_ = 0;
  mutable std::mutex mu_;
};

struct OracleFeature {
  std::string high_label;
  std::string low_label;
  // Characters counted by this feature. The feature value of a text is the
  // fraction of its alphabet characters that are marked.
  std::string marked;
};

struct OracleParams {
  std::uint64_t seed = 0;
  std::string alphabet = "0123456789";
  std::size_t target_length = 200;
  // Standard deviations of the generation noise at temperature 1.
  double fraction_noise = 0.1;
  double length_noise = 20.0;
  std::string separator = "\n###\n";
  std::string yes_label = "yes";
  std::string no_label = "no";
  std::vector<OracleFeature> features;
  double probability_floor = 1e-9;
};

// Closed-form stand-in for a language model.
//
// Generation reads the alphabet statistics of the few-shot examples in the
// prompt (segments split on the separator; segments without alphabet
// characters are ignored) and emits a new string whose marked fractions and
// length are drawn around the example means. Noise scales with temperature;
// at temperature 0 the output is a pure function of (prompt, seed), above it
// the call index also feeds the stream. Judging is exact:
//   quality  q = clamp(1 - |len(text) - L| / L, 0, 1)
//   feature  f = marked fraction
// reported as log-probabilities with probabilities floored before the log.
class SyntheticOracle : public Backend {
 public:
  explicit SyntheticOracle(OracleParams params);

  const OracleParams& params() const { return params_; }
  double quality_of(std::string_view text) const;
  double feature_of(std::size_t feature, std::string_view text) const;

 protected:
  std::string do_complete(const std::string& prompt,
                          const SamplingParams& params) override;
  LabelLogprobs do_label_logprobs(
      const std::string& prompt,
      const std::vector<std::string>& labels) override;
  std::string do_chat(const std::vector<ChatMessage>& messages,
                      const SamplingParams& params) override;
  std::vector<double> do_embed(const std::string& text) override;

 private:
  std::string generate(const std::string& prompt,
                       const std::vector<std::string>& segments,
                       double temperature);
  std::string judge_chat(const std::string& content) const;

  OracleParams params_;
  std::uint64_t generation_calls_ = 0;
  std::mutex mu_;
};

struct HttpParams {
  // scheme://host[:port][/prefix], e.g. "https://api.openai.com/v1".
  std::string base_url;
  std::string model;
  std::string chat_model;       // defaults to model
  std::string embedding_model;  // defaults to model
  std::string auth_env;         // environment variable holding the token
  double timeout_s = 60.0;
  int max_retries = 3;
  int retry_delay_ms = 500;
  int max_concurrency = 4;
  bool supports_logprobs = true;
  bool supports_embeddings = true;
};

struct HttpExchange {
  std::string endpoint;
  std::string request;
  std::string response;
  int status = 0;
  double latency_ms = 0.0;
  int attempt = 0;
};

// OpenAI-compatible client. Label scoring sends prompt+label to the
// completions endpoint with echo and per-token logprobs, and sums the token
// logprobs after the prompt's byte offset.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpParams params);
  ~HttpBackend() override;

  bool supports_logprobs() const override { return params_.supports_logprobs; }
  bool supports_embeddings() const override {
    return params_.supports_embeddings;
  }

  std::vector<HttpExchange> transcript() const;

 protected:
  std::string do_complete(const std::string& prompt,
                          const SamplingParams& params) override;
  LabelLogprobs do_label_logprobs(
      const std::string& prompt,
      const std::vector<std::string>& labels) override;
  std::string do_chat(const std::vector<ChatMessage>& messages,
                      const SamplingParams& params) override;
  std::vector<double> do_embed(const std::string& text) override;

 private:
  struct Impl;
  std::string post(const std::string& path, const std::string& body);

  HttpParams params_;
  std::unique_ptr<Impl> impl_;
};

// Memoizes label scoring and embedding queries. Off unless configured.
class CachingBackend : public Backend {
 public:
  explicit CachingBackend(std::shared_ptr<Backend> inner);

  bool supports_logprobs() const override { return inner_->supports_logprobs(); }
  bool supports_embeddings() const override {
    return inner_->supports_embeddings();
  }
  std::size_t hits() const { return hits_; }

 protected:
  std::string do_complete(const std::string& prompt,
                          const SamplingParams& params) override;
  LabelLogprobs do_label_logprobs(
      const std::string& prompt,
      const std::vector<std::string>& labels) override;
  std::string do_chat(const std::vector<ChatMessage>& messages,
                      const SamplingParams& params) override;
  std::vector<double> do_embed(const std::string& text) override;

 private:
  std::shared_ptr<Backend> inner_;
  std::map<std::string, LabelLogprobs> logprob_cache_;
  std::map<std::string, std::vector<double>> embed_cache_;
  std::size_t hits_ = 0;
  std::mutex mu_;
};

struct MockSpec {
  std::filesystem::path script;
};

struct BackendSpec {
  std::variant<HttpParams, MockSpec, OracleParams> kind = OracleParams{};
  bool cache = false;
};

std::shared_ptr<Backend> make_backend(const BackendSpec& spec);

}  // namespace qdaif

#endif  // QDAIF_BACKEND_HPP_
