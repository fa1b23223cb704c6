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

#include "qdaif/backend.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "qdaif/errors.hpp"

namespace qdaif {

using nlohmann::json;

std::vector<std::string> default_stop_sequences() {
  return {"\n#",   "\n##",   "\n###",  "###",    "\n####", "\n#####",
          "####",  "#####",  "\n",     "\n\n",   "\n\n\n", "\n\n\n\n",
          "@@@",   "#",      "##",     "\nHere", "\n\nHere"};
}

std::string truncate_at_stop(std::string_view text,
                             std::span<const std::string> stops) {
  std::size_t cut = text.size();
  for (const auto& stop : stops) {
    if (stop.empty()) continue;
    const std::size_t at = text.find(stop);
    if (at != std::string_view::npos && at < cut) cut = at;
  }
  return std::string(text.substr(0, cut));
}

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

std::string Backend::complete(const std::string& prompt,
                              const SamplingParams& params) {
  if (prompt.empty()) throw ArgumentError("completion prompt is empty");
  ++calls_;
  std::string out =
      trim(truncate_at_stop(do_complete(prompt, params), params.stop_sequences));
  if (out.empty()) throw EmptyGenerationError("empty completion");
  return out;
}

LabelLogprobs Backend::label_logprobs(const std::string& prompt,
                                      const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    throw ArgumentError("label scoring needs at least two labels");
  }
  ++calls_;
  LabelLogprobs raw = do_label_logprobs(prompt, labels);
  LabelLogprobs out;
  for (const auto& label : labels) {
    auto it = raw.find(label);
    if (it == raw.end()) {
      throw FeedbackShapeError("no log-probability for label '" + label + "'");
    }
    out.emplace(label, it->second);
  }
  return out;
}

std::string Backend::chat(const std::vector<ChatMessage>& messages,
                          const SamplingParams& params) {
  if (messages.empty()) throw ArgumentError("chat needs at least one message");
  ++calls_;
  std::string out =
      trim(truncate_at_stop(do_chat(messages, params), params.stop_sequences));
  if (out.empty()) throw EmptyGenerationError("empty chat response");
  return out;
}

std::vector<double> Backend::embed(const std::string& text) {
  ++calls_;
  auto v = do_embed(text);
  if (v.empty()) throw BackendError("empty embedding vector", false);
  return v;
}

// ---------------------------------------------------------------------------

struct MockBackend::Entry {
  std::string kind;
  json payload;
};

MockBackend::MockBackend(std::vector<std::string> script_lines) {
  std::size_t line_no = 0;
  for (const auto& line : script_lines) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ArgumentError("mock script line " + std::to_string(line_no) +
                          ": " + e.what());
    }
    if (!j.is_object() || j.size() != 1) {
      throw ArgumentError("mock script line " + std::to_string(line_no) +
                          ": expected an object with one key");
    }
    auto entry = std::make_shared<Entry>();
    entry->kind = j.begin().key();
    entry->payload = j.begin().value();
    if (entry->kind != "complete" && entry->kind != "chat" &&
        entry->kind != "logprobs" && entry->kind != "embed" &&
        entry->kind != "error") {
      throw ArgumentError("mock script line " + std::to_string(line_no) +
                          ": unknown kind '" + entry->kind + "'");
    }
    script_.push_back(std::move(entry));
  }
}

std::unique_ptr<MockBackend> MockBackend::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open mock script " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return std::make_unique<MockBackend>(std::move(lines));
}

std::size_t MockBackend::remaining() const {
  std::lock_guard lock(mu_);
  return script_.size() - cursor_;
}

const MockBackend::Entry& MockBackend::next(std::string_view kind) {
  std::lock_guard lock(mu_);
  if (cursor_ >= script_.size()) {
    throw ScriptExhaustedError("mock script exhausted after " +
                               std::to_string(script_.size()) + " responses");
  }
  const Entry& e = *script_[cursor_++];
  if (e.kind == "error") {
    throw BackendError("scripted error: " + e.payload.dump(), false);
  }
  if (e.kind != kind) {
    throw BackendError("mock script expected '" + std::string(kind) +
                           "' but next entry is '" + e.kind + "'",
                       false);
  }
  return e;
}

std::string MockBackend::do_complete(const std::string&,
                                     const SamplingParams&) {
  return next("complete").payload.get<std::string>();
}

LabelLogprobs MockBackend::do_label_logprobs(const std::string&,
                                             const std::vector<std::string>&) {
  return next("logprobs").payload.get<LabelLogprobs>();
}

std::string MockBackend::do_chat(const std::vector<ChatMessage>&,
                                 const SamplingParams&) {
  return next("chat").payload.get<std::string>();
}

std::vector<double> MockBackend::do_embed(const std::string&) {
  return next("embed").payload.get<std::vector<double>>();
}

// ---------------------------------------------------------------------------

CachingBackend::CachingBackend(std::shared_ptr<Backend> inner)
    : inner_(std::move(inner)) {}

std::string CachingBackend::do_complete(const std::string& prompt,
                                        const SamplingParams& params) {
  return inner_->complete(prompt, params);
}

LabelLogprobs CachingBackend::do_label_logprobs(
    const std::string& prompt, const std::vector<std::string>& labels) {
  json key = {prompt, labels};
  const std::string k = key.dump();
  {
    std::lock_guard lock(mu_);
    if (auto it = logprob_cache_.find(k); it != logprob_cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto value = inner_->label_logprobs(prompt, labels);
  std::lock_guard lock(mu_);
  logprob_cache_.emplace(k, value);
  return value;
}

std::string CachingBackend::do_chat(const std::vector<ChatMessage>& messages,
                                    const SamplingParams& params) {
  return inner_->chat(messages, params);
}

std::vector<double> CachingBackend::do_embed(const std::string& text) {
  {
    std::lock_guard lock(mu_);
    if (auto it = embed_cache_.find(text); it != embed_cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto value = inner_->embed(text);
  std::lock_guard lock(mu_);
  embed_cache_.emplace(text, value);
  return value;
}

std::shared_ptr<Backend> make_backend(const BackendSpec& spec) {
  std::shared_ptr<Backend> backend;
  if (const auto* http = std::get_if<HttpParams>(&spec.kind)) {
    backend = std::make_shared<HttpBackend>(*http);
  } else if (const auto* mock = std::get_if<MockSpec>(&spec.kind)) {
    backend = MockBackend::from_file(mock->script);
  } else {
    backend = std::make_shared<SyntheticOracle>(std::get<OracleParams>(spec.kind));
  }
  if (spec.cache) backend = std::make_shared<CachingBackend>(backend);
  return backend;
}

}  // namespace qdaif
