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

#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qdaif/backend.hpp"
#include "qdaif/errors.hpp"

namespace qdaif {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ArgumentError("backend url '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

struct HttpBackend::Impl {
  explicit Impl(int concurrency) : slots(std::max(concurrency, 1)) {}

  ParsedUrl url;
  std::counting_semaphore<1024> slots;
  mutable std::mutex log_mu;
  std::vector<HttpExchange> transcript;
};

HttpBackend::HttpBackend(HttpParams params)
    : params_(std::move(params)),
      impl_(std::make_unique<Impl>(params_.max_concurrency)) {
  if (params_.max_retries < 0 || params_.max_retries > 100) {
    throw ArgumentError("max_retries must lie in [0, 100]");
  }
  impl_->url = parse_url(params_.base_url);
  if (params_.chat_model.empty()) params_.chat_model = params_.model;
  if (params_.embedding_model.empty()) params_.embedding_model = params_.model;
}

HttpBackend::~HttpBackend() = default;

std::vector<HttpExchange> HttpBackend::transcript() const {
  std::lock_guard lock(impl_->log_mu);
  return impl_->transcript;
}

std::string HttpBackend::post(const std::string& path, const std::string& body) {
  impl_->slots.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{impl_->slots};

  httplib::Client client(impl_->url.origin);
  const auto timeout = std::chrono::duration<double>(params_.timeout_s);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!params_.auth_env.empty()) {
    if (const char* token = std::getenv(params_.auth_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  const std::string endpoint = impl_->url.prefix + path;

  std::string last_error;
  for (int attempt = 0; attempt <= params_.max_retries; ++attempt) {
    if (attempt > 0 && params_.retry_delay_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(params_.retry_delay_ms << (attempt - 1)));
    }
    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(endpoint, headers, body, "application/json");
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    HttpExchange ex{endpoint, body, res ? res->body : std::string(),
                    res ? res->status : 0, ms, attempt};
    {
      std::lock_guard lock(impl_->log_mu);
      impl_->transcript.push_back(ex);
    }
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
    if (!retryable_status(res->status)) throw BackendError(last_error, false);
  }
  throw BackendError(last_error + " (after " +
                         std::to_string(params_.max_retries + 1) + " attempts)",
                     false);
}

std::string HttpBackend::do_complete(const std::string& prompt,
                                     const SamplingParams& params) {
  json req = {{"model", params_.model},
              {"prompt", prompt},
              {"temperature", params.temperature},
              {"top_p", params.top_p},
              {"max_tokens", params.max_tokens}};
  const json res = json::parse(post("/completions", req.dump()), nullptr, false);
  if (res.is_discarded() || !res.contains("choices") || res["choices"].empty()) {
    throw BackendError("malformed completion response", false);
  }
  return res["choices"][0].value("text", std::string());
}

LabelLogprobs HttpBackend::do_label_logprobs(
    const std::string& prompt, const std::vector<std::string>& labels) {
  if (!params_.supports_logprobs) {
    throw CapabilityError("endpoint does not serve log-probabilities");
  }
  LabelLogprobs out;
  for (const auto& label : labels) {
    json req = {{"model", params_.model}, {"prompt", prompt + label},
                {"max_tokens", 0},        {"echo", true},
                {"logprobs", 0},          {"temperature", 0.0}};
    const json res =
        json::parse(post("/completions", req.dump()), nullptr, false);
    if (res.is_discarded() || !res.contains("choices") ||
        res["choices"].empty()) {
      throw BackendError("malformed scoring response", false);
    }
    const json& lp = res["choices"][0]["logprobs"];
    if (!lp.is_object() || !lp.contains("token_logprobs") ||
        !lp.contains("text_offset")) {
      throw CapabilityError("scoring response carries no token logprobs");
    }
    const auto& offsets = lp["text_offset"];
    const auto& values = lp["token_logprobs"];
    double total = 0.0;
    for (std::size_t i = 0; i < offsets.size() && i < values.size(); ++i) {
      const auto end = i + 1 < offsets.size()
                           ? offsets[i + 1].get<std::size_t>()
                           : prompt.size() + label.size();
      // Tokens that end past the prompt belong (at least partly) to the label.
      if (end > prompt.size() && values[i].is_number()) {
        total += values[i].get<double>();
      }
    }
    out.emplace(label, total);
  }
  return out;
}

std::string HttpBackend::do_chat(const std::vector<ChatMessage>& messages,
                                 const SamplingParams& params) {
  json msgs = json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  json req = {{"model", params_.chat_model},
              {"messages", msgs},
              {"temperature", params.temperature},
              {"top_p", params.top_p},
              {"max_tokens", params.max_tokens}};
  const json res =
      json::parse(post("/chat/completions", req.dump()), nullptr, false);
  if (res.is_discarded() || !res.contains("choices") || res["choices"].empty()) {
    throw BackendError("malformed chat response", false);
  }
  const json& content = res["choices"][0]["message"]["content"];
  return content.is_string() ? content.get<std::string>() : std::string();
}

std::vector<double> HttpBackend::do_embed(const std::string& text) {
  if (!params_.supports_embeddings) {
    throw CapabilityError("endpoint does not serve embeddings");
  }
  json req = {{"model", params_.embedding_model}, {"input", text}};
  const json res = json::parse(post("/embeddings", req.dump()), nullptr, false);
  if (res.is_discarded() || !res.contains("data") || res["data"].empty()) {
    throw BackendError("malformed embedding response", false);
  }
  return res["data"][0]["embedding"].get<std::vector<double>>();
}

}  // namespace qdaif
