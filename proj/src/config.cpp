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

#include "qdaif/config.hpp"

#include <fstream>
#include <sstream>

#include "qdaif/errors.hpp"
#include "qdaif/toml.hpp"

namespace qdaif {
namespace {

const Json kEmpty = Json::object();

const Json& section(const Json& doc, const char* name) {
  if (!doc.contains(name)) return kEmpty;
  const Json& s = doc[name];
  if (!s.is_object()) throw ConfigError(name, "must be a table");
  return s;
}

template <typename T>
T read(const Json& table, const char* key, T fallback, const std::string& path) {
  if (!table.contains(key)) return fallback;
  const Json& v = table[key];
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(path + "." + key, "must be a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) {
        throw ConfigError(path + "." + key, "must be an integer");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() &&
            v.get<std::int64_t>() < 0) {
          throw ConfigError(path + "." + key, "must be non-negative");
        }
      }
    }
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key, "has the wrong type");
  }
}

template <typename T>
T require(const Json& table, const char* key, const std::string& path) {
  if (!table.contains(key)) throw ConfigError(path + "." + key, "is required");
  return read<T>(table, key, T{}, path);
}

std::string read_file(const std::filesystem::path& path,
                      const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(field, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return std::filesystem::absolute(path).lexically_normal();
}

SamplingParams read_sampling(const Json& t, SamplingParams s,
                             const std::string& path, bool default_stops) {
  s.temperature = read<double>(t, "temperature", s.temperature, path);
  s.top_p = read<double>(t, "top_p", s.top_p, path);
  s.max_tokens = read<int>(t, "max_tokens", s.max_tokens, path);
  if (t.contains("stop_sequences")) {
    s.stop_sequences =
        read<std::vector<std::string>>(t, "stop_sequences", {}, path);
  } else if (default_stops) {
    s.stop_sequences = default_stop_sequences();
  }
  return s;
}

Json sampling_to_json(const SamplingParams& s) {
  Json j;
  j["temperature"] = s.temperature;
  j["top_p"] = s.top_p;
  j["max_tokens"] = s.max_tokens;
  j["stop_sequences"] = s.stop_sequences;
  return j;
}

QualitySpec read_quality(const Json& t) {
  const std::string path = "quality";
  const auto kind = read<std::string>(t, "kind", "binary", path);
  QualitySpec q;
  if (kind == "binary") {
    BinaryQuality b;
    b.eval_instruction = require<std::string>(t, "eval_instruction", path);
    b.yes_label = read<std::string>(t, "yes_label", b.yes_label, path);
    b.no_label = read<std::string>(t, "no_label", b.no_label, path);
    q.kind = b;
  } else if (kind == "rating") {
    RatingQuality r;
    r.prompt = require<std::string>(t, "prompt", path);
    r.min = read<int>(t, "min", r.min, path);
    r.max = read<int>(t, "max", r.max, path);
    r.key = read<std::string>(t, "key", r.key, path);
    q.kind = r;
  } else if (kind == "embedding") {
    q.kind = EmbeddingQuality{require<std::string>(t, "query", path)};
  } else {
    throw ConfigError("quality.kind", "must be 'binary', 'rating' or 'embedding'");
  }
  return q;
}

Json quality_to_json(const QualitySpec& q) {
  Json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BinaryQuality>) {
          j["kind"] = "binary";
          j["eval_instruction"] = s.eval_instruction;
          j["yes_label"] = s.yes_label;
          j["no_label"] = s.no_label;
        } else if constexpr (std::is_same_v<T, RatingQuality>) {
          j["kind"] = "rating";
          j["prompt"] = s.prompt;
          j["min"] = s.min;
          j["max"] = s.max;
          j["key"] = s.key;
        } else {
          j["kind"] = "embedding";
          j["query"] = s.query;
        }
      },
      q.kind);
  return j;
}

BackendSpec read_backend(const Json& t, const std::filesystem::path& base,
                         const std::string& separator) {
  const std::string path = "backend";
  BackendSpec spec;
  spec.cache = read<bool>(t, "cache", false, path);
  const auto kind = read<std::string>(t, "kind", "oracle", path);
  if (kind == "oracle") {
    OracleParams o;
    o.seed = read<std::uint64_t>(t, "seed", 0, path);
    o.alphabet = read<std::string>(t, "alphabet", o.alphabet, path);
    o.target_length = read<std::size_t>(t, "target_length", o.target_length, path);
    o.fraction_noise = read<double>(t, "fraction_noise", o.fraction_noise, path);
    o.length_noise = read<double>(t, "length_noise", o.length_noise, path);
    o.separator = read<std::string>(t, "separator", separator, path);
    o.yes_label = read<std::string>(t, "yes_label", o.yes_label, path);
    o.no_label = read<std::string>(t, "no_label", o.no_label, path);
    o.probability_floor =
        read<double>(t, "probability_floor", o.probability_floor, path);
    if (t.contains("features")) {
      if (!t["features"].is_array()) {
        throw ConfigError("backend.features", "must be an array of tables");
      }
      for (std::size_t i = 0; i < t["features"].size(); ++i) {
        const std::string fp = "backend.features[" + std::to_string(i) + "]";
        const Json& f = t["features"][i];
        o.features.push_back({require<std::string>(f, "high_label", fp),
                              require<std::string>(f, "low_label", fp),
                              require<std::string>(f, "marked", fp)});
      }
    }
    if (o.alphabet.empty()) throw ConfigError("backend.alphabet", "is empty");
    if (o.target_length == 0) {
      throw ConfigError("backend.target_length", "must be positive");
    }
    spec.kind = o;
  } else if (kind == "mock") {
    spec.kind = MockSpec{resolve(base, require<std::string>(t, "script", path))};
  } else if (kind == "http") {
    HttpParams h;
    h.base_url = require<std::string>(t, "base_url", path);
    h.model = require<std::string>(t, "model", path);
    h.chat_model = read<std::string>(t, "chat_model", h.model, path);
    h.embedding_model = read<std::string>(t, "embedding_model", h.model, path);
    h.auth_env = read<std::string>(t, "auth_env", "", path);
    h.timeout_s = read<double>(t, "timeout_s", h.timeout_s, path);
    h.max_retries = read<int>(t, "max_retries", h.max_retries, path);
    h.retry_delay_ms = read<int>(t, "retry_delay_ms", h.retry_delay_ms, path);
    h.max_concurrency = read<int>(t, "max_concurrency", h.max_concurrency, path);
    h.supports_logprobs = read<bool>(t, "supports_logprobs", true, path);
    h.supports_embeddings = read<bool>(t, "supports_embeddings", true, path);
    if (h.base_url.find("://") == std::string::npos) {
      throw ConfigError("backend.base_url", "needs a scheme");
    }
    if (h.max_retries < 0 || h.max_retries > 100) {
      throw ConfigError("backend.max_retries", "must lie in [0, 100]");
    }
    if (h.max_concurrency < 1) {
      throw ConfigError("backend.max_concurrency", "must be positive");
    }
    spec.kind = h;
  } else {
    throw ConfigError("backend.kind", "must be 'oracle', 'mock' or 'http'");
  }
  return spec;
}

Json backend_to_json(const BackendSpec& spec) {
  Json j;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, OracleParams>) {
          j["kind"] = "oracle";
          j["seed"] = b.seed;
          j["alphabet"] = b.alphabet;
          j["target_length"] = b.target_length;
          j["fraction_noise"] = b.fraction_noise;
          j["length_noise"] = b.length_noise;
          j["separator"] = b.separator;
          j["yes_label"] = b.yes_label;
          j["no_label"] = b.no_label;
          j["probability_floor"] = b.probability_floor;
          j["features"] = Json::array();
          for (const auto& f : b.features) {
            j["features"].push_back({{"high_label", f.high_label},
                                     {"low_label", f.low_label},
                                     {"marked", f.marked}});
          }
        } else if constexpr (std::is_same_v<T, MockSpec>) {
          j["kind"] = "mock";
          j["script"] = b.script.string();
        } else {
          j["kind"] = "http";
          j["base_url"] = b.base_url;
          j["model"] = b.model;
          j["chat_model"] = b.chat_model;
          j["embedding_model"] = b.embedding_model;
          j["auth_env"] = b.auth_env;
          j["timeout_s"] = b.timeout_s;
          j["max_retries"] = b.max_retries;
          j["retry_delay_ms"] = b.retry_delay_ms;
          j["max_concurrency"] = b.max_concurrency;
          j["supports_logprobs"] = b.supports_logprobs;
          j["supports_embeddings"] = b.supports_embeddings;
        }
      },
      spec.kind);
  j["cache"] = spec.cache;
  return j;
}

Json* walk(Json& doc, const std::vector<std::string>& parts, std::size_t upto) {
  Json* cur = &doc;
  for (std::size_t i = 0; i < upto; ++i) {
    const std::string& p = parts[i];
    if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(p);
      } catch (const std::exception&) {
        throw ConfigError(p, "array index expected");
      }
      if (idx >= cur->size()) throw ConfigError(p, "array index out of range");
      cur = &(*cur)[idx];
    } else {
      if (cur->is_null()) *cur = Json::object();
      if (!cur->is_object()) throw ConfigError(p, "is not a table");
      cur = &(*cur)[p];
    }
  }
  return cur;
}

}  // namespace

RunConfig config_from_json(const Json& doc,
                           const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("", "config must be a table");
  if (doc.contains("schema_version") &&
      read<int>(doc, "schema_version", 0, "") != kSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version");
  }
  RunConfig c;
  const Json& run = section(doc, "run");
  const std::string method = read<std::string>(run, "method", "qdaif-lmx-near", "run");
  try {
    c.method = method_from_string(method);
  } catch (const ArgumentError& e) {
    throw ConfigError("run.method", e.what());
  }
  try {
    c.init = init_mode_from_string(read<std::string>(run, "init", "seeded", "run"));
  } catch (const ArgumentError& e) {
    throw ConfigError("run.init", e.what());
  }
  c.iterations = read<std::size_t>(run, "iterations", c.iterations, "run");
  c.init_iterations = read<std::size_t>(run, "init_iterations", c.init_iterations, "run");
  c.zero_shot_pool_size =
      read<std::size_t>(run, "zero_shot_pool_size", c.zero_shot_pool_size, "run");
  c.baseline_init = read<bool>(run, "baseline_init", c.baseline_init, "run");
  c.seed = read<std::uint64_t>(run, "seed", c.seed, "run");

  const Json& seeds = section(doc, "seeds");
  c.seed_texts = read<std::vector<std::string>>(seeds, "texts", {}, "seeds");
  const auto files = read<std::vector<std::string>>(seeds, "files", {}, "seeds");
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string field = "seeds.files[" + std::to_string(i) + "]";
    std::string text = read_file(resolve(base_dir, files[i]), field);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
      text.pop_back();
    }
    c.seed_texts.push_back(std::move(text));
  }

  const Json& mut = section(doc, "mutation");
  c.lmx.instruction_prefix =
      read<std::string>(mut, "instruction_prefix", "", "mutation");
  c.lmx.separator = read<std::string>(mut, "separator", c.lmx.separator, "mutation");
  c.lmx.few_shot_count =
      read<std::size_t>(mut, "few_shot_count", c.lmx.few_shot_count, "mutation");
  c.replace_pool_depth = read<std::size_t>(mut, "replace_pool_depth",
                                           c.replace_pool_depth, "mutation");
  c.rewrite.rewrite = read<std::string>(mut, "rewrite", c.rewrite.rewrite, "mutation");
  c.rewrite.guided = read<std::string>(mut, "guided", c.rewrite.guided, "mutation");
  c.rewrite.targeted =
      read<std::string>(mut, "targeted", c.rewrite.targeted, "mutation");
  c.rewrite.random = read<std::string>(mut, "random", c.rewrite.random, "mutation");

  c.sampling = read_sampling(section(doc, "sampling"), c.sampling, "sampling", true);
  c.judge = read_sampling(section(doc, "judge"), c.judge, "judge", false);

  if (!doc.contains("quality")) throw ConfigError("quality", "is required");
  c.quality = read_quality(section(doc, "quality"));

  if (!doc.contains("archive")) throw ConfigError("archive", "is required");
  c.archive = archive_config_from_json(doc["archive"], "archive");

  const Json& base = section(doc, "baselines");
  c.rouge_threshold = read<double>(base, "rouge_threshold", c.rouge_threshold, "baselines");
  c.quality_gate = read<double>(base, "quality_gate", c.quality_gate, "baselines");
  c.gated_pool_capacity = read<std::size_t>(base, "gated_pool_capacity",
                                            c.gated_pool_capacity, "baselines");
  c.quality_pool_capacity = read<std::size_t>(base, "quality_pool_capacity",
                                              c.quality_pool_capacity, "baselines");
  c.novelty.k = read<std::size_t>(base, "novelty_k", c.novelty.k, "baselines");
  c.novelty.initial_threshold = read<double>(
      base, "novelty_threshold", c.novelty.initial_threshold, "baselines");
  c.novelty.raise_factor =
      read<double>(base, "novelty_raise", c.novelty.raise_factor, "baselines");
  c.novelty.lower_factor =
      read<double>(base, "novelty_lower", c.novelty.lower_factor, "baselines");
  c.novelty.accept_streak = read<std::size_t>(base, "novelty_accept_streak",
                                              c.novelty.accept_streak, "baselines");
  c.novelty.reject_streak = read<std::size_t>(base, "novelty_reject_streak",
                                              c.novelty.reject_streak, "baselines");

  c.backend = read_backend(section(doc, "backend"), base_dir, c.lmx.separator);

  if (doc.contains("schedule")) {
    if (!doc["schedule"].is_array()) {
      throw ConfigError("schedule", "must be an array of tables");
    }
    for (std::size_t i = 0; i < doc["schedule"].size(); ++i) {
      const std::string path = "schedule[" + std::to_string(i) + "]";
      const Json& s = doc["schedule"][i];
      ScheduleEntry e;
      e.iteration = require<std::uint64_t>(s, "iteration", path);
      if (!s.contains("archive")) throw ConfigError(path + ".archive", "is required");
      e.archive = archive_config_from_json(s["archive"], path + ".archive", &c.archive);
      c.schedule.push_back(std::move(e));
    }
  }

  validate_run_config(c);
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["run"] = {{"method", std::string(to_string(c.method))},
                {"init", std::string(to_string(c.init))},
                {"iterations", c.iterations},
                {"init_iterations", c.init_iterations},
                {"zero_shot_pool_size", c.zero_shot_pool_size},
                {"baseline_init", c.baseline_init},
                {"seed", c.seed}};
  doc["seeds"] = {{"texts", c.seed_texts}};
  doc["mutation"] = {{"instruction_prefix", c.lmx.instruction_prefix},
                     {"separator", c.lmx.separator},
                     {"few_shot_count", c.lmx.few_shot_count},
                     {"replace_pool_depth", c.replace_pool_depth},
                     {"rewrite", c.rewrite.rewrite},
                     {"guided", c.rewrite.guided},
                     {"targeted", c.rewrite.targeted},
                     {"random", c.rewrite.random}};
  doc["sampling"] = sampling_to_json(c.sampling);
  doc["judge"] = sampling_to_json(c.judge);
  doc["quality"] = quality_to_json(c.quality);
  doc["archive"] = archive_config_to_json(c.archive);
  doc["baselines"] = {{"rouge_threshold", c.rouge_threshold},
                      {"quality_gate", c.quality_gate},
                      {"gated_pool_capacity", c.gated_pool_capacity},
                      {"quality_pool_capacity", c.quality_pool_capacity},
                      {"novelty_k", c.novelty.k},
                      {"novelty_threshold", c.novelty.initial_threshold},
                      {"novelty_raise", c.novelty.raise_factor},
                      {"novelty_lower", c.novelty.lower_factor},
                      {"novelty_accept_streak", c.novelty.accept_streak},
                      {"novelty_reject_streak", c.novelty.reject_streak}};
  doc["backend"] = backend_to_json(c.backend);
  if (!c.schedule.empty()) {
    doc["schedule"] = Json::array();
    for (const auto& s : c.schedule) {
      doc["schedule"].push_back(
          {{"iteration", s.iteration}, {"archive", archive_config_to_json(s.archive)}});
    }
  }
  return doc;
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string(assignment), "override must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  Json value;
  try {
    value = toml::parse_value(raw);
  } catch (const ConfigError&) {
    value = raw;
  }
  Json* parent = nullptr;
  try {
    parent = walk(doc, parts, parts.size() - 1);
  } catch (const ConfigError& e) {
    throw ConfigError(key, e.what());
  }
  if (parent->is_array()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(parts.back());
    } catch (const std::exception&) {
      throw ConfigError(key, "array index expected");
    }
    if (idx >= parent->size()) throw ConfigError(key, "array index out of range");
    (*parent)[idx] = std::move(value);
    return;
  }
  if (parent->is_null()) *parent = Json::object();
  if (!parent->is_object()) throw ConfigError(key, "parent is not a table");
  (*parent)[parts.back()] = std::move(value);
}

Json load_config_document(const std::filesystem::path& path,
                          const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = toml::parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.filename().string() + ":" + e.path(),
                      std::string(e.what()).substr(e.path().size() + 2));
  }
  for (const auto& o : options.overrides) apply_override(doc, o);
  if (options.seed) doc["run"]["seed"] = *options.seed;
  if (options.backend_kind) doc["backend"]["kind"] = *options.backend_kind;
  return doc;
}

RunConfig load_config(const std::filesystem::path& path,
                      const LoadOptions& options) {
  const Json doc = load_config_document(path, options);
  return config_from_json(doc, path.parent_path());
}

void check_capabilities(const RunConfig& config) {
  bool logprobs = false;
  bool embeddings = false;
  if (std::holds_alternative<BinaryQuality>(config.quality.kind)) logprobs = true;
  if (std::holds_alternative<EmbeddingQuality>(config.quality.kind)) embeddings = true;
  auto scan = [&](const ArchiveConfig& a) {
    for (const auto& axis : a.axes) {
      if (!axis.is_continuous()) continue;
      if (axis.continuous().feedback == AxisFeedback::kLogprob) logprobs = true;
      else embeddings = true;
    }
  };
  scan(config.archive);
  for (const auto& s : config.schedule) scan(s.archive);
  if (const auto* h = std::get_if<HttpParams>(&config.backend.kind)) {
    if (logprobs && !h->supports_logprobs) {
      throw ConfigError("backend.supports_logprobs",
                        "the run needs label log-probabilities");
    }
    if (embeddings && !h->supports_embeddings) {
      throw ConfigError("backend.supports_embeddings", "the run needs embeddings");
    }
  }
  if (const auto* m = std::get_if<MockSpec>(&config.backend.kind)) {
    if (!std::filesystem::exists(m->script)) {
      throw ConfigError("backend.script", "no such file " + m->script.string());
    }
  }
}

std::shared_ptr<Backend> make_run_backend(const RunConfig& config) {
  BackendSpec spec = config.backend;
  if (auto* o = std::get_if<OracleParams>(&spec.kind)) {
    o->seed = derive_seed(config.seed, "oracle") ^ o->seed;
  }
  return make_backend(spec);
}

Json config_schema() {
  auto str = [] { return Json{{"type", "string"}}; };
  auto num = [] { return Json{{"type", "number"}}; };
  auto uint = [] { return Json{{"type", "integer"}, {"minimum", 0}}; };
  auto boolean = [] { return Json{{"type", "boolean"}}; };
  auto strs = [&] { return Json{{"type", "array"}, {"items", str()}}; };
  auto table = [](Json props, std::vector<std::string> required = {}) {
    Json t{{"type", "object"}, {"properties", std::move(props)}};
    if (!required.empty()) t["required"] = required;
    return t;
  };
  auto enumeration = [](std::vector<std::string> values) {
    return Json{{"type", "string"}, {"enum", values}};
  };

  std::vector<std::string> methods;
  for (Method m : all_methods()) methods.emplace_back(to_string(m));

  Json sampling = table({{"temperature", num()},
                         {"top_p", num()},
                         {"max_tokens", uint()},
                         {"stop_sequences", strs()}});
  Json axis = table({{"name", str()},
                     {"kind", enumeration({"continuous", "categorical"})},
                     {"ticks", {{"type", "array"}, {"items", num()}}},
                     {"grid", enumeration({"paper-1d-20", "paper-2d-10", "qdef-1d-20"})},
                     {"feedback", enumeration({"logprob", "embedding"})},
                     {"eval_instruction", str()},
                     {"label_low", str()},
                     {"label_high", str()},
                     {"query_low", str()},
                     {"query_high", str()},
                     {"key", str()},
                     {"labels", strs()},
                     {"question", str()}},
                    {"name"});
  Json archive = table({{"depth_limit", uint()},
                        {"fitness_range", {{"type", "array"}, {"items", num()},
                                           {"minItems", 2}, {"maxItems", 2}}},
                        {"tie_replace_probability", num()},
                        {"axes", {{"type", "array"}, {"items", axis}, {"minItems", 1}}}},
                       {"axes"});
  Json feature = table({{"high_label", str()}, {"low_label", str()}, {"marked", str()}},
                       {"high_label", "low_label", "marked"});

  Json schema = table(
      {{"schema_version", {{"const", kSchemaVersion}}},
       {"run", table({{"method", enumeration(methods)},
                      {"init", enumeration({"seeded", "zero-shot"})},
                      {"iterations", uint()},
                      {"init_iterations", uint()},
                      {"zero_shot_pool_size", uint()},
                      {"baseline_init", boolean()},
                      {"seed", uint()}})},
       {"seeds", table({{"texts", strs()}, {"files", strs()}})},
       {"mutation", table({{"instruction_prefix", str()},
                           {"separator", str()},
                           {"few_shot_count", uint()},
                           {"replace_pool_depth", uint()},
                           {"rewrite", str()},
                           {"guided", str()},
                           {"targeted", str()},
                           {"random", str()}})},
       {"sampling", sampling},
       {"judge", sampling},
       {"quality", table({{"kind", enumeration({"binary", "rating", "embedding"})},
                          {"eval_instruction", str()},
                          {"yes_label", str()},
                          {"no_label", str()},
                          {"prompt", str()},
                          {"min", {{"type", "integer"}}},
                          {"max", {{"type", "integer"}}},
                          {"key", str()},
                          {"query", str()}})},
       {"archive", archive},
       {"baselines", table({{"rouge_threshold", num()},
                            {"quality_gate", num()},
                            {"gated_pool_capacity", uint()},
                            {"quality_pool_capacity", uint()},
                            {"novelty_k", uint()},
                            {"novelty_threshold", num()},
                            {"novelty_raise", num()},
                            {"novelty_lower", num()},
                            {"novelty_accept_streak", uint()},
                            {"novelty_reject_streak", uint()}})},
       {"backend", table({{"kind", enumeration({"oracle", "mock", "http"})},
                          {"cache", boolean()},
                          {"seed", uint()},
                          {"alphabet", str()},
                          {"target_length", uint()},
                          {"fraction_noise", num()},
                          {"length_noise", num()},
                          {"separator", str()},
                          {"yes_label", str()},
                          {"no_label", str()},
                          {"probability_floor", num()},
                          {"features", {{"type", "array"}, {"items", feature}}},
                          {"script", str()},
                          {"base_url", str()},
                          {"model", str()},
                          {"chat_model", str()},
                          {"embedding_model", str()},
                          {"auth_env", str()},
                          {"timeout_s", num()},
                          {"max_retries", uint()},
                          {"retry_delay_ms", uint()},
                          {"max_concurrency", uint()},
                          {"supports_logprobs", boolean()},
                          {"supports_embeddings", boolean()}})},
       {"schedule", {{"type", "array"},
                     {"items", table({{"iteration", uint()}, {"archive", archive}},
                                     {"iteration", "archive"})}}}},
      {"quality", "archive"});
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "qdaif run configuration";
  return schema;
}

}  // namespace qdaif
