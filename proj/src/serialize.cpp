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

#include "qdaif/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/feedback.hpp"

namespace qdaif {
namespace {

template <typename T>
T get_field(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "is required");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key, "has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return get_field<T>(j, key, path);
}

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

Json axis_to_json(const AxisSpec& axis) {
  Json j;
  if (axis.is_continuous()) {
    const auto& c = axis.continuous();
    j["name"] = c.name;
    j["kind"] = "continuous";
    j["ticks"] = std::vector<double>(c.grid.ticks().begin(), c.grid.ticks().end());
    j["feedback"] = c.feedback == AxisFeedback::kLogprob ? "logprob" : "embedding";
    j["eval_instruction"] = c.eval_instruction;
    j["label_low"] = c.label_low;
    j["label_high"] = c.label_high;
    if (c.feedback == AxisFeedback::kEmbedding) {
      j["query_low"] = c.query_low;
      j["query_high"] = c.query_high;
    }
  } else {
    const auto& c = axis.categorical();
    j["name"] = c.name;
    j["kind"] = "categorical";
    j["key"] = c.key;
    j["labels"] = c.labels;
    j["question"] = c.question;
  }
  return j;
}

AxisSpec axis_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be a table");
  const auto kind = get_or<std::string>(j, "kind", "continuous", path);
  const auto name = get_field<std::string>(j, "name", path);
  AxisSpec out;
  if (kind == "continuous") {
    ContinuousAxis c;
    c.name = name;
    try {
      if (j.contains("ticks")) {
        c.grid = TickGrid(get_field<std::vector<double>>(j, "ticks", path));
      } else if (j.contains("grid")) {
        c.grid = TickGrid::preset(get_field<std::string>(j, "grid", path));
      }
    } catch (const ArgumentError& e) {
      throw ConfigError(path + (j.contains("ticks") ? ".ticks" : ".grid"),
                        e.what());
    }
    const auto fb = get_or<std::string>(j, "feedback", "logprob", path);
    if (fb == "logprob") {
      c.feedback = AxisFeedback::kLogprob;
    } else if (fb == "embedding") {
      c.feedback = AxisFeedback::kEmbedding;
    } else {
      throw ConfigError(path + ".feedback", "must be 'logprob' or 'embedding'");
    }
    c.eval_instruction = get_or<std::string>(j, "eval_instruction", "", path);
    c.label_low = get_field<std::string>(j, "label_low", path);
    c.label_high = get_field<std::string>(j, "label_high", path);
    c.query_low = get_or<std::string>(j, "query_low", "", path);
    c.query_high = get_or<std::string>(j, "query_high", "", path);
    out.kind = std::move(c);
  } else if (kind == "categorical") {
    CategoricalAxis c;
    c.name = name;
    c.key = get_or<std::string>(j, "key", name, path);
    c.labels = get_field<std::vector<std::string>>(j, "labels", path);
    c.question = get_field<std::string>(j, "question", path);
    out.kind = std::move(c);
  } else {
    throw ConfigError(path + ".kind", "must be 'continuous' or 'categorical'");
  }
  try {
    validate_axis(out);
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  }
  return out;
}

Json archive_config_to_json(const ArchiveConfig& config) {
  Json j;
  j["depth_limit"] = config.depth_limit;
  j["fitness_range"] = {config.fitness_low, config.fitness_high};
  j["tie_replace_probability"] = config.tie_replace_probability;
  j["axes"] = Json::array();
  for (const auto& axis : config.axes) j["axes"].push_back(axis_to_json(axis));
  return j;
}

ArchiveConfig archive_config_from_json(const Json& j, const std::string& path,
                                       const ArchiveConfig* defaults) {
  if (!j.is_object()) throw ConfigError(path, "must be a table");
  ArchiveConfig c;
  if (defaults != nullptr) {
    c.depth_limit = defaults->depth_limit;
    c.fitness_low = defaults->fitness_low;
    c.fitness_high = defaults->fitness_high;
    c.tie_replace_probability = defaults->tie_replace_probability;
  }
  c.depth_limit = get_or<std::size_t>(j, "depth_limit", c.depth_limit, path);
  if (j.contains("fitness_range")) {
    const auto range = get_field<std::vector<double>>(j, "fitness_range", path);
    if (range.size() != 2) {
      throw ConfigError(path + ".fitness_range", "must hold two numbers");
    }
    c.fitness_low = range[0];
    c.fitness_high = range[1];
  }
  c.tie_replace_probability = get_or<double>(j, "tie_replace_probability",
                                             c.tie_replace_probability, path);
  if (!j.contains("axes") || !j["axes"].is_array()) {
    throw ConfigError(path + ".axes", "is required");
  }
  for (std::size_t i = 0; i < j["axes"].size(); ++i) {
    c.axes.push_back(axis_from_json(j["axes"][i],
                                    path + ".axes[" + std::to_string(i) + "]"));
  }
  try {
    validate_archive_config(c);
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

Json descriptor_to_json(const DiversityDescriptor& d) {
  Json j = Json::array();
  for (const auto& v : d.coords) {
    if (const auto* c = std::get_if<Continuous>(&v)) {
      j.push_back(c->value);
    } else {
      j.push_back(Json{{"category", std::get<Categorical>(v).index}});
    }
  }
  return j;
}

DiversityDescriptor descriptor_from_json(const Json& j) {
  DiversityDescriptor d;
  for (const auto& v : j) {
    if (v.is_object()) {
      d.coords.emplace_back(Categorical{v.at("category").get<std::size_t>()});
    } else {
      d.coords.emplace_back(Continuous{v.get<double>()});
    }
  }
  return d;
}

Json feedback_record_to_json(const FeedbackRecord& r) {
  Json j;
  j["kind"] = r.kind;
  j["seq"] = r.seq;
  j["prompt"] = r.prompt;
  if (!r.response.empty()) j["response"] = r.response;
  if (!r.logprobs.empty()) {
    Json lp = Json::object();
    for (const auto& [label, v] : r.logprobs) lp[label] = number_or_null(v);
    j["logprobs"] = lp;
  }
  return j;
}

FeedbackRecord feedback_record_from_json(const Json& j) {
  FeedbackRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.seq = j.at("seq").get<std::uint64_t>();
  r.prompt = j.at("prompt").get<std::string>();
  r.response = j.value("response", std::string());
  if (j.contains("logprobs")) {
    for (const auto& [label, v] : j["logprobs"].items()) {
      r.logprobs[label] = v.is_null() ? -std::numeric_limits<double>::infinity()
                                      : v.get<double>();
    }
  }
  return r;
}

Json individual_to_json(const Individual& ind) {
  Json j;
  j["id"] = ind.id;
  j["bin"] = ind.bin.indices;
  j["quality"] = ind.eval.quality;
  j["descriptor"] = descriptor_to_json(ind.eval.descriptor);
  j["text"] = ind.genotype.text;
  j["parent_ids"] = ind.genotype.parent_ids;
  j["created_at_iter"] = ind.genotype.created_at_iter;
  j["prompt"] = ind.genotype.prompt_used;
  j["context"] = ind.genotype.context;
  return j;
}

Individual individual_from_json(const Json& j) {
  Individual ind;
  ind.id = j.at("id").get<IndividualId>();
  ind.bin.indices = j.at("bin").get<std::vector<std::size_t>>();
  ind.eval.quality = j.at("quality").get<double>();
  ind.eval.descriptor = descriptor_from_json(j.at("descriptor"));
  ind.genotype.text = j.at("text").get<std::string>();
  ind.genotype.parent_ids =
      j.value("parent_ids", std::vector<IndividualId>{});
  ind.genotype.created_at_iter = j.value("created_at_iter", std::uint64_t{0});
  ind.genotype.prompt_used = j.value("prompt", std::string());
  ind.genotype.context = j.value("context", std::vector<std::string>{});
  return ind;
}

Json archive_to_json(const Archive& archive) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = archive_config_to_json(archive.config());
  j["metrics"] = {
      {"qd_score", archive.qd_score()},
      {"coverage", archive.coverage()},
      {"best_quality", archive.best_quality()
                           ? Json(*archive.best_quality())
                           : Json(nullptr)},
      {"occupied", archive.occupied()},
      {"total_bins", archive.config().total_bins()},
      {"size", archive.size()},
      {"insertion_count", archive.insertion_count()},
      {"rejection_count", archive.rejection_count()},
  };
  j["cells"] = Json::array();
  for (const auto& [key, cell] : archive.cells()) {
    Json c;
    c["bin"] = key.indices;
    c["members"] = Json::array();
    for (const auto& m : cell.members) c["members"].push_back(individual_to_json(m));
    j["cells"].push_back(std::move(c));
  }
  return j;
}

Archive archive_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema_version", 0) != kSchemaVersion) {
    throw StructuralError("not an archive snapshot of a supported schema");
  }
  ArchiveConfig config;
  try {
    config = archive_config_from_json(j.at("config"), "config");
  } catch (const ConfigError& e) {
    throw StructuralError(std::string("snapshot config: ") + e.what());
  }
  std::map<BinKey, Cell> cells;
  try {
    for (const auto& c : j.at("cells")) {
      BinKey key{c.at("bin").get<std::vector<std::size_t>>()};
      Cell cell;
      for (const auto& m : c.at("members")) {
        cell.members.push_back(individual_from_json(m));
      }
      cells.emplace(std::move(key), std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("snapshot cells: ") + e.what());
  } catch (const DescriptorError& e) {
    throw StructuralError(std::string("snapshot cells: ") + e.what());
  }
  const auto& metrics = j.value("metrics", Json::object());
  try {
    return Archive::restore(std::move(config), std::move(cells),
                            metrics.value("insertion_count", std::size_t{0}),
                            metrics.value("rejection_count", std::size_t{0}));
  } catch (const DescriptorError& e) {
    throw StructuralError(std::string("snapshot cells: ") + e.what());
  }
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw StructuralError(path.string() + " is not JSON");
  return archive_from_json(j);
}

Json record_to_json(const IterationRecord& r) {
  Json j;
  j["type"] = "iteration";
  j["iter"] = r.iter;
  j["init"] = r.init_phase;
  j["id"] = r.id;
  j["parents"] = r.parent_ids;
  j["prompt"] = r.prompt;
  j["context"] = r.context;
  j["text"] = r.text;
  if (r.failed()) j["error"] = r.error;
  if (r.quality) j["quality"] = *r.quality;
  if (r.descriptor) j["descriptor"] = descriptor_to_json(*r.descriptor);
  if (r.bin) j["bin"] = r.bin->indices;
  if (r.outcome) j["outcome"] = std::string(to_string(*r.outcome));
  j["pool_size"] = r.pool_size;
  if (r.pool_admitted) j["pool_admitted"] = *r.pool_admitted;
  if (r.novelty) j["novelty"] = number_or_null(*r.novelty);
  if (r.threshold) j["threshold"] = *r.threshold;
  if (r.rouge) j["rouge"] = *r.rouge;
  if (r.context_unchanged) j["context_unchanged"] = true;
  j["feedback"] = Json::array();
  for (const auto& f : r.feedback) j["feedback"].push_back(feedback_record_to_json(f));
  return j;
}

IterationRecord record_from_json(const Json& j) {
  IterationRecord r;
  r.iter = j.at("iter").get<std::uint64_t>();
  r.init_phase = j.value("init", false);
  r.id = j.at("id").get<IndividualId>();
  r.parent_ids = j.value("parents", std::vector<IndividualId>{});
  r.prompt = j.value("prompt", std::string());
  r.context = j.value("context", std::vector<std::string>{});
  r.text = j.value("text", std::string());
  r.error = j.value("error", std::string());
  if (j.contains("quality")) r.quality = j["quality"].get<double>();
  if (j.contains("descriptor")) r.descriptor = descriptor_from_json(j["descriptor"]);
  if (j.contains("bin")) r.bin = BinKey{j["bin"].get<std::vector<std::size_t>>()};
  if (j.contains("outcome")) {
    r.outcome = insert_outcome_from_string(j["outcome"].get<std::string>());
  }
  r.pool_size = j.value("pool_size", std::size_t{0});
  if (j.contains("pool_admitted")) r.pool_admitted = j["pool_admitted"].get<bool>();
  if (j.contains("novelty")) {
    r.novelty = j["novelty"].is_null() ? std::numeric_limits<double>::infinity()
                                       : j["novelty"].get<double>();
  }
  if (j.contains("threshold")) r.threshold = j["threshold"].get<double>();
  if (j.contains("rouge")) r.rouge = j["rouge"].get<double>();
  r.context_unchanged = j.value("context_unchanged", false);
  if (j.contains("feedback")) {
    for (const auto& f : j["feedback"]) {
      r.feedback.push_back(feedback_record_from_json(f));
    }
  }
  return r;
}

Json remap_to_json(const RemapEvent& ev) {
  Json j;
  j["type"] = "remap";
  j["iter"] = ev.iteration;
  j["archive"] = archive_config_to_json(ev.archive);
  j["entries"] = Json::array();
  for (const auto& e : ev.entries) {
    Json x;
    x["id"] = e.id;
    if (e.descriptor) x["descriptor"] = descriptor_to_json(*e.descriptor);
    if (e.outcome) x["outcome"] = std::string(to_string(*e.outcome));
    if (!e.error.empty()) x["error"] = e.error;
    j["entries"].push_back(std::move(x));
  }
  return j;
}

RemapEvent remap_from_json(const Json& j) {
  RemapEvent ev;
  ev.iteration = j.at("iter").get<std::uint64_t>();
  ev.archive = archive_config_from_json(j.at("archive"), "archive");
  for (const auto& x : j.at("entries")) {
    RemapEntry e;
    e.id = x.at("id").get<IndividualId>();
    if (x.contains("descriptor")) e.descriptor = descriptor_from_json(x["descriptor"]);
    if (x.contains("outcome")) {
      e.outcome = insert_outcome_from_string(x["outcome"].get<std::string>());
    }
    e.error = x.value("error", std::string());
    ev.entries.push_back(std::move(e));
  }
  return ev;
}

Json runlog_header(const RunConfig& config) {
  Json j;
  j["type"] = "header";
  j["schema_version"] = kSchemaVersion;
  j["feedback_template"] = std::string(kFeedbackTemplateVersion);
  j["config"] = config_to_json(config);
  return j;
}

Json runlog_footer(const RunLog& log) {
  Json j;
  j["type"] = "footer";
  j["complete"] = log.complete;
  if (!log.complete) j["abort_reason"] = log.abort_reason;
  j["records"] = log.records.size();
  j["clamped_ratings"] = log.clamped_ratings;
  if (log.archive) {
    j["qd_score"] = log.archive->qd_score();
    j["coverage"] = log.archive->coverage();
    const auto best = log.archive->best_quality();
    j["best_quality"] = best ? Json(*best) : Json(nullptr);
  }
  return j;
}

void write_runlog(std::ostream& out, const RunLog& log) {
  out << runlog_header(log.config).dump() << '\n';
  std::size_t next_remap = 0;
  for (const auto& r : log.records) {
    while (next_remap < log.remaps.size() &&
           log.remaps[next_remap].iteration <= r.iter) {
      out << remap_to_json(log.remaps[next_remap++]).dump() << '\n';
    }
    out << record_to_json(r).dump() << '\n';
  }
  while (next_remap < log.remaps.size()) {
    out << remap_to_json(log.remaps[next_remap++]).dump() << '\n';
  }
  out << runlog_footer(log).dump() << '\n';
}

RunLog read_runlog(std::istream& in) {
  RunLog log;
  log.complete = false;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ReplayError(lineno, "not a JSON object");
    }
    const std::string type = j.value("type", std::string());
    try {
      if (type == "header") {
        if (j.value("schema_version", 0) != kSchemaVersion) {
          throw ReplayError(lineno, "unsupported schema_version");
        }
        log.config = config_from_json(j.at("config"));
        have_header = true;
      } else if (!have_header) {
        throw ReplayError(lineno, "run log does not start with a header");
      } else if (type == "iteration") {
        auto rec = record_from_json(j);
        if (!log.records.empty() && rec.iter <= log.records.back().iter) {
          throw ReplayError(lineno, "iterations out of order");
        }
        log.records.push_back(std::move(rec));
      } else if (type == "remap") {
        log.remaps.push_back(remap_from_json(j));
      } else if (type == "footer") {
        log.complete = j.value("complete", false);
        log.abort_reason = j.value("abort_reason", std::string());
        log.clamped_ratings = j.value("clamped_ratings", std::size_t{0});
      } else {
        throw ReplayError(lineno, "unknown line type '" + type + "'");
      }
    } catch (const ReplayError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplayError(lineno, e.what());
    }
  }
  if (!have_header) throw ReplayError(lineno, "run log has no header");
  return log;
}

RunLog read_runlog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return read_runlog(in);
}

}  // namespace qdaif
