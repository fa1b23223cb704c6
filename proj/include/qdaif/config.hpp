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

#ifndef QDAIF_CONFIG_HPP_
#define QDAIF_CONFIG_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qdaif/backend.hpp"
#include "qdaif/search.hpp"
#include "qdaif/serialize.hpp"

namespace qdaif {

// Builds a run config from its document form (the TOML file parsed to JSON).
// Relative paths (seed files, mock scripts) resolve against `base_dir`.
// Throws ConfigError naming the offending field.
RunConfig config_from_json(const Json& doc,
                           const std::filesystem::path& base_dir = {});

// Document form of a run config, fully explicit: every default is written
// out, seed texts are inlined and paths are absolute.
Json config_to_json(const RunConfig& config);

// Applies "dotted.key=value" to a document. The value is read as a TOML
// value when it parses as one, otherwise as a bare string. Array elements
// are addressed by index ("archive.axes.0.name").
void apply_override(Json& doc, std::string_view assignment);

struct LoadOptions {
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend_kind;
};

// Reads a TOML file, applies overrides and validates the result.
RunConfig load_config(const std::filesystem::path& path,
                      const LoadOptions& options = {});
Json load_config_document(const std::filesystem::path& path,
                          const LoadOptions& options = {});

// Checks that the configured backend can serve every query the run needs.
// Uses declared capabilities only; never contacts the endpoint. Throws
// ConfigError.
void check_capabilities(const RunConfig& config);

// The backend for a run. A synthetic oracle's seed is derived from the run
// seed, salted by the configured oracle seed.
std::shared_ptr<Backend> make_run_backend(const RunConfig& config);

// JSON Schema (draft 2020-12) of the config document.
Json config_schema();

}  // namespace qdaif

#endif  // QDAIF_CONFIG_HPP_
