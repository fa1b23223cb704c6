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

#ifndef QDAIF_SERIALIZE_HPP_
#define QDAIF_SERIALIZE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qdaif/archive.hpp"
#include "qdaif/core.hpp"
#include "qdaif/search.hpp"

namespace qdaif {

using Json = nlohmann::ordered_json;

// Carried by every file the library writes.
inline constexpr int kSchemaVersion = 1;

Json axis_to_json(const AxisSpec& axis);
// `path` prefixes ConfigError field paths.
AxisSpec axis_from_json(const Json& j, const std::string& path);

Json archive_config_to_json(const ArchiveConfig& config);
ArchiveConfig archive_config_from_json(const Json& j, const std::string& path,
                                       const ArchiveConfig* defaults = nullptr);

// Continuous coordinates are numbers, categorical ones {"category": i}.
Json descriptor_to_json(const DiversityDescriptor& d);
DiversityDescriptor descriptor_from_json(const Json& j);

Json feedback_record_to_json(const FeedbackRecord& r);
FeedbackRecord feedback_record_from_json(const Json& j);

Json individual_to_json(const Individual& ind);
Individual individual_from_json(const Json& j);

// Snapshot: schema_version, config, cells (key order) and summary metrics.
Json archive_to_json(const Archive& archive);
Archive archive_from_json(const Json& j);
Archive read_archive(const std::filesystem::path& path);

Json record_to_json(const IterationRecord& r);
IterationRecord record_from_json(const Json& j);

Json remap_to_json(const RemapEvent& ev);
RemapEvent remap_from_json(const Json& j);

// Run log lines. The header embeds the resolved run config; the footer
// carries completion status and final metrics.
Json runlog_header(const RunConfig& config);
Json runlog_footer(const RunLog& log);

// Writes a complete log (header, remap and iteration lines in execution
// order, footer), one JSON document per line.
void write_runlog(std::ostream& out, const RunLog& log);

// Parses a JSONL run log. Throws ReplayError with the 1-based line number on
// malformed input. A missing footer marks the log incomplete.
RunLog read_runlog(std::istream& in);
RunLog read_runlog(const std::filesystem::path& path);

}  // namespace qdaif

#endif  // QDAIF_SERIALIZE_HPP_
