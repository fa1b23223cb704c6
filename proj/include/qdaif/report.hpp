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

#ifndef QDAIF_REPORT_HPP_
#define QDAIF_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdaif/archive.hpp"
#include "qdaif/search.hpp"
#include "qdaif/stats.hpp"

namespace qdaif {

// File names inside a run directory.
inline constexpr const char* kRunLogFile = "runlog.jsonl";
inline constexpr const char* kArchiveFile = "archive.json";
inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kResolvedConfigFile = "config-resolved.toml";

// Runs `config` with its configured backend and writes the four run
// artifacts into `out_dir` (created if needed). The run log is streamed and
// flushed line by line.
RunLog run_to_directory(const RunConfig& config,
                        const std::filesystem::path& out_dir,
                        std::size_t sample_every = 1);

// Same, with an explicit backend.
RunLog run_to_directory(const RunConfig& config, Backend& backend,
                        const std::filesystem::path& out_dir,
                        std::size_t sample_every = 1);

struct RunSummary {
  std::filesystem::path dir;
  std::string method;
  std::uint64_t seed = 0;
  bool complete = false;
  double qd_score = 0.0;
  double coverage = 0.0;
  std::optional<double> best_quality;
  ArchiveConfig archive;
};

// Reads the run log header and footer plus the archive snapshot.
RunSummary summarize_run(const std::filesystem::path& dir);

struct MethodSummary {
  std::string method;
  std::size_t runs = 0;
  std::size_t complete_runs = 0;
  std::vector<double> qd_scores;  // complete runs, in input order
  std::vector<double> coverages;
  std::vector<double> best_qualities;
  std::optional<ConfidenceInterval> qd;
  std::optional<ConfidenceInterval> coverage;
  std::optional<ConfidenceInterval> best;
};

// Groups runs by method in order of first appearance. CIs cover complete
// runs only.
std::vector<MethodSummary> summarize_methods(const std::vector<RunSummary>& runs,
                                             std::size_t resamples,
                                             std::uint64_t seed);

// seeds.csv: one row per run. summary.csv: one row per method.
void write_seeds_csv(std::ostream& out, const std::vector<RunSummary>& runs);
void write_summary_csv(std::ostream& out,
                       const std::vector<MethodSummary>& methods);

// Markdown tables of QD score, coverage and best quality with CIs, and a
// pairwise Mann-Whitney section on final QD scores when there are at least
// two methods. Throws StructuralError if the runs' archive configs differ.
std::string render_report(const std::vector<RunSummary>& runs,
                          std::size_t resamples = 100000,
                          std::uint64_t seed = 0);

// Standalone SVG of a one- or two-dimensional archive. One rect with class
// "bin" per grid bin; empty bins carry the extra class "empty". Throws
// StructuralError for archives of more than two dimensions.
std::string render_heatmap_svg(const Archive& archive);

}  // namespace qdaif

#endif  // QDAIF_REPORT_HPP_
