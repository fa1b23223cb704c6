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

#ifndef QDAIF_STATS_HPP_
#define QDAIF_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qdaif/archive.hpp"
#include "qdaif/search.hpp"

namespace qdaif {

struct MetricsPoint {
  std::uint64_t iter = 0;  // iterations executed so far
  double qd_score = 0.0;
  double coverage = 0.0;
  std::optional<double> best_quality;
};

struct MetricsTimeline {
  std::vector<MetricsPoint> points;
};

// Rebuilds the archive a run log describes: iteration records and remap
// events are re-applied in order with the run's archive random stream.
// Throws ReplayError if a logged outcome or bin disagrees with the replay.
// `upto` limits the replay to the first `upto` iteration records.
Archive replay(const RunLog& log,
               std::optional<std::size_t> upto = std::nullopt);

// Metrics every `sample_every` iterations and after the last record. An
// empty log yields a single zero point.
MetricsTimeline timeline(const RunLog& log, std::size_t sample_every = 1);

void write_metrics_csv(std::ostream& out, const MetricsTimeline& t);

struct ConfidenceInterval {
  double low = 0.0;
  double mean = 0.0;
  double high = 0.0;
};

// Percentile bootstrap of the mean. Resampling is split into fixed shards
// with derived seeds, so the result does not depend on `threads`.
ConfidenceInterval bootstrap_ci(const std::vector<double>& samples,
                                std::size_t resamples = 100000,
                                double level = 0.95, std::uint64_t seed = 0,
                                unsigned threads = 0);

struct MannWhitney {
  double u = 0.0;  // U statistic of the first sample
  double p_two_sided = 1.0;
  double p_less = 1.0;     // P(U <= observed) under the null
  double p_greater = 1.0;  // P(U >= observed) under the null
  bool exact = false;
};

// Midranks for ties. Exact null distribution by enumeration when
// |a| + |b| <= 12, otherwise a normal approximation with tie and continuity
// correction. Throws ArgumentError on empty input.
MannWhitney mann_whitney_u(const std::vector<double>& a,
                           const std::vector<double>& b);

}  // namespace qdaif

#endif  // QDAIF_STATS_HPP_
