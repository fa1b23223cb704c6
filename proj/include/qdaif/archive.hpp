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

#ifndef QDAIF_ARCHIVE_HPP_
#define QDAIF_ARCHIVE_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdaif/core.hpp"
#include "qdaif/rng.hpp"

namespace qdaif {

enum class InsertOutcome {
  kFilledEmptyBin,
  kReplacedElite,
  kAddedAtDepth,
  kTieReplacedElite,
  kRejected,
};

std::string_view to_string(InsertOutcome outcome);
InsertOutcome insert_outcome_from_string(std::string_view name);

inline bool admitted(InsertOutcome outcome) {
  return outcome != InsertOutcome::kRejected;
}

// Members sorted by descending quality; members.front() is the elite.
struct Cell {
  std::vector<Individual> members;
};

// MAP-Elites grid with depth-bounded cells.
//
// Insertion rules, for a candidate of quality q landing in a non-empty cell
// whose elite has quality e:
//   q > e                      -> becomes elite (kReplacedElite)
//   q == e, Bernoulli(p) wins  -> becomes elite (kTieReplacedElite)
//   spare depth                -> kept behind members of >= quality
//   full, q > cell minimum     -> kept, minimum evicted (oldest on ties)
//   otherwise                  -> kRejected
// The Bernoulli draw happens only when q == e and 0 < p < 1.
class Archive {
 public:
  explicit Archive(ArchiveConfig config);

  const ArchiveConfig& config() const { return config_; }

  // Sets ind.bin from its descriptor before inserting.
  InsertOutcome insert(Individual ind, Rng& rng);

  const Individual* elite(const BinKey& key) const;
  const Cell* cell(const BinKey& key) const;
  const std::map<BinKey, Cell>& cells() const { return cells_; }

  double qd_score() const;
  double coverage() const;
  std::optional<double> best_quality() const;
  std::size_t occupied() const { return cells_.size(); }
  std::size_t size() const;

  // Up to n elites from distinct occupied bins, uniformly without replacement.
  std::vector<Individual> sample_elites(std::size_t n, Rng& rng) const;

  // Genotypes of each cell's top min(k, depth) members, bins in key order.
  std::vector<Genotype> top_k_pool(std::size_t k) const;

  std::size_t insertion_count() const { return insertion_count_; }
  std::size_t rejection_count() const { return rejection_count_; }

  // Rebuilds an archive from a snapshot without applying insertion rules.
  // Throws StructuralError if a cell is unsorted, too deep, or holds a
  // member whose descriptor does not bin to the cell's key.
  static Archive restore(ArchiveConfig config, std::map<BinKey, Cell> cells,
                         std::size_t insertion_count,
                         std::size_t rejection_count);

 private:
  void check_key(const BinKey& key) const;

  ArchiveConfig config_;
  std::map<BinKey, Cell> cells_;
  std::size_t insertion_count_ = 0;
  std::size_t rejection_count_ = 0;
};

// Supplies the coordinate of an individual on an axis its stored descriptor
// does not cover.
using AxisReevaluator =
    std::function<AxisValue(const Individual&, const AxisSpec&)>;

struct RemapEntry {
  IndividualId id = 0;
  std::optional<DiversityDescriptor> descriptor;
  std::optional<InsertOutcome> outcome;
  std::string error;  // set when re-evaluation failed and the member was skipped
};

// Rebuilds the archive under `new_config`. Coordinates on axes that exist in
// both configs (same name and kind) are carried over; missing ones come from
// `reevaluate`. Stored qualities are kept. Members are re-inserted cell by
// cell in key order, best first. If `log` is given it receives one entry per
// old member.
Archive remap(const Archive& archive, ArchiveConfig new_config,
              const AxisReevaluator& reevaluate, Rng& rng,
              std::vector<RemapEntry>* log = nullptr);

}  // namespace qdaif

#endif  // QDAIF_ARCHIVE_HPP_
