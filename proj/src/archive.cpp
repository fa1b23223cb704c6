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

#include "qdaif/archive.hpp"

#include <algorithm>

#include "qdaif/errors.hpp"

namespace qdaif {

std::string_view to_string(InsertOutcome outcome) {
  switch (outcome) {
    case InsertOutcome::kFilledEmptyBin:
      return "filled_empty_bin";
    case InsertOutcome::kReplacedElite:
      return "replaced_elite";
    case InsertOutcome::kAddedAtDepth:
      return "added_at_depth";
    case InsertOutcome::kTieReplacedElite:
      return "tie_replaced_elite";
    case InsertOutcome::kRejected:
      return "rejected";
  }
  return "rejected";
}

InsertOutcome insert_outcome_from_string(std::string_view name) {
  for (auto o : {InsertOutcome::kFilledEmptyBin, InsertOutcome::kReplacedElite,
                 InsertOutcome::kAddedAtDepth,
                 InsertOutcome::kTieReplacedElite, InsertOutcome::kRejected}) {
    if (to_string(o) == name) return o;
  }
  throw ArgumentError("unknown insert outcome '" + std::string(name) + "'");
}

Archive::Archive(ArchiveConfig config) : config_(std::move(config)) {
  validate_archive_config(config_);
}

Archive Archive::restore(ArchiveConfig config, std::map<BinKey, Cell> cells,
                         std::size_t insertion_count,
                         std::size_t rejection_count) {
  Archive out(std::move(config));
  for (auto& [key, cell] : cells) {
    out.check_key(key);
    if (cell.members.empty()) continue;
    if (cell.members.size() > out.config_.depth_limit) {
      throw StructuralError("cell deeper than the depth limit");
    }
    for (std::size_t i = 0; i < cell.members.size(); ++i) {
      auto& m = cell.members[i];
      if (descriptor_to_binkey(m.eval.descriptor, out.config_) != key) {
        throw StructuralError("member " + std::to_string(m.id) +
                              " does not belong to its cell");
      }
      m.bin = key;
      if (i > 0 && cell.members[i - 1].eval.quality < m.eval.quality) {
        throw StructuralError("cell members are not sorted by quality");
      }
    }
    out.cells_.emplace(key, std::move(cell));
  }
  out.insertion_count_ = insertion_count;
  out.rejection_count_ = rejection_count;
  return out;
}

void Archive::check_key(const BinKey& key) const {
  if (key.indices.size() != config_.axes.size()) {
    throw StructuralError("bin key has wrong dimension");
  }
  for (std::size_t i = 0; i < key.indices.size(); ++i) {
    if (key.indices[i] >= config_.axes[i].bin_count()) {
      throw StructuralError("bin key index " + std::to_string(key.indices[i]) +
                            " out of range on axis '" +
                            config_.axes[i].name() + "'");
    }
  }
}

InsertOutcome Archive::insert(Individual ind, Rng& rng) {
  const double q = ind.eval.quality;
  if (!(q >= config_.fitness_low && q <= config_.fitness_high)) {
    throw RangeError("quality " + std::to_string(q) +
                     " outside the fitness range");
  }
  ind.bin = descriptor_to_binkey(ind.eval.descriptor, config_);
  check_key(ind.bin);

  auto it = cells_.find(ind.bin);
  if (it == cells_.end()) {
    BinKey key = ind.bin;
    Cell cell;
    cell.members.push_back(std::move(ind));
    cells_.emplace(std::move(key), std::move(cell));
    ++insertion_count_;
    return InsertOutcome::kFilledEmptyBin;
  }

  auto& members = it->second.members;
  const double elite_q = members.front().eval.quality;
  const bool full = members.size() >= config_.depth_limit;

  InsertOutcome outcome;
  std::size_t pos;
  if (q > elite_q) {
    outcome = InsertOutcome::kReplacedElite;
    pos = 0;
  } else if (q == elite_q && rng.bernoulli(config_.tie_replace_probability)) {
    outcome = InsertOutcome::kTieReplacedElite;
    pos = 0;
  } else if (!full || q > members.back().eval.quality) {
    outcome = InsertOutcome::kAddedAtDepth;
    // Behind every member of greater or equal quality.
    auto at = std::find_if(members.begin(), members.end(),
                           [q](const Individual& m) { return m.eval.quality < q; });
    pos = static_cast<std::size_t>(at - members.begin());
  } else {
    ++rejection_count_;
    return InsertOutcome::kRejected;
  }

  members.insert(members.begin() + static_cast<std::ptrdiff_t>(pos),
                 std::move(ind));
  if (members.size() > config_.depth_limit) {
    // Evict the oldest member at the minimum quality, never the newcomer.
    const double min_q = members.back().eval.quality;
    std::size_t victim = members.size();
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i == pos || members[i].eval.quality != min_q) continue;
      if (victim == members.size() || members[i].id < members[victim].id) {
        victim = i;
      }
    }
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  ++insertion_count_;
  return outcome;
}

const Individual* Archive::elite(const BinKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second.members.front();
}

const Cell* Archive::cell(const BinKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

double Archive::qd_score() const {
  double total = 0.0;
  for (const auto& [key, cell] : cells_) total += cell.members.front().eval.quality;
  return total;
}

double Archive::coverage() const {
  const std::size_t total = config_.total_bins();
  return total == 0 ? 0.0
                    : static_cast<double>(cells_.size()) /
                          static_cast<double>(total);
}

std::optional<double> Archive::best_quality() const {
  std::optional<double> best;
  for (const auto& [key, cell] : cells_) {
    const double q = cell.members.front().eval.quality;
    if (!best || q > *best) best = q;
  }
  return best;
}

std::size_t Archive::size() const {
  std::size_t n = 0;
  for (const auto& [key, cell] : cells_) n += cell.members.size();
  return n;
}

std::vector<Individual> Archive::sample_elites(std::size_t n, Rng& rng) const {
  std::vector<const Individual*> elites;
  elites.reserve(cells_.size());
  for (const auto& [key, cell] : cells_) elites.push_back(&cell.members.front());
  std::vector<Individual> out;
  for (std::size_t idx : rng.sample_indices(elites.size(), n)) {
    out.push_back(*elites[idx]);
  }
  return out;
}

std::vector<Genotype> Archive::top_k_pool(std::size_t k) const {
  std::vector<Genotype> pool;
  for (const auto& [key, cell] : cells_) {
    const std::size_t take = std::min(k, cell.members.size());
    for (std::size_t i = 0; i < take; ++i) {
      pool.push_back(cell.members[i].genotype);
    }
  }
  return pool;
}

Archive remap(const Archive& archive, ArchiveConfig new_config,
              const AxisReevaluator& reevaluate, Rng& rng,
              std::vector<RemapEntry>* log) {
  Archive out(std::move(new_config));
  const ArchiveConfig& old_cfg = archive.config();
  const ArchiveConfig& new_cfg = out.config();

  // For each new axis, the old axis index that can supply its coordinate.
  std::vector<std::optional<std::size_t>> carried(new_cfg.axes.size());
  for (std::size_t i = 0; i < new_cfg.axes.size(); ++i) {
    auto old = old_cfg.axis_index(new_cfg.axes[i].name());
    if (old && old_cfg.axes[*old].is_continuous() ==
                   new_cfg.axes[i].is_continuous()) {
      carried[i] = old;
    }
  }

  for (const auto& [key, cell] : archive.cells()) {
    for (const auto& member : cell.members) {
      RemapEntry entry;
      entry.id = member.id;
      Individual moved = member;
      moved.eval.descriptor.coords.clear();
      try {
        for (std::size_t i = 0; i < new_cfg.axes.size(); ++i) {
          if (carried[i]) {
            moved.eval.descriptor.coords.push_back(
                member.eval.descriptor.coords[*carried[i]]);
          } else {
            moved.eval.descriptor.coords.push_back(
                reevaluate(member, new_cfg.axes[i]));
          }
        }
        entry.descriptor = moved.eval.descriptor;
        entry.outcome = out.insert(std::move(moved), rng);
      } catch (const BackendError&) {
        throw;
      } catch (const ScriptExhaustedError&) {
        throw;
      } catch (const CapabilityError&) {
        throw;
      } catch (const Error& e) {
        entry.error = e.what();
      }
      if (log != nullptr) log->push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace qdaif
