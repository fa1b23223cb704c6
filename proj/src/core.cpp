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

#include "qdaif/core.hpp"

#include <set>

#include "qdaif/errors.hpp"

namespace qdaif {

const std::string& AxisSpec::name() const {
  return std::visit([](const auto& a) -> const std::string& { return a.name; },
                    kind);
}

std::size_t AxisSpec::bin_count() const {
  if (is_continuous()) return continuous().grid.bin_count();
  return categorical().labels.size();
}

void validate_axis(const AxisSpec& axis) {
  if (axis.name().empty()) throw ArgumentError("axis name is empty");
  if (axis.is_continuous()) {
    const auto& c = axis.continuous();
    if (c.label_low.empty() || c.label_high.empty()) {
      throw ArgumentError("axis '" + c.name + "': labels must be non-empty");
    }
    if (c.label_low == c.label_high) {
      throw ArgumentError("axis '" + c.name + "': labels must differ");
    }
    return;
  }
  const auto& c = axis.categorical();
  if (c.labels.size() < 2) {
    throw ArgumentError("axis '" + c.name + "': needs at least two labels");
  }
  std::set<std::string> seen;
  for (const auto& label : c.labels) {
    if (label.empty() || !seen.insert(label).second) {
      throw ArgumentError("axis '" + c.name +
                          "': labels must be distinct and non-empty");
    }
  }
  if (c.key.empty()) {
    throw ArgumentError("axis '" + c.name + "': response key is empty");
  }
}

std::size_t ArchiveConfig::total_bins() const {
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.bin_count();
  return axes.empty() ? 0 : total;
}

std::optional<std::size_t> ArchiveConfig::axis_index(
    const std::string& name) const {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i].name() == name) return i;
  }
  return std::nullopt;
}

void validate_archive_config(const ArchiveConfig& config) {
  if (config.axes.empty()) throw ArgumentError("archive has no axes");
  std::set<std::string> names;
  for (const auto& axis : config.axes) {
    validate_axis(axis);
    if (!names.insert(axis.name()).second) {
      throw ArgumentError("duplicate axis name '" + axis.name() + "'");
    }
  }
  if (config.depth_limit < 1) throw ArgumentError("depth_limit must be >= 1");
  if (!(config.fitness_low < config.fitness_high)) {
    throw ArgumentError("fitness range must satisfy low < high");
  }
  if (!(config.tie_replace_probability >= 0.0 &&
        config.tie_replace_probability <= 1.0)) {
    throw ArgumentError("tie_replace_probability must lie in [0, 1]");
  }
}

void validate_descriptor(const DiversityDescriptor& d,
                         const ArchiveConfig& config) {
  if (d.coords.size() != config.axes.size()) {
    throw DescriptorError("descriptor has " + std::to_string(d.coords.size()) +
                          " coordinates, archive has " +
                          std::to_string(config.axes.size()) + " axes");
  }
  for (std::size_t i = 0; i < d.coords.size(); ++i) {
    const auto& axis = config.axes[i];
    if (axis.is_continuous()) {
      const auto* v = std::get_if<Continuous>(&d.coords[i]);
      if (v == nullptr) {
        throw DescriptorError("axis '" + axis.name() +
                              "' expects a continuous coordinate");
      }
      if (!(v->value >= 0.0 && v->value <= 1.0)) {
        throw DescriptorError("axis '" + axis.name() +
                              "' coordinate outside [0, 1]");
      }
    } else {
      const auto* v = std::get_if<Categorical>(&d.coords[i]);
      if (v == nullptr) {
        throw DescriptorError("axis '" + axis.name() +
                              "' expects a categorical coordinate");
      }
      if (v->index >= axis.bin_count()) {
        throw DescriptorError("axis '" + axis.name() +
                              "' label index out of range");
      }
    }
  }
}

BinKey descriptor_to_binkey(const DiversityDescriptor& d,
                            const ArchiveConfig& config) {
  validate_descriptor(d, config);
  BinKey key;
  key.indices.reserve(d.coords.size());
  for (std::size_t i = 0; i < d.coords.size(); ++i) {
    if (const auto* c = std::get_if<Continuous>(&d.coords[i])) {
      key.indices.push_back(bin_index(c->value, config.axes[i].continuous().grid));
    } else {
      key.indices.push_back(std::get<Categorical>(d.coords[i]).index);
    }
  }
  return key;
}

}  // namespace qdaif
