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

#include "qdaif/binning.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

#include "qdaif/errors.hpp"

namespace qdaif {
namespace {

void check_unit(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw RangeError("value " + std::to_string(value) +
                     " outside [0, 1]");
  }
}

}  // namespace

TickGrid::TickGrid(std::vector<double> ticks) : ticks_(std::move(ticks)) {
  if (ticks_.size() < 2) {
    throw ArgumentError("tick grid needs at least two ticks");
  }
  if (ticks_.front() != 0.0 || ticks_.back() != 1.0) {
    throw ArgumentError("tick grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < ticks_.size(); ++i) {
    if (!(ticks_[i] > ticks_[i - 1])) {
      throw ArgumentError("tick grid must be strictly increasing (index " +
                          std::to_string(i) + ")");
    }
  }
}

TickGrid TickGrid::preset(std::string_view name) {
  if (name == "paper-1d-20") return default_grid_1d();
  if (name == "paper-2d-10") return default_grid_2d();
  if (name == "qdef-1d-20") return embedding_grid_1d();
  constexpr std::string_view kUniform = "uniform-";
  if (name.starts_with(kUniform)) {
    std::size_t n = 0;
    auto digits = name.substr(kUniform.size());
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) {
      return uniform_grid(n);
    }
  }
  throw ArgumentError("unknown grid preset '" + std::string(name) + "'");
}

TickGrid default_grid_1d() {
  return TickGrid({0.0,  0.005, 0.01, 0.015, 0.02, 0.03, 0.04,
                   0.05, 0.10,  0.20, 0.50,  0.80, 0.90, 0.95,
                   0.96, 0.97,  0.98, 0.985, 0.99, 0.995, 1.0});
}

TickGrid default_grid_2d() {
  return TickGrid(
      {0.0, 0.005, 0.02, 0.05, 0.20, 0.50, 0.80, 0.95, 0.98, 0.995, 1.0});
}

TickGrid embedding_grid_1d() {
  return TickGrid({0.0,  0.40, 0.41, 0.42, 0.43, 0.44, 0.45,
                   0.46, 0.47, 0.48, 0.50, 0.52, 0.53, 0.54,
                   0.55, 0.56, 0.57, 0.58, 0.59, 0.60, 1.0});
}

TickGrid uniform_grid(std::size_t n) {
  if (n == 0) throw ArgumentError("uniform grid needs at least one bin");
  std::vector<double> ticks(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ticks[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  ticks.back() = 1.0;
  return TickGrid(std::move(ticks));
}

std::size_t bin_index(double value, const TickGrid& grid) {
  check_unit(value);
  auto ticks = grid.ticks();
  auto it = std::upper_bound(ticks.begin(), ticks.end(), value);
  auto idx = static_cast<std::size_t>(it - ticks.begin());
  // idx >= 1 because ticks[0] = 0 <= value.
  return std::min(idx - 1, grid.bin_count() - 1);
}

double to_uniform(double value, const TickGrid& grid) {
  const std::size_t i = bin_index(value, grid);
  const std::size_t n = grid.bin_count();
  auto ticks = grid.ticks();
  const double lo = ticks[i];
  const double hi = ticks[i + 1];
  const double frac = (value - lo) / (hi - lo);
  const double dn = static_cast<double>(n);
  double out = (static_cast<double>(i) + frac) / dn;
  if (value == 1.0) return 1.0;
  // Rounding can land exactly on the next uniform tick; step back inside.
  const double upper = static_cast<double>(i + 1) / dn;
  const double lower = static_cast<double>(i) / dn;
  if (out >= upper) out = std::nextafter(upper, 0.0);
  if (out < lower) out = lower;
  return out;
}

}  // namespace qdaif
