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

#ifndef QDAIF_BINNING_HPP_
#define QDAIF_BINNING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdaif {

// Bin boundaries over [0, 1]: ticks[0] = 0, ticks.back() = 1, strictly
// increasing. Bin i is [ticks[i], ticks[i+1]); the last bin also holds 1.0.
class TickGrid {
 public:
  // Validates the tick list; throws ArgumentError on violation.
  explicit TickGrid(std::vector<double> ticks);

  // Accepts "paper-1d-20", "paper-2d-10", "qdef-1d-20" and "uniform-N".
  static TickGrid preset(std::string_view name);

  std::size_t bin_count() const { return ticks_.size() - 1; }
  std::span<const double> ticks() const { return ticks_; }

  friend bool operator==(const TickGrid&, const TickGrid&) = default;

 private:
  std::vector<double> ticks_;
};

// 20 bins, denser towards both ends of the range.
TickGrid default_grid_1d();
// 10 bins per axis for two-dimensional archives.
TickGrid default_grid_2d();
// 20 bins concentrated around 0.5, used with embedding feedback.
TickGrid embedding_grid_1d();

TickGrid uniform_grid(std::size_t n);

std::size_t bin_index(double value, const TickGrid& grid);

// Piecewise-linear map taking ticks[i] to i/n, so that a non-uniform grid is
// carried onto the uniform grid with the same bin count. Bin membership is
// preserved.
double to_uniform(double value, const TickGrid& grid);

}  // namespace qdaif

#endif  // QDAIF_BINNING_HPP_
