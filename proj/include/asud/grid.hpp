// Copyright 2026 The asud Authors
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

#ifndef ASUD_GRID_HPP
#define ASUD_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace asud {

using Index = std::size_t;
using IndexList = std::vector<Index>;

/// Finite point cloud Z in [-1,1]^d with a discrete probability measure.
///
/// Points are stored one per row. Grid indices are stable identities for
/// the lifetime of a run; every later stage refers to points by index.
class Grid {
 public:
  Grid(Eigen::MatrixXd points, std::vector<double> weights, std::uint64_t seed);

  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::uint64_t seed() const { return seed_; }

  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(Index i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }
  const std::vector<double>& weights() const { return weights_; }

  /// Row-subset of the point matrix, in the order given.
  Eigen::MatrixXd rows(std::span<const Index> indices) const;

  bool operator==(const Grid& other) const;

 private:
  Eigen::MatrixXd points_;
  std::vector<double> weights_;
  std::uint64_t seed_;
};

/// K points i.i.d. uniform on [-1,1]^d, uniform weights 1/K.
Grid build_grid(std::size_t dim, std::size_t size, std::uint64_t seed);

/// Normalized restriction of the grid measure to a set of active indices.
class DomainEstimate {
 public:
  const IndexList& active() const { return active_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return active_.size(); }

  /// Position of a grid index within `active()`, or -1 when absent.
  std::ptrdiff_t position(Index grid_index) const;
  bool contains(Index grid_index) const { return position(grid_index) >= 0; }

 private:
  friend DomainEstimate restrict_measure(const Grid&, IndexList);
  IndexList active_;
  std::vector<double> weights_;
};

/// Throws EmptyEstimate for an empty set. Duplicates are removed and the
/// result is sorted.
DomainEstimate restrict_measure(const Grid& grid, IndexList active);

/// All indices 0..K-1.
IndexList all_indices(const Grid& grid);

// CSV layout: line 1 "d,K,seed", line 2 the values, then K rows of
// coordinates printed with 17 significant digits.
void write_grid_csv(const Grid& grid, const std::filesystem::path& path);
Grid read_grid_csv(const std::filesystem::path& path);

}  // namespace asud

#endif  // ASUD_GRID_HPP
