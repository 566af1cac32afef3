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

#ifndef ASUD_MEASURES_HPP
#define ASUD_MEASURES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "asud/grid.hpp"
#include "asud/polyspace.hpp"

namespace asud {

struct ScheduleLevel {
  std::size_t dim;    // N_l
  std::size_t ratio;  // k_l
  std::size_t samples;  // M_l = k_l * N_l
};

/// Hierarchical sampling schedule; levels are 1-based in the API.
struct Schedule {
  std::vector<ScheduleLevel> levels;

  std::size_t size() const { return levels.size(); }
  const ScheduleLevel& level(std::size_t l) const { return levels.at(l - 1); }
  /// N_{l}, k_{l}, M_{l} with the l = 0 convention of zeros.
  std::size_t dim(std::size_t l) const { return l == 0 ? 0 : level(l).dim; }
  std::size_t ratio(std::size_t l) const { return l == 0 ? 0 : level(l).ratio; }
  std::size_t samples(std::size_t l) const { return l == 0 ? 0 : level(l).samples; }
};

/// k_l = max(1, round(ln N_l)) made non-decreasing by a running maximum.
Schedule build_schedule(std::span<const std::size_t> dims);

/// Normalized reciprocal Christoffel function on the active points and the
/// least-squares weights 1/K.
struct ChristoffelWeights {
  Eigen::VectorXd kvals;
  Eigen::VectorXd wvals;
};

ChristoffelWeights christoffel(const QrFactors& qr, const DomainEstimate& estimate);

/// Same quantity evaluated from orthonormal-basis values at arbitrary points
/// (rows of `phi`).
Eigen::VectorXd christoffel_from_values(const Eigen::MatrixXd& phi);

struct MeasureSlot {
  std::size_t sample;  // global sample index i, 1-based
  std::size_t basis;   // basis function j, 1-based
  std::size_t level;
};
using MeasureAssignment = std::vector<MeasureSlot>;

/// Basis function for every new sample index M_{l-1}+1 .. M_l: functions
/// already present get k_l - k_{l-1} new draws each, new functions get k_l.
MeasureAssignment assign_measures(const Schedule& schedule, std::size_t level);

/// Inverse-CDF sampler over a fixed discrete distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probabilities);

  /// First position whose cumulative probability strictly exceeds u.
  std::size_t operator()(double u) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

/// One-shot form of DiscreteSampler; returns a 0-based position.
std::size_t draw_index(std::span<const double> probabilities, double u);

/// Column j of Q squared: the discrete distribution {|q_kj|^2}_k.
std::vector<double> column_distribution(const QrFactors& qr, std::size_t column);

}  // namespace asud

#endif  // ASUD_MEASURES_HPP
