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

#ifndef ASUD_METRICS_HPP
#define ASUD_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asud/grid.hpp"
#include "asud/lsq.hpp"

namespace asud {

/// Weighted relative L2 error ||f - g|| / ||f|| over a discrete set.
double relative_error(std::span<const double> f_true, std::span<const double> f_approx,
                      std::span<const double> weights);

/// |true symmetric-difference estimate| / |true|. Both lists sorted.
double mismatch_volume(std::span<const Index> true_set, std::span<const Index> estimate);

/// (F - M) / F; zero when no evaluations were made.
double rejection_rate(std::size_t evaluations, std::size_t samples);

/// 1 / sigma_min, +inf when sigma_min is zero.
double reciprocal(double sigma_min);
double inv_beta(const LsSystem& system);

struct LevelRecord {
  std::size_t level = 0;
  std::size_t dim = 0;          // N_l
  std::size_t samples = 0;      // M_l
  std::size_t evaluations = 0;  // F_l
  double error = 0.0;           // E_l
  double mismatch = 0.0;        // V_l
  double rejection = 0.0;       // R_l
  double inv_alpha = 0.0;
  double inv_beta = 0.0;
};

struct RunRecord {
  std::string method;
  int function_id = 0;
  std::size_t dim = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<LevelRecord> levels;
  std::optional<std::string> failure;  // set when the run stopped early
};

/// Per-level mean over trials (trials failing before a level are skipped for
/// that level). Uses compensated summation.
struct AggregateRow {
  std::size_t level = 0;
  std::size_t dim = 0;
  std::size_t samples = 0;
  double evaluations = 0.0;
  double error = 0.0;
  double mismatch = 0.0;
  double rejection = 0.0;
  double inv_alpha = 0.0;
  double inv_beta = 0.0;
  std::size_t trials_ok = 0;
};

enum class MeanKind { Arithmetic, Geometric };

std::vector<AggregateRow> aggregate(std::span<const RunRecord> runs,
                                    MeanKind kind = MeanKind::Arithmetic);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace asud

#endif  // ASUD_METRICS_HPP
