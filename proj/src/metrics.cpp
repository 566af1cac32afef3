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

#include "asud/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "asud/error.hpp"

namespace asud {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  if (!std::isfinite(sum)) return sum;
  return sum + comp;
}

double relative_error(std::span<const double> f_true, std::span<const double> f_approx,
                      std::span<const double> weights) {
  if (f_true.size() != f_approx.size() || f_true.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "relative_error: length mismatch");
  }
  std::vector<double> num(f_true.size()), den(f_true.size());
  for (std::size_t i = 0; i < f_true.size(); ++i) {
    const double diff = f_true[i] - f_approx[i];
    num[i] = weights[i] * diff * diff;
    den[i] = weights[i] * f_true[i] * f_true[i];
  }
  const double den_sum = compensated_sum(den);
  if (!(den_sum > 0.0)) throw Error(ErrorCode::ZeroNorm, "reference function has zero norm");
  return std::sqrt(compensated_sum(num) / den_sum);
}

double mismatch_volume(std::span<const Index> true_set, std::span<const Index> estimate) {
  if (true_set.empty()) throw Error(ErrorCode::EmptyTrueDomain, "true discrete domain is empty");
  std::vector<Index> diff;
  std::set_symmetric_difference(true_set.begin(), true_set.end(), estimate.begin(),
                                estimate.end(), std::back_inserter(diff));
  return static_cast<double>(diff.size()) / static_cast<double>(true_set.size());
}

double rejection_rate(std::size_t evaluations, std::size_t samples) {
  if (evaluations == 0) return 0.0;
  if (samples > evaluations) {
    throw Error(ErrorCode::InvalidArgument, "more samples than evaluations");
  }
  return static_cast<double>(evaluations - samples) / static_cast<double>(evaluations);
}

double reciprocal(double sigma_min) {
  return sigma_min > 0.0 ? 1.0 / sigma_min : std::numeric_limits<double>::infinity();
}

double inv_beta(const LsSystem& system) {
  return reciprocal(smallest_singular_value(system.A));
}

std::vector<AggregateRow> aggregate(std::span<const RunRecord> runs, MeanKind kind) {
  std::size_t depth = 0;
  for (const auto& r : runs) {
    if (!r.failure) depth = std::max(depth, r.levels.size());
  }
  auto mean = [kind](std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (kind == MeanKind::Geometric) {
      for (double& x : xs) x = std::log(x);
      return std::exp(compensated_sum(xs) / static_cast<double>(xs.size()));
    }
    return compensated_sum(xs) / static_cast<double>(xs.size());
  };

  std::vector<AggregateRow> rows;
  for (std::size_t l = 0; l < depth; ++l) {
    std::vector<double> f, e, v, rr, ia, ib;
    AggregateRow row;
    for (const auto& r : runs) {
      if (r.failure || l >= r.levels.size()) continue;
      const auto& lv = r.levels[l];
      row.level = lv.level;
      row.dim = lv.dim;
      row.samples = lv.samples;
      f.push_back(static_cast<double>(lv.evaluations));
      e.push_back(lv.error);
      v.push_back(lv.mismatch);
      rr.push_back(lv.rejection);
      ia.push_back(lv.inv_alpha);
      ib.push_back(lv.inv_beta);
    }
    row.trials_ok = f.size();
    // F_l is a count; it always uses the arithmetic mean.
    row.evaluations = compensated_sum(f) / static_cast<double>(f.size());
    row.error = mean(e);
    row.mismatch = mean(v);
    row.rejection = mean(rr);
    row.inv_alpha = mean(ia);
    row.inv_beta = mean(ib);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace asud
