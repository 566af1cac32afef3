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

#include "asud/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asud/error.hpp"

namespace asud {

Schedule build_schedule(std::span<const std::size_t> dims) {
  if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one level");
  Schedule s;
  std::size_t prev_dim = 0, prev_ratio = 1;
  for (std::size_t n : dims) {
    if (n <= prev_dim) {
      throw Error(ErrorCode::InvalidArgument, "subspace dimensions must be strictly increasing");
    }
    const long rounded = std::lround(std::log(static_cast<double>(n)));
    std::size_t k = static_cast<std::size_t>(std::max(1L, rounded));
    k = std::max(k, prev_ratio);
    s.levels.push_back({n, k, k * n});
    prev_dim = n;
    prev_ratio = k;
  }
  return s;
}

ChristoffelWeights christoffel(const QrFactors& qr, const DomainEstimate& estimate) {
  if (qr.rows() != estimate.size()) {
    throw Error(ErrorCode::InvalidArgument, "QR rows do not match the estimate");
  }
  const double n = static_cast<double>(qr.cols());
  ChristoffelWeights cw;
  cw.kvals = qr.Q.rowwise().squaredNorm() / n;
  for (Eigen::Index k = 0; k < cw.kvals.size(); ++k) {
    cw.kvals(k) /= estimate.weights()[static_cast<std::size_t>(k)];
    if (!(cw.kvals(k) > 0.0)) {
      throw Error(ErrorCode::ZeroChristoffel,
                  "reciprocal Christoffel function vanishes at active point " +
                      std::to_string(estimate.active()[static_cast<std::size_t>(k)]));
    }
  }
  cw.wvals = cw.kvals.cwiseInverse();
  return cw;
}

Eigen::VectorXd christoffel_from_values(const Eigen::MatrixXd& phi) {
  Eigen::VectorXd k = phi.rowwise().squaredNorm() / static_cast<double>(phi.cols());
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    if (!(k(i) > 0.0)) throw Error(ErrorCode::ZeroChristoffel, "Christoffel value vanishes");
  }
  return k;
}

MeasureAssignment assign_measures(const Schedule& schedule, std::size_t level) {
  if (level < 1 || level > schedule.size()) {
    throw Error(ErrorCode::InvalidArgument, "level out of range");
  }
  const std::size_t n_old = schedule.dim(level - 1), n_new = schedule.dim(level);
  const std::size_t k_old = schedule.ratio(level - 1), k_new = schedule.ratio(level);
  const std::size_t m_old = schedule.samples(level - 1);

  MeasureAssignment out;
  out.reserve(schedule.samples(level) - m_old);
  const std::size_t extra = k_new - k_old;
  for (std::size_t j = 1; j <= n_old; ++j) {
    for (std::size_t s = 1; s <= extra; ++s) {
      out.push_back({m_old + (j - 1) * extra + s, j, level});
    }
  }
  for (std::size_t j = n_old + 1; j <= n_new; ++j) {
    for (std::size_t s = 1; s <= k_new; ++s) out.push_back({(j - 1) * k_new + s, j, level});
  }
  return out;
}

DiscreteSampler::DiscreteSampler(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidArgument, "empty distribution");
  cumulative_.resize(probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (!(probabilities[k] >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "negative probability");
    }
    acc += probabilities[k];
    cumulative_[k] = acc;
    if (probabilities[k] > 0.0) last_positive_ = k;
  }
  if (std::abs(acc - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "distribution sums to " + std::to_string(acc) + ", not 1");
  }
  for (double& c : cumulative_) c /= acc;
}

std::size_t DiscreteSampler::operator()(double u) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto pos = static_cast<std::size_t>(it - cumulative_.begin());
  return std::min(pos, last_positive_);
}

std::size_t draw_index(std::span<const double> probabilities, double u) {
  return DiscreteSampler(probabilities)(u);
}

std::vector<double> column_distribution(const QrFactors& qr, std::size_t column) {
  const auto col = qr.Q.col(static_cast<Eigen::Index>(column));
  std::vector<double> p(static_cast<std::size_t>(col.size()));
  for (Eigen::Index k = 0; k < col.size(); ++k) p[static_cast<std::size_t>(k)] = col(k) * col(k);
  return p;
}

}  // namespace asud
