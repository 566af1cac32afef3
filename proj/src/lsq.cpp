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

#include "asud/lsq.hpp"

#include <cmath>
#include <string>

#include "asud/error.hpp"

namespace asud {

LsSystem assemble(const QrFactors& qr, const DomainEstimate& estimate,
                  std::span<const Index> sample_indices, std::span<const double> values,
                  Weighting weighting) {
  if (sample_indices.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "one value per sample required");
  }
  const auto m = static_cast<Eigen::Index>(sample_indices.size());
  const auto n = static_cast<Eigen::Index>(qr.cols());
  const double md = static_cast<double>(m), nd = static_cast<double>(n);

  LsSystem sys;
  sys.A.resize(m, n);
  sys.b.resize(m);
  sys.sample_indices.assign(sample_indices.begin(), sample_indices.end());
  for (Eigen::Index i = 0; i < m; ++i) {
    const Index g = sample_indices[static_cast<std::size_t>(i)];
    const auto pos = estimate.position(g);
    if (pos < 0) {
      throw Error(ErrorCode::SampleOutsideEstimate,
                  "sample at grid index " + std::to_string(g) + " is not active");
    }
    const auto row = qr.Q.row(pos);
    const double tau = estimate.weights()[static_cast<std::size_t>(pos)];
    const double f = values[static_cast<std::size_t>(i)];
    if (weighting == Weighting::Christoffel) {
      const double denom = std::sqrt(md / nd * row.squaredNorm());
      sys.A.row(i) = row / denom;
      sys.b(i) = f * std::sqrt(tau) / denom;
    } else {
      const double denom = std::sqrt(tau * md);
      sys.A.row(i) = row / denom;
      sys.b(i) = f / std::sqrt(md);
    }
  }
  return sys;
}

LsSystem assemble_direct(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& R,
                         std::span<const Index> sample_indices,
                         std::span<const double> values, std::span<const double> weights) {
  const auto m = basis.rows();
  if (static_cast<std::size_t>(m) != values.size() ||
      static_cast<std::size_t>(m) != weights.size() ||
      static_cast<std::size_t>(m) != sample_indices.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample arrays have mismatched lengths");
  }
  LsSystem sys;
  sys.A = orthonormal_values(basis, R);
  sys.b.resize(m);
  sys.sample_indices.assign(sample_indices.begin(), sample_indices.end());
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = std::sqrt(weights[static_cast<std::size_t>(i)] / static_cast<double>(m));
    sys.A.row(i) *= s;
    sys.b(i) = s * values[static_cast<std::size_t>(i)];
  }
  return sys;
}

double smallest_singular_value(const Eigen::MatrixXd& A) {
  if (A.cols() == 0) return 0.0;
  if (A.rows() < A.cols()) return 0.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto n = A.cols();
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  return svd.singularValues()(n - 1);
}

FitResult solve(const LsSystem& system) {
  const auto m = system.A.rows(), n = system.A.cols();
  if (m < n) {
    throw Error(ErrorCode::Underdetermined,
                std::to_string(m) + " samples for " + std::to_string(n) + " unknowns");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system.A);
  FitResult fit;
  fit.coeffs = qr.solve(system.b);

  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sv = svd.singularValues();
  fit.sigma_min = n > 0 ? sv(n - 1) : 0.0;
  fit.numerically_singular = n > 0 && fit.sigma_min < kSingularTolerance * sv(0);
  return fit;
}

double stability_alpha(const Eigen::MatrixXd& omega_R, const Eigen::MatrixXd& basis,
                       std::span<const double> weights) {
  const auto m = basis.rows();
  if (static_cast<std::size_t>(m) != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "one weight per sample required");
  }
  Eigen::MatrixXd phi = orthonormal_values(basis, omega_R);
  for (Eigen::Index i = 0; i < m; ++i) {
    phi.row(i) *= std::sqrt(weights[static_cast<std::size_t>(i)] / static_cast<double>(m));
  }
  return smallest_singular_value(phi);
}

}  // namespace asud
