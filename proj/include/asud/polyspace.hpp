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

#ifndef ASUD_POLYSPACE_HPP
#define ASUD_POLYSPACE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asud/grid.hpp"

namespace asud {

using MultiIndex = std::vector<int>;

/// Hyperbolic-cross multi-index set {nu : prod_k (nu_k + 1) <= n + 1}.
///
/// Indices are ordered by the weight prod_k (nu_k + 1), ties broken
/// lexicographically, so the list for order n is a prefix of the list for
/// every larger order and basis numbering is consistent across levels.
struct IndexSet {
  std::size_t dim = 0;
  std::size_t order = 0;
  std::vector<MultiIndex> indices;

  std::size_t size() const { return indices.size(); }
};

inline constexpr std::size_t kDefaultIndexCapacity = 1'000'000;

IndexSet hyperbolic_cross(std::size_t dim, std::size_t order,
                          std::size_t capacity = kDefaultIndexCapacity);

/// |hyperbolic_cross(dim, order)| without materializing the set.
std::size_t hyperbolic_cross_size(std::size_t dim, std::size_t order);

std::string index_set_to_json(const IndexSet& set);
IndexSet index_set_from_json(const std::string& text);

/// Legendre polynomials normalized to unit L2 norm under the uniform
/// probability measure on [-1,1]; fills out[m] for m = 0..max_degree.
void legendre_orthonormal(double y, int max_degree, double* out);

/// Tensor Legendre values: entry (i, j) is psi_j(points.row(i)).
/// Rows of `points` are coordinates.
Eigen::MatrixXd eval_basis(const IndexSet& set, const Eigen::MatrixXd& points);

/// B with entries sqrt(weight_i) * basis(i, j). `basis` rows must match the
/// estimate's active indices in order.
Eigen::MatrixXd assemble_B(const DomainEstimate& estimate, const Eigen::MatrixXd& basis);

/// Thin QR factors with strictly positive diag(R).
struct QrFactors {
  Eigen::MatrixXd Q;  // K' x N, orthonormal columns
  Eigen::MatrixXd R;  // N x N, upper triangular

  std::size_t rows() const { return static_cast<std::size_t>(Q.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(Q.cols()); }

  /// Factors of the first n columns of the factored matrix. Exact because
  /// the thin QR with positive diagonal is unique.
  QrFactors leading(std::size_t n) const;
};

inline constexpr double kRankTolerance = 1e-12;

/// Householder thin QR; throws RankDeficient when some |R_ii| falls below
/// kRankTolerance * ||B||_F or when B has fewer rows than columns.
QrFactors qr_factor(const Eigen::MatrixXd& B);

/// Orthonormal-basis values at arbitrary points: rows of basis * R^{-1}.
Eigen::MatrixXd orthonormal_values(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& R);

/// C * (R^{-1} c), by back-substitution.
Eigen::VectorXd eval_on_grid(const Eigen::MatrixXd& C, const Eigen::MatrixXd& R,
                             const Eigen::VectorXd& coeffs);

}  // namespace asud

#endif  // ASUD_POLYSPACE_HPP
