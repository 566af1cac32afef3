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

#ifndef ASUD_LSQ_HPP
#define ASUD_LSQ_HPP

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "asud/grid.hpp"
#include "asud/polyspace.hpp"

namespace asud {

/// How sample rows are weighted in the least-squares objective.
enum class Weighting {
  Christoffel,  // w = 1 / K, the reciprocal Christoffel function
  Unit,         // w = 1
};

struct LsSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  IndexList sample_indices;  // grid index of each row
};

/// Builds A and b from rows of Q, for samples lying in the estimate the QR
/// was computed on. With Christoffel weighting row i is
///   q_{j_i,.} / sqrt((M/N) sum_t q_{j_i t}^2),
///   b_i = f(y_i) sqrt(tau_{j_i}) / sqrt((M/N) sum_t q_{j_i t}^2),
/// which for a uniform restricted measure is the familiar form with the
/// K_{l-1} factor under the root. Throws SampleOutsideEstimate.
LsSystem assemble(const QrFactors& qr, const DomainEstimate& estimate,
                  std::span<const Index> sample_indices, std::span<const double> values,
                  Weighting weighting);

/// Direct route for samples anywhere on the grid: rows sqrt(w_i / M) phi(y_i)
/// with phi = psi R^{-1}. `basis` holds psi at the samples (M x >=N).
LsSystem assemble_direct(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& R,
                         std::span<const Index> sample_indices,
                         std::span<const double> values, std::span<const double> weights);

struct FitResult {
  Eigen::VectorXd coeffs;      // orthonormal-basis coordinates
  Eigen::VectorXd grid_values; // filled by the caller via eval_on_grid
  double sigma_min = 0.0;      // beta
  bool numerically_singular = false;
};

inline constexpr double kSingularTolerance = 1e-14;

/// Least-squares solution by column-pivoted Householder QR. sigma_min is
/// the smallest singular value of A, taken from the SVD of the triangular
/// factor. Throws Underdetermined when M < N; flags numerically_singular
/// when sigma_min < 1e-14 * ||A||_2.
FitResult solve(const LsSystem& system);

/// Smallest singular value of a tall matrix (0 for an empty column set).
double smallest_singular_value(const Eigen::MatrixXd& A);

/// alpha = sigma_min of rows sqrt(w_i / M) phi_j(y_i), with phi
/// orthonormalized over the true discrete domain (factor `omega_R`).
double stability_alpha(const Eigen::MatrixXd& omega_R, const Eigen::MatrixXd& basis,
                       std::span<const double> weights);

}  // namespace asud

#endif  // ASUD_LSQ_HPP
