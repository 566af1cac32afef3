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

#include "asud/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "asud/error.hpp"

namespace asud {
namespace {

std::size_t hc_weight(const MultiIndex& nu) {
  std::size_t w = 1;
  for (int v : nu) w *= static_cast<std::size_t>(v + 1);
  return w;
}

void enumerate(std::size_t dim, std::size_t bound, std::size_t prod, MultiIndex& current,
               std::vector<MultiIndex>& out, std::size_t capacity) {
  const std::size_t k = current.size();
  if (k == dim) {
    if (out.size() >= capacity) {
      throw Error(ErrorCode::CapacityExceeded,
                  "hyperbolic cross exceeds " + std::to_string(capacity) + " indices");
    }
    out.push_back(current);
    return;
  }
  for (std::size_t v = 0; prod * (v + 1) <= bound; ++v) {
    current.push_back(static_cast<int>(v));
    enumerate(dim, bound, prod * (v + 1), current, out, capacity);
    current.pop_back();
  }
}

std::size_t count(std::size_t dims_left, std::size_t budget) {
  // number of tuples of length dims_left with prod (v+1) <= budget
  if (dims_left == 0) return 1;
  std::size_t total = 0;
  for (std::size_t a = 1; a <= budget; ++a) total += count(dims_left - 1, budget / a);
  return total;
}

}  // namespace

IndexSet hyperbolic_cross(std::size_t dim, std::size_t order, std::size_t capacity) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "hyperbolic_cross needs d >= 1");
  IndexSet set{dim, order, {}};
  MultiIndex current;
  current.reserve(dim);
  enumerate(dim, order + 1, 1, current, set.indices, capacity);
  std::stable_sort(set.indices.begin(), set.indices.end(),
                   [](const MultiIndex& a, const MultiIndex& b) {
                     const auto wa = hc_weight(a), wb = hc_weight(b);
                     if (wa != wb) return wa < wb;
                     return a < b;
                   });
  return set;
}

std::size_t hyperbolic_cross_size(std::size_t dim, std::size_t order) {
  return count(dim, order + 1);
}

std::string index_set_to_json(const IndexSet& set) {
  nlohmann::json j;
  j["dim"] = set.dim;
  j["order"] = set.order;
  j["indices"] = set.indices;
  return j.dump();
}

IndexSet index_set_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  IndexSet set;
  set.dim = j.at("dim").get<std::size_t>();
  set.order = j.at("order").get<std::size_t>();
  set.indices = j.at("indices").get<std::vector<MultiIndex>>();
  for (const auto& nu : set.indices) {
    if (nu.size() != set.dim) throw Error(ErrorCode::SchemaMismatch, "multi-index of wrong length");
  }
  return set;
}

void legendre_orthonormal(double y, int max_degree, double* out) {
  // Three-term recurrence on the classical P_m, then scale by sqrt(2m+1).
  double prev = 1.0, cur = y;
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = std::sqrt(3.0) * y;
  for (int m = 1; m < max_degree; ++m) {
    const double next = ((2.0 * m + 1.0) * y * cur - m * prev) / (m + 1.0);
    prev = cur;
    cur = next;
    out[m + 1] = std::sqrt(2.0 * (m + 1) + 1.0) * cur;
  }
}

Eigen::MatrixXd eval_basis(const IndexSet& set, const Eigen::MatrixXd& points) {
  if (static_cast<std::size_t>(points.cols()) != set.dim) {
    throw Error(ErrorCode::InvalidArgument, "point dimension does not match index set");
  }
  int max_degree = 0;
  for (const auto& nu : set.indices) {
    for (int v : nu) max_degree = std::max(max_degree, v);
  }
  const auto n_pts = points.rows();
  const auto d = static_cast<Eigen::Index>(set.dim);
  Eigen::MatrixXd out(n_pts, static_cast<Eigen::Index>(set.size()));
  // table(m, k): L_m at coordinate k of the current point
  Eigen::MatrixXd table(max_degree + 1, d);
  for (Eigen::Index i = 0; i < n_pts; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      legendre_orthonormal(points(i, k), max_degree, table.col(k).data());
    }
    for (std::size_t j = 0; j < set.size(); ++j) {
      const auto& nu = set.indices[j];
      double v = 1.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        if (nu[static_cast<std::size_t>(k)] != 0) v *= table(nu[static_cast<std::size_t>(k)], k);
      }
      out(i, static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

Eigen::MatrixXd assemble_B(const DomainEstimate& estimate, const Eigen::MatrixXd& basis) {
  if (static_cast<std::size_t>(basis.rows()) != estimate.size()) {
    throw Error(ErrorCode::InvalidArgument, "basis rows do not match the active set");
  }
  Eigen::VectorXd scale(basis.rows());
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    scale(i) = std::sqrt(estimate.weights()[static_cast<std::size_t>(i)]);
  }
  return scale.asDiagonal() * basis;
}

QrFactors QrFactors::leading(std::size_t n) const {
  const auto nn = static_cast<Eigen::Index>(n);
  if (nn > Q.cols()) throw Error(ErrorCode::InvalidArgument, "leading() beyond factored width");
  return QrFactors{Q.leftCols(nn), R.topLeftCorner(nn, nn)};
}

QrFactors qr_factor(const Eigen::MatrixXd& B) {
  const auto m = B.rows(), n = B.cols();
  if (m < n) {
    throw Error(ErrorCode::RankDeficient,
                "QR needs at least as many rows as columns (" + std::to_string(m) + " < " +
                    std::to_string(n) + ")");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  QrFactors f;
  f.R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  f.Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);

  const double tol = kRankTolerance * B.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(f.R(i, i)) < tol || !std::isfinite(f.R(i, i))) {
      throw Error(ErrorCode::RankDeficient,
                  "|R_ii| below tolerance at column " + std::to_string(i));
    }
    if (f.R(i, i) < 0.0) {
      f.R.row(i) *= -1.0;
      f.Q.col(i) *= -1.0;
    }
  }
  return f;
}

Eigen::MatrixXd orthonormal_values(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& R) {
  // X = basis * R^{-1}  <=>  R^T X^T = basis^T
  const auto n = R.cols();
  return R.triangularView<Eigen::Upper>()
      .transpose()
      .solve(basis.leftCols(n).transpose())
      .transpose();
}

Eigen::VectorXd eval_on_grid(const Eigen::MatrixXd& C, const Eigen::MatrixXd& R,
                             const Eigen::VectorXd& coeffs) {
  if (R.rows() != R.cols() || R.cols() != coeffs.size() || C.cols() < R.cols()) {
    throw Error(ErrorCode::InvalidArgument, "eval_on_grid dimensions do not conform");
  }
  const Eigen::VectorXd psi_coeffs = R.triangularView<Eigen::Upper>().solve(coeffs);
  return C.leftCols(R.cols()) * psi_coeffs;
}

}  // namespace asud
