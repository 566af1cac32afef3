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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "asud/error.hpp"
#include "asud/grid.hpp"
#include "asud/lsq.hpp"
#include "asud/measures.hpp"
#include "asud/polyspace.hpp"
#include "asud/rng.hpp"
#include "oracles.hpp"

using namespace asud;

namespace {

struct Setup {
  Grid grid = build_grid(2, 1000, 21);
  IndexSet set;
  DomainEstimate estimate;
  QrFactors qr;
  IndexList samples;
  std::vector<double> values;

  Setup(std::size_t order, std::size_t m) : set(hyperbolic_cross(2, order)) {
    IndexList act;
    for (Index i = 0; i < grid.size(); ++i)
      if (grid.point(i)(0) + grid.point(i)(1) > -0.5) act.push_back(i);
    estimate = restrict_measure(grid, act);
    qr = qr_factor(assemble_B(estimate, eval_basis(set, grid.rows(act))));
    Rng rng(8, StreamTag::Test);
    for (std::size_t i = 0; i < m; ++i) {
      samples.push_back(act[static_cast<std::size_t>(rng.uniform() * act.size())]);
      values.push_back(rng.uniform(-2, 2));
    }
  }
};

}  // namespace

TEST_CASE("constant basis fit is the sample mean") {
  Setup s(0, 17);
  for (Weighting w : {Weighting::Christoffel, Weighting::Unit}) {
    const LsSystem sys = assemble(s.qr, s.estimate, s.samples, s.values, w);
    if (w == Weighting::Christoffel) {
      for (Eigen::Index i = 0; i < sys.A.rows(); ++i)
        CHECK(sys.A(i, 0) == doctest::Approx(1.0 / std::sqrt(17.0)).epsilon(1e-13));
    }
    const FitResult fit = solve(sys);
    double mean = 0.0;
    for (double v : s.values) mean += v / 17.0;
    // Coordinates are in the phi basis; phi_1 is the constant 1.
    const Eigen::VectorXd g = eval_on_grid(Eigen::MatrixXd::Ones(1, 1), s.qr.R, fit.coeffs);
    CHECK(g(0) == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("Q-row and direct assembly agree") {
  Setup s(7, 120);
  const LsSystem a = assemble(s.qr, s.estimate, s.samples, s.values, Weighting::Christoffel);
  const Eigen::MatrixXd psi = eval_basis(s.set, s.grid.rows(s.samples));
  const Eigen::MatrixXd phi = orthonormal_values(psi, s.qr.R);
  const Eigen::VectorXd k = christoffel_from_values(phi);
  std::vector<double> w(s.samples.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / k(static_cast<Eigen::Index>(i));
  const LsSystem b = assemble_direct(psi, s.qr.R, s.samples, s.values, w);
  CHECK(oracle::max_abs_diff(a.A, b.A) < 1e-12);
  CHECK(oracle::max_abs_diff(a.b, b.b) < 1e-12);
  // Independent elementwise formula: sqrt(w / M) * phi_j(y_i).
  const double M = static_cast<double>(s.samples.size());
  for (Eigen::Index i = 0; i < a.A.rows(); ++i)
    for (Eigen::Index j = 0; j < a.A.cols(); ++j)
      CHECK(std::abs(a.A(i, j) - std::sqrt(w[static_cast<std::size_t>(i)] / M) * phi(i, j)) <
            1e-12);
}

TEST_CASE("unit weighting is the scaled orthonormal basis") {
  Setup s(4, 40);
  const LsSystem a = assemble(s.qr, s.estimate, s.samples, s.values, Weighting::Unit);
  const Eigen::MatrixXd psi = eval_basis(s.set, s.grid.rows(s.samples));
  const std::vector<double> ones(s.samples.size(), 1.0);
  const LsSystem b = assemble_direct(psi, s.qr.R, s.samples, s.values, ones);
  CHECK(oracle::max_abs_diff(a.A, b.A) < 1e-12);
  CHECK(oracle::max_abs_diff(a.b, b.b) < 1e-12);
}

TEST_CASE("assemble rejects samples outside the estimate") {
  Setup s(2, 10);
  Index outside = 0;
  while (s.estimate.contains(outside)) ++outside;
  const IndexList idx{outside};
  const std::vector<double> v{1.0};
  try {
    assemble(s.qr, s.estimate, idx, v, Weighting::Christoffel);
    FAIL("expected SampleOutsideEstimate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SampleOutsideEstimate);
  }
}

TEST_CASE("solve on trivial systems") {
  Rng rng(10, StreamTag::Test);
  LsSystem sys{Eigen::MatrixXd::Identity(5, 5), oracle::random_vector(rng, 5), {}};
  FitResult fit = solve(sys);
  CHECK(oracle::max_abs_diff(fit.coeffs, sys.b) < 1e-14);
  CHECK(fit.sigma_min == doctest::Approx(1.0));

  sys.A = oracle::random_matrix(rng, 30, 6);
  const Eigen::VectorXd x0 = oracle::random_vector(rng, 6);
  sys.b = sys.A * x0;
  fit = solve(sys);
  CHECK(oracle::max_abs_diff(fit.coeffs, x0) < 1e-10);

  sys.A = oracle::random_matrix(rng, 3, 4);
  sys.b = oracle::random_vector(rng, 3);
  try {
    solve(sys);
    FAIL("expected Underdetermined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Underdetermined);
  }
}

TEST_CASE("solve matches the normal-equations oracle") {
  Rng rng(11, StreamTag::Test);
  for (int rep = 0; rep < 25; ++rep) {
    const LsSystem sys{oracle::random_matrix(rng, 40, 8), oracle::random_vector(rng, 40), {}};
    const FitResult fit = solve(sys);
    const Eigen::VectorXd ref = oracle::normal_equations(sys.A, sys.b);
    CHECK((fit.coeffs - ref).norm() <= 1e-8 * ref.norm());
    CHECK(std::abs(fit.sigma_min - oracle::gram_sigma_min(sys.A)) < 1e-8);
    CHECK(std::abs(smallest_singular_value(sys.A) - fit.sigma_min) < 1e-12);
  }
}

TEST_CASE("scaling the data scales the fit exactly") {
  Setup s(5, 60);
  const LsSystem a = assemble(s.qr, s.estimate, s.samples, s.values, Weighting::Christoffel);
  LsSystem b = a;
  b.b *= 4.0;  // power of two: exact in floating point
  const FitResult fa = solve(a), fb = solve(b);
  CHECK(((fb.coeffs - 4.0 * fa.coeffs).cwiseAbs().maxCoeff()) <= 1e-14 * fb.coeffs.norm());
}

TEST_CASE("exact recovery of a polynomial in the subspace") {
  Setup s(6, 80);
  Rng rng(12, StreamTag::Test);
  const Eigen::VectorXd c = oracle::random_vector(rng, static_cast<Eigen::Index>(s.set.size()));
  const Eigen::VectorXd vals = eval_basis(s.set, s.grid.rows(s.samples)) * c;
  std::vector<double> v(vals.data(), vals.data() + vals.size());
  const FitResult fit =
      solve(assemble(s.qr, s.estimate, s.samples, v, Weighting::Christoffel));
  const Eigen::MatrixXd C = eval_basis(s.set, s.grid.points());
  const Eigen::VectorXd g = eval_on_grid(C, s.qr.R, fit.coeffs);
  CHECK((g - C * c).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, (C * c).cwiseAbs().maxCoeff()));
}

TEST_CASE("duplicating a sample keeps sigma_min above the scaled bound") {
  Rng rng(13, StreamTag::Test);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd phi = oracle::random_matrix(rng, 25, 5);
    const double M = 25.0;
    const Eigen::MatrixXd A = phi / std::sqrt(M);
    Eigen::MatrixXd A2(26, 5);
    A2.topRows(25) = phi / std::sqrt(M + 1);
    A2.row(25) = phi.row(rep % 25) / std::sqrt(M + 1);
    const double s1 = smallest_singular_value(A), s2 = smallest_singular_value(A2);
    CHECK(std::abs(s2 - oracle::gram_sigma_min(A2)) < 1e-8);
    CHECK(s2 >= s1 * std::sqrt(M / (M + 1)) - 1e-12);
  }
}

TEST_CASE("stability_alpha on exact quadrature and the constant basis") {
  Setup s(6, 0);
  const IndexList& act = s.estimate.active();
  const Eigen::MatrixXd psi = eval_basis(s.set, s.grid.rows(act));
  std::vector<double> w(act.size());
  const double M = static_cast<double>(act.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = M * s.estimate.weights()[i];
  CHECK(stability_alpha(s.qr.R, psi, w) == doctest::Approx(1.0).epsilon(1e-10));

  const IndexSet c0 = hyperbolic_cross(2, 0);
  const Eigen::MatrixXd one = eval_basis(c0, s.grid.rows(IndexList{3, 8, 8}));
  const std::vector<double> unit(3, 1.0);
  CHECK(stability_alpha(Eigen::MatrixXd::Ones(1, 1), one, unit) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("smallest_singular_value of wide or empty matrices is zero") {
  CHECK(smallest_singular_value(Eigen::MatrixXd::Ones(2, 3)) == 0.0);
  CHECK(smallest_singular_value(Eigen::MatrixXd(0, 0)) == 0.0);
}
