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

#include "asud/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "asud/error.hpp"
#include "asud/rng.hpp"

namespace asud {

Grid::Grid(Eigen::MatrixXd points, std::vector<double> weights, std::uint64_t seed)
    : points_(std::move(points)), weights_(std::move(weights)), seed_(seed) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid needs K >= 1 and d >= 1");
  }
  if (weights_.size() != static_cast<std::size_t>(points_.rows())) {
    throw Error(ErrorCode::InvalidArgument, "one weight per grid point required");
  }
  if (points_.cwiseAbs().maxCoeff() > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "grid point outside [-1,1]^d");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative grid weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "grid weights must sum to 1");
  }
}

Eigen::MatrixXd Grid::rows(std::span<const Index> indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), points_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return out;
}

bool Grid::operator==(const Grid& other) const {
  return seed_ == other.seed_ && points_.rows() == other.points_.rows() &&
         points_.cols() == other.points_.cols() && points_ == other.points_ &&
         weights_ == other.weights_;
}

Grid build_grid(std::size_t dim, std::size_t size, std::uint64_t seed) {
  if (dim < 1 || size < 1) {
    throw Error(ErrorCode::InvalidArgument, "build_grid requires d >= 1 and K >= 1");
  }
  Rng rng(seed, StreamTag::Grid);
  Eigen::MatrixXd points(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) points(i, k) = rng.uniform(-1.0, 1.0);
  }
  std::vector<double> weights(size, 1.0 / static_cast<double>(size));
  return Grid(std::move(points), std::move(weights), seed);
}

std::ptrdiff_t DomainEstimate::position(Index grid_index) const {
  auto it = std::lower_bound(active_.begin(), active_.end(), grid_index);
  if (it == active_.end() || *it != grid_index) return -1;
  return it - active_.begin();
}

DomainEstimate restrict_measure(const Grid& grid, IndexList active) {
  if (active.empty()) throw Error(ErrorCode::EmptyEstimate, "domain estimate is empty");
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  if (active.back() >= grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "active index outside the grid");
  }
  const auto& tau = grid.weights();
  double mass = 0.0;
  for (Index i : active) mass += tau[i];
  if (!(mass > 0.0)) throw Error(ErrorCode::EmptyEstimate, "domain estimate carries no mass");

  DomainEstimate est;
  est.weights_.reserve(active.size());
  for (Index i : active) est.weights_.push_back(tau[i] / mass);
  est.active_ = std::move(active);
  return est;
}

IndexList all_indices(const Grid& grid) {
  IndexList out(grid.size());
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

void write_grid_csv(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << "d,K,seed\n" << grid.dim() << ',' << grid.size() << ',' << grid.seed() << '\n';
  out << std::setprecision(17);
  const auto& pts = grid.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      if (k) out << ',';
      out << pts(i, k);
    }
    out << '\n';
  }
}

Grid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "d,K,seed") throw Error(ErrorCode::SchemaMismatch, "bad grid header: " + line);
  std::getline(in, line);
  std::size_t dim = 0, size = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(line);
    char c1 = 0, c2 = 0;
    hs >> dim >> c1 >> size >> c2 >> seed;
    if (!hs || c1 != ',' || c2 != ',') throw Error(ErrorCode::SchemaMismatch, "bad grid sizes: " + line);
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, "grid file truncated");
    const char* p = line.c_str();
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
      char* end = nullptr;
      points(i, k) = std::strtod(p, &end);
      if (end == p) throw Error(ErrorCode::SchemaMismatch, "bad coordinate in row " + std::to_string(i));
      p = (*end == ',') ? end + 1 : end;
    }
  }
  std::vector<double> weights(size, 1.0 / static_cast<double>(size));
  return Grid(std::move(points), std::move(weights), seed);
}

}  // namespace asud
