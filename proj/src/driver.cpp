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

#include "asud/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

namespace asud {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd basis_rows(const Eigen::MatrixXd& basis, std::span<const Index> rows,
                           std::size_t cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        basis.row(static_cast<Eigen::Index>(rows[r])).head(static_cast<Eigen::Index>(cols));
  }
  return out;
}

SamplingMode mode_of(Method m) {
  return m == Method::UnknownDomainAugmented ? SamplingMode::Augmented : SamplingMode::Standard;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MonteCarlo: return "MC-LS";
    case Method::KnownDomain: return "ASGD-LS";
    case Method::UnknownDomain: return "ASUD-LS";
    case Method::UnknownDomainAugmented: return "ASUD-ALS";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

IndexList SamplingState::accepted_indices() const {
  IndexList out;
  for (const auto& s : samples) {
    if (s.inside) out.push_back(s.grid_index);
  }
  return out;
}

IndexList SamplingState::accepted_outside_indices() const {
  IndexList out;
  for (const auto& s : samples) {
    if (!s.inside) out.push_back(s.grid_index);
  }
  return out;
}

IndexList SamplingState::rejected_indices() const {
  IndexList out;
  out.reserve(rejected.size());
  for (const auto& r : rejected) out.push_back(r.grid_index);
  return out;
}

DrawOutcome rejection_sample(const DiscreteSampler& sampler, std::span<const Index> support,
                             const Grid& grid, Problem& problem, SamplingMode mode, Rng& rng,
                             std::size_t max_redraws) {
  if (max_redraws < 1) throw Error(ErrorCode::InvalidArgument, "max_redraws must be >= 1");
  if (support.size() != sampler.size()) {
    throw Error(ErrorCode::InvalidArgument, "sampler and support sizes differ");
  }
  const auto& indicator = problem.indicator();
  DrawOutcome out;
  Eigen::VectorXd y(static_cast<Eigen::Index>(grid.dim()));
  for (std::size_t attempt = 0; attempt < max_redraws; ++attempt) {
    const Index g = support[sampler(rng.uniform())];
    y = grid.points().row(static_cast<Eigen::Index>(g)).transpose();
    const EvalResult r = problem.evaluate({y.data(), static_cast<std::size_t>(y.size())});
    ++out.evaluations;
    const bool inside = indicator.passes(r);
    const bool keep = mode == SamplingMode::Standard ? inside : r.finite();
    if (keep) {
      out.sample = Sample{g, r.value(), inside};
      return out;
    }
    out.rejected.push_back({g, r});
  }
  throw Error(ErrorCode::RedrawLimit,
              std::to_string(max_redraws) + " consecutive draws rejected");
}

IndexList update_domain(std::size_t grid_size, std::span<const double> grid_values,
                        const Indicator& indicator, const SamplingState& state,
                        SamplingMode mode) {
  if (grid_values.size() != grid_size) {
    throw Error(ErrorCode::InvalidArgument, "fit values must cover the whole grid");
  }
  std::vector<char> in(grid_size, 0);
  for (std::size_t i = 0; i < grid_size; ++i) in[i] = indicator.passes(grid_values[i]) ? 1 : 0;
  for (const auto& s : state.samples) {
    if (s.inside) in[s.grid_index] = 1;
  }
  if (mode == SamplingMode::Augmented) {
    for (const auto& s : state.samples) {
      if (!s.inside) in[s.grid_index] = 0;
    }
  }
  for (const auto& r : state.rejected) in[r.grid_index] = 0;

  IndexList out;
  for (std::size_t i = 0; i < grid_size; ++i) {
    if (in[i]) out.push_back(i);
  }
  if (out.empty()) throw Error(ErrorCode::EmptyEstimate, "domain update produced an empty set");
  return out;
}

TruthData evaluate_truth(const Grid& grid, const Oracle& oracle, const Indicator& indicator) {
  TruthData t;
  Eigen::VectorXd y(static_cast<Eigen::Index>(grid.dim()));
  for (Index i = 0; i < grid.size(); ++i) {
    y = grid.points().row(static_cast<Eigen::Index>(i)).transpose();
    const EvalResult r = oracle({y.data(), static_cast<std::size_t>(y.size())});
    if (indicator.passes(r)) {
      t.indices.push_back(i);
      t.values.push_back(r.value());
    }
  }
  return t;
}

GroundTruth compute_ground_truth(const Grid& grid, TruthData truth, const Eigen::MatrixXd& basis) {
  if (truth.indices.empty()) {
    throw Error(ErrorCode::EmptyTrueDomain, "no grid point lies in the domain");
  }
  if (truth.indices.size() != truth.values.size()) {
    throw Error(ErrorCode::InvalidArgument, "one truth value per domain point required");
  }
  DomainEstimate est = restrict_measure(grid, truth.indices);
  std::optional<QrFactors> qr;
  try {
    qr = qr_factor(assemble_B(est, basis_rows(basis, truth.indices, static_cast<std::size_t>(basis.cols()))));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
  }
  return GroundTruth{std::move(truth.indices), std::move(truth.values), std::move(est), std::move(qr)};
}

Ladder hyperbolic_cross_ladder(std::size_t dim, std::size_t n_max) {
  Ladder ladder;
  std::size_t order = 0;
  for (std::size_t n = 1;; ++n) {
    const std::size_t size = hyperbolic_cross_size(dim, n);
    if (size > n_max) break;
    ladder.dims.push_back(size);
    order = n;
  }
  if (ladder.dims.empty()) {
    throw Error(ErrorCode::InvalidConfig,
                "n_max " + std::to_string(n_max) + " is below the first hyperbolic-cross size");
  }
  ladder.index_set = hyperbolic_cross(dim, order);
  return ladder;
}

Context make_context(const Grid& grid, const IndexSet& index_set, Schedule schedule,
                     std::optional<TruthData> truth, bool with_full_qr) {
  if (schedule.size() == 0) throw Error(ErrorCode::InvalidConfig, "empty schedule");
  const std::size_t n_max = schedule.levels.back().dim;
  if (n_max > index_set.size()) {
    throw Error(ErrorCode::InvalidConfig, "schedule exceeds the index set");
  }
  Context ctx;
  ctx.grid = &grid;
  ctx.schedule = std::move(schedule);
  ctx.index_set = index_set;
  ctx.index_set.indices.resize(n_max);
  ctx.basis = eval_basis(ctx.index_set, grid.points());
  if (truth) ctx.truth = compute_ground_truth(grid, std::move(*truth), ctx.basis);
  if (with_full_qr) {
    const DomainEstimate full = restrict_measure(grid, all_indices(grid));
    try {
      ctx.full_qr = qr_factor(assemble_B(full, ctx.basis));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  return ctx;
}

RunResult run(const Context& ctx, Problem& problem, const RunOptions& options,
              std::uint64_t trial_seed, const LevelObserver& observer) {
  const Grid& grid = *ctx.grid;
  const Method method = options.method;
  const SamplingMode mode = mode_of(method);

  RunResult result;
  result.record.method = std::string(method_name(method));
  result.record.dim = grid.dim();
  result.record.seed = trial_seed;
  SamplingState& state = result.state;
  Rng rng(trial_seed, StreamTag::Trial);

  // Z_{l-1}: the sampling domain for adaptive methods; for MC-LS the
  // stage (d) estimate is tracked for V_l only.
  IndexList estimate_indices = all_indices(grid);
  if (method == Method::KnownDomain) {
    if (!ctx.truth) throw Error(ErrorCode::InvalidConfig, "ASGD-LS requires the true domain");
    estimate_indices = ctx.truth->indices;
  }

  std::size_t level = 0;
  try {
    for (level = 1; level <= ctx.schedule.size(); ++level) {
      const std::size_t n = ctx.schedule.dim(level);
      const auto nn = static_cast<Eigen::Index>(n);

      DomainEstimate estimate;
      QrFactors qr;
      switch (method) {
        case Method::UnknownDomain:
        case Method::UnknownDomainAugmented: {
          estimate = restrict_measure(grid, estimate_indices);
          if (estimate.size() < n) {
            throw Error(ErrorCode::RankDeficient,
                        "estimate has " + std::to_string(estimate.size()) + " points for N = " +
                            std::to_string(n));
          }
          qr = qr_factor(assemble_B(estimate, basis_rows(ctx.basis, estimate.active(), n)));
          break;
        }
        case Method::KnownDomain:
          if (!ctx.truth->qr) throw Error(ErrorCode::RankDeficient, "true domain too small");
          estimate = ctx.truth->estimate;
          qr = ctx.truth->qr->leading(n);
          break;
        case Method::MonteCarlo:
          if (!ctx.full_qr) throw Error(ErrorCode::RankDeficient, "no full-grid QR in context");
          estimate = restrict_measure(grid, all_indices(grid));
          qr = ctx.full_qr->leading(n);
          break;
      }
      const ChristoffelWeights cw = christoffel(qr, estimate);

      LevelRecord rec;
      rec.level = level;
      rec.dim = n;
      rec.mismatch = ctx.truth ? mismatch_volume(ctx.truth->indices, estimate_indices) : kNaN;

      // Stage (b): draw the incremental quota, recycling earlier samples.
      const auto& support = estimate.active();
      if (method == Method::MonteCarlo) {
        const DiscreteSampler sampler(estimate.weights());
        const std::size_t quota = ctx.schedule.samples(level) - ctx.schedule.samples(level - 1);
        for (std::size_t s = 0; s < quota; ++s) {
          auto o = rejection_sample(sampler, support, grid, problem, mode, rng, options.max_redraws);
          state.evaluations += o.evaluations;
          state.rejected.insert(state.rejected.end(), o.rejected.begin(), o.rejected.end());
          state.samples.push_back(o.sample);
        }
      } else {
        std::map<std::size_t, DiscreteSampler> samplers;
        for (const MeasureSlot& slot : assign_measures(ctx.schedule, level)) {
          auto it = samplers.find(slot.basis);
          if (it == samplers.end()) {
            it = samplers.emplace(slot.basis, DiscreteSampler(column_distribution(qr, slot.basis - 1))).first;
          }
          auto o = rejection_sample(it->second, support, grid, problem, mode, rng, options.max_redraws);
          state.evaluations += o.evaluations;
          state.rejected.insert(state.rejected.end(), o.rejected.begin(), o.rejected.end());
          state.samples.push_back(o.sample);
        }
      }

      // Stage (c): weighted least squares on every retained sample.
      IndexList sample_idx;
      std::vector<double> sample_val;
      for (const auto& s : state.samples) {
        sample_idx.push_back(s.grid_index);
        sample_val.push_back(s.value);
      }
      const Eigen::MatrixXd sample_basis = basis_rows(ctx.basis, sample_idx, n);
      std::vector<double> weights(sample_idx.size(), 1.0);
      LsSystem system;
      if (mode == SamplingMode::Augmented) {
        // Samples outside the current estimate have no row in Q.
        const Eigen::VectorXd k = christoffel_from_values(orthonormal_values(sample_basis, qr.R));
        for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / k(static_cast<Eigen::Index>(i));
        system = assemble_direct(sample_basis, qr.R, sample_idx, sample_val, weights);
      } else {
        const Weighting wt = method == Method::MonteCarlo ? Weighting::Unit : Weighting::Christoffel;
        system = assemble(qr, estimate, sample_idx, sample_val, wt);
        if (wt == Weighting::Christoffel) {
          for (std::size_t i = 0; i < weights.size(); ++i) {
            weights[i] = cw.wvals(estimate.position(sample_idx[i]));
          }
        }
      }
      FitResult fit = solve(system);
      fit.grid_values = eval_on_grid(ctx.basis.leftCols(nn), qr.R, fit.coeffs);

      rec.samples = state.samples.size();
      rec.evaluations = state.evaluations;
      rec.rejection = rejection_rate(state.evaluations, state.samples.size());
      rec.inv_beta = reciprocal(fit.sigma_min);
      rec.error = kNaN;
      rec.inv_alpha = kNaN;
      if (ctx.truth) {
        std::vector<double> approx(ctx.truth->indices.size());
        for (std::size_t i = 0; i < approx.size(); ++i) {
          approx[i] = fit.grid_values(static_cast<Eigen::Index>(ctx.truth->indices[i]));
        }
        rec.error = relative_error(ctx.truth->values, approx, ctx.truth->estimate.weights());
        if (ctx.truth->qr) {
          rec.inv_alpha = reciprocal(
              stability_alpha(ctx.truth->qr->R.topLeftCorner(nn, nn), sample_basis, weights));
        }
      }

      if (observer) {
        observer(LevelSnapshot{level, qr, estimate, cw, state, system, fit});
      }

      // Stage (d)
      if (method != Method::KnownDomain) {
        const std::span<const double> gv(fit.grid_values.data(),
                                         static_cast<std::size_t>(fit.grid_values.size()));
        estimate_indices = update_domain(grid.size(), gv, problem.indicator(), state, mode);
      }
      result.record.levels.push_back(rec);
    }
  } catch (const Error& e) {
    result.failure_code = e.code();
    result.record.failure = "level " + std::to_string(level) + ": " + e.what();
  }
  result.final_estimate = std::move(estimate_indices);
  return result;
}

}  // namespace asud
