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

#ifndef ASUD_DRIVER_HPP
#define ASUD_DRIVER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "asud/blackbox.hpp"
#include "asud/error.hpp"
#include "asud/grid.hpp"
#include "asud/lsq.hpp"
#include "asud/measures.hpp"
#include "asud/metrics.hpp"
#include "asud/polyspace.hpp"
#include "asud/rng.hpp"

namespace asud {

enum class Method {
  MonteCarlo,      // MC-LS: draws from tau, unweighted fit
  KnownDomain,     // ASGD-LS: Christoffel sampling on the true domain
  UnknownDomain,   // ASUD-LS
  UnknownDomainAugmented,  // ASUD-ALS
};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::MonteCarlo, Method::KnownDomain,
                                         Method::UnknownDomain,
                                         Method::UnknownDomainAugmented};

/// Standard mode rejects every draw with Q(f) = 0; augmented mode rejects
/// only undefined values and keeps finite values outside the domain.
enum class SamplingMode { Standard, Augmented };

struct Sample {
  Index grid_index;
  double value;
  bool inside;  // Q(value) == 1
};

struct Rejection {
  Index grid_index;
  EvalResult result;
};

/// S_l, R_l and the evaluation counter F_l. Lists are append-only.
struct SamplingState {
  std::vector<Sample> samples;  // in slot order; all inside in standard mode
  std::vector<Rejection> rejected;
  std::size_t evaluations = 0;

  IndexList accepted_indices() const;          // inside samples
  IndexList accepted_outside_indices() const;  // augmented mode only
  IndexList rejected_indices() const;
  std::size_t rejected_count() const { return rejected.size(); }
};

struct DrawOutcome {
  Sample sample;
  std::vector<Rejection> rejected;
  std::size_t evaluations = 0;
};

/// Draws positions from `sampler` (mapped to grid indices via `support`)
/// until one is accepted under `mode`. Throws RedrawLimit after
/// `max_redraws` consecutive rejections.
DrawOutcome rejection_sample(const DiscreteSampler& sampler, std::span<const Index> support,
                             const Grid& grid, Problem& problem, SamplingMode mode, Rng& rng,
                             std::size_t max_redraws);

/// Stage (d): points where the fit passes the indicator, plus accepted
/// inside samples, minus rejected points (and, in augmented mode, minus
/// samples found outside the domain). Throws EmptyEstimate.
IndexList update_domain(std::size_t grid_size, std::span<const double> grid_values,
                        const Indicator& indicator, const SamplingState& state,
                        SamplingMode mode);

/// Grid points inside the domain and the function values there.
struct TruthData {
  IndexList indices;
  std::vector<double> values;
};

/// Uncounted sweep of the oracle over the grid.
TruthData evaluate_truth(const Grid& grid, const Oracle& oracle, const Indicator& indicator);

/// Simulation ground truth for one (function, d, grid): Z_Omega, f on it, and
/// P_{N_max} orthonormalized over it.
struct GroundTruth {
  IndexList indices;
  std::vector<double> values;
  DomainEstimate estimate;
  std::optional<QrFactors> qr;  // empty if |Z_Omega| cannot support N_max
};

GroundTruth compute_ground_truth(const Grid& grid, TruthData truth, const Eigen::MatrixXd& basis);

/// Everything shared read-only by the trials of one experiment cell.
struct Context {
  const Grid* grid = nullptr;
  Schedule schedule;
  IndexSet index_set;
  Eigen::MatrixXd basis;  // psi_j on the whole grid, K x N_max
  std::optional<GroundTruth> truth;
  std::optional<QrFactors> full_qr;  // P_{N_max} over all of Z
};

/// Hyperbolic-cross ladder N_l = |HC_n| for n = 1, 2, ... with N_l <= n_max.
struct Ladder {
  IndexSet index_set;  // the largest set
  std::vector<std::size_t> dims;
};
Ladder hyperbolic_cross_ladder(std::size_t dim, std::size_t n_max);

/// `with_full_qr` is only needed by MC-LS.
Context make_context(const Grid& grid, const IndexSet& index_set, Schedule schedule,
                     std::optional<TruthData> truth, bool with_full_qr = true);

struct RunOptions {
  Method method = Method::UnknownDomain;
  std::size_t max_redraws = 100'000;
};

/// Read-only view of one completed level, for instrumentation.
struct LevelSnapshot {
  std::size_t level;
  const QrFactors& qr;
  const DomainEstimate& estimate;
  const ChristoffelWeights& christoffel;
  const SamplingState& state;
  const LsSystem& system;
  const FitResult& fit;
};
using LevelObserver = std::function<void(const LevelSnapshot&)>;

struct RunResult {
  RunRecord record;
  SamplingState state;
  IndexList final_estimate;
  std::optional<ErrorCode> failure_code;
};

/// One trial of the selected method over all schedule levels. Failures stop
/// the run; completed levels are kept and the failure is recorded.
RunResult run(const Context& ctx, Problem& problem, const RunOptions& options,
              std::uint64_t trial_seed, const LevelObserver& observer = {});

}  // namespace asud

#endif  // ASUD_DRIVER_HPP
