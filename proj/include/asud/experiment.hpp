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

#ifndef ASUD_EXPERIMENT_HPP
#define ASUD_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asud/driver.hpp"
#include "asud/metrics.hpp"

namespace asud {

struct ExperimentConfig {
  int function_id = 1;
  std::vector<std::size_t> dims{2};
  std::vector<Method> methods{Method::MonteCarlo, Method::KnownDomain, Method::UnknownDomain,
                              Method::UnknownDomainAugmented};
  std::size_t grid_size = 3000;
  std::uint64_t master_seed = 1;
  std::size_t trials = 10;
  std::size_t n_max = 150;
  std::size_t max_redraws = 100'000;
  std::filesystem::path out = "results";
  std::string profile = "desk";
  std::size_t threads = 0;  // 0: hardware concurrency
  bool parallel_cells = false;
};

/// Desk: K=3000, N_max=150, 10 trials. Full: K=30000, N_max=1000, 50 trials.
void apply_profile(ExperimentConfig& config, const std::string& profile);

/// Throws InvalidConfig.
void validate(const ExperimentConfig& config);

/// JSON mirror of ExperimentConfig. Keys absent from the document keep
/// their current values.
void merge_config_json(ExperimentConfig& config, const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);

/// Per-trial seed derived from (master seed, trial number).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

inline constexpr const char* kTrialHeader =
    "method,function,d,trial,l,N_l,M_l,F_l,E_l,V_l,R_l,inv_alpha,inv_beta";
inline constexpr const char* kAggregateHeader =
    "method,function,d,l,N_l,M_l,F_l,E_l,V_l,R_l,inv_alpha,inv_beta,trials_ok";
inline constexpr const char* kPlotHeader =
    "method,d,l,function,F_l,M_l,N_l,E_l,V_l,R_l,inv_alpha,inv_beta,trials_ok";

struct CellResult {
  Method method;
  std::size_t dim;
  std::vector<RunRecord> runs;
  std::vector<AggregateRow> aggregate;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::filesystem::path trials_csv;
  std::filesystem::path aggregate_csv;
  std::filesystem::path manifest_json;
};

/// Runs every (d, method) cell and writes trials.csv, aggregate.csv and
/// manifest.json into config.out. Trial failures are recorded, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs one cell in memory without writing files.
CellResult run_cell(const ExperimentConfig& config, const Context& ctx, Method method);

/// Builds the shared grid, ladder, schedule and ground truth for one d.
struct CellSetup {
  Grid grid;
  Ladder ladder;
  Schedule schedule;
};
CellSetup setup_cell(const ExperimentConfig& config, std::size_t dim);
Context build_context(const ExperimentConfig& config, const CellSetup& setup,
                      const TruthData& truth, bool with_full_qr);

std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

/// Reorders an aggregate file into plot-ready rows keyed by (method, d, l).
/// Values are copied verbatim. Throws SchemaMismatch on unknown columns.
void export_plotdata(const std::filesystem::path& aggregate_csv,
                     const std::filesystem::path& out_csv);

}  // namespace asud

#endif  // ASUD_EXPERIMENT_HPP
