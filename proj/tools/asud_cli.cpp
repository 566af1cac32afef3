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

// Command-line harness: runs experiment cells and reshapes result files.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asud/error.hpp"
#include "asud/experiment.hpp"
#include "asud/grid.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive sampling and domain learning for function approximation"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment and write CSV/JSON results");
  std::string config_path, profile, out;
  int function_id = 1;
  std::vector<std::size_t> dims;
  std::vector<std::string> methods;
  std::size_t grid_size = 0, trials = 0, n_max = 0, max_redraws = 0, threads = 0;
  std::uint64_t seed = 0;
  bool parallel_cells = false;
  run_cmd->add_option("--config", config_path, "JSON file mirroring the experiment config")
      ->check(CLI::ExistingFile);
  auto* o_profile = run_cmd->add_option("--profile", profile, "desk or full")
                        ->check(CLI::IsMember({"desk", "full"}));
  auto* o_function = run_cmd->add_option("--function", function_id, "test function id 1-4");
  auto* o_dims = run_cmd->add_option("--dims", dims, "dimensions, e.g. --dims 2 3 5");
  auto* o_methods = run_cmd->add_option("--methods", methods, "subset of MC-LS ASGD-LS ASUD-LS ASUD-ALS");
  auto* o_grid = run_cmd->add_option("--grid-size", grid_size, "grid size K");
  auto* o_seed = run_cmd->add_option("--seed", seed, "master seed");
  auto* o_trials = run_cmd->add_option("--trials", trials, "trials per cell");
  auto* o_nmax = run_cmd->add_option("--n-max", n_max, "largest subspace dimension");
  auto* o_redraws = run_cmd->add_option("--max-redraws", max_redraws, "redraw cap per sample slot");
  auto* o_out = run_cmd->add_option("--out", out, "output directory");
  auto* o_threads = run_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  run_cmd->add_flag("--parallel-cells", parallel_cells, "run all cells in one thread pool");

  auto* plot_cmd = app.add_subcommand("plotdata", "reshape aggregate.csv into plot-ready rows");
  std::string aggregate_in, plot_out;
  plot_cmd->add_option("aggregate", aggregate_in, "aggregate CSV")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("output", plot_out, "output CSV")->required();

  auto* grid_cmd = app.add_subcommand("grid", "write a grid to CSV for replay");
  std::size_t grid_d = 2, grid_k = 3000;
  std::uint64_t grid_seed = 1;
  std::string grid_out;
  grid_cmd->add_option("--dim", grid_d, "dimension");
  grid_cmd->add_option("--grid-size", grid_k, "grid size K");
  grid_cmd->add_option("--seed", grid_seed, "seed");
  grid_cmd->add_option("output", grid_out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      asud::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        asud::merge_config_json(cfg, ss.str());
      }
      if (*o_profile) asud::apply_profile(cfg, profile);
      if (*o_function) cfg.function_id = function_id;
      if (*o_dims) cfg.dims = dims;
      if (*o_methods) {
        cfg.methods.clear();
        for (const auto& m : methods) cfg.methods.push_back(asud::parse_method(m));
      }
      if (*o_grid) cfg.grid_size = grid_size;
      if (*o_seed) cfg.master_seed = seed;
      if (*o_trials) cfg.trials = trials;
      if (*o_nmax) cfg.n_max = n_max;
      if (*o_redraws) cfg.max_redraws = max_redraws;
      if (*o_out) cfg.out = out;
      if (*o_threads) cfg.threads = threads;
      if (parallel_cells) cfg.parallel_cells = true;

      const auto result = asud::run_experiment(cfg);
      for (const auto& cell : result.cells) {
        std::size_t ok = 0;
        for (const auto& r : cell.runs) ok += r.failure ? 0 : 1;
        std::cout << asud::method_name(cell.method) << " d=" << cell.dim << ": " << ok << '/'
                  << cell.runs.size() << " trials ok\n";
        for (const auto& r : cell.runs) {
          if (r.failure) std::cout << "  trial " << r.trial << " failed: " << *r.failure << '\n';
        }
      }
      std::cout << "wrote " << result.trials_csv.string() << ", " << result.aggregate_csv.string()
                << ", " << result.manifest_json.string() << '\n';
    } else if (*plot_cmd) {
      asud::export_plotdata(aggregate_in, plot_out);
    } else if (*grid_cmd) {
      asud::write_grid_csv(asud::build_grid(grid_d, grid_k, grid_seed), grid_out);
    }
  } catch (const asud::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
