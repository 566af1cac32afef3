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

#include "asud/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "asud/blackbox.hpp"
#include "asud/error.hpp"
#include "asud/rng.hpp"

#ifndef ASUD_VERSION
#define ASUD_VERSION "unknown"
#endif

namespace asud {
namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::filesystem::path truth_cache_path(const ExperimentConfig& c, std::size_t dim) {
  return c.out / ("truth_f" + std::to_string(c.function_id) + "_d" + std::to_string(dim) + "_K" +
                  std::to_string(c.grid_size) + "_s" + std::to_string(c.master_seed) + ".csv");
}

TruthData load_or_compute_truth(const ExperimentConfig& c, const Grid& grid) {
  const auto path = truth_cache_path(c, grid.dim());
  if (std::filesystem::exists(path)) {
    const CsvTable t = read_csv(path);
    if (t.header == std::vector<std::string>{"grid_index", "value"}) {
      TruthData truth;
      for (const auto& row : t.rows) {
        truth.indices.push_back(std::stoull(row.at(0)));
        truth.values.push_back(std::strtod(row.at(1).c_str(), nullptr));
      }
      return truth;
    }
  }
  const Problem p = make_test_problem(c.function_id, grid.dim());
  TruthData truth = evaluate_truth(grid, p.oracle(), p.indicator());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "grid_index,value\n";
  for (std::size_t i = 0; i < truth.indices.size(); ++i) {
    out << truth.indices[i] << ',' << format_double(truth.values[i]) << '\n';
  }
  return truth;
}

void write_trial_rows(std::ostream& os, const RunRecord& r) {
  for (const auto& lv : r.levels) {
    os << r.method << ',' << r.function_id << ',' << r.dim << ',' << r.trial << ',' << lv.level
       << ',' << lv.dim << ',' << lv.samples << ',' << lv.evaluations << ','
       << format_double(lv.error) << ',' << format_double(lv.mismatch) << ','
       << format_double(lv.rejection) << ',' << format_double(lv.inv_alpha) << ','
       << format_double(lv.inv_beta) << '\n';
  }
}

void write_aggregate_rows(std::ostream& os, const CellResult& cell, int function_id) {
  for (const auto& a : cell.aggregate) {
    os << method_name(cell.method) << ',' << function_id << ',' << cell.dim << ',' << a.level
       << ',' << a.dim << ',' << a.samples << ',' << format_double(a.evaluations) << ','
       << format_double(a.error) << ',' << format_double(a.mismatch) << ','
       << format_double(a.rejection) << ',' << format_double(a.inv_alpha) << ','
       << format_double(a.inv_beta) << ',' << a.trials_ok << '\n';
  }
}

std::size_t worker_count(const ExperimentConfig& c, std::size_t jobs) {
  std::size_t n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

template <typename Job>
void run_pool(std::size_t jobs, std::size_t workers, Job&& job) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_profile(ExperimentConfig& c, const std::string& profile) {
  if (profile == "desk") {
    c.grid_size = 3000;
    c.n_max = 150;
    c.trials = 10;
  } else if (profile == "full") {
    c.grid_size = 30000;
    c.n_max = 1000;
    c.trials = 50;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown profile '" + profile + "'");
  }
  c.profile = profile;
}

void validate(const ExperimentConfig& c) {
  if (c.dims.empty()) throw Error(ErrorCode::InvalidConfig, "no dimensions given");
  if (c.methods.empty()) throw Error(ErrorCode::InvalidConfig, "no methods given");
  if (c.trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (c.grid_size < 1) throw Error(ErrorCode::InvalidConfig, "grid size must be >= 1");
  if (c.max_redraws < 1) throw Error(ErrorCode::InvalidConfig, "max redraws must be >= 1");
  for (std::size_t d : c.dims) {
    try {
      validate_test_function(c.function_id, d);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.detail());
    }
  }
}

void merge_config_json(ExperimentConfig& c, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  static const std::set<std::string> known{"function",   "dims",   "methods",     "grid_size",
                                           "seed",       "trials", "n_max",       "max_redraws",
                                           "out",        "profile", "threads",    "parallel_cells"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
  }
  try {
    if (j.contains("profile")) apply_profile(c, j["profile"].get<std::string>());
    if (j.contains("function")) c.function_id = j["function"].get<int>();
    if (j.contains("dims")) c.dims = j["dims"].get<std::vector<std::size_t>>();
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("grid_size")) c.grid_size = j["grid_size"].get<std::size_t>();
    if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
    if (j.contains("n_max")) c.n_max = j["n_max"].get<std::size_t>();
    if (j.contains("max_redraws")) c.max_redraws = j["max_redraws"].get<std::size_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
    if (j.contains("parallel_cells")) c.parallel_cells = j["parallel_cells"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["function"] = c.function_id;
  j["dims"] = c.dims;
  j["methods"] = json::array();
  for (Method m : c.methods) j["methods"].push_back(std::string(method_name(m)));
  j["grid_size"] = c.grid_size;
  j["seed"] = c.master_seed;
  j["trials"] = c.trials;
  j["n_max"] = c.n_max;
  j["max_redraws"] = c.max_redraws;
  j["out"] = c.out.string();
  j["profile"] = c.profile;
  j["threads"] = c.threads;
  j["parallel_cells"] = c.parallel_cells;
  return j.dump(2);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return Rng(master_seed, StreamTag::Trial, trial).next_u64();
}

CellSetup setup_cell(const ExperimentConfig& c, std::size_t dim) {
  Ladder ladder = hyperbolic_cross_ladder(dim, c.n_max);
  Schedule schedule = build_schedule(ladder.dims);
  return CellSetup{build_grid(dim, c.grid_size, c.master_seed), std::move(ladder),
                   std::move(schedule)};
}

Context build_context(const ExperimentConfig&, const CellSetup& setup, const TruthData& truth,
                      bool with_full_qr) {
  return make_context(setup.grid, setup.ladder.index_set, setup.schedule, truth, with_full_qr);
}

CellResult run_cell(const ExperimentConfig& c, const Context& ctx, Method method) {
  CellResult cell{method, ctx.grid->dim(), std::vector<RunRecord>(c.trials), {}};
  RunOptions opts{method, c.max_redraws};
  run_pool(c.trials, worker_count(c, c.trials), [&](std::size_t t) {
    Problem problem = make_test_problem(c.function_id, ctx.grid->dim());
    RunResult r = run(ctx, problem, opts, trial_seed(c.master_seed, t));
    r.record.function_id = c.function_id;
    r.record.trial = t;
    cell.runs[t] = std::move(r.record);
  });
  cell.aggregate = aggregate(cell.runs);
  return cell;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(c.out);

  const bool need_full = std::find(c.methods.begin(), c.methods.end(), Method::MonteCarlo) !=
                         c.methods.end();
  std::vector<CellSetup> setups;
  std::vector<Context> contexts;
  setups.reserve(c.dims.size());
  contexts.reserve(c.dims.size());
  for (std::size_t d : c.dims) {
    setups.push_back(setup_cell(c, d));
    const TruthData truth = load_or_compute_truth(c, setups.back().grid);
    contexts.push_back(build_context(c, setups.back(), truth, need_full));
  }

  ExperimentResult result;
  for (std::size_t di = 0; di < c.dims.size(); ++di) {
    for (Method m : c.methods) {
      result.cells.push_back(CellResult{m, c.dims[di], std::vector<RunRecord>(c.trials), {}});
    }
  }
  if (c.parallel_cells) {
    const std::size_t per_dim = c.methods.size();
    const std::size_t jobs = result.cells.size() * c.trials;
    run_pool(jobs, worker_count(c, jobs), [&](std::size_t job) {
      const std::size_t cell_i = job / c.trials, t = job % c.trials;
      CellResult& cell = result.cells[cell_i];
      const Context& ctx = contexts[cell_i / per_dim];
      Problem problem = make_test_problem(c.function_id, cell.dim);
      RunResult r = run(ctx, problem, RunOptions{cell.method, c.max_redraws},
                        trial_seed(c.master_seed, t));
      r.record.function_id = c.function_id;
      r.record.trial = t;
      cell.runs[t] = std::move(r.record);
    });
    for (auto& cell : result.cells) cell.aggregate = aggregate(cell.runs);
  } else {
    std::size_t i = 0;
    for (std::size_t di = 0; di < c.dims.size(); ++di) {
      for (Method m : c.methods) result.cells[i++] = run_cell(c, contexts[di], m);
    }
  }

  result.trials_csv = c.out / "trials.csv";
  result.aggregate_csv = c.out / "aggregate.csv";
  result.manifest_json = c.out / "manifest.json";
  {
    std::ofstream os(result.trials_csv);
    if (!os) throw Error(ErrorCode::Io, "cannot write " + result.trials_csv.string());
    os << kTrialHeader << '\n';
    for (const auto& cell : result.cells) {
      for (const auto& r : cell.runs) write_trial_rows(os, r);
    }
  }
  {
    std::ofstream os(result.aggregate_csv);
    if (!os) throw Error(ErrorCode::Io, "cannot write " + result.aggregate_csv.string());
    os << kAggregateHeader << '\n';
    for (const auto& cell : result.cells) write_aggregate_rows(os, cell, c.function_id);
  }

  json manifest;
  manifest["version"] = ASUD_VERSION;
  manifest["config"] = json::parse(config_to_json(c));
  manifest["trial_seeds"] = json::array();
  for (std::size_t t = 0; t < c.trials; ++t) manifest["trial_seeds"].push_back(trial_seed(c.master_seed, t));
  manifest["grids"] = json::array();
  for (std::size_t di = 0; di < c.dims.size(); ++di) {
    const auto& s = setups[di];
    json g;
    g["d"] = c.dims[di];
    g["K"] = s.grid.size();
    g["grid_seed"] = s.grid.seed();
    g["true_domain_size"] = contexts[di].truth ? contexts[di].truth->indices.size() : 0;
    g["ladder"] = s.ladder.dims;
    json ks = json::array();
    for (const auto& lv : s.schedule.levels) ks.push_back(lv.ratio);
    g["ratios"] = ks;
    g["index_set"] = json::parse(index_set_to_json(s.ladder.index_set));
    manifest["grids"].push_back(g);
  }
  manifest["cells"] = json::array();
  for (const auto& cell : result.cells) {
    json jc;
    jc["method"] = std::string(method_name(cell.method));
    jc["d"] = cell.dim;
    std::size_t ok = 0;
    json failures = json::array();
    for (const auto& r : cell.runs) {
      if (r.failure) {
        failures.push_back({{"trial", r.trial}, {"levels_completed", r.levels.size()}, {"error", *r.failure}});
      } else {
        ++ok;
      }
    }
    jc["trials_ok"] = ok;
    jc["failures"] = failures;
    manifest["cells"].push_back(jc);
  }
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream os(result.manifest_json);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + result.manifest_json.string());
  os << manifest.dump(2) << '\n';
  return result;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  t.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_line(line);
    if (row.size() != t.header.size()) {
      throw Error(ErrorCode::SchemaMismatch, "row width differs from header in " + path.string());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void export_plotdata(const std::filesystem::path& aggregate_csv,
                     const std::filesystem::path& out_csv) {
  const CsvTable in = read_csv(aggregate_csv);
  const auto expected = split_line(kAggregateHeader);
  for (const auto& col : in.header) {
    if (std::find(expected.begin(), expected.end(), col) == expected.end()) {
      throw Error(ErrorCode::SchemaMismatch, "unknown column '" + col + "'");
    }
  }
  if (in.header.size() != expected.size()) {
    throw Error(ErrorCode::SchemaMismatch, "aggregate file is missing columns");
  }
  const auto out_cols = split_line(kPlotHeader);
  std::vector<std::size_t> src;
  for (const auto& col : out_cols) {
    src.push_back(static_cast<std::size_t>(
        std::find(in.header.begin(), in.header.end(), col) - in.header.begin()));
  }
  auto rows = in.rows;
  const auto method_col = src[0], d_col = src[1], l_col = src[2];
  std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(a[method_col], std::stoull(a[d_col]), std::stoull(a[l_col])) <
           std::make_tuple(b[method_col], std::stoull(b[d_col]), std::stoull(b[l_col]));
  });
  std::ofstream os(out_csv);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + out_csv.string());
  os << kPlotHeader << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (i) os << ',';
      os << row[src[i]];
    }
    os << '\n';
  }
}

}  // namespace asud
