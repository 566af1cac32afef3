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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "asud/driver.hpp"
#include "oracles.hpp"

using namespace asud;

namespace {

Problem half_plane_problem() {
  // Inside when y_1 >= 0; undefined when y_1 < -0.5; finite but outside otherwise.
  Oracle o = [](std::span<const double> y) {
    if (y[0] < -0.5) return EvalResult::undefined();
    return EvalResult::of(y[0]);
  };
  return Problem(o, Indicator{0.0}, 2);
}

struct Env {
  Grid grid;
  Ladder ladder;
  Context ctx;
  Env(int function_id, std::size_t d, std::size_t K, std::size_t n_max, std::uint64_t seed = 1)
      : grid(build_grid(d, K, seed)), ladder(hyperbolic_cross_ladder(d, n_max)) {
    const Problem p = make_test_problem(function_id, d);
    ctx = make_context(grid, ladder.index_set, build_schedule(ladder.dims),
                       evaluate_truth(grid, p.oracle(), p.indicator()));
  }
};

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : kAllMethods) CHECK(parse_method(method_name(m)) == m);
  CHECK_THROWS_AS(parse_method("LS"), Error);
}

TEST_CASE("rejection_sample accepts at once when everything is inside") {
  const Grid g = build_grid(2, 50, 1);
  Problem p(Oracle([](std::span<const double>) { return EvalResult::of(1.0); }), Indicator{}, 2);
  const IndexList support = all_indices(g);
  const std::vector<double> probs(50, 1.0 / 50);
  const DiscreteSampler sampler(probs);
  Rng rng(1, StreamTag::Test);
  for (int i = 0; i < 20; ++i) {
    const DrawOutcome o =
        rejection_sample(sampler, support, g, p, SamplingMode::Standard, rng, 10);
    CHECK(o.evaluations == 1);
    CHECK(o.rejected.empty());
    CHECK(o.sample.inside);
  }
  CHECK(p.evaluations() == 20);
}

TEST_CASE("rejection_sample cost is geometric with mean two on a half-inside support") {
  const Grid g = build_grid(2, 2000, 2);
  IndexList support;
  for (Index i = 0; i < g.size(); ++i)
    if (g.point(i)(0) >= -0.5) support.push_back(i);
  // Make exactly half the support inside.
  std::size_t inside = 0;
  for (Index i : support) inside += g.point(i)(0) >= 0.0 ? 1 : 0;
  IndexList balanced;
  std::size_t in_kept = 0, out_kept = 0;
  const std::size_t half = std::min(inside, support.size() - inside);
  for (Index i : support) {
    const bool in = g.point(i)(0) >= 0.0;
    if (in && in_kept < half) { balanced.push_back(i); ++in_kept; }
    if (!in && out_kept < half) { balanced.push_back(i); ++out_kept; }
  }
  const std::vector<double> probs(balanced.size(), 1.0 / static_cast<double>(balanced.size()));
  const DiscreteSampler sampler(probs);
  Problem p = half_plane_problem();
  Rng rng(3, StreamTag::Test);
  std::size_t evals = 0;
  const int slots = 10000;
  for (int s = 0; s < slots; ++s) {
    const DrawOutcome o =
        rejection_sample(sampler, balanced, g, p, SamplingMode::Standard, rng, 1000);
    CHECK(o.rejected.size() == o.evaluations - 1);
    evals += o.evaluations;
  }
  CHECK(std::abs(static_cast<double>(evals) / slots - 2.0) < 0.1);
}

TEST_CASE("augmented sampling keeps finite outside values") {
  const Grid g = build_grid(2, 400, 3);
  IndexList support;
  for (Index i = 0; i < g.size(); ++i) {
    const double y = g.point(i)(0);
    if (y > -0.5 && y < 0.0) support.push_back(i);
  }
  const std::vector<double> probs(support.size(), 1.0 / static_cast<double>(support.size()));
  const DiscreteSampler sampler(probs);
  Problem p = half_plane_problem();
  Rng rng(4, StreamTag::Test);
  const DrawOutcome o = rejection_sample(sampler, support, g, p, SamplingMode::Augmented, rng, 5);
  CHECK(o.evaluations == 1);
  CHECK(o.rejected.empty());
  CHECK_FALSE(o.sample.inside);
  try {
    rejection_sample(sampler, support, g, p, SamplingMode::Standard, rng, 5);
    FAIL("expected RedrawLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RedrawLimit);
  }
}

TEST_CASE("update_domain set operations") {
  const Indicator q{0.0};
  SamplingState st;
  SUBCASE("full acceptance") {
    const std::vector<double> v(6, 1.0);
    CHECK(update_domain(6, v, q, st, SamplingMode::Standard) == IndexList{0, 1, 2, 3, 4, 5});
  }
  SUBCASE("samples survive a failing fit and rejections are removed") {
    const std::vector<double> v{1, 1, -1, -1, 1, 1};
    st.samples.push_back({2, 0.3, true});
    st.rejected.push_back({4, EvalResult::of(-1.0)});
    CHECK(update_domain(6, v, q, st, SamplingMode::Standard) == IndexList{0, 1, 2, 5});
  }
  SUBCASE("augmented mode removes outside samples") {
    const std::vector<double> v{1, 1, 1, -1, 1, 1};
    st.samples.push_back({3, 0.5, true});
    st.samples.push_back({1, -0.5, false});
    st.rejected.push_back({5, EvalResult::undefined()});
    CHECK(update_domain(6, v, q, st, SamplingMode::Augmented) == IndexList{0, 2, 3, 4});
    CHECK(st.accepted_outside_indices() == IndexList{1});
    CHECK(st.accepted_indices() == IndexList{3});
    CHECK(st.rejected_indices() == IndexList{5});
  }
  SUBCASE("empty result") {
    const std::vector<double> v(3, -1.0);
    CHECK_THROWS_AS(update_domain(3, v, q, st, SamplingMode::Standard), Error);
  }
}

TEST_CASE("hyperbolic cross ladder") {
  const Ladder l = hyperbolic_cross_ladder(2, 20);
  CHECK(l.dims.front() == 3);
  for (std::size_t i = 1; i < l.dims.size(); ++i) CHECK(l.dims[i] > l.dims[i - 1]);
  CHECK(l.dims.back() <= 20);
  CHECK(l.index_set.size() == l.dims.back());
  CHECK_THROWS_AS(hyperbolic_cross_ladder(3, 2), Error);
}

TEST_CASE("ASGD-LS recovers a polynomial exactly with no wasted evaluations") {
  const Grid g = build_grid(2, 1500, 5);
  const Ladder ladder = hyperbolic_cross_ladder(2, 30);
  Rng crng(6, StreamTag::Test);
  const IndexSet first = hyperbolic_cross(2, 1);
  const Eigen::VectorXd c = oracle::random_vector(crng, static_cast<Eigen::Index>(first.size()));
  Oracle poly = [&](std::span<const double> y) {
    if (!indicator_for(1).passes(eval_test_function(1, y))) return EvalResult::undefined();
    Eigen::MatrixXd pt(1, 2);
    pt << y[0], y[1];
    return EvalResult::of((eval_basis(first, pt) * c)(0));
  };
  Problem p(poly, Indicator{}, 2);
  const Context ctx = make_context(g, ladder.index_set, build_schedule(ladder.dims),
                                   evaluate_truth(g, poly, Indicator{}));
  const RunResult r = run(ctx, p, {Method::KnownDomain}, 77);
  REQUIRE_FALSE(r.record.failure);
  for (const auto& lv : r.record.levels) {
    CHECK(lv.error <= 1e-10);
    CHECK(lv.evaluations == lv.samples);
    CHECK(lv.rejection == 0.0);
    CHECK(lv.mismatch == 0.0);
  }
}

TEST_CASE("bookkeeping invariants hold for every method") {
  Env env(1, 2, 1200, 40);
  for (Method m : kAllMethods) {
    CAPTURE(method_name(m));
    Problem p = make_test_problem(1, 2);
    std::size_t prev_f = 0, prev_s = 0, prev_r = 0;
    std::vector<Sample> prev_samples;
    const LevelObserver obs = [&](const LevelSnapshot& snap) {
      const auto& st = snap.state;
      CHECK(st.evaluations == st.samples.size() + st.rejected.size());
      CHECK(st.evaluations >= prev_f);
      CHECK(st.samples.size() >= prev_s);
      CHECK(st.rejected.size() >= prev_r);
      for (std::size_t i = 0; i < prev_samples.size(); ++i)
        CHECK(st.samples[i].grid_index == prev_samples[i].grid_index);
      for (const auto& s : st.samples) {
        if (m == Method::UnknownDomainAugmented) {
          CHECK(std::isfinite(s.value));
        } else {
          CHECK(indicator_for(1).passes(s.value));
        }
      }
      if (m == Method::UnknownDomainAugmented)
        for (const auto& rj : st.rejected) CHECK_FALSE(rj.result.finite());
      prev_f = st.evaluations;
      prev_s = st.samples.size();
      prev_r = st.rejected.size();
      prev_samples = st.samples;
    };
    const RunResult r = run(env.ctx, p, {m}, 1234, obs);
    REQUIRE_FALSE(r.record.failure);
    CHECK(r.record.levels.size() == env.ladder.dims.size());
    CHECK(p.evaluations() == r.state.evaluations);
    for (const auto& lv : r.record.levels) CHECK(lv.samples == env.ctx.schedule.samples(lv.level));
  }
}

TEST_CASE("runs are deterministic in the trial seed") {
  Env env(4, 2, 800, 25);
  for (Method m : kAllMethods) {
    Problem p1 = make_test_problem(4, 2), p2 = make_test_problem(4, 2);
    const RunResult a = run(env.ctx, p1, {m}, 99), b = run(env.ctx, p2, {m}, 99);
    REQUIRE(a.record.levels.size() == b.record.levels.size());
    for (std::size_t l = 0; l < a.record.levels.size(); ++l) {
      const auto &x = a.record.levels[l], &y = b.record.levels[l];
      CHECK(x.evaluations == y.evaluations);
      CHECK(x.error == y.error);
      CHECK(x.mismatch == y.mismatch);
      CHECK(x.inv_alpha == y.inv_alpha);
      CHECK(x.inv_beta == y.inv_beta);
    }
    CHECK(a.final_estimate == b.final_estimate);
  }
}

TEST_CASE("ASUD-LS and ASGD-LS coincide at level one when the domain is the box") {
  const Grid g = build_grid(2, 600, 8);
  const Ladder ladder = hyperbolic_cross_ladder(2, 12);
  Oracle smooth = [](std::span<const double> y) { return EvalResult::of(std::exp(y[0] - y[1])); };
  const Context ctx = make_context(g, ladder.index_set, build_schedule(ladder.dims),
                                   evaluate_truth(g, smooth, Indicator{}));
  std::vector<Index> first[2];
  for (int k = 0; k < 2; ++k) {
    Problem p(smooth, Indicator{}, 2);
    const Method m = k == 0 ? Method::KnownDomain : Method::UnknownDomain;
    run(ctx, p, {m}, 5, [&](const LevelSnapshot& s) {
      if (s.level == 1)
        for (const auto& smp : s.state.samples) first[k].push_back(smp.grid_index);
    });
  }
  CHECK(first[0] == first[1]);
}

TEST_CASE("a level that outgrows the estimate fails with partial results") {
  const Grid g = build_grid(2, 300, 9);
  const Ladder ladder = hyperbolic_cross_ladder(2, 60);
  // Domain is a thin corner: a handful of grid points.
  Oracle corner = [](std::span<const double> y) {
    return EvalResult::of(y[0] > 0.8 && y[1] > 0.8 ? 1.0 : -1.0);
  };
  const Context ctx = make_context(g, ladder.index_set, build_schedule(ladder.dims),
                                   evaluate_truth(g, corner, Indicator{0.0}));
  Problem p(corner, Indicator{0.0}, 2);
  const RunResult r = run(ctx, p, {Method::UnknownDomain}, 3);
  REQUIRE(r.record.failure);
  REQUIRE(r.failure_code);
  CHECK(r.record.levels.size() < ladder.dims.size());
}

TEST_CASE("ASGD-LS without a true domain is a configuration error") {
  const Grid g = build_grid(2, 100, 1);
  const Ladder ladder = hyperbolic_cross_ladder(2, 10);
  const Context ctx = make_context(g, ladder.index_set, build_schedule(ladder.dims), std::nullopt);
  Problem p = make_test_problem(2, 2);
  CHECK_THROWS_AS(run(ctx, p, {Method::KnownDomain}, 1), Error);
}
