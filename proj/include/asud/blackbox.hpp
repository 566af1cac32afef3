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

#ifndef ASUD_BLACKBOX_HPP
#define ASUD_BLACKBOX_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>

namespace asud {

/// Black-box output: a finite value or the "undefined" exit flag (+inf).
class EvalResult {
 public:
  static EvalResult undefined() { return EvalResult(); }
  /// Non-finite inputs (inf, NaN) become undefined.
  static EvalResult of(double v) {
    return std::isfinite(v) ? EvalResult(v) : EvalResult();
  }

  bool finite() const { return value_.has_value(); }
  double value() const { return *value_; }

  bool operator==(const EvalResult&) const = default;

 private:
  EvalResult() = default;
  explicit EvalResult(double v) : value_(v) {}
  std::optional<double> value_;
};

/// Q(v) = 1 iff lower <= v < upper (or v <= upper when upper_inclusive);
/// undefined values never pass.
struct Indicator {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool upper_inclusive = false;

  bool passes(double v) const {
    if (!std::isfinite(v)) return false;
    return v >= lower && (upper_inclusive ? v <= upper : v < upper);
  }
  bool passes(const EvalResult& r) const { return r.finite() && passes(r.value()); }
};

using Oracle = std::function<EvalResult(std::span<const double>)>;

/// An oracle paired with its indicator. Every call through evaluate() is
/// counted; one Problem instance belongs to one trial.
class Problem {
 public:
  Problem(Oracle oracle, Indicator indicator, std::size_t dim)
      : oracle_(std::move(oracle)), indicator_(indicator), dim_(dim) {}

  EvalResult evaluate(std::span<const double> y) {
    ++evaluations_;
    return oracle_(y);
  }

  /// Uncounted access, for simulation ground truth only.
  const Oracle& oracle() const { return oracle_; }
  const Indicator& indicator() const { return indicator_; }
  std::size_t dim() const { return dim_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  Oracle oracle_;
  Indicator indicator_;
  std::size_t dim_;
  std::size_t evaluations_ = 0;
};

/// Built-in test functions f1..f4 on [-1,1]^d.
EvalResult eval_test_function(int id, std::span<const double> y);

/// Domains of interest for the built-ins: [0, inf) for ids 1-3 and the
/// closed band [0.18, 0.72] for id 4.
Indicator indicator_for(int id);

/// Throws UnknownFunction / InvalidArgument for unsupported (id, d) pairs.
void validate_test_function(int id, std::size_t dim);

Problem make_test_problem(int id, std::size_t dim);

}  // namespace asud

#endif  // ASUD_BLACKBOX_HPP
