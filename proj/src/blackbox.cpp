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

#include "asud/blackbox.hpp"

#include <cmath>
#include <string>

#include "asud/error.hpp"

namespace asud {
namespace {

double sum_squares(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s;
}

}  // namespace

void validate_test_function(int id, std::size_t dim) {
  if (id < 1 || id > 4) {
    throw Error(ErrorCode::UnknownFunction, "no built-in function " + std::to_string(id));
  }
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (id == 1 && dim < 2) throw Error(ErrorCode::InvalidArgument, "f1 needs d >= 2");
}

EvalResult eval_test_function(int id, std::span<const double> y) {
  validate_test_function(id, y.size());
  const double d = static_cast<double>(y.size());
  switch (id) {
    case 1: {
      const double r2 = y[0] * y[0] + y[1] * y[1];
      double lin = 0.0;
      for (double v : y) lin += v;
      const double a = 10.0 / 7.0;
      return EvalResult::of((a * a - 1.0 / r2) * std::exp(-lin / (2.0 * d)));
    }
    case 2: {
      const double s = sum_squares(y);
      return EvalResult::of(std::log(8.0 * s) - 2.0 * s);
    }
    case 3: {
      const double s = sum_squares(y);
      const double c = 1.0 - (d - 2.0) / 100.0 * (d * d - 10.0 * d + 29.0);
      return EvalResult::of(c * std::log(16.0 / d * s) - 4.0 / d * s);
    }
    case 4: {
      double p = 1.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        // 1-based i: shift (-1)^{i+1} / (i+1)
        const double k = static_cast<double>(i + 1);
        const double shift = ((i % 2 == 0) ? 1.0 : -1.0) / (k + 1.0);
        const double t = y[i] + shift;
        p *= (d / 4.0) / (d / 4.0 + t * t);
      }
      return EvalResult::of(p);
    }
  }
  return EvalResult::undefined();
}

Indicator indicator_for(int id) {
  if (id >= 1 && id <= 3) return Indicator{0.0, std::numeric_limits<double>::infinity(), false};
  if (id == 4) return Indicator{0.18, 0.72, true};
  throw Error(ErrorCode::UnknownFunction, "no built-in function " + std::to_string(id));
}

Problem make_test_problem(int id, std::size_t dim) {
  validate_test_function(id, dim);
  return Problem([id](std::span<const double> y) { return eval_test_function(id, y); },
                 indicator_for(id), dim);
}

}  // namespace asud
