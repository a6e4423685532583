// Copyright 2026 The mmnla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Bounded scalar maximisation over a transmissivity: a uniform scan followed
// by golden-section refinement inside the bracket around the best scan point.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mmnla/errors.hpp"
#include "mmnla/numeric.hpp"
#include "mmnla/parallel.hpp"

namespace mmnla::optimize {

struct SweepConfig {
  double t_min = 1e-4;
  double t_max = 1.0 - 1e-4;
  int grid_points = 200;
  double refine_tolerance = 1e-4;
  int n_min = 1;  ///< inclusive range of unit counts for joint (T, N) searches
  int n_max = 8;
  unsigned workers = 1;  ///< threads used for the scan

  void validate() const {
    if (!(t_min > 0.0 && t_max < 1.0 && t_min < t_max))
      throw ValidationError("search bounds must satisfy 0 < t_min < t_max < 1");
    if (grid_points < 10) throw ValidationError("grid_points must be at least 10");
    if (!(refine_tolerance > 0.0)) throw ValidationError("refine_tolerance must be positive");
    if (n_min < 1 || n_max < n_min) throw ValidationError("unit range must satisfy 1 <= n_min <= n_max");
  }

  double grid_t(int i) const { return t_min + (t_max - t_min) * static_cast<double>(i) / (grid_points - 1); }
};

struct SearchResult {
  double t = 0.0;
  double value = 0.0;
  std::size_t grid_index = 0;     ///< best scan point
  double bracket_width = 0.0;     ///< final golden-section bracket
  bool refined = false;           ///< refinement improved on the scan point
  std::size_t evaluations = 0;
};

namespace detail {

inline double checked(double t, double v) {
  if (!std::isfinite(v)) throw NonFiniteObjectiveError("objective is not finite at T=" + numeric::format_g(t));
  return v;
}

}  // namespace detail

/// Maximises f over [t_min, t_max]. Ties go to the lowest T. The result is
/// never worse than the best scan point and does not depend on the worker
/// count.
inline SearchResult maximize_over_t(const std::function<double(double)>& f, const SweepConfig& config) {
  config.validate();
  const auto samples = parallel_map(static_cast<std::size_t>(config.grid_points), config.workers, [&](std::size_t i) {
    const double t = config.grid_t(static_cast<int>(i));
    return detail::checked(t, f(t));
  });

  SearchResult best;
  best.grid_index = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i] > samples[best.grid_index]) best.grid_index = i;
  }
  best.t = config.grid_t(static_cast<int>(best.grid_index));
  best.value = samples[best.grid_index];
  best.evaluations = samples.size();

  const int gi = static_cast<int>(best.grid_index);
  double lo = config.grid_t(std::max(0, gi - 1));
  double hi = config.grid_t(std::min(config.grid_points - 1, gi + 1));

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = detail::checked(c, f(c));
  double fd = detail::checked(d, f(d));
  best.evaluations += 2;
  auto consider = [&best](double t, double v) {
    if (v > best.value) {
      best.value = v;
      best.t = t;
      best.refined = true;
    }
  };
  consider(c, fc);
  consider(d, fd);
  while (hi - lo > config.refine_tolerance) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = detail::checked(c, f(c));
      consider(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = detail::checked(d, f(d));
      consider(d, fd);
    }
    ++best.evaluations;
  }
  best.bracket_width = hi - lo;
  return best;
}

}  // namespace mmnla::optimize
