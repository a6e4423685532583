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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace mmnla::numeric {

inline double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(std::size_t n, std::size_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// A real number stored as sign * exp(log_magnitude). Zero has sign 0.
struct SignedLog {
  int sign = 0;
  double log_magnitude = -std::numeric_limits<double>::infinity();

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

/// Sums signed log-space terms. Terms are accumulated in order of increasing
/// magnitude, relative to the largest one, so the result only loses the
/// precision that the cancellation itself destroys.
inline SignedLog signed_log_sum(std::vector<SignedLog> terms) {
  std::erase_if(terms, [](const SignedLog& t) { return t.sign == 0; });
  if (terms.empty()) return {};
  std::sort(terms.begin(), terms.end(),
            [](const SignedLog& a, const SignedLog& b) { return a.log_magnitude < b.log_magnitude; });
  const double top = terms.back().log_magnitude;
  double acc = 0.0;
  for (const auto& t : terms) acc += t.sign * std::exp(t.log_magnitude - top);
  if (acc == 0.0) return {};
  return {acc > 0 ? 1 : -1, top + std::log(std::abs(acc))};
}

/// Squeezing in dB from the squeezing parameter: (20 / ln 10) * r.
inline constexpr double kDbPerNeper = 20.0 / std::numbers::ln10;

inline double squeezing_db_to_r(double db) { return db / kDbPerNeper; }
inline double squeezing_r_to_db(double r) { return r * kDbPerNeper; }

/// Channel transmissivity from attenuation: 10^(-dB/10).
inline double attenuation_db_to_eta(double db) { return std::pow(10.0, -db / 10.0); }

/// Short human-readable rendering of a double for error messages.
inline std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace mmnla::numeric
