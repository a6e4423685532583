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

// Noiseless linear amplifiers as Fock-diagonal operators: the parallel
// quantum-scissors amplifier (QS), the parallel photon-catalysis amplifier
// (PC) and N photon-catalysis stages in series (CascadedPC).

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmnla/errors.hpp"
#include "mmnla/fock.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::nla {

using fock::complex;
using fock::DiagonalOperator;
using fock::PureState;

enum class Kind { QS, PC, CascadedPC };

inline std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::QS: return "QS";
    case Kind::PC: return "PC";
    case Kind::CascadedPC: return "CascadedPC";
  }
  return "?";
}

inline Kind parse_kind(std::string_view name) {
  if (name == "QS") return Kind::QS;
  if (name == "PC") return Kind::PC;
  if (name == "CascadedPC") return Kind::CascadedPC;
  throw ValidationError("unknown amplifier kind '" + std::string(name) + "' (expected QS, PC or CascadedPC)");
}

struct NlaSpec {
  Kind kind = Kind::QS;
  int units = 1;  ///< N: parallel (QS, PC) or cascaded (CascadedPC) stages
  double transmissivity = 0.5;

  void validate() const {
    if (units < 1) throw ValidationError("amplifier needs at least one unit");
    if (!(transmissivity > 0.0 && transmissivity < 1.0))
      throw ValidationError("amplifier transmissivity must lie in (0, 1)");
  }
};

inline void require_open_unit(double t) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("transmissivity must lie in (0, 1)");
}

/// Asymptotic QS gain sqrt((1-T)/T).
inline double qs_gain(double t) {
  require_open_unit(t);
  return std::sqrt((1.0 - t) / t);
}

/// Asymptotic PC gain (1-2T)/sqrt(T). Exceeds one only for T < 1/4.
inline double pc_gain(double t) {
  require_open_unit(t);
  return (1.0 - 2.0 * t) / std::sqrt(t);
}

/// Transmissivity at which the asymptotic gain equals g.
/// QS: 1/(1+g^2). PC: the root of 4T^2 - (4+g^2)T + 1 = 0 below 1/2.
inline double equal_gain_transmissivity(Kind kind, double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain))
    throw ValidationError("no transmissivity realises gain " + numeric::format_g(gain));
  switch (kind) {
    case Kind::QS: return 1.0 / (1.0 + gain * gain);
    case Kind::PC:
    case Kind::CascadedPC: {
      const double b = 4.0 + gain * gain;
      // Smaller root written as 2c / (b + sqrt(b^2 - 16c)) to avoid cancellation.
      return 2.0 / (b + std::sqrt(b * b - 16.0));
    }
  }
  throw ValidationError("unknown amplifier kind");
}

/// QS amplifier: d_n = sqrt(T)^N N! / ((N-n)! N^n) sqrt((1-T)/T)^n for n <= N, else 0.
inline DiagonalOperator qs_nla_diagonal(int units, double t, std::size_t n_max) {
  NlaSpec{Kind::QS, units, t}.validate();
  const auto big_n = static_cast<std::size_t>(units);
  const double log_t = std::log(t);
  const double log_gain = 0.5 * (std::log1p(-t) - log_t);
  const double log_n = std::log(static_cast<double>(units));
  std::vector<double> d(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= std::min(n_max, big_n); ++n) {
    const double dn = static_cast<double>(n);
    const double log_d = 0.5 * units * log_t + numeric::log_factorial(big_n) - numeric::log_factorial(big_n - n) -
                         dn * log_n + dn * log_gain;
    d[n] = std::exp(log_d);
  }
  return DiagonalOperator(std::move(d));
}

/// Single PC stage: sqrt(T) (1 - n (1-T)/T) sqrt(T)^n.
inline double pc_stage_coefficient(double t, std::size_t n) {
  return std::pow(t, 0.5 * (static_cast<double>(n) + 1.0)) * (1.0 - static_cast<double>(n) * (1.0 - t) / t);
}

/// PC amplifier:
///   d_n = sqrt(T)^(N+n) sum_k C(N,k) n!/(n-N+k)! N^(k-N) p^(N-k),  p = (T-1)/T.
/// Terms with n-N+k < 0 vanish. Each term is formed in log space and the
/// signed sum is accumulated smallest magnitude first.
inline DiagonalOperator pc_nla_diagonal(int units, double t, std::size_t n_max) {
  NlaSpec{Kind::PC, units, t}.validate();
  const auto big_n = static_cast<std::size_t>(units);
  const double log_t = std::log(t);
  const double log_abs_p = std::log1p(-t) - log_t;  // p < 0 for T < 1
  const double log_n = std::log(static_cast<double>(units));
  std::vector<double> d(n_max + 1, 0.0);
  std::vector<numeric::SignedLog> terms;
  for (std::size_t n = 0; n <= n_max; ++n) {
    terms.clear();
    for (std::size_t k = 0; k <= big_n; ++k) {
      if (n + k < big_n) continue;
      const std::size_t power = big_n - k;
      const double log_mag = numeric::log_binomial(big_n, k) + numeric::log_factorial(n) -
                             numeric::log_factorial(n + k - big_n) - static_cast<double>(power) * log_n +
                             static_cast<double>(power) * log_abs_p;
      terms.push_back({power % 2 == 0 ? 1 : -1, log_mag});
    }
    const auto sum = numeric::signed_log_sum(terms);
    if (sum.sign == 0) continue;
    d[n] = sum.sign * std::exp(sum.log_magnitude + 0.5 * static_cast<double>(big_n + n) * log_t);
  }
  return DiagonalOperator(std::move(d));
}

/// N cascaded PC stages: d_n = sqrt(T)^N (1 - n(1-T)/T)^N sqrt(T)^(N n).
inline DiagonalOperator cascaded_pc_diagonal(int units, double t, std::size_t n_max) {
  NlaSpec{Kind::CascadedPC, units, t}.validate();
  const double log_t = std::log(t);
  std::vector<double> d(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    const double base = 1.0 - dn * (1.0 - t) / t;
    if (base == 0.0) continue;
    const int sign = (base < 0.0 && units % 2 == 1) ? -1 : 1;
    const double log_mag = 0.5 * units * log_t + units * std::log(std::abs(base)) + 0.5 * units * dn * log_t;
    d[n] = sign * std::exp(log_mag);
  }
  return DiagonalOperator(std::move(d));
}

inline DiagonalOperator nla_diagonal(const NlaSpec& spec, std::size_t n_max) {
  switch (spec.kind) {
    case Kind::QS: return qs_nla_diagonal(spec.units, spec.transmissivity, n_max);
    case Kind::PC: return pc_nla_diagonal(spec.units, spec.transmissivity, n_max);
    case Kind::CascadedPC: return cascaded_pc_diagonal(spec.units, spec.transmissivity, n_max);
  }
  throw ValidationError("unknown amplifier kind");
}

/// Coherent amplitude an ideal amplifier of this kind would produce. The PC
/// amplifiers flip the sign of the amplitude.
inline complex target_amplitude(Kind kind, complex alpha, double gain) {
  return kind == Kind::QS ? gain * alpha : -gain * alpha;
}

/// |<beta|psi>|^2 for a normalised psi. |beta> is truncated at psi's n_max.
inline double fidelity_to_coherent(const PureState& psi, complex beta) {
  if (std::abs(psi.norm_squared() - 1.0) > fock::kNormalizationTolerance)
    throw NotNormalizedError("fidelity needs a normalised state");
  const PureState target = fock::coherent_state(beta, psi.n_max());
  complex overlap = 0.0;
  for (std::size_t n = 0; n < psi.dim(); ++n) overlap += std::conj(target[n]) * psi[n];
  return std::min(1.0, std::norm(overlap));
}

struct AmplifyResult {
  PureState out_state;          ///< normalised output
  double success_prob = 0.0;    ///< ||D|alpha>||^2
  std::optional<double> fidelity;  ///< against the ideal target, when a gain was given
};

/// Applies an amplifier to |alpha>. With a target gain, also reports the
/// fidelity to |g alpha> (QS) or |-g alpha> (PC variants).
inline AmplifyResult amplify_coherent(complex alpha, const NlaSpec& spec, std::size_t n_max,
                                      std::optional<double> target_gain = std::nullopt) {
  spec.validate();
  const PureState input = fock::coherent_state(alpha, n_max);
  const PureState heralded = nla_diagonal(spec, n_max).apply(input);
  const double prob = heralded.norm_squared();
  if (!(prob > 0.0)) throw NumericalError("amplifier output has zero norm");
  PureState out = heralded.normalized();
  fock::guard_top_bin(out.populations(), "amplified coherent state");
  AmplifyResult result{std::move(out), prob, std::nullopt};
  if (target_gain) result.fidelity = fidelity_to_coherent(result.out_state, target_amplitude(spec.kind, alpha, *target_gain));
  return result;
}

}  // namespace mmnla::nla
