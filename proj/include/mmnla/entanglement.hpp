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

// Entanglement distillation of a multimode PDC state. Each supermode pair k is
// an independent two-mode squeezed vacuum with squeezing r_k = G * lambda_k;
// arm B of every pair crosses the same lossy channel and then meets the
// amplifier, which acts on the amplified supermode and, depending on the
// amplifier and the filtering strategy, on the others as well.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmnla/density.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/fock.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/numeric.hpp"
#include "mmnla/search.hpp"

namespace mmnla::entanglement {

using fock::Arm;
using fock::BipartiteDensity;
using fock::Channel;
using fock::DiagonalOperator;

/// How the supermode weights lambda_k are normalised.
enum class Normalization { SumSquares, Sum };

inline Normalization parse_normalization(std::string_view name) {
  if (name == "sum_squares") return Normalization::SumSquares;
  if (name == "sum") return Normalization::Sum;
  throw ValidationError("unknown normalization '" + std::string(name) + "' (expected sum_squares or sum)");
}

inline std::string_view to_string(Normalization n) { return n == Normalization::SumSquares ? "sum_squares" : "sum"; }

inline double normalization_measure(const std::vector<double>& lambdas, Normalization norm) {
  double s = 0.0;
  for (double l : lambdas) s += norm == Normalization::SumSquares ? l * l : l;
  return norm == Normalization::SumSquares ? std::sqrt(s) : s;
}

inline std::vector<double> normalize_lambdas(std::vector<double> lambdas, Normalization norm) {
  const double m = normalization_measure(lambdas, norm);
  if (!(m > 0.0)) throw ValidationError("supermode weights are all zero");
  for (double& l : lambdas) l /= m;
  return lambdas;
}

/// Supermode weights of the three reference structures:
/// 1 = a single non-trivial pair, 2 = exponential decay `decay`^(k-1),
/// 3 = all pairs equally squeezed.
inline std::vector<double> scenario_lambdas(int scenario, int supermodes, double decay = 0.6,
                                            Normalization norm = Normalization::SumSquares) {
  if (supermodes < 1) throw ValidationError("need at least one supermode");
  std::vector<double> l(static_cast<std::size_t>(supermodes), 0.0);
  switch (scenario) {
    case 1: l[0] = 1.0; break;
    case 2:
      if (!(decay > 0.0 && decay < 1.0)) throw ValidationError("scenario 2 decay must lie in (0, 1)");
      for (std::size_t k = 0; k < l.size(); ++k) l[k] = std::pow(decay, static_cast<double>(k));
      break;
    case 3: std::fill(l.begin(), l.end(), 1.0); break;
    default: throw ValidationError("scenario must be 1, 2 or 3");
  }
  return normalize_lambdas(std::move(l), norm);
}

struct PdcSpec {
  double gain = 0.0;             ///< G
  std::vector<double> lambdas;   ///< lambda_k, one per supermode
  Normalization normalization = Normalization::SumSquares;

  /// Fixes G so that the first supermode has squeezing r1_db.
  static PdcSpec from_first_squeezing_db(std::vector<double> lambdas, double r1_db,
                                         Normalization norm = Normalization::SumSquares) {
    if (lambdas.empty() || !(lambdas[0] > 0.0)) throw ValidationError("first supermode weight must be positive");
    if (!(r1_db >= 0.0)) throw ValidationError("squeezing must be >= 0 dB");
    PdcSpec spec{numeric::squeezing_db_to_r(r1_db) / lambdas[0], std::move(lambdas), norm};
    spec.validate();
    return spec;
  }

  std::size_t supermodes() const { return lambdas.size(); }

  std::vector<double> squeezing() const {
    std::vector<double> r(lambdas.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = gain * lambdas[k];
    return r;
  }

  void validate() const {
    if (lambdas.empty()) throw ValidationError("PDC state needs at least one supermode");
    if (!(gain >= 0.0) || !std::isfinite(gain)) throw ValidationError("PDC gain must be finite and >= 0");
    for (double l : lambdas) {
      if (!(l >= 0.0)) throw ValidationError("supermode weights must be >= 0");
    }
    if (std::abs(normalization_measure(lambdas, normalization) - 1.0) > 1e-12)
      throw ValidationError("supermode weights violate the configured normalization");
  }
};

/// Truncation that keeps every pair's Schmidt tail below the default tolerance.
inline std::size_t pdc_truncation(const PdcSpec& pdc) {
  std::size_t n = 1;
  for (double r : pdc.squeezing()) n = std::max(n, fock::schmidt_truncation_for(r));
  return n;
}

/// Schmidt coefficients of every EPR pair of the PDC state.
inline std::vector<std::vector<double>> build_pdc(const PdcSpec& pdc, std::size_t n_max) {
  pdc.validate();
  std::vector<std::vector<double>> pairs;
  for (double r : pdc.squeezing()) pairs.push_back(fock::tmsv_schmidt(r, n_max));
  return pairs;
}

enum class Strategy { Unfiltered, Filtered };

inline Strategy parse_strategy(std::string_view name) {
  if (name == "unfiltered") return Strategy::Unfiltered;
  if (name == "filtered") return Strategy::Filtered;
  throw ValidationError("unknown strategy '" + std::string(name) + "' (expected unfiltered or filtered)");
}

inline std::string_view to_string(Strategy s) { return s == Strategy::Unfiltered ? "unfiltered" : "filtered"; }

struct DistillScenario {
  PdcSpec pdc;
  Channel channel = Channel::from_attenuation_db(0.0);
  nla::NlaSpec nla;
  Strategy strategy = Strategy::Unfiltered;
  int amplified_index = 1;  ///< 1-based supermode that the amplifier targets

  void validate() const {
    pdc.validate();
    nla.validate();
    if (amplified_index < 1 || static_cast<std::size_t>(amplified_index) > pdc.supermodes())
      throw ValidationError("amplified supermode index " + std::to_string(amplified_index) +
                            " is outside 1.." + std::to_string(pdc.supermodes()));
  }
};

struct DistillResult {
  std::vector<double> per_supermode_logneg;
  double total_logneg = 0.0;
  double success_prob = 1.0;
  std::optional<double> optimal_t;
};

/// Operator the amplifier applies to supermodes it is not meant to amplify,
/// or nothing when those supermodes are filtered out beforehand.
inline std::optional<DiagonalOperator> spectator_operator(const nla::NlaSpec& spec, Strategy strategy,
                                                          std::size_t n_max) {
  if (strategy == Strategy::Filtered) return std::nullopt;
  switch (spec.kind) {
    case nla::Kind::QS: return DiagonalOperator::vacuum_projector(n_max);
    case nla::Kind::PC: return DiagonalOperator::attenuator(spec.transmissivity, n_max);
    case nla::Kind::CascadedPC:
      return DiagonalOperator::attenuator(std::pow(spec.transmissivity, spec.units), n_max);
  }
  return std::nullopt;
}

/// The PDC state after the channel, cached so that many amplifier settings
/// can be evaluated against the same lossy state.
class DistillPipeline {
 public:
  /// Unsqueezed pairs are exact vacua and are stored at truncation 1.
  DistillPipeline(const PdcSpec& pdc, const Channel& channel, std::size_t n_max) : n_max_(n_max) {
    pdc.validate();
    for (double r : pdc.squeezing()) {
      const auto c = fock::tmsv_schmidt(r, r == 0.0 ? 1 : n_max);
      lossy_.push_back(fock::apply_loss(BipartiteDensity::from_schmidt(c), Arm::B, channel));
    }
  }

  std::size_t n_max() const { return n_max_; }
  std::size_t supermodes() const { return lossy_.size(); }
  const BipartiteDensity& lossy(std::size_t k) const { return lossy_.at(k); }

  /// Applies `amplifier` to supermode `amplified_index` (1-based) and
  /// `spectator` (if any) to the rest, then measures each pair.
  DistillResult evaluate(const DiagonalOperator& amplifier, const std::optional<DiagonalOperator>& spectator,
                         int amplified_index) const {
    if (amplified_index < 1 || static_cast<std::size_t>(amplified_index) > lossy_.size())
      throw ValidationError("amplified supermode index is outside the PDC state");
    DistillResult result;
    for (std::size_t k = 0; k < lossy_.size(); ++k) {
      const DiagonalOperator* op = k + 1 == static_cast<std::size_t>(amplified_index)
                                       ? &amplifier
                                       : (spectator ? &*spectator : nullptr);
      double e = 0.0;
      if (op == nullptr) {
        e = fock::log_negativity(lossy_[k]);
      } else {
        const BipartiteDensity heralded = fock::apply_diagonal(lossy_[k], Arm::B, *op);
        const double p = heralded.trace();
        if (!(p > 0.0)) throw NumericalError("heralding probability vanished for supermode " + std::to_string(k + 1));
        result.success_prob *= p;
        const BipartiteDensity rho = heralded.normalized();
        fock::guard_truncation(rho, "distilled supermode " + std::to_string(k + 1));
        e = fock::log_negativity(rho);
      }
      result.per_supermode_logneg.push_back(e);
      result.total_logneg += e;
    }
    return result;
  }

  /// Same pipeline with no amplifier: every pair is measured after the channel.
  DistillResult reference() const {
    DistillResult result;
    for (const auto& rho : lossy_) {
      const double e = fock::log_negativity(rho);
      result.per_supermode_logneg.push_back(e);
      result.total_logneg += e;
    }
    return result;
  }

  DistillResult evaluate(const nla::NlaSpec& spec, Strategy strategy, int amplified_index) const {
    spec.validate();
    return evaluate(nla::nla_diagonal(spec, n_max_), spectator_operator(spec, strategy, n_max_), amplified_index);
  }

 private:
  std::size_t n_max_;
  std::vector<BipartiteDensity> lossy_;
};

inline DistillResult distill(const DistillScenario& scenario, std::size_t n_max) {
  scenario.validate();
  return DistillPipeline(scenario.pdc, scenario.channel, n_max)
      .evaluate(scenario.nla, scenario.strategy, scenario.amplified_index);
}

/// Reference without amplification; success probability one.
inline DistillResult reference_no_nla(const PdcSpec& pdc, const Channel& channel, std::size_t n_max) {
  return DistillPipeline(pdc, channel, n_max).reference();
}

struct ProcessOptimum {
  double t = 0.0;
  double logneg_max = 0.0;
  double success_prob = 0.0;
};

struct CascadeComparison {
  double squeezing = 0.0;
  int units = 1;
  ProcessOptimum parallel;   ///< N photon-catalysis units in parallel
  ProcessOptimum cascaded;   ///< N photon-catalysis units in series
  double reference_logneg = 0.0;
};

/// Lossless single EPR pair: maximises log-negativity over T separately for
/// the parallel and the cascaded photon-catalysis amplifiers.
inline CascadeComparison cascade_compare(double squeezing, int units, std::size_t n_max,
                                         const optimize::SweepConfig& config = {}) {
  if (!(squeezing > 0.0)) throw ValidationError("cascade comparison needs squeezing > 0");
  if (units < 1) throw ValidationError("cascade comparison needs at least one unit");
  const PdcSpec pdc{squeezing, {1.0}, Normalization::SumSquares};
  const DistillPipeline pipeline(pdc, Channel::from_attenuation_db(0.0), n_max);

  auto run = [&](nla::Kind kind) {
    auto objective = [&](double t) {
      return pipeline.evaluate(nla::NlaSpec{kind, units, t}, Strategy::Filtered, 1).total_logneg;
    };
    const auto best = optimize::maximize_over_t(objective, config);
    const auto at_best = pipeline.evaluate(nla::NlaSpec{kind, units, best.t}, Strategy::Filtered, 1);
    return ProcessOptimum{best.t, at_best.total_logneg, at_best.success_prob};
  };

  CascadeComparison out;
  out.squeezing = squeezing;
  out.units = units;
  out.parallel = run(nla::Kind::PC);
  out.cascaded = run(nla::Kind::CascadedPC);
  out.reference_logneg = pipeline.reference().total_logneg;
  return out;
}

}  // namespace mmnla::entanglement
