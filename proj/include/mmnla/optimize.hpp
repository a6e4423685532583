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

// Experiment-level searches: best fidelity of an amplified coherent state,
// best success probability under a fidelity constraint, and best total
// log-negativity of a distilled PDC state.

#include <cstddef>
#include <optional>
#include <string>

#include "mmnla/entanglement.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/search.hpp"

namespace mmnla::optimize {

struct FidelityOptimum {
  double t = 0.0;
  double fidelity = 0.0;
  double success_prob = 0.0;
};

/// max_T F(T) for amplifying |alpha> towards the target gain, and the
/// success probability at the maximiser.
inline FidelityOptimum max_fidelity_profile(nla::complex alpha, double target_gain, nla::Kind kind, int units,
                                            std::size_t n_max, const SweepConfig& config = {}) {
  auto fidelity_at = [&](double t) {
    return *nla::amplify_coherent(alpha, nla::NlaSpec{kind, units, t}, n_max, target_gain).fidelity;
  };
  const auto best = maximize_over_t(fidelity_at, config);
  const auto at_best = nla::amplify_coherent(alpha, nla::NlaSpec{kind, units, best.t}, n_max, target_gain);
  return {best.t, *at_best.fidelity, at_best.success_prob};
}

struct SuccessOptimum {
  int units = 0;
  double t = 0.0;
  double success_prob = 0.0;
  double fidelity = 0.0;
};

/// max_{T,N} P subject to F >= fidelity_target, N over [config.n_min, config.n_max].
/// Unit counts with no feasible T are skipped; throws InfeasibleError if none
/// is feasible.
inline SuccessOptimum max_success_given_fidelity(nla::complex alpha, double target_gain, nla::Kind kind,
                                                 double fidelity_target, std::size_t n_max,
                                                 const SweepConfig& config = {}) {
  if (!(fidelity_target < 1.0)) throw ValidationError("fidelity target must be below one");
  config.validate();
  std::optional<SuccessOptimum> best;
  for (int units = config.n_min; units <= config.n_max; ++units) {
    // Feasible points score their success probability (>= 0); infeasible
    // ones score below -1, increasing towards the constraint boundary.
    auto score = [&](double t) {
      const auto r = nla::amplify_coherent(alpha, nla::NlaSpec{kind, units, t}, n_max, target_gain);
      return *r.fidelity >= fidelity_target ? r.success_prob : -1.0 - (fidelity_target - *r.fidelity);
    };
    const auto found = maximize_over_t(score, config);
    if (found.value < 0.0) continue;
    const auto r = nla::amplify_coherent(alpha, nla::NlaSpec{kind, units, found.t}, n_max, target_gain);
    if (!best || r.success_prob > best->success_prob) best = SuccessOptimum{units, found.t, r.success_prob, *r.fidelity};
  }
  if (!best) {
    throw InfeasibleError("no (T, N) reaches fidelity " + numeric::format_g(fidelity_target) + " for " +
                          std::string(nla::to_string(kind)) + " at |alpha|=" + numeric::format_g(std::abs(alpha)) +
                          ", g=" + numeric::format_g(target_gain));
  }
  return *best;
}

/// Maximises the total log-negativity over the amplifier transmissivity. The
/// scenario's own transmissivity is ignored.
inline entanglement::DistillResult maximize_total_logneg(const entanglement::DistillScenario& scenario,
                                                         std::size_t n_max, const SweepConfig& config = {}) {
  scenario.validate();
  const entanglement::DistillPipeline pipeline(scenario.pdc, scenario.channel, n_max);
  auto at = [&](double t) {
    nla::NlaSpec spec = scenario.nla;
    spec.transmissivity = t;
    return pipeline.evaluate(spec, scenario.strategy, scenario.amplified_index);
  };
  const auto best = maximize_over_t([&](double t) { return at(t).total_logneg; }, config);
  auto result = at(best.t);
  result.optimal_t = best.t;
  return result;
}

}  // namespace mmnla::optimize
