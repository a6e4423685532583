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

#include <cmath>

#include <gtest/gtest.h>

#include "mmnla/entanglement.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/optimize.hpp"

namespace mmnla::optimize {
namespace {

TEST(FidelityProfile, BeatsDenseScan) {
  for (auto kind : {nla::Kind::QS, nla::Kind::PC}) {
    const auto best = max_fidelity_profile(0.5, 1.6, kind, 3, 40);
    double scan = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double t = i / 1000.0;
      scan = std::max(scan, *nla::amplify_coherent(0.5, {kind, 3, t}, 40, 1.6).fidelity);
    }
    EXPECT_GE(best.fidelity, scan - 1e-6);
    EXPECT_NEAR(best.success_prob, nla::amplify_coherent(0.5, {kind, 3, best.t}, 40).success_prob, 1e-15);
  }
}

TEST(FidelityProfile, ScissorsBeatsCatalysis) {
  for (int units : {1, 4}) {
    const auto qs = max_fidelity_profile(0.5, 1.6, nla::Kind::QS, units, 40);
    const auto pc = max_fidelity_profile(0.5, 1.6, nla::Kind::PC, units, 40);
    EXPECT_GE(qs.fidelity, pc.fidelity);
    EXPECT_GE(qs.success_prob, pc.success_prob);
  }
}

TEST(SuccessGivenFidelity, MeetsTargetAndBeatsFeasibleSamples) {
  SweepConfig c;
  c.n_max = 4;
  const auto best = max_success_given_fidelity(0.2, 1.6, nla::Kind::QS, 0.99, 40, c);
  EXPECT_GE(best.fidelity, 0.99);
  for (int units = 1; units <= 4; ++units) {
    for (int i = 1; i < 100; ++i) {
      const auto r = nla::amplify_coherent(0.2, {nla::Kind::QS, units, i / 100.0}, 40, 1.6);
      if (*r.fidelity >= 0.99) {
        EXPECT_GE(best.success_prob, r.success_prob * (1 - 1e-9));
      }
    }
  }
}

TEST(SuccessGivenFidelity, LargerAmplitudeNeedsMoreUnits) {
  const auto small = max_success_given_fidelity(0.2, 1.2, nla::Kind::QS, 0.98, 40);
  const auto large = max_success_given_fidelity(1.0, 1.2, nla::Kind::QS, 0.98, 40);
  EXPECT_LT(small.units, large.units);
}

TEST(SuccessGivenFidelity, InfeasibleTargetThrows) {
  EXPECT_THROW(max_success_given_fidelity(1.0, 2.0, nla::Kind::PC, 0.999, 40), InfeasibleError);
  EXPECT_THROW(max_success_given_fidelity(0.2, 2.0, nla::Kind::PC, 1.0, 40), ValidationError);
}

TEST(TotalLogneg, OptimumCoversGridAndIsDeterministic) {
  const auto pdc = entanglement::PdcSpec::from_first_squeezing_db(entanglement::scenario_lambdas(1, 1), 5.0);
  const entanglement::DistillScenario s{pdc, fock::Channel::from_attenuation_db(10.0), {nla::Kind::PC, 2, 0.5},
                                        entanglement::Strategy::Unfiltered, 1};
  SweepConfig one, many;
  many.workers = 3;
  const auto a = maximize_total_logneg(s, 20, one);
  const auto b = maximize_total_logneg(s, 20, many);
  ASSERT_TRUE(a.optimal_t.has_value());
  EXPECT_EQ(*a.optimal_t, *b.optimal_t);
  EXPECT_EQ(a.total_logneg, b.total_logneg);
  const entanglement::DistillPipeline pipe(pdc, s.channel, 20);
  for (int i = 0; i < one.grid_points; i += 7) {
    const double t = one.grid_t(i);
    EXPECT_GE(a.total_logneg, pipe.evaluate(nla::NlaSpec{nla::Kind::PC, 2, t}, s.strategy, 1).total_logneg);
  }
  // Beneficial catalysis works with T below a quarter.
  EXPECT_GT(*a.optimal_t, 0.0);
  EXPECT_LT(*a.optimal_t, 0.25);
  EXPECT_GT(a.total_logneg, entanglement::reference_no_nla(pdc, s.channel, 20).total_logneg);
}

}  // namespace
}  // namespace mmnla::optimize
