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

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mmnla/density.hpp"
#include "mmnla/entanglement.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::entanglement {
namespace {

using fock::Arm;
using fock::BipartiteDensity;

// Lossy TMSV built entry by entry from the Kraus expansion, then measured
// with a dense eigensolver: rho = sum_l (1 x K_l)|psi><psi|(1 x K_l)^dag with
// |psi> = sum_n c_n |n, n>.
double dense_lossy_tmsv_logneg(double r, double eta, std::size_t n_max) {
  const auto c = fock::tmsv_schmidt(r, n_max);
  const auto d = static_cast<Eigen::Index>((n_max + 1) * (n_max + 1));
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t l = 0; l <= n_max; ++l) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    for (std::size_t n = l; n <= n_max; ++n) {
      const double k = std::sqrt(std::exp(numeric::log_binomial(n, l))) * std::pow(eta, 0.5 * static_cast<double>(n - l)) *
                       std::pow(1 - eta, 0.5 * static_cast<double>(l));
      v(static_cast<Eigen::Index>(n * (n_max + 1) + (n - l))) = c[n] * k;
    }
    rho += v * v.transpose();
  }
  rho /= rho.trace();
  Eigen::MatrixXd pt(d, d);
  const auto m = static_cast<Eigen::Index>(n_max + 1);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index cc = 0; cc < m; ++cc)
        for (Eigen::Index dd = 0; dd < m; ++dd) pt(a * m + b, cc * m + dd) = rho(a * m + dd, cc * m + b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) neg += std::min(0.0, solver.eigenvalues()(i));
  return std::log2(1.0 - 2.0 * neg);
}

TEST(Scenarios, SupermodeWeights) {
  EXPECT_EQ(scenario_lambdas(1, 3), (std::vector<double>{1.0, 0.0, 0.0}));
  const auto two = scenario_lambdas(2, 3, 0.6);
  EXPECT_NEAR(two[1] / two[0], 0.6, 1e-15);
  EXPECT_NEAR(two[2] / two[0], 0.36, 1e-15);
  EXPECT_NEAR(normalization_measure(two, Normalization::SumSquares), 1.0, 1e-15);
  const auto three = scenario_lambdas(3, 4, 0.6, Normalization::Sum);
  for (double l : three) EXPECT_NEAR(l, 0.25, 1e-15);
  EXPECT_THROW(scenario_lambdas(4, 2), ValidationError);
  EXPECT_THROW(scenario_lambdas(2, 2, 1.5), ValidationError);
  EXPECT_THROW(scenario_lambdas(1, 0), ValidationError);
}

TEST(Scenarios, NormalizationNames) {
  EXPECT_EQ(parse_normalization("sum"), Normalization::Sum);
  EXPECT_EQ(parse_normalization("sum_squares"), Normalization::SumSquares);
  EXPECT_THROW(parse_normalization("l2"), ValidationError);
}

TEST(PdcSpec, GainFromFirstSupermodeSqueezing) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(2, 3), 5.0);
  EXPECT_NEAR(spec.squeezing()[0], 5.0 / numeric::kDbPerNeper, 1e-15);
  EXPECT_NEAR(spec.squeezing()[1] / spec.squeezing()[0], 0.6, 1e-15);
  EXPECT_THROW((PdcSpec{1.0, {0.5, 0.5}, Normalization::SumSquares}.validate()), ValidationError);
  EXPECT_NO_THROW((PdcSpec{1.0, {0.5, 0.5}, Normalization::Sum}.validate()));
}

TEST(BuildPdc, PairsAreTmsvSchmidtVectors) {
  const PdcSpec spec{0.5, scenario_lambdas(2, 2), Normalization::SumSquares};
  const auto pairs = build_pdc(spec, 30);
  ASSERT_EQ(pairs.size(), 2u);
  const double r2 = spec.squeezing()[1];
  EXPECT_NEAR(pairs[1][3], std::pow(std::tanh(r2), 3) / std::cosh(r2), 1e-15);
}

TEST(Reference, LosslessEqualsTwiceSqueezingOverLn2) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(3, 3), 3.0);
  double expect = 0.0;
  for (double r : spec.squeezing()) expect += 2.0 * r / std::log(2.0);
  const auto ref = reference_no_nla(spec, fock::Channel::from_attenuation_db(0.0), pdc_truncation(spec));
  EXPECT_NEAR(ref.total_logneg, expect, 1e-3);
  EXPECT_EQ(ref.success_prob, 1.0);
}

TEST(Reference, LossyPairMatchesDenseComputation) {
  for (double db : {1.0, 5.0, 12.0}) {
    const PdcSpec spec{0.4, {1.0}, Normalization::SumSquares};
    const auto ref = reference_no_nla(spec, fock::Channel::from_attenuation_db(db), 14);
    EXPECT_NEAR(ref.total_logneg, dense_lossy_tmsv_logneg(0.4, numeric::attenuation_db_to_eta(db), 14), 1e-10) << db;
  }
}

TEST(Reference, DecreasesWithAttenuation) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(1, 1), 5.0);
  double previous = 1e9;
  for (double db = 0.0; db <= 30.0; db += 5.0) {
    const double e = reference_no_nla(spec, fock::Channel::from_attenuation_db(db), 20).total_logneg;
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(Spectators, OperatorPerStrategy) {
  EXPECT_FALSE(spectator_operator({nla::Kind::QS, 2, 0.3}, Strategy::Filtered, 5).has_value());
  EXPECT_EQ((*spectator_operator({nla::Kind::QS, 2, 0.3}, Strategy::Unfiltered, 5))[1], 0.0);
  EXPECT_NEAR((*spectator_operator({nla::Kind::PC, 2, 0.3}, Strategy::Unfiltered, 5))[2], 0.3, 1e-15);
  EXPECT_NEAR((*spectator_operator({nla::Kind::CascadedPC, 2, 0.3}, Strategy::Unfiltered, 5))[1], 0.3, 1e-15);
}

TEST(Distill, UnfilteredScissorsProjectsSpectatorsOntoVacuum) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(3, 2), 3.0);
  const double eta = 0.5;
  const auto channel = fock::Channel::from_transmissivity(eta);
  const DistillScenario s{spec, channel, {nla::Kind::QS, 2, 0.3}, Strategy::Unfiltered, 1};
  const auto result = distill(s, 20);
  EXPECT_EQ(result.per_supermode_logneg[1], 0.0);
  // Receiver vacuum probability of the second lossy pair.
  const auto c = fock::tmsv_schmidt(spec.squeezing()[1], 20);
  double p_vac = 0.0;
  for (std::size_t n = 0; n <= 20; ++n) p_vac += c[n] * c[n] * std::pow(1 - eta, static_cast<double>(n));
  const DistillScenario alone{PdcSpec{spec.squeezing()[0], {1.0}, Normalization::SumSquares}, channel,
                              {nla::Kind::QS, 2, 0.3}, Strategy::Filtered, 1};
  const auto amplified = distill(alone, 20);
  EXPECT_NEAR(result.success_prob, amplified.success_prob * p_vac, 1e-12);
  EXPECT_NEAR(result.per_supermode_logneg[0], amplified.total_logneg, 1e-12);
}

TEST(Distill, FilteredLeavesSpectatorsUntouched) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(2, 3), 4.0);
  const auto channel = fock::Channel::from_attenuation_db(6.0);
  const auto ref = reference_no_nla(spec, channel, 20);
  const auto out = distill({spec, channel, {nla::Kind::PC, 2, 0.1}, Strategy::Filtered, 2}, 20);
  EXPECT_EQ(out.per_supermode_logneg[0], ref.per_supermode_logneg[0]);
  EXPECT_EQ(out.per_supermode_logneg[2], ref.per_supermode_logneg[2]);
  EXPECT_NE(out.per_supermode_logneg[1], ref.per_supermode_logneg[1]);
}

TEST(Distill, SuccessProbabilityIsProductOverSupermodes) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(2, 3), 4.0);
  const auto channel = fock::Channel::from_attenuation_db(3.0);
  const DistillPipeline pipe(spec, channel, 20);
  const nla::NlaSpec amp{nla::Kind::PC, 2, 0.15};
  const auto result = pipe.evaluate(amp, Strategy::Unfiltered, 1);
  double product = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto op = k == 0 ? nla::nla_diagonal(amp, 20) : fock::DiagonalOperator::attenuator(0.15, 20);
    product *= fock::apply_diagonal(pipe.lossy(k), Arm::B, op).trace();
  }
  EXPECT_NEAR(result.success_prob, product, 1e-14);
}

TEST(Distill, ScissorsCannotBeatLosslessReference) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(1, 1), 5.0);
  const DistillPipeline pipe(spec, fock::Channel::from_attenuation_db(0.0), 20);
  const double ref = pipe.reference().total_logneg;
  for (double t = 0.05; t < 1.0; t += 0.05) {
    EXPECT_LT(pipe.evaluate(nla::NlaSpec{nla::Kind::QS, 2, t}, Strategy::Unfiltered, 1).total_logneg, ref);
  }
}

TEST(Distill, RejectsBadAmplifiedIndex) {
  const auto spec = PdcSpec::from_first_squeezing_db(scenario_lambdas(1, 2), 3.0);
  EXPECT_THROW(distill({spec, fock::Channel::from_attenuation_db(0.0), {}, Strategy::Filtered, 3}, 10),
               ValidationError);
  EXPECT_THROW(distill({spec, fock::Channel::from_attenuation_db(0.0), {}, Strategy::Filtered, 0}, 10),
               ValidationError);
}

TEST(Distill, StrategyNames) {
  EXPECT_EQ(parse_strategy("filtered"), Strategy::Filtered);
  EXPECT_EQ(to_string(Strategy::Unfiltered), "unfiltered");
  EXPECT_THROW(parse_strategy("none"), ValidationError);
}

TEST(CascadeCompare, SingleUnitArmsCoincide) {
  const auto c = cascade_compare(numeric::squeezing_db_to_r(3.0), 1, 24);
  EXPECT_NEAR(c.parallel.logneg_max, c.cascaded.logneg_max, 1e-12);
  EXPECT_NEAR(c.parallel.success_prob, c.cascaded.success_prob, 1e-12);
  EXPECT_EQ(c.parallel.t, c.cascaded.t);
}

}  // namespace
}  // namespace mmnla::entanglement
