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
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mmnla/density.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/fock.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::fock {
namespace {

Eigen::MatrixXcd random_density(Eigen::Index dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = complex(normal(rng), normal(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Dense Kraus operators of the pure-loss channel on one mode.
std::vector<Eigen::MatrixXcd> dense_loss_kraus(double eta, std::size_t n_max) {
  std::vector<Eigen::MatrixXcd> ks;
  const auto d = static_cast<Eigen::Index>(n_max + 1);
  for (std::size_t l = 0; l <= n_max; ++l) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t m = l; m <= n_max; ++m) {
      const double binom = std::exp(numeric::log_binomial(m, l));
      k(static_cast<Eigen::Index>(m - l), static_cast<Eigen::Index>(m)) =
          std::sqrt(binom) * std::pow(eta, 0.5 * static_cast<double>(m - l)) *
          std::pow(1.0 - eta, 0.5 * static_cast<double>(l));
    }
    ks.push_back(k);
  }
  return ks;
}

Eigen::MatrixXcd dense_loss(const Eigen::MatrixXcd& rho, Arm arm, double eta, std::size_t n_max) {
  const auto id = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n_max + 1), static_cast<Eigen::Index>(n_max + 1));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& k : dense_loss_kraus(eta, n_max)) {
    const Eigen::MatrixXcd full = arm == Arm::B ? kron(id, k) : kron(k, id);
    out += full * rho * full.adjoint();
  }
  return out;
}

std::vector<double> dense_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  std::vector<double> v(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Channel, Conversions) {
  EXPECT_NEAR(Channel::from_attenuation_db(10.0).transmissivity(), 0.1, 1e-15);
  EXPECT_EQ(Channel::from_attenuation_db(0.0).transmissivity(), 1.0);
  EXPECT_NEAR(Channel::from_transmissivity(0.5).attenuation_db(), 3.010299956639812, 1e-12);
  EXPECT_TRUE(std::isinf(Channel::from_transmissivity(0.0).attenuation_db()));
  EXPECT_THROW(Channel::from_attenuation_db(-1.0), ValidationError);
  EXPECT_THROW(Channel::from_transmissivity(1.5), ValidationError);
}

TEST(BipartiteDensity, Validation) {
  EXPECT_THROW(BipartiteDensity(Eigen::MatrixXcd::Identity(5, 5), 1), ValidationError);
  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(4, 4);
  skew(0, 0) = 0.5;
  skew(0, 1) = 0.1;
  EXPECT_THROW(BipartiteDensity(skew, 1), ValidationError);
  EXPECT_THROW(BipartiteDensity(Eigen::MatrixXcd::Identity(4, 4), 1), ValidationError);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(4, 4);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(BipartiteDensity(bad, 1), ValidationError);
}

TEST(LossChannel, MatchesDenseKrausSum) {
  const std::size_t n = 4;
  const BipartiteDensity rho(random_density(25, 7), n);
  for (Arm arm : {Arm::A, Arm::B}) {
    for (double eta : {0.0, 0.3, 0.9, 1.0}) {
      const auto fast = apply_loss(rho, arm, Channel::from_transmissivity(eta));
      EXPECT_LT(max_abs(fast.matrix() - dense_loss(rho.matrix(), arm, eta, n)), 1e-13) << eta;
    }
  }
}

TEST(LossChannel, TracePreservingOnGrid) {
  const BipartiteDensity rho(random_density(36, 11), 5);
  for (int i = 1; i <= 9; ++i) {
    const double eta = 0.1 * i;
    EXPECT_NEAR(apply_loss(rho, Arm::B, Channel::from_transmissivity(eta)).trace(), rho.trace(), 1e-12) << eta;
  }
}

TEST(LossChannel, FockPopulationsAreBinomial) {
  const std::size_t n = 6;
  const auto rho = BipartiteDensity::from_schmidt(std::vector<double>{0, 0, 0, 0, 0, 0, 1.0});
  const double eta = 0.35;
  const auto pops = apply_loss(rho, Arm::B, Channel::from_transmissivity(eta)).marginal_populations(Arm::B);
  for (std::size_t k = 0; k <= n; ++k) {
    const double p = std::exp(numeric::log_binomial(n, k)) * std::pow(eta, static_cast<double>(k)) *
                     std::pow(1 - eta, static_cast<double>(n - k));
    EXPECT_NEAR(pops[k], p, 1e-14);
  }
}

TEST(LossChannel, LeavesOtherMarginalUnchanged) {
  const BipartiteDensity rho(random_density(25, 3), 4);
  const auto before = rho.marginal_populations(Arm::A);
  const auto after = apply_loss(rho, Arm::B, Channel::from_transmissivity(0.4)).marginal_populations(Arm::A);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-14);
}

TEST(ApplyDiagonal, MatchesDenseSandwich) {
  const std::size_t n = 3;
  const BipartiteDensity rho(random_density(16, 5), n);
  const DiagonalOperator op({0.9, -0.4, 0.2, 0.05});
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) d(i, i) = op[static_cast<std::size_t>(i)];
  const auto id = Eigen::MatrixXcd::Identity(4, 4);
  for (Arm arm : {Arm::A, Arm::B}) {
    const Eigen::MatrixXcd full = arm == Arm::B ? kron(id, d) : kron(d, id);
    const auto out = apply_diagonal(rho, arm, op);
    EXPECT_LT(max_abs(out.matrix() - full * rho.matrix() * full.adjoint()), 1e-15);
  }
}

TEST(PartialTranspose, IsAnInvolution) {
  const BipartiteDensity rho(random_density(25, 9), 4);
  for (Arm arm : {Arm::A, Arm::B}) {
    const BipartiteDensity once(partial_transpose(rho, arm), 4);
    EXPECT_LT(max_abs(partial_transpose(once, arm) - rho.matrix()), 1e-15);
  }
}

TEST(PartialTranspose, ArmsDifferByFullTranspose) {
  const BipartiteDensity rho(random_density(16, 13), 3);
  EXPECT_LT(max_abs(partial_transpose(rho, Arm::A) - partial_transpose(rho, Arm::B).transpose()), 1e-15);
}

TEST(HermitianEigenvalues, AgreeWithDenseSolver) {
  const BipartiteDensity rho(random_density(25, 17), 4);
  const auto pt = partial_transpose(rho, Arm::B);
  const auto fast = hermitian_eigenvalues(pt);
  const auto dense = dense_eigenvalues(pt);
  ASSERT_EQ(fast.size(), dense.size());
  for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], dense[i], 1e-12);
}

TEST(HermitianEigenvalues, BlockStructuredInputAgreesWithDenseSolver) {
  const std::size_t n = 12;
  const auto lossy = apply_loss(BipartiteDensity::from_schmidt(tmsv_schmidt(0.6, n, 1e-4)), Arm::B,
                                Channel::from_transmissivity(0.4));
  const auto pt = partial_transpose(lossy, Arm::B);
  const auto fast = hermitian_eigenvalues(pt);
  const auto dense = dense_eigenvalues(pt);
  for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], dense[i], 1e-12);
}

TEST(Negativity, PureStateFromSchmidtCoefficients) {
  // For a pure state with normalised Schmidt coefficients c_n the negativity
  // is ((sum c_n)^2 - 1) / 2.
  for (double r : {0.1, 0.5, 0.9}) {
    auto c = tmsv_schmidt(r, 30, 1e-6);
    double s2 = 0.0;
    for (double x : c) s2 += x * x;
    for (double& x : c) x /= std::sqrt(s2);
    double s1 = 0.0;
    for (double x : c) s1 += x;
    EXPECT_NEAR(negativity(BipartiteDensity::from_schmidt(c)), 0.5 * (s1 * s1 - 1.0), 1e-10) << r;
  }
}

TEST(Negativity, TmsvLogNegativity) {
  for (double r : {0.1, 0.3, 0.5}) {
    const auto c = tmsv_schmidt(r, 40);
    EXPECT_NEAR(log_negativity(BipartiteDensity::from_schmidt(c).normalized()), 2.0 * r / std::log(2.0), 1e-6);
  }
}

TEST(Negativity, ProductStatesAreNotEntangled) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXcd product = kron(random_density(4, seed), random_density(4, seed + 10));
    EXPECT_NEAR(negativity(BipartiteDensity(product, 3)), 0.0, 1e-10);
  }
  const auto vac = BipartiteDensity::from_schmidt(std::vector<double>{1.0, 0.0, 0.0});
  EXPECT_EQ(log_negativity(vac), 0.0);
}

TEST(Negativity, LossNeverIncreasesEntanglement) {
  const auto rho = BipartiteDensity::from_schmidt(tmsv_schmidt(0.7, 25));
  double previous = log_negativity(rho.normalized());
  for (double db : {1.0, 3.0, 6.0, 10.0, 20.0}) {
    const double e = log_negativity(apply_loss(rho, Arm::B, Channel::from_attenuation_db(db)).normalized());
    EXPECT_LE(e, previous + 1e-12);
    EXPECT_GT(e, 0.0);
    previous = e;
  }
}

TEST(Negativity, RequiresUnitTrace) {
  const auto c = tmsv_schmidt(0.3, 20);
  const auto rho = apply_diagonal(BipartiteDensity::from_schmidt(c), Arm::A, DiagonalOperator::attenuator(0.5, 20));
  EXPECT_THROW(negativity(rho), NotNormalizedError);
  EXPECT_NO_THROW(negativity(rho.normalized()));
}

TEST(TruncationGuard, FlagsPopulatedTopBin) {
  EXPECT_THROW(guard_truncation(BipartiteDensity::from_schmidt(tmsv_schmidt(1.0, 10, 1.0)), "tmsv"), TruncationError);
  EXPECT_NO_THROW(guard_truncation(BipartiteDensity::from_schmidt(tmsv_schmidt(0.3, 30)), "tmsv"));
}

}  // namespace
}  // namespace mmnla::fock
