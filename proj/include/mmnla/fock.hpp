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

// Single-mode states and operators in a truncated Fock basis |0>..|n_max>,
// plus the two-mode beam splitter organised by total photon number.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmnla/errors.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::fock {

using complex = std::complex<double>;

/// Default tail-mass tolerance for analytically truncated states.
inline constexpr double kCoherentTailTolerance = 1e-8;
inline constexpr double kSchmidtTailTolerance = 1e-10;

/// Populations in the top Fock bin must stay below this fraction of the
/// largest bin for a produced state to be trusted.
inline constexpr double kTopBinRatio = 1e-6;

/// Allowed deviation of a trace or norm from one.
inline constexpr double kNormalizationTolerance = 1e-10;

/// Throws TruncationError if the top bin of `populations` is not negligible.
inline void guard_top_bin(std::span<const double> populations, const std::string& what) {
  if (populations.empty()) return;
  double peak = 0.0;
  for (double p : populations) peak = std::max(peak, p);
  const double top = populations.back();
  if (peak > 0.0 && top >= kTopBinRatio * peak) {
    throw TruncationError(what + ": top Fock bin n=" + std::to_string(populations.size() - 1) +
                          " holds " + numeric::format_g(top / peak) +
                          " of the peak population; increase the truncation");
  }
}

/// Amplitudes of a single-mode pure state. The squared norm may be below one;
/// it then carries the probability of the heralding event that produced it.
class PureState {
 public:
  explicit PureState(std::vector<complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw ValidationError("PureState needs at least one amplitude");
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw ValidationError("PureState amplitudes must be finite");
    }
    if (norm_squared() > 1.0 + 1e-12)
      throw ValidationError("PureState squared norm exceeds one");
  }

  std::size_t n_max() const { return amps_.size() - 1; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const complex> amplitudes() const { return amps_; }
  const complex& operator[](std::size_t n) const { return amps_[n]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  std::vector<double> populations() const {
    std::vector<double> p(amps_.size());
    for (std::size_t n = 0; n < amps_.size(); ++n) p[n] = std::norm(amps_[n]);
    return p;
  }

  PureState normalized() const {
    const double norm = std::sqrt(norm_squared());
    if (norm == 0.0) throw NumericalError("cannot normalise the zero vector");
    std::vector<complex> out(amps_);
    for (auto& a : out) a /= norm;
    return PureState(std::move(out));
  }

 private:
  std::vector<complex> amps_;
};

/// Real Fock-diagonal operator sum_n d_n |n><n|.
class DiagonalOperator {
 public:
  explicit DiagonalOperator(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("DiagonalOperator needs at least one coefficient");
    for (double d : coeffs_) {
      if (!std::isfinite(d)) throw ValidationError("DiagonalOperator coefficients must be finite");
    }
  }

  static DiagonalOperator identity(std::size_t n_max) { return DiagonalOperator(std::vector<double>(n_max + 1, 1.0)); }

  /// Projector onto the vacuum, |0><0|.
  static DiagonalOperator vacuum_projector(std::size_t n_max) {
    std::vector<double> d(n_max + 1, 0.0);
    d[0] = 1.0;
    return DiagonalOperator(std::move(d));
  }

  /// Noiseless attenuator sqrt(T)^(a^dag a), i.e. d_n = sqrt(T)^n.
  static DiagonalOperator attenuator(double transmissivity, std::size_t n_max) {
    if (!(transmissivity > 0.0 && transmissivity <= 1.0))
      throw ValidationError("attenuator transmissivity must lie in (0, 1]");
    std::vector<double> d(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) d[n] = std::pow(transmissivity, 0.5 * static_cast<double>(n));
    return DiagonalOperator(std::move(d));
  }

  std::size_t n_max() const { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t n) const { return coeffs_[n]; }

  /// D|psi>. Requires the operator to cover the state's truncation.
  PureState apply(const PureState& psi) const {
    if (n_max() < psi.n_max()) throw ValidationError("DiagonalOperator truncation smaller than the state's");
    std::vector<complex> out(psi.dim());
    for (std::size_t n = 0; n < psi.dim(); ++n) out[n] = coeffs_[n] * psi[n];
    return PureState(std::move(out));
  }

 private:
  std::vector<double> coeffs_;
};

/// Coherent state e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>, evaluated in log space.
/// Throws TruncationError when more than `tail_tolerance` of the norm lies
/// beyond n_max.
inline PureState coherent_state(complex alpha, std::size_t n_max,
                                double tail_tolerance = kCoherentTailTolerance) {
  if (n_max < 1) throw ValidationError("coherent_state needs n_max >= 1");
  const double modulus = std::abs(alpha);
  const double phase = std::arg(alpha);
  std::vector<complex> amps(n_max + 1);
  amps[0] = std::exp(-0.5 * modulus * modulus);
  if (modulus > 0.0) {
    const double log_mod = std::log(modulus);
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double dn = static_cast<double>(n);
      const double log_mag = -0.5 * modulus * modulus + dn * log_mod - 0.5 * numeric::log_factorial(n);
      amps[n] = std::polar(std::exp(log_mag), dn * phase);
    }
  }
  double mass = 0.0;
  for (const auto& a : amps) mass += std::norm(a);
  if (1.0 - mass > tail_tolerance) {
    throw TruncationError("coherent state |alpha|=" + numeric::format_g(modulus) + " loses " +
                          numeric::format_g(1.0 - mass) + " of its norm beyond n_max=" + std::to_string(n_max));
  }
  return PureState(std::move(amps));
}

/// Schmidt coefficients tanh(r)^n / cosh(r) of the two-mode squeezed vacuum.
/// The discarded tail mass is tanh(r)^(2(n_max+1)).
inline std::vector<double> tmsv_schmidt(double r, std::size_t n_max,
                                        double tail_tolerance = kSchmidtTailTolerance) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("squeezing parameter must be finite and >= 0");
  const double t = std::tanh(r);
  std::vector<double> c(n_max + 1, 0.0);
  c[0] = 1.0 / std::cosh(r);
  for (std::size_t n = 1; n <= n_max; ++n) c[n] = c[n - 1] * t;
  const double tail = r == 0.0 ? 0.0 : std::pow(t, 2.0 * static_cast<double>(n_max + 1));
  if (tail > tail_tolerance) {
    throw TruncationError("two-mode squeezed vacuum r=" + numeric::format_g(r) + " has tail mass " +
                          numeric::format_g(tail) + " beyond n_max=" + std::to_string(n_max));
  }
  return c;
}

/// Smallest n_max whose TMSV tail mass at squeezing r is below `tail_tolerance`.
inline std::size_t schmidt_truncation_for(double r, double tail_tolerance = kSchmidtTailTolerance) {
  if (r <= 0.0) return 1;
  const double t2 = std::tanh(r) * std::tanh(r);
  // t2^(n+1) <= tol  <=>  n + 1 >= log(tol) / log(t2)
  const double need = std::log(tail_tolerance) / std::log(t2);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(need)) - 1);
}

/// Two-mode beam splitter exp[theta (x^dag y - x y^dag)] with cos(theta) =
/// sqrt(T). Photon number is conserved, so the operator is stored as one real
/// orthogonal block per total photon number; block(n) acts on |k, n-k>,
/// indexed by k = photons in mode x.
class BeamSplitter {
 public:
  BeamSplitter(double transmissivity, std::size_t n_total_max) : transmissivity_(transmissivity) {
    if (!(transmissivity > 0.0 && transmissivity < 1.0))
      throw ValidationError("beam splitter transmissivity must lie in (0, 1)");
    const double theta = std::acos(std::sqrt(transmissivity));
    blocks_.reserve(n_total_max + 1);
    for (std::size_t n = 0; n <= n_total_max; ++n) blocks_.push_back(make_block(n, theta));
  }

  double transmissivity() const { return transmissivity_; }
  std::size_t n_total_max() const { return blocks_.size() - 1; }
  const Eigen::MatrixXd& block(std::size_t n_total) const { return blocks_.at(n_total); }

  /// <k_out, l_out| U |k_in, l_in>.
  double amplitude(std::size_t k_out, std::size_t l_out, std::size_t k_in, std::size_t l_in) const {
    if (k_out + l_out != k_in + l_in) return 0.0;
    const auto& b = block(k_in + l_in);
    return b(static_cast<Eigen::Index>(k_out), static_cast<Eigen::Index>(k_in));
  }

  /// Generator x^dag y - x y^dag restricted to total photon number n.
  static Eigen::MatrixXd generator_block(std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
      const double amp = std::sqrt(static_cast<double>((k + 1) * (static_cast<Eigen::Index>(n) - k)));
      g(k + 1, k) = amp;   // x^dag y
      g(k, k + 1) = -amp;  // -x y^dag
    }
    return g;
  }

 private:
  static Eigen::MatrixXd make_block(std::size_t n, double theta) {
    // theta*G is real antisymmetric; H = iG is Hermitian, so
    // exp(theta G) = V exp(-i theta Lambda) V^dag.
    const Eigen::MatrixXcd h = complex(0.0, 1.0) * generator_block(n).cast<complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXcd phases =
        (complex(0.0, -theta) * solver.eigenvalues().cast<complex>()).array().exp().matrix();
    const Eigen::MatrixXcd u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return u.real();
  }

  double transmissivity_;
  std::vector<Eigen::MatrixXd> blocks_;
};

inline BeamSplitter beam_splitter_unitary(double transmissivity, std::size_t n_total_max) {
  return BeamSplitter(transmissivity, n_total_max);
}

}  // namespace mmnla::fock
