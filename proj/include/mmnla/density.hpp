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

// Two-mode density matrices over |n>_A (x) |m>_B with both arms truncated at
// the same n_max. Basis index of |n, m> is n * (n_max + 1) + m.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmnla/errors.hpp"
#include "mmnla/fock.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::fock {

enum class Arm { A, B };

inline constexpr double kHermiticityTolerance = 1e-12;

/// Pure-loss channel. Transmissivity eta = 10^(-dB/10).
class Channel {
 public:
  static Channel from_attenuation_db(double db) {
    if (!(db >= 0.0) || !std::isfinite(db)) throw ValidationError("channel attenuation must be finite and >= 0 dB");
    return Channel(numeric::attenuation_db_to_eta(db), db);
  }
  /// eta = 0 (complete loss) is accepted here; its attenuation is +inf dB.
  static Channel from_transmissivity(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("channel transmissivity must lie in [0, 1]");
    return Channel(eta, eta > 0.0 ? -10.0 * std::log10(eta) : std::numeric_limits<double>::infinity());
  }

  double transmissivity() const { return eta_; }
  double attenuation_db() const { return db_; }

 private:
  Channel(double eta, double db) : eta_(eta), db_(db) {}
  double eta_;
  double db_;
};

/// Kraus amplitudes of the pure-loss channel: table[m][l] is the coefficient
/// of K_l |m> = sqrt(C(m,l)) eta^((m-l)/2) (1-eta)^(l/2) |m-l>.
inline std::vector<std::vector<double>> loss_kraus_table(double eta, std::size_t n_max) {
  std::vector<std::vector<double>> table(n_max + 1);
  for (std::size_t m = 0; m <= n_max; ++m) {
    table[m].resize(m + 1);
    for (std::size_t l = 0; l <= m; ++l) {
      const double kept = static_cast<double>(m - l);
      const double lost = static_cast<double>(l);
      // pow(0, 0) == 1 handles eta in {0, 1} exactly.
      table[m][l] = std::sqrt(std::exp(numeric::log_binomial(m, l))) * std::pow(eta, 0.5 * kept) *
                    std::pow(1.0 - eta, 0.5 * lost);
    }
  }
  return table;
}

class BipartiteDensity {
 public:
  BipartiteDensity(Eigen::MatrixXcd matrix, std::size_t n_max) : matrix_(std::move(matrix)), n_max_(n_max) {
    const auto d = static_cast<Eigen::Index>((n_max + 1) * (n_max + 1));
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw ValidationError("BipartiteDensity dimension does not match (n_max+1)^2");
    if (!matrix_.allFinite()) throw ValidationError("BipartiteDensity entries must be finite");
    if (!is_hermitian(kHermiticityTolerance)) throw ValidationError("BipartiteDensity is not Hermitian");
    if (trace() > 1.0 + kNormalizationTolerance) throw ValidationError("BipartiteDensity trace exceeds one");
  }

  /// |psi><psi| for a two-mode amplitude vector in the product basis.
  static BipartiteDensity from_pure(const Eigen::VectorXcd& psi, std::size_t n_max) {
    return BipartiteDensity(psi * psi.adjoint(), n_max);
  }

  /// sum_{n,m} c_n c_m |n,n><m,m| for Schmidt coefficients c.
  static BipartiteDensity from_schmidt(std::span<const double> c) {
    if (c.empty()) throw ValidationError("Schmidt coefficient list is empty");
    const std::size_t n_max = c.size() - 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>((n_max + 1) * (n_max + 1)));
    for (std::size_t n = 0; n <= n_max; ++n) psi(index(n, n, n_max)) = c[n];
    return from_pure(psi, n_max);
  }

  static Eigen::Index index(std::size_t a, std::size_t b, std::size_t n_max) {
    return static_cast<Eigen::Index>(a * (n_max + 1) + b);
  }

  std::size_t n_max() const { return n_max_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Trace of the matrix; the heralding probability when sub-normalised.
  double trace() const { return matrix_.trace().real(); }

  double hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

  bool is_hermitian(double tolerance) const {
    const double tol2 = tolerance * tolerance;
    const Eigen::Index d = matrix_.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        if (std::norm(matrix_(i, j) - std::conj(matrix_(j, i))) >= tol2) return false;
      }
    }
    return true;
  }

  BipartiteDensity normalized() const {
    const double t = trace();
    if (!(t > 0.0)) throw NumericalError("cannot normalise a density matrix with zero trace");
    return BipartiteDensity(matrix_ / t, n_max_);
  }

  /// Diagonal of the reduced state on one arm.
  std::vector<double> marginal_populations(Arm arm) const {
    std::vector<double> p(n_max_ + 1, 0.0);
    for (std::size_t a = 0; a <= n_max_; ++a) {
      for (std::size_t b = 0; b <= n_max_; ++b) {
        const auto i = index(a, b, n_max_);
        p[arm == Arm::A ? a : b] += matrix_(i, i).real();
      }
    }
    return p;
  }

  /// Smallest eigenvalue; used by tests to check positivity.
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

 private:
  Eigen::MatrixXcd matrix_;
  std::size_t n_max_;
};

/// Truncation guard applied to both marginals of a produced state.
inline void guard_truncation(const BipartiteDensity& rho, const std::string& what) {
  guard_top_bin(rho.marginal_populations(Arm::A), what + " (arm A)");
  guard_top_bin(rho.marginal_populations(Arm::B), what + " (arm B)");
}

/// Sends one arm through a pure-loss channel. Trace preserving.
inline BipartiteDensity apply_loss(const BipartiteDensity& rho, Arm arm, const Channel& channel) {
  const std::size_t n = rho.n_max();
  const auto kraus = loss_kraus_table(channel.transmissivity(), n);
  const auto& in = rho.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
  const auto idx = [n](std::size_t a, std::size_t b) { return BipartiteDensity::index(a, b, n); };
  // For arm B: out[(a,b),(c,d)] = sum_l K[b+l][l] K[d+l][l] in[(a,b+l),(c,d+l)].
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; b <= n; ++b) {
      for (std::size_t c = 0; c <= n; ++c) {
        for (std::size_t d = 0; d <= n; ++d) {
          const std::size_t lossy_row = arm == Arm::B ? b : a;
          const std::size_t lossy_col = arm == Arm::B ? d : c;
          const std::size_t l_max = n - std::max(lossy_row, lossy_col);
          complex acc = 0.0;
          for (std::size_t l = 0; l <= l_max; ++l) {
            const double k = kraus[lossy_row + l][l] * kraus[lossy_col + l][l];
            if (k == 0.0) continue;
            const auto i = arm == Arm::B ? idx(a, b + l) : idx(a + l, b);
            const auto j = arm == Arm::B ? idx(c, d + l) : idx(c + l, d);
            acc += k * in(i, j);
          }
          out(idx(a, b), idx(c, d)) = acc;
        }
      }
    }
  }
  return BipartiteDensity(std::move(out), n);
}

/// D rho D^dag with D acting on one arm. The result is left unnormalised; its
/// trace is the probability of the heralded event D describes.
inline BipartiteDensity apply_diagonal(const BipartiteDensity& rho, Arm arm, const DiagonalOperator& op) {
  const std::size_t n = rho.n_max();
  if (op.n_max() < n) throw ValidationError("diagonal operator truncation is smaller than the density's");
  Eigen::VectorXd weight(static_cast<Eigen::Index>(rho.dim()));
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; b <= n; ++b) weight(BipartiteDensity::index(a, b, n)) = op[arm == Arm::B ? b : a];
  }
  Eigen::MatrixXcd out = rho.matrix();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = (out.col(j).array() * (weight.array() * weight(j)).cast<complex>()).matrix();
  }
  return BipartiteDensity(std::move(out), n);
}

/// Partial transpose on one arm: <a,b|rho^T_B|c,d> = <a,d|rho|c,b>.
inline Eigen::MatrixXcd partial_transpose(const BipartiteDensity& rho, Arm arm) {
  const std::size_t n = rho.n_max();
  const auto& in = rho.matrix();
  Eigen::MatrixXcd out(in.rows(), in.cols());
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; b <= n; ++b) {
      for (std::size_t c = 0; c <= n; ++c) {
        for (std::size_t d = 0; d <= n; ++d) {
          const auto src = arm == Arm::B
                               ? std::pair{BipartiteDensity::index(a, d, n), BipartiteDensity::index(c, b, n)}
                               : std::pair{BipartiteDensity::index(c, b, n), BipartiteDensity::index(a, d, n)};
          out(BipartiteDensity::index(a, b, n), BipartiteDensity::index(c, d, n)) = in(src.first, src.second);
        }
      }
    }
  }
  return out;
}

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix, ascending. The matrix is first split
/// into the connected components of its non-zero pattern, which are
/// diagonalised independently. Loss and Fock-diagonal filtering of a
/// two-mode squeezed state keep its partial transpose block diagonal in the
/// total photon number, so this is what makes large sweeps affordable.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  const auto dim = static_cast<std::size_t>(h.rows());
  std::vector<std::size_t> parent(dim);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = j + 1; i < dim; ++i) {
      const auto& v = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v.real() != 0.0 || v.imag() != 0.0) {
        const auto ri = detail::find_root(parent, i);
        const auto rj = detail::find_root(parent, j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(dim);
  for (std::size_t i = 0; i < dim; ++i) groups[detail::find_root(parent, i)].push_back(static_cast<Eigen::Index>(i));

  std::vector<double> eigenvalues;
  eigenvalues.reserve(dim);
  for (const auto& g : groups) {
    if (g.empty()) continue;
    if (g.size() == 1) {
      eigenvalues.push_back(h(g[0], g[0]).real());
      continue;
    }
    const auto k = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = h(g[r], g[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub, Eigen::EigenvaluesOnly);
    for (Eigen::Index r = 0; r < k; ++r) eigenvalues.push_back(solver.eigenvalues()(r));
  }
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

/// |sum of negative eigenvalues| of the partial transpose. The state must be
/// normalised.
inline double negativity(const BipartiteDensity& rho) {
  const double t = rho.trace();
  if (std::abs(t - 1.0) > kNormalizationTolerance) {
    throw NotNormalizedError("negativity needs a unit-trace density matrix, got trace " + numeric::format_g(t));
  }
  double negative = 0.0;
  for (double ev : hermitian_eigenvalues(partial_transpose(rho, Arm::B))) {
    if (ev < 0.0) negative += ev;
  }
  return -negative;
}

/// log2(1 + 2 * negativity).
inline double log_negativity(const BipartiteDensity& rho) { return std::log2(1.0 + 2.0 * negativity(rho)); }

}  // namespace mmnla::fock
