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

// Oracle-versus-closed-form checks behind the `verify` subcommand. The closed
// forms are passed in as callables so a deliberately broken build can be
// injected and shown to fail.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmnla/fock.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/oracle.hpp"

namespace mmnla::oracle {

struct ClosedForms {
  /// Entry n of the parallel PC amplifier diagonal.
  std::function<std::vector<double>(int units, double t, std::size_t n_max)> pc_nla;
  /// Entry n of the parallel QS amplifier diagonal.
  std::function<std::vector<double>(int units, double t, std::size_t n_max)> qs_nla;
  /// Single catalysis unit, diagonal entry n.
  std::function<double(double t, std::size_t n)> pc_stage;
  /// Single scissors unit: coefficients of |0><0| and |1><1|.
  std::function<std::array<double, 2>(double t1, double t2)> qs_unit;

  static ClosedForms library() {
    auto as_vector = [](const fock::DiagonalOperator& d) { return std::vector<double>(d.coeffs().begin(), d.coeffs().end()); };
    return {
        [as_vector](int u, double t, std::size_t n) { return as_vector(nla::pc_nla_diagonal(u, t, n)); },
        [as_vector](int u, double t, std::size_t n) { return as_vector(nla::qs_nla_diagonal(u, t, n)); },
        [](double t, std::size_t n) { return nla::pc_stage_coefficient(t, n); },
        [](double t1, double t2) {
          return std::array<double, 2>{std::sqrt(t1 * t2), std::sqrt((1.0 - t1) * (1.0 - t2))};
        },
    };
  }
};

struct VerifyOptions {
  std::vector<double> t_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  std::optional<double> tolerance;  ///< replaces every per-check tolerance
};

struct CheckReport {
  std::string name;
  double tolerance = 0.0;
  double deviation = 0.0;
  bool passed = false;
};

namespace detail {

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Eigen::MatrixXcd diagonal_matrix(const std::vector<double>& d) {
  const auto dim = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace detail

inline std::vector<CheckReport> run_verification(const VerifyOptions& options = {},
                                                 const ClosedForms& forms = ClosedForms::library()) {
  std::vector<CheckReport> out;
  auto record = [&](std::string name, double tolerance, double deviation) {
    const double tol = options.tolerance.value_or(tolerance);
    out.push_back({std::move(name), tol, deviation, std::isfinite(deviation) && deviation <= tol});
  };
  const auto& grid = options.t_grid;

  {  // Parallel PC amplifier against the composition sum. Errors are taken
     // relative to the largest coefficient of each (N, T) row, since some
     // entries cancel to exactly zero.
    double dev = 0.0;
    for (int units = 1; units <= 3; ++units) {
      for (double t : grid) {
        const auto closed = forms.pc_nla(units, t, 8);
        std::vector<double> brute(9);
        double scale = 0.0;
        for (int n = 0; n <= 8; ++n) {
          brute[static_cast<std::size_t>(n)] = pc_nla_multinomial(units, t, n);
          scale = std::max({scale, std::abs(brute[static_cast<std::size_t>(n)]), std::abs(closed[static_cast<std::size_t>(n)])});
        }
        for (std::size_t n = 0; n <= 8; ++n) dev = std::max(dev, std::abs(brute[n] - closed[n]) / scale);
      }
    }
    record("pc_nla_vs_multinomial", 1e-10, dev);
  }

  {  // Single scissors, both detection patterns.
    double dev = 0.0, dev_alt = 0.0;
    for (double t1 : grid) {
      for (double t2 : grid) {
        const auto c = forms.qs_unit(t1, t2);
        Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
        expect(0, 0) = c[0];
        expect(1, 1) = c[1];
        dev = std::max(dev, detail::max_abs(qs_circuit_operator(t1, t2, 3).operator_matrix - expect));
        // The other pattern swaps the roles of T1 and 1 - T1 and flips |1>.
        const auto c_alt = forms.qs_unit(1.0 - t1, t2);
        expect(0, 0) = c_alt[0];
        expect(1, 1) = -c_alt[1];
        dev_alt = std::max(
            dev_alt,
            detail::max_abs(qs_circuit_operator(t1, t2, 3, ScissorsPattern::OnePhotonAtC).operator_matrix - expect));
      }
    }
    record("qs_circuit", 1e-10, dev);
    record("qs_circuit_alternate_pattern", 1e-10, dev_alt);
  }

  {  // Scissors on a two-bin supermode.
    const std::array<std::array<complex, 2>, 3> gammas{{
        {complex(1.0), complex(0.0)},
        {complex(std::sqrt(0.5)), complex(std::sqrt(0.5))},
        {complex(0.6), complex(0.0, 0.8)},
    }};
    double dev = 0.0, cross = 0.0;
    for (const auto& gamma : gammas) {
      for (double t1 : grid) {
        for (double t2 : grid) {
          const auto m = multimode_qs_operator(t1, t2, gamma).operator_matrix;
          const auto c = forms.qs_unit(t1, t2);
          dev = std::max({dev, std::abs(m(0, 0) - c[0]), std::abs(m(1, 1) - c[1]), std::abs(m(0, 1)), std::abs(m(1, 0))});
          cross = std::max({cross, std::abs(m(3, 1)), std::abs(m(1, 3)), std::abs(m(3, 3)), std::abs(m(3, 0)),
                            std::abs(m(0, 3))});
        }
      }
    }
    record("qs_multimode", 1e-10, dev);
    record("qs_multimode_cross_supermode", 1e-12, cross);
  }

  {  // Single catalysis unit.
    double dev = 0.0;
    for (double t : grid) {
      const auto m = pc_circuit_operator(t, 6).operator_matrix;
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(7, 7);
      for (std::size_t n = 0; n <= 6; ++n) expect(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = forms.pc_stage(t, n);
      dev = std::max(dev, detail::max_abs(m - expect));
    }
    record("pc_circuit", 1e-10, dev);
  }

  {  // Full QS amplifier circuit. Each scissors unit at T1 = 1/2 contributes
     // an extra 1/sqrt(2) relative to the amplifier closed form.
    double dev = 0.0;
    for (int units = 1; units <= 3; ++units) {
      for (double t : grid) {
        const Eigen::MatrixXcd m = qs_nla_splitter_circuit(units, t, 6).operator_matrix * std::pow(2.0, 0.5 * units);
        dev = std::max(dev, detail::max_abs(m - detail::diagonal_matrix(forms.qs_nla(units, t, 6))));
      }
    }
    record("qs_nla_circuit", 1e-9, dev);
  }

  {  // Full PC amplifier circuit.
    double dev = 0.0;
    for (int units = 1; units <= 3; ++units) {
      for (double t : grid) {
        const Eigen::MatrixXcd m = pc_nla_splitter_circuit(units, t, 6).operator_matrix;
        dev = std::max(dev, detail::max_abs(m - detail::diagonal_matrix(forms.pc_nla(units, t, 6))));
      }
    }
    record("pc_nla_circuit", 1e-9, dev);
  }

  {  // Splitter network and two-mode beam splitter unitarity.
    double dev = 0.0;
    for (int ports = 1; ports <= 8; ++ports) {
      const auto u = n_splitter(ports);
      const auto p = static_cast<Eigen::Index>(ports);
      dev = std::max(dev, detail::max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(p, p)));
      const double uniform = 1.0 / std::sqrt(static_cast<double>(ports));
      for (Eigen::Index i = 0; i < p; ++i) {
        dev = std::max({dev, std::abs(u(0, i) - uniform), std::abs(u(i, 0) - uniform)});
      }
    }
    record("n_splitter_unitarity", 1e-12, dev);

    double bs_dev = 0.0;
    for (double t : grid) {
      const fock::BeamSplitter bs(t, 20);
      for (std::size_t n = 0; n <= 20; ++n) {
        const auto& b = bs.block(n);
        bs_dev = std::max(bs_dev, (b.transpose() * b - Eigen::MatrixXd::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff());
      }
    }
    record("beam_splitter_unitarity", 1e-12, bs_dev);
  }
  return out;
}

inline bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

}  // namespace mmnla::oracle
