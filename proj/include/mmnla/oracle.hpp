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

// Brute-force linear-optics circuits used as ground truth for the closed-form
// amplifier operators. States live in a sparse multimode Fock register and
// are pushed through the actual beam splitters, splitter networks and
// detector projections.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "mmnla/errors.hpp"
#include "mmnla/fock.hpp"
#include "mmnla/numeric.hpp"

namespace mmnla::oracle {

using fock::complex;
using Occupation = std::vector<int>;

/// Sparse pure state of a fixed number of bosonic modes.
class FockRegister {
 public:
  explicit FockRegister(std::size_t modes) : modes_(modes) {}

  static FockRegister basis(const Occupation& occupation) {
    FockRegister r(occupation.size());
    r.terms_[occupation] = 1.0;
    return r;
  }

  std::size_t modes() const { return modes_; }
  const std::map<Occupation, complex>& terms() const { return terms_; }

  complex amplitude(const Occupation& occupation) const {
    const auto it = terms_.find(occupation);
    return it == terms_.end() ? complex{} : it->second;
  }

  void add(const Occupation& occupation, complex amp) {
    if (occupation.size() != modes_) throw ValidationError("occupation has the wrong number of modes");
    if (amp != complex{}) terms_[occupation] += amp;
  }

  int max_total_photons() const {
    int m = 0;
    for (const auto& [occ, amp] : terms_) {
      int s = 0;
      for (int k : occ) s += k;
      m = std::max(m, s);
    }
    return m;
  }

  /// Two-mode beam splitter exp[theta (x^dag y - x y^dag)] on modes x, y.
  void apply_beam_splitter(const fock::BeamSplitter& bs, std::size_t x, std::size_t y) {
    std::map<Occupation, complex> out;
    for (const auto& [occ, amp] : terms_) {
      const int total = occ[x] + occ[y];
      if (static_cast<std::size_t>(total) > bs.n_total_max())
        throw ValidationError("beam splitter built for too few photons");
      const auto& block = bs.block(static_cast<std::size_t>(total));
      for (int k = 0; k <= total; ++k) {
        const double u = block(k, occ[x]);
        if (u == 0.0) continue;
        Occupation next = occ;
        next[x] = k;
        next[y] = total - k;
        out[next] += u * amp;
      }
    }
    terms_ = std::move(out);
  }

  /// Passive linear optics on `ports`: a_i^dag -> sum_j u(j, i) a_j^dag.
  void apply_unitary(const Eigen::MatrixXcd& u, const std::vector<std::size_t>& ports) {
    const auto p = ports.size();
    if (static_cast<std::size_t>(u.rows()) != p || static_cast<std::size_t>(u.cols()) != p)
      throw ValidationError("unitary size does not match the port list");
    std::map<Occupation, complex> out;
    for (const auto& [occ, amp] : terms_) {
      // Expand prod_i (sum_j u(j,i) a_j^dag)^{n_i} / sqrt(n_i!) as a
      // polynomial in the output creation operators.
      std::map<Occupation, complex> poly{{Occupation(p, 0), amp}};
      for (std::size_t i = 0; i < p; ++i) {
        const int n_i = occ[ports[i]];
        for (int rep = 0; rep < n_i; ++rep) {
          std::map<Occupation, complex> next;
          for (const auto& [mono, c] : poly) {
            for (std::size_t j = 0; j < p; ++j) {
              const complex w = u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
              if (w == complex{}) continue;
              Occupation m = mono;
              ++m[j];
              next[m] += c * w;
            }
          }
          poly = std::move(next);
        }
        poly = scale(poly, 1.0 / std::sqrt(std::exp(numeric::log_factorial(static_cast<std::size_t>(n_i)))));
      }
      for (const auto& [mono, c] : poly) {
        // prod_j (a_j^dag)^{m_j} |0> = prod_j sqrt(m_j!) |m>
        double norm = 1.0;
        Occupation target = occ;
        for (std::size_t j = 0; j < p; ++j) {
          norm *= std::sqrt(std::exp(numeric::log_factorial(static_cast<std::size_t>(mono[j]))));
          target[ports[j]] = mono[j];
        }
        out[target] += c * norm;
      }
    }
    terms_ = std::move(out);
  }

  /// Keeps only the components with `count` photons in `mode` (an ideal
  /// photon-number-resolving detection, unnormalised).
  void project(std::size_t mode, int count) {
    std::erase_if(terms_, [&](const auto& kv) { return kv.first[mode] != count; });
  }

 private:
  static std::map<Occupation, complex> scale(std::map<Occupation, complex> m, double s) {
    for (auto& [k, v] : m) v *= s;
    return m;
  }

  std::size_t modes_;
  std::map<Occupation, complex> terms_;
};

/// Operator realised by a post-selected circuit; rows index output states and
/// columns input states of the signal space.
struct CircuitOutcome {
  Eigen::MatrixXcd operator_matrix;
};

/// Real orthogonal N-port splitter whose first row and first column are all
/// 1/sqrt(N): the Householder reflection that swaps e_1 and the uniform vector.
inline Eigen::MatrixXcd n_splitter(int ports) {
  if (ports < 1) throw ValidationError("an N-splitter needs at least one port");
  const auto n = static_cast<Eigen::Index>(ports);
  if (n == 1) return Eigen::MatrixXcd::Identity(1, 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, -1.0 / std::sqrt(static_cast<double>(ports)));
  w(0) += 1.0;
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();
  return h.cast<complex>();
}

/// Which detector pattern heralds the quantum scissors.
enum class ScissorsPattern {
  OnePhotonAtA,  ///< one photon at port a, none at port c
  OnePhotonAtC,  ///< one photon at port c, none at port a
};

namespace detail {

// Modes of one scissors unit: signal input a, ancilla b (also the output) and
// the coupling mode c. In this circuit the transmitted beam of each splitter
// continues in the other labelled mode, so a splitter of transmissivity T is
// the rotation with cos(theta) = sqrt(1 - T).
inline void run_scissors(FockRegister& reg, std::size_t a, std::size_t b, std::size_t c, double t1, double t2,
                         ScissorsPattern pattern) {
  const int photons = reg.max_total_photons();
  reg.apply_beam_splitter(fock::BeamSplitter(1.0 - t2, static_cast<std::size_t>(photons)), c, b);
  reg.apply_beam_splitter(fock::BeamSplitter(1.0 - t1, static_cast<std::size_t>(photons)), a, c);
  reg.project(a, pattern == ScissorsPattern::OnePhotonAtA ? 1 : 0);
  reg.project(c, pattern == ScissorsPattern::OnePhotonAtA ? 0 : 1);
}

// One photon-catalysis unit: signal a, ancilla c prepared and detected in |1>.
inline void run_catalysis(FockRegister& reg, std::size_t a, std::size_t c, double t) {
  reg.apply_beam_splitter(fock::BeamSplitter(t, static_cast<std::size_t>(reg.max_total_photons())), a, c);
  reg.project(c, 1);
}

inline void require_open_unit(double t) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("transmissivity must lie in (0, 1)");
}

}  // namespace detail

/// Single-mode quantum scissors <pattern| U_ac(T1) U_bc(T2) |1>_b |0>_c, as a
/// matrix from the input mode a to the output mode b, both truncated at n_max.
inline CircuitOutcome qs_circuit_operator(double t1, double t2, std::size_t n_max,
                                          ScissorsPattern pattern = ScissorsPattern::OnePhotonAtA) {
  detail::require_open_unit(t1);
  detail::require_open_unit(t2);
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto reg = FockRegister::basis({static_cast<int>(n), 1, 0});
    detail::run_scissors(reg, 0, 1, 2, t1, t2, pattern);
    for (const auto& [occ, amp] : reg.terms()) {
      if (static_cast<std::size_t>(occ[1]) <= n_max) m(occ[1], static_cast<Eigen::Index>(n)) += amp;
    }
  }
  return {m};
}

/// Single photon-catalysis unit <1|_c U_ac(T) |1>_c on signal mode a.
inline CircuitOutcome pc_circuit_operator(double t, std::size_t n_max) {
  detail::require_open_unit(t);
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto reg = FockRegister::basis({static_cast<int>(n), 1});
    detail::run_catalysis(reg, 0, 1, t);
    for (const auto& [occ, amp] : reg.terms()) {
      if (static_cast<std::size_t>(occ[0]) <= n_max) m(occ[0], static_cast<Eigen::Index>(n)) += amp;
    }
  }
  return {m};
}

/// Quantum scissors acting on supermodes spread over two frequency bins with
/// weights gamma. Every beam splitter acts bin by bin with the same
/// transmissivity; detection is of one photon in supermode A and vacuum in C.
///
/// Signal basis (columns) is {|0>_A, |1>_A, |2>_A, |1>_A-perp}; output basis
/// (rows) is {|0>_B, |1>_B, |2>_B, |1>_B-perp}, where the perp states hold one
/// photon in the supermode orthogonal to gamma.
inline CircuitOutcome multimode_qs_operator(double t1, double t2, const std::array<complex, 2>& gamma) {
  detail::require_open_unit(t1);
  detail::require_open_unit(t2);
  if (std::abs(std::norm(gamma[0]) + std::norm(gamma[1]) - 1.0) > 1e-12)
    throw ValidationError("supermode weights must be normalised");
  const std::array<complex, 2> perp{-std::conj(gamma[1]), std::conj(gamma[0])};

  // Modes: a1 a2 b1 b2 c1 c2.
  constexpr std::size_t a1 = 0, a2 = 1, b1 = 2, b2 = 3, c1 = 4, c2 = 5;
  auto one_photon = [](const std::array<complex, 2>& w, std::size_t m1, std::size_t m2) {
    std::vector<std::pair<Occupation, complex>> out;
    Occupation o1(6, 0), o2(6, 0);
    o1[m1] = 1;
    o2[m2] = 1;
    out.emplace_back(o1, w[0]);
    out.emplace_back(o2, w[1]);
    return out;
  };
  // |2>_A = (A^dag)^2 / sqrt(2) |0>.
  auto two_photon = [](const std::array<complex, 2>& w, std::size_t m1, std::size_t m2) {
    std::vector<std::pair<Occupation, complex>> out;
    Occupation o(6, 0);
    o[m1] = 2;
    out.emplace_back(o, w[0] * w[0]);
    o[m1] = 1;
    o[m2] = 1;
    out.emplace_back(o, std::sqrt(2.0) * w[0] * w[1]);
    o[m1] = 0;
    o[m2] = 2;
    out.emplace_back(o, w[1] * w[1]);
    return out;
  };
  const std::vector<std::vector<std::pair<Occupation, complex>>> signal_in = {
      {{Occupation(6, 0), 1.0}}, one_photon(gamma, a1, a2), two_photon(gamma, a1, a2), one_photon(perp, a1, a2)};
  const std::vector<std::vector<std::pair<Occupation, complex>>> signal_out = {
      {{Occupation(6, 0), 1.0}}, one_photon(gamma, b1, b2), two_photon(gamma, b1, b2), one_photon(perp, b1, b2)};

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  for (std::size_t col = 0; col < signal_in.size(); ++col) {
    FockRegister reg(6);
    // Signal in A times the ancilla photon in supermode B.
    for (const auto& [occ_s, amp_s] : signal_in[col]) {
      for (const auto& [occ_b, amp_b] : one_photon(gamma, b1, b2)) {
        Occupation occ = occ_s;
        for (std::size_t k = 0; k < 6; ++k) occ[k] += occ_b[k];
        reg.add(occ, amp_s * amp_b);
      }
    }
    const auto photons = static_cast<std::size_t>(reg.max_total_photons());
    const fock::BeamSplitter bs2(1.0 - t2, photons), bs1(1.0 - t1, photons);
    reg.apply_beam_splitter(bs2, c1, b1);
    reg.apply_beam_splitter(bs2, c2, b2);
    reg.apply_beam_splitter(bs1, a1, c1);
    reg.apply_beam_splitter(bs1, a2, c2);
    reg.project(c1, 0);
    reg.project(c2, 0);
    // <1|_A on the a modes: contract with gamma^*, leaving a state on b.
    std::map<Occupation, complex> on_b;
    for (const auto& [occ, amp] : reg.terms()) {
      complex w{};
      if (occ[a1] == 1 && occ[a2] == 0) w = std::conj(gamma[0]);
      if (occ[a1] == 0 && occ[a2] == 1) w = std::conj(gamma[1]);
      if (w == complex{}) continue;
      Occupation b_only(6, 0);
      b_only[b1] = occ[b1];
      b_only[b2] = occ[b2];
      on_b[b_only] += w * amp;
    }
    for (std::size_t row = 0; row < signal_out.size(); ++row) {
      complex overlap{};
      for (const auto& [occ, amp] : signal_out[row]) {
        const auto it = on_b.find(occ);
        if (it != on_b.end()) overlap += std::conj(amp) * it->second;
      }
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = overlap;
    }
  }
  return {m};
}

/// Full QS amplifier: N-splitter, one scissors unit (T1 = 1/2, T2 = T) per
/// path, the inverse splitter and vacuum detection on ports 2..N.
/// Acts on |0>..|n_max> of the input mode.
inline CircuitOutcome qs_nla_splitter_circuit(int units, double t, std::size_t n_max) {
  detail::require_open_unit(t);
  if (units < 1 || units > 3) throw ValidationError("qs_nla_splitter_circuit supports 1 <= N <= 3");
  if (n_max > 6) throw ValidationError("qs_nla_splitter_circuit supports n_max <= 6");
  const auto big_n = static_cast<std::size_t>(units);
  const Eigen::MatrixXcd split = n_splitter(units);
  std::vector<std::size_t> a_ports(big_n), b_ports(big_n);
  for (std::size_t i = 0; i < big_n; ++i) {
    a_ports[i] = i;
    b_ports[i] = big_n + i;
  }
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n <= n_max; ++n) {
    Occupation occ(3 * big_n, 0);
    occ[0] = static_cast<int>(n);
    for (std::size_t i = 0; i < big_n; ++i) occ[big_n + i] = 1;
    auto reg = FockRegister::basis(occ);
    reg.apply_unitary(split, a_ports);
    for (std::size_t i = 0; i < big_n; ++i) {
      detail::run_scissors(reg, i, big_n + i, 2 * big_n + i, 0.5, t, ScissorsPattern::OnePhotonAtA);
    }
    reg.apply_unitary(split.adjoint(), b_ports);
    for (std::size_t i = 1; i < big_n; ++i) reg.project(big_n + i, 0);
    for (const auto& [o, amp] : reg.terms()) {
      if (static_cast<std::size_t>(o[big_n]) <= n_max) m(o[big_n], static_cast<Eigen::Index>(n)) += amp;
    }
  }
  return {m};
}

/// Full PC amplifier: N-splitter, one catalysis unit per path, inverse
/// splitter and vacuum detection on ports 2..N.
inline CircuitOutcome pc_nla_splitter_circuit(int units, double t, std::size_t n_max) {
  detail::require_open_unit(t);
  if (units < 1 || units > 4) throw ValidationError("pc_nla_splitter_circuit supports 1 <= N <= 4");
  if (n_max > 8) throw ValidationError("pc_nla_splitter_circuit supports n_max <= 8");
  const auto big_n = static_cast<std::size_t>(units);
  const Eigen::MatrixXcd split = n_splitter(units);
  std::vector<std::size_t> a_ports(big_n);
  for (std::size_t i = 0; i < big_n; ++i) a_ports[i] = i;
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n <= n_max; ++n) {
    Occupation occ(2 * big_n, 0);
    occ[0] = static_cast<int>(n);
    for (std::size_t i = 0; i < big_n; ++i) occ[big_n + i] = 1;
    auto reg = FockRegister::basis(occ);
    reg.apply_unitary(split, a_ports);
    for (std::size_t i = 0; i < big_n; ++i) detail::run_catalysis(reg, i, big_n + i, t);
    reg.apply_unitary(split.adjoint(), a_ports);
    for (std::size_t i = 1; i < big_n; ++i) reg.project(i, 0);
    for (const auto& [o, amp] : reg.terms()) {
      if (static_cast<std::size_t>(o[0]) <= n_max) m(o[0], static_cast<Eigen::Index>(n)) += amp;
    }
  }
  return {m};
}

/// sqrt(T)^N a(N, n) / N^n, with a(N, n) summed over every composition
/// n_1 + ... + n_N = n of the multinomial weight times prod r(n_i),
/// r(m) = (1 - m (1-T)/T) sqrt(T)^m.
inline double pc_nla_multinomial(int units, double t, int n) {
  detail::require_open_unit(t);
  if (units < 1 || units > 4) throw ValidationError("pc_nla_multinomial supports 1 <= N <= 4");
  if (n < 0 || n > 10) throw ValidationError("pc_nla_multinomial supports 0 <= n <= 10");
  auto r = [t](int m) { return (1.0 - m * (1.0 - t) / t) * std::pow(t, 0.5 * m); };
  auto factorial = [](int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  double sum = 0.0;
  std::vector<int> parts(static_cast<std::size_t>(units), 0);
  // Enumerate compositions of n into `units` non-negative parts.
  auto recurse = [&](auto&& self, std::size_t slot, int left) -> void {
    if (slot + 1 == parts.size()) {
      parts[slot] = left;
      long long denom = 1;
      double product = 1.0;
      for (int p : parts) {
        denom *= factorial(p);
        product *= r(p);
      }
      sum += static_cast<double>(factorial(n) / denom) * product;
      return;
    }
    for (int k = 0; k <= left; ++k) {
      parts[slot] = k;
      self(self, slot + 1, left - k);
    }
  };
  recurse(recurse, 0, n);
  return std::pow(t, 0.5 * units) * sum / std::pow(static_cast<double>(units), n);
}

}  // namespace mmnla::oracle
