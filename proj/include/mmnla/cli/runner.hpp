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

// Experiment runners: each expands its config into a parameter grid, fans the
// points out to workers and collects rows back in grid order.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mmnla/cli/config.hpp"
#include "mmnla/cli/table.hpp"
#include "mmnla/density.hpp"
#include "mmnla/entanglement.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/numeric.hpp"
#include "mmnla/optimize.hpp"
#include "mmnla/parallel.hpp"
#include "mmnla/verify.hpp"

namespace mmnla::cli {

struct RunOutcome {
  Table table;
  bool checks_passed = true;  ///< false only when a verify check failed
};

namespace detail {

// Re-raises a library error with the grid point that produced it prepended.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const TruncationError& e) {
    throw TruncationError(context + ": " + e.what());
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  }
}

inline std::string kind_name(nla::Kind k) { return std::string(nla::to_string(k)); }

inline std::int64_t as_int(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace detail

/// Maximal fidelity over T for each (alpha, g_t, N, kind).
inline Table run_amplify(const AmplifyConfig& c, unsigned workers) {
  struct Point {
    double alpha, gain;
    int units;
    nla::Kind kind;
  };
  std::vector<Point> grid;
  for (double a : c.alphas)
    for (double g : c.gains)
      for (int n : c.units)
        for (auto k : c.kinds) grid.push_back({a, g, n, k});

  const auto results = parallel_map(grid.size(), workers, [&](std::size_t i) {
    const auto& p = grid[i];
    return detail::with_context(
        "alpha=" + format_double(p.alpha) + " g=" + format_double(p.gain) + " N=" + std::to_string(p.units) +
            " kind=" + detail::kind_name(p.kind),
        [&] { return optimize::max_fidelity_profile(p.alpha, p.gain, p.kind, p.units, c.n_max, c.optimizer); });
  });

  Table t{{"alpha", "g_t", "N", "kind", "T_opt", "fidelity", "success_prob", "n_max"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    const auto& r = results[i];
    t.add({p.alpha, p.gain, std::int64_t{p.units}, detail::kind_name(p.kind), r.t, r.fidelity, r.success_prob,
           detail::as_int(c.n_max)});
  }
  return t;
}

/// Highest success probability over (T, N) subject to a fidelity floor.
/// Points where no (T, N) reaches the floor are reported as infeasible.
inline Table run_sweep(const SweepTableConfig& c, unsigned workers) {
  struct Point {
    double alpha, gain;
    nla::Kind kind;
  };
  std::vector<Point> grid;
  for (double a : c.alphas)
    for (double g : c.gains)
      for (auto k : c.kinds) grid.push_back({a, g, k});

  const auto results = parallel_map(grid.size(), workers, [&](std::size_t i) -> std::optional<optimize::SuccessOptimum> {
    const auto& p = grid[i];
    return detail::with_context(
        "alpha=" + format_double(p.alpha) + " g=" + format_double(p.gain) + " kind=" + detail::kind_name(p.kind),
        [&]() -> std::optional<optimize::SuccessOptimum> {
          try {
            return optimize::max_success_given_fidelity(p.alpha, p.gain, p.kind, c.fidelity_target, c.n_max,
                                                        c.optimizer);
          } catch (const InfeasibleError&) {
            return std::nullopt;
          }
        });
  });

  const double nan = std::nan("");
  Table t{{"alpha", "g_t", "kind", "fidelity_target", "N_min", "N_max", "feasible", "N_opt", "T_opt",
           "success_prob", "fidelity", "n_max"},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    const auto& r = results[i];
    t.add({p.alpha, p.gain, detail::kind_name(p.kind), c.fidelity_target, std::int64_t{c.units_min},
           std::int64_t{c.units_max}, r.has_value(), std::int64_t{r ? r->units : 0}, r ? r->t : nan,
           r ? r->success_prob : nan, r ? r->fidelity : nan, detail::as_int(c.n_max)});
  }
  return t;
}

/// Optimised total log-negativity after loss and amplification, next to the
/// no-amplifier reference, for every attenuation point.
inline Table run_distill(const DistillConfig& c, unsigned workers) {
  const auto lambdas = entanglement::scenario_lambdas(c.scenario, c.supermodes, c.decay, c.normalization);
  const auto pdc = entanglement::PdcSpec::from_first_squeezing_db(lambdas, c.squeezing_db, c.normalization);

  struct Point {
    double attenuation_db;
    entanglement::Strategy strategy;
    nla::Kind kind;
    int units;
  };
  std::vector<Point> grid;
  for (double db : c.attenuation_db)
    for (auto s : c.strategies)
      for (auto k : c.kinds)
        for (int n : c.units) grid.push_back({db, s, k, n});

  // The reference depends on the attenuation only.
  const auto references = parallel_map(c.attenuation_db.size(), workers, [&](std::size_t i) {
    const double db = c.attenuation_db[i];
    return detail::with_context("attenuation_db=" + format_double(db), [&] {
      return entanglement::reference_no_nla(pdc, fock::Channel::from_attenuation_db(db), c.n_max).total_logneg;
    });
  });

  const auto results = parallel_map(grid.size(), workers, [&](std::size_t i) {
    const auto& p = grid[i];
    return detail::with_context(
        "attenuation_db=" + format_double(p.attenuation_db) + " kind=" + detail::kind_name(p.kind) +
            " N=" + std::to_string(p.units) + " strategy=" + std::string(entanglement::to_string(p.strategy)),
        [&] {
          entanglement::DistillScenario s{pdc, fock::Channel::from_attenuation_db(p.attenuation_db),
                                          nla::NlaSpec{p.kind, p.units, 0.5}, p.strategy, c.amplified_index};
          return optimize::maximize_total_logneg(s, c.n_max, c.optimizer);
        });
  });

  Table t{{"attenuation_db", "eta", "scenario", "supermodes", "squeezing_db", "strategy", "kind", "N", "T_opt",
           "logneg_total", "success_prob", "logneg_reference", "n_max"},
          {}};
  std::size_t ref_index = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    while (c.attenuation_db[ref_index] != p.attenuation_db) ++ref_index;
    const auto& r = results[i];
    t.add({p.attenuation_db, numeric::attenuation_db_to_eta(p.attenuation_db), std::int64_t{c.scenario},
           std::int64_t{c.supermodes}, c.squeezing_db, std::string(entanglement::to_string(p.strategy)),
           detail::kind_name(p.kind), std::int64_t{p.units}, r.optimal_t.value_or(std::nan("")), r.total_logneg,
           r.success_prob, references[ref_index], detail::as_int(c.n_max)});
  }
  return t;
}

/// Parallel versus cascaded photon catalysis on one lossless EPR pair.
inline Table run_cascade_compare(const CascadeConfig& c, unsigned workers) {
  struct Point {
    double squeezing_db;
    int units;
  };
  std::vector<Point> grid;
  for (double s : c.squeezing_db)
    for (int n : c.units) grid.push_back({s, n});

  const auto results = parallel_map(grid.size(), workers, [&](std::size_t i) {
    const auto& p = grid[i];
    return detail::with_context("squeezing_db=" + format_double(p.squeezing_db) + " N=" + std::to_string(p.units), [&] {
      return entanglement::cascade_compare(numeric::squeezing_db_to_r(p.squeezing_db), p.units, c.n_max, c.optimizer);
    });
  });

  Table t{{"squeezing_db", "r", "N", "T_parallel", "logneg_parallel", "success_parallel", "T_cascaded",
           "logneg_cascaded", "success_cascaded", "logneg_reference", "n_max"},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = results[i];
    t.add({grid[i].squeezing_db, r.squeezing, std::int64_t{r.units}, r.parallel.t, r.parallel.logneg_max,
           r.parallel.success_prob, r.cascaded.t, r.cascaded.logneg_max, r.cascaded.success_prob, r.reference_logneg,
           detail::as_int(c.n_max)});
  }
  return t;
}

/// Oracle checks; `checks_passed` is false if any check exceeded its tolerance.
inline RunOutcome run_verify(const VerifyConfig& c, const oracle::ClosedForms& forms = oracle::ClosedForms::library()) {
  const auto reports = oracle::run_verification(oracle::VerifyOptions{c.t_grid, c.tolerance}, forms);
  Table t{{"check", "tolerance", "deviation", "passed"}, {}};
  for (const auto& r : reports) t.add({r.name, r.tolerance, r.deviation, r.passed});
  return {std::move(t), oracle::all_passed(reports)};
}

inline RunOutcome run_experiment(const ExperimentConfig& c, unsigned workers) {
  switch (c.experiment) {
    case Experiment::Amplify: return {run_amplify(c.amplify, workers)};
    case Experiment::Sweep: return {run_sweep(c.sweep, workers)};
    case Experiment::Distill: return {run_distill(c.distill, workers)};
    case Experiment::CascadeCompare: return {run_cascade_compare(c.cascade, workers)};
    case Experiment::Verify: return run_verify(c.verify);
  }
  throw ValidationError("unknown experiment");
}

}  // namespace mmnla::cli
