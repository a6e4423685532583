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

// JSON experiment configs. Every object is read through ObjectReader, which
// remembers the keys it handed out and rejects anything left over.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmnla/entanglement.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/nla.hpp"
#include "mmnla/search.hpp"

namespace mmnla::cli {

using json = nlohmann::json;

enum class Experiment { Amplify, Distill, CascadeCompare, Verify, Sweep };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Amplify: return "amplify";
    case Experiment::Distill: return "distill";
    case Experiment::CascadeCompare: return "cascade-compare";
    case Experiment::Verify: return "verify";
    case Experiment::Sweep: return "sweep";
  }
  return "?";
}

inline Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::Amplify, Experiment::Distill, Experiment::CascadeCompare, Experiment::Verify,
                 Experiment::Sweep}) {
    if (name == to_string(e)) return e;
  }
  throw ValidationError("unknown experiment '" + std::string(name) + "'");
}

enum class Format { Csv, Jsonl };

inline Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "jsonl") return Format::Jsonl;
  throw ValidationError("unknown output format '" + std::string(name) + "' (expected csv or jsonl)");
}

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + " must be a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ValidationError(path_ + ": missing required key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) { return as_number(at(key), where(key)); }
  double number_or(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, where(key)) : fallback;
  }
  int integer_or(const std::string& key, int fallback) {
    const json* v = find(key);
    return v ? as_integer(*v, where(key)) : fallback;
  }
  std::string string_or(const std::string& key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ValidationError(where(key) + " must be a string");
    return v->get<std::string>();
  }

  /// Throws if the object holds keys nobody asked for.
  void finish() const {
    std::string unknown;
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw ValidationError(path_ + ": unknown key(s) " + unknown);
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError(where + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(where + " must be finite");
    return x;
  }

  static int as_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ValidationError(where + " must be an integer");
    return v.get<int>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

/// A list of reals given as a number, an array, or an inclusive
/// {"start", "stop", "step"} range.
inline std::vector<double> read_grid(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(ObjectReader::as_number(v, where));
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(ObjectReader::as_number(v[i], where + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    ObjectReader r(v, where);
    const double start = r.number("start"), stop = r.number("stop"), step = r.number("step");
    r.finish();
    if (!(step > 0.0)) throw ValidationError(where + ".step must be positive");
    if (stop < start) throw ValidationError(where + ".stop must not be below start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    throw ValidationError(where + " must be a number, an array or a {start, stop, step} range");
  }
  if (out.empty()) throw ValidationError(where + " is empty");
  return out;
}

/// A list of amplifier sizes given as an integer, an array or {"min", "max"}.
inline std::vector<int> read_units(const json& v, const std::string& where) {
  std::vector<int> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<int>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(ObjectReader::as_integer(v[i], where + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    ObjectReader r(v, where);
    const int lo = ObjectReader::as_integer(r.at("min"), where + ".min");
    const int hi = ObjectReader::as_integer(r.at("max"), where + ".max");
    r.finish();
    if (hi < lo) throw ValidationError(where + ".max must not be below min");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    throw ValidationError(where + " must be an integer, an array or a {min, max} range");
  }
  if (out.empty()) throw ValidationError(where + " is empty");
  for (int n : out) {
    if (n < 1) throw ValidationError(where + " entries must be >= 1");
  }
  return out;
}

inline std::vector<std::string> read_strings(const json& v, const std::string& where) {
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_string()) throw ValidationError(where + " entries must be strings");
      out.push_back(e.get<std::string>());
    }
  } else {
    throw ValidationError(where + " must be a string or an array of strings");
  }
  if (out.empty()) throw ValidationError(where + " is empty");
  return out;
}

inline std::vector<nla::Kind> read_kinds(const json& v, const std::string& where) {
  std::vector<nla::Kind> out;
  for (const auto& s : read_strings(v, where)) out.push_back(nla::parse_kind(s));
  return out;
}

inline optimize::SweepConfig read_optimizer(ObjectReader& parent) {
  optimize::SweepConfig c;
  if (const json* v = parent.find("optimizer")) {
    ObjectReader r(*v, parent.where("optimizer"));
    c.t_min = r.number_or("t_min", c.t_min);
    c.t_max = r.number_or("t_max", c.t_max);
    c.grid_points = r.integer_or("grid_points", c.grid_points);
    c.refine_tolerance = r.number_or("refine_tolerance", c.refine_tolerance);
    r.finish();
  }
  c.validate();
  return c;
}

struct AmplifyConfig {
  std::vector<double> alphas{0.2};
  std::vector<double> gains;
  std::vector<int> units{1};
  std::vector<nla::Kind> kinds{nla::Kind::QS, nla::Kind::PC};
  std::size_t n_max = 40;
  optimize::SweepConfig optimizer;
};

struct SweepTableConfig {
  std::vector<double> alphas{0.2};
  std::vector<double> gains;
  std::vector<nla::Kind> kinds{nla::Kind::QS, nla::Kind::PC};
  double fidelity_target = 0.98;
  int units_min = 1;
  int units_max = 8;
  std::size_t n_max = 40;
  optimize::SweepConfig optimizer;
};

struct DistillConfig {
  int scenario = 1;
  int supermodes = 1;
  double decay = 0.6;
  entanglement::Normalization normalization = entanglement::Normalization::SumSquares;
  double squeezing_db = 5.0;  ///< of the first supermode
  std::vector<double> attenuation_db;
  std::vector<nla::Kind> kinds{nla::Kind::QS, nla::Kind::PC};
  std::vector<int> units{2};
  std::vector<entanglement::Strategy> strategies{entanglement::Strategy::Unfiltered};
  int amplified_index = 1;
  std::size_t n_max = 20;
  optimize::SweepConfig optimizer;
};

struct CascadeConfig {
  std::vector<double> squeezing_db{3.0};
  std::vector<int> units{1, 2, 3};
  std::size_t n_max = 24;
  optimize::SweepConfig optimizer;
};

struct VerifyConfig {
  std::vector<double> t_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  std::optional<double> tolerance;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Verify;
  std::optional<std::string> out_path;
  std::optional<Format> format;
  std::optional<unsigned> workers;
  AmplifyConfig amplify;
  SweepTableConfig sweep;
  DistillConfig distill;
  CascadeConfig cascade;
  VerifyConfig verify;
};

namespace detail {

inline std::size_t read_truncation(ObjectReader& r, std::size_t fallback) {
  const int n = r.integer_or("n_max", static_cast<int>(fallback));
  if (n < 1) throw ValidationError(r.where("n_max") + " must be >= 1");
  return static_cast<std::size_t>(n);
}

inline void read_body(ObjectReader& r, ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::Amplify: {
      auto& a = c.amplify;
      if (const json* v = r.find("alpha")) a.alphas = read_grid(*v, r.where("alpha"));
      a.gains = read_grid(r.at("gains"), r.where("gains"));
      if (const json* v = r.find("units")) a.units = read_units(*v, r.where("units"));
      if (const json* v = r.find("kinds")) a.kinds = read_kinds(*v, r.where("kinds"));
      a.n_max = read_truncation(r, a.n_max);
      a.optimizer = read_optimizer(r);
      for (double g : a.gains) {
        if (!(g > 0.0)) throw ValidationError(r.where("gains") + " entries must be positive");
      }
      break;
    }
    case Experiment::Sweep: {
      auto& s = c.sweep;
      if (const json* v = r.find("alpha")) s.alphas = read_grid(*v, r.where("alpha"));
      s.gains = read_grid(r.at("gains"), r.where("gains"));
      if (const json* v = r.find("kinds")) s.kinds = read_kinds(*v, r.where("kinds"));
      s.fidelity_target = r.number_or("fidelity_target", s.fidelity_target);
      if (!(s.fidelity_target > 0.0 && s.fidelity_target < 1.0))
        throw ValidationError(r.where("fidelity_target") + " must lie in (0, 1)");
      if (const json* v = r.find("units")) {
        const auto u = read_units(*v, r.where("units"));
        s.units_min = *std::min_element(u.begin(), u.end());
        s.units_max = *std::max_element(u.begin(), u.end());
      }
      s.n_max = read_truncation(r, s.n_max);
      s.optimizer = read_optimizer(r);
      s.optimizer.n_min = s.units_min;
      s.optimizer.n_max = s.units_max;
      break;
    }
    case Experiment::Distill: {
      auto& d = c.distill;
      d.scenario = r.integer_or("scenario", d.scenario);
      d.supermodes = r.integer_or("supermodes", d.supermodes);
      d.decay = r.number_or("decay", d.decay);
      d.normalization = entanglement::parse_normalization(r.string_or("normalization", "sum_squares"));
      d.squeezing_db = r.number_or("squeezing_db", d.squeezing_db);
      d.attenuation_db = read_grid(r.at("attenuation_db"), r.where("attenuation_db"));
      if (const json* v = r.find("kinds")) d.kinds = read_kinds(*v, r.where("kinds"));
      if (const json* v = r.find("units")) d.units = read_units(*v, r.where("units"));
      if (const json* v = r.find("strategies")) {
        d.strategies.clear();
        for (const auto& s : read_strings(*v, r.where("strategies"))) d.strategies.push_back(entanglement::parse_strategy(s));
      }
      d.amplified_index = r.integer_or("amplified_index", d.amplified_index);
      d.n_max = read_truncation(r, d.n_max);
      d.optimizer = read_optimizer(r);
      // Surface bad scenario parameters before any work starts.
      (void)entanglement::scenario_lambdas(d.scenario, d.supermodes, d.decay, d.normalization);
      if (d.amplified_index < 1 || d.amplified_index > d.supermodes)
        throw ValidationError(r.where("amplified_index") + " must lie in [1, supermodes]");
      if (!(d.squeezing_db >= 0.0)) throw ValidationError(r.where("squeezing_db") + " must be >= 0");
      for (double a : d.attenuation_db) {
        if (!(a >= 0.0)) throw ValidationError(r.where("attenuation_db") + " entries must be >= 0");
      }
      break;
    }
    case Experiment::CascadeCompare: {
      auto& k = c.cascade;
      if (const json* v = r.find("squeezing_db")) k.squeezing_db = read_grid(*v, r.where("squeezing_db"));
      if (const json* v = r.find("units")) k.units = read_units(*v, r.where("units"));
      k.n_max = read_truncation(r, k.n_max);
      k.optimizer = read_optimizer(r);
      for (double s : k.squeezing_db) {
        if (!(s > 0.0)) throw ValidationError(r.where("squeezing_db") + " entries must be positive");
      }
      break;
    }
    case Experiment::Verify: {
      auto& v = c.verify;
      if (const json* g = r.find("t_grid")) v.t_grid = read_grid(*g, r.where("t_grid"));
      if (const json* t = r.find("tolerance")) v.tolerance = ObjectReader::as_number(*t, r.where("tolerance"));
      for (double t : v.t_grid) {
        if (!(t > 0.0 && t < 1.0)) throw ValidationError(r.where("t_grid") + " entries must lie in (0, 1)");
      }
      if (v.tolerance && !(*v.tolerance > 0.0)) throw ValidationError(r.where("tolerance") + " must be positive");
      break;
    }
  }
}

}  // namespace detail

/// Parses a config document. `expected`, when given, is the subcommand the
/// config is being run under; a conflicting "experiment" key is an error.
inline ExperimentConfig parse_config(const json& doc, std::optional<Experiment> expected = std::nullopt) {
  ObjectReader r(doc, "config");
  ExperimentConfig c;
  if (const json* e = r.find("experiment")) {
    if (!e->is_string()) throw ValidationError("config.experiment must be a string");
    c.experiment = parse_experiment(e->get<std::string>());
    if (expected && *expected != c.experiment)
      throw ValidationError("config is for '" + std::string(to_string(c.experiment)) + "' but was run as '" +
                            std::string(to_string(*expected)) + "'");
  } else if (expected) {
    c.experiment = *expected;
  } else {
    throw ValidationError("config: missing required key 'experiment'");
  }
  if (const json* o = r.find("output")) {
    ObjectReader out(*o, "config.output");
    if (out.has("path")) c.out_path = out.string_or("path", "");
    if (out.has("format")) c.format = parse_format(out.string_or("format", "csv"));
    out.finish();
  }
  if (const json* w = r.find("workers")) {
    const int n = ObjectReader::as_integer(*w, "config.workers");
    if (n < 1) throw ValidationError("config.workers must be >= 1");
    c.workers = static_cast<unsigned>(n);
  }
  detail::read_body(r, c);
  r.finish();
  return c;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": malformed JSON (" + e.what() + ")");
  }
}

inline ExperimentConfig load_config(const std::string& path, std::optional<Experiment> expected = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(parse_json_text(buf.str(), path), expected);
}

}  // namespace mmnla::cli
