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

// Command-line driver: one subcommand per experiment, JSON config in, CSV or
// JSON lines out.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical guard tripped,
// 3 a verify check failed.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmnla/cli/config.hpp"
#include "mmnla/cli/runner.hpp"
#include "mmnla/cli/table.hpp"
#include "mmnla/errors.hpp"
#include "mmnla/parallel.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kVerifyFailed = 3 };

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;
  int workers = 0;
  std::optional<double> tolerance;
};

int run(mmnla::cli::Experiment experiment, const Options& opt) {
  using namespace mmnla::cli;
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    config = load_config(opt.config_path, experiment);
  } else if (experiment == Experiment::Verify) {
    config.experiment = Experiment::Verify;
  } else {
    throw mmnla::ValidationError("--config is required for " + std::string(to_string(experiment)));
  }
  if (opt.tolerance) {
    if (!(*opt.tolerance > 0.0)) throw mmnla::ValidationError("--tolerance must be positive");
    config.verify.tolerance = opt.tolerance;
  }
  const Format format = !opt.format.empty() ? parse_format(opt.format) : config.format.value_or(Format::Csv);
  unsigned workers = config.workers.value_or(mmnla::default_worker_count());
  if (opt.workers != 0) {
    if (opt.workers < 0) throw mmnla::ValidationError("--workers must be >= 1");
    workers = static_cast<unsigned>(opt.workers);
  }
  const std::string out_path = !opt.out_path.empty() ? opt.out_path : config.out_path.value_or("");

  const RunOutcome outcome = run_experiment(config, workers);
  if (out_path.empty() || out_path == "-") {
    write_table(std::cout, outcome.table, format);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw mmnla::ValidationError("cannot write output file '" + out_path + "'");
    write_table(out, outcome.table, format);
  }
  return outcome.checks_passed ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  using mmnla::cli::Experiment;
  CLI::App app{"Multimode noiseless linear amplification experiments"};
  app.require_subcommand(1);

  Options opt;
  std::optional<Experiment> chosen;
  auto add = [&](const char* name, const char* help, Experiment e) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_path, "output file (default: stdout)");
    sub->add_option("--format", opt.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--workers", opt.workers, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    sub->callback([&chosen, e] { chosen = e; });
    return sub;
  };
  add("amplify", "maximal fidelity of amplified coherent states", Experiment::Amplify);
  add("distill", "entanglement distillation over an attenuation grid", Experiment::Distill);
  add("cascade-compare", "parallel versus cascaded photon catalysis", Experiment::CascadeCompare);
  add("sweep", "maximal success probability at a fidelity floor", Experiment::Sweep);
  CLI::App* verify = add("verify", "check closed forms against brute-force circuits", Experiment::Verify);
  verify->add_option("--tolerance", opt.tolerance, "replace every check tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    return run(*chosen, opt);
  } catch (const mmnla::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const mmnla::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
}
