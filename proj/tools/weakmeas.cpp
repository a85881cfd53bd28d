// Copyright 2026 The weakmeas Authors
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
// weakmeas <experiment> --config <file.json> [--seed N] [--out <path>]
//          [--format csv|json] [--realizations N] [--steps M] [--delta-p X]
//          [--workers K]
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 1 other.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "weakmeas/experiment.hpp"

namespace {

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format;
  std::optional<std::int64_t> realizations;
  std::optional<std::int64_t> steps;
  std::optional<double> delta_p;
  unsigned workers = 1;
};

void add_options(CLI::App* sub, Args& args) {
  sub->add_option("--config", args.config, "JSON experiment config")->required();
  sub->add_option("--seed", args.seed, "master seed");
  sub->add_option("--out", args.out, "output path (default: config output_path, else stdout)");
  sub->add_option("--format", args.format, "csv or json (default: from the output extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--realizations", args.realizations, "number of realizations / samples");
  sub->add_option("--steps", args.steps, "m_steps override");
  sub->add_option("--delta-p", args.delta_p, "pointer spread override");
  sub->add_option("--workers", args.workers, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak measurement simulation and verification"};
  app.require_subcommand(1);
  Args args;
  std::map<CLI::App*, weakmeas::ExperimentKind> kinds;
  for (auto kind : {weakmeas::ExperimentKind::meter_check, weakmeas::ExperimentKind::idealized,
                    weakmeas::ExperimentKind::repeat, weakmeas::ExperimentKind::lg,
                    weakmeas::ExperimentKind::tomo_optimize, weakmeas::ExperimentKind::tomo_roundtrip}) {
    CLI::App* sub = app.add_subcommand(std::string(weakmeas::to_string(kind)));
    add_options(sub, args);
    kinds[sub] = kind;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    weakmeas::ConfigOverrides ov;
    ov.experiment = kinds.at(app.get_subcommands().front());
    ov.seed = args.seed;
    ov.output_path = args.out;
    ov.realizations = args.realizations;
    ov.m_steps = args.steps;
    ov.delta_p = args.delta_p;
    const weakmeas::ExperimentConfig cfg = weakmeas::load_config(args.config, ov);
    const weakmeas::ResultDocument doc = weakmeas::run_experiment(cfg, {args.workers});

    std::string format = args.format;
    if (format.empty()) {
      format = cfg.output_path.size() >= 4 && cfg.output_path.ends_with(".csv") ? "csv" : "json";
    }
    if (cfg.output_path.empty()) {
      if (format == "csv") {
        std::cerr << "error: csv output needs --out or output_path\n";
        return 2;
      }
      std::cout << weakmeas::render_json(doc);
    } else {
      weakmeas::emit_results(doc, format == "csv" ? weakmeas::OutputFormat::csv : weakmeas::OutputFormat::json,
                             cfg.output_path);
    }
    return 0;
  } catch (const weakmeas::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const weakmeas::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
