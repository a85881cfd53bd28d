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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weakmeas/qcore.hpp"

namespace weakmeas {

using Json = nlohmann::ordered_json;

enum class ExperimentKind { meter_check, idealized, repeat, lg, tomo_optimize, tomo_roundtrip };

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept;

/// Field meanings per experiment (m_steps and realizations are reused):
///   meter-check     realizations = number of pointer samples
///   idealized       m_steps = pointer slots N, realizations = samples
///   repeat          m_steps = measurements per copy, realizations = copies
///   lg              m_steps = ensemble size M, realizations = Monte Carlo repetitions
///   tomo-optimize   delta_s = delta_p / sqrt(2 m_steps)
///   tomo-roundtrip  as tomo-optimize, realizations = noisy trials, b_plus_sq required
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::meter_check;
  std::vector<Complex> state;
  std::vector<double> eigenvalues;
  double delta_p = 0.0;
  std::int64_t m_steps = 0;
  std::int64_t realizations = 0;
  std::uint64_t seed = 0;
  std::string output_path;
  std::optional<double> b_plus_sq;
};

/// Command-line values that replace config-file entries.
struct ConfigOverrides {
  std::optional<ExperimentKind> experiment;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_path;
  std::optional<std::int64_t> realizations;
  std::optional<std::int64_t> m_steps;
  std::optional<double> delta_p;
};

/// Parses and validates a config document. Unknown fields, missing fields
/// and out-of-domain values raise ConfigError naming the field.
ExperimentConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides = {});
/// As above from JSON text; syntax errors report line and column.
ExperimentConfig parse_config_text(std::string_view text, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Checks every module precondition the experiment will rely on.
void validate(const ExperimentConfig& cfg);

Json to_json(const ExperimentConfig& cfg);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Result of one experiment: the config, scalar results (Monte Carlo
/// estimates next to closed forms) and plot-ready tables.
struct ResultDocument {
  std::string version;
  Json config;
  Json results;
  std::vector<Table> tables;

  Json to_json() const;
  static ResultDocument from_json(const Json& doc);
  const Table* table(std::string_view name) const;
};

struct RunOptions {
  unsigned workers = 1;
};

/// Deterministic in (cfg, seed); realization i always draws from
/// derive_stream(seed, i), whatever the worker count.
ResultDocument run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

enum class OutputFormat { csv, json };

std::string render_json(const ResultDocument& doc);
/// CSV text for one table: header row, then rows with 17 significant digits.
std::string render_csv(const Table& table);
/// key,value rows for the scalar results, flattened with '.' separators.
std::string render_summary_csv(const ResultDocument& doc);

/// JSON writes one file. CSV writes the first table to `path` and each
/// further table to <stem>.<table>.csv next to it, plus <stem>.summary.csv.
/// Throws IoError when a file cannot be written.
void emit_results(const ResultDocument& doc, OutputFormat format, const std::filesystem::path& path);

std::string version_string();

}  // namespace weakmeas
