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
#include "weakmeas/experiment.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "weakmeas/idealized.hpp"
#include "weakmeas/lg.hpp"
#include "weakmeas/meter.hpp"
#include "weakmeas/parallel.hpp"
#include "weakmeas/quadrature.hpp"
#include "weakmeas/sequential.hpp"
#include "weakmeas/stats.hpp"
#include "weakmeas/tomo.hpp"

#ifndef WEAKMEAS_VERSION
#define WEAKMEAS_VERSION "0.0.0"
#endif
#ifndef WEAKMEAS_GIT_DESCRIBE
#define WEAKMEAS_GIT_DESCRIBE ""
#endif

namespace weakmeas {

namespace {

constexpr std::size_t kTracedRealizations = 8;
constexpr double kConvergenceDistance = 0.01;

struct KindName {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::meter_check, "meter-check"},   {ExperimentKind::idealized, "idealized"},
    {ExperimentKind::repeat, "repeat"},             {ExperimentKind::lg, "lg"},
    {ExperimentKind::tomo_optimize, "tomo-optimize"}, {ExperimentKind::tomo_roundtrip, "tomo-roundtrip"},
};

const std::set<std::string, std::less<>> kConfigFields = {
    "experiment", "state", "eigenvalues", "delta_p", "m_steps", "realizations", "seed", "output_path", "b_plus_sq",
};

// ---------------------------------------------------------------------------
// Config parsing

double get_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

std::int64_t get_integer(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ConfigError(path, "integer out of range");
  }
  return v.get<std::int64_t>();
}

std::uint64_t get_seed(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw ConfigError(path, "seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

Json matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

// Finite values as numbers, infinities as null (JSON has no inf).
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

QuantumState state_of(const ExperimentConfig& cfg) {
  return make_state(std::span<const Complex>(cfg.state.data(), cfg.state.size()));
}

Json gof_json(const GofResult& chi, const GofResult& ks) {
  Json j;
  j["chi_square_statistic"] = chi.statistic;
  j["chi_square_dof"] = chi.dof;
  j["chi_square_pvalue"] = chi.pvalue;
  j["ks_statistic"] = ks.statistic;
  j["ks_pvalue"] = ks.pvalue;
  return j;
}

Table histogram_table(std::string name, const Histogram& h, const Cdf& cdf) {
  Table t{std::move(name), {"bin_lo", "bin_hi", "count", "expected_count"}, {}};
  const double n = static_cast<double>(h.total());
  for (std::size_t k = 0; k < h.bins(); ++k) {
    const double expected = n * (cdf(h.edges[k + 1]) - cdf(h.edges[k]));
    t.rows.push_back({h.edges[k], h.edges[k + 1], static_cast<double>(h.counts[k]), expected});
  }
  return t;
}

// Moments, chi-square and KS of a sample against a reference cdf. The
// goodness-of-fit fields are null when the sample is too small to test.
Json sample_json(std::span<const double> samples, const Cdf& cdf, Histogram* hist_out) {
  const StatSummary s = summarize(samples);
  Json j;
  j["samples"] = samples.size();
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["standard_error"] = s.standard_error;
  try {
    const GofResult chi = chi_square_gof(s.histogram, cdf);
    const GofResult ks = ks_test(samples, cdf);
    j["goodness_of_fit"] = gof_json(chi, ks);
  } catch (const InvalidArgument&) {
    j["goodness_of_fit"] = nullptr;
  }
  if (hist_out) *hist_out = s.histogram;
  return j;
}

// ---------------------------------------------------------------------------
// Experiments

ResultDocument run_meter_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  const QuantumState psi = state_of(cfg);
  const Observable obs(cfg.eigenvalues);
  const GaussianMeter meter(cfg.delta_p);
  const auto n = static_cast<std::size_t>(cfg.realizations);

  std::vector<double> samples(n);
  parallel_for_index(n, opt.workers, [&](std::size_t i) {
    RandomStream rng = derive_stream(cfg.seed, i);
    samples[i] = sample_outcome(meter, psi, obs, rng);
  });

  const Moments closed = outcome_moments(meter, psi, obs);
  const double lo = obs.min_eigenvalue() - 10.0 * cfg.delta_p;
  const double hi = obs.max_eigenvalue() + 10.0 * cfg.delta_p;
  const double norm = integrate([&](double p) { return outcome_pdf(meter, psi, obs, p); }, lo, hi);
  const double q_mean = integrate([&](double p) { return p * outcome_pdf(meter, psi, obs, p); }, lo, hi);
  const double q_second = integrate([&](double p) { return p * p * outcome_pdf(meter, psi, obs, p); }, lo, hi);
  Json completeness = Json::array();
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    completeness.push_back(integrate(
        [&](double p) {
          const double m = povm_element(meter, obs, p)[i];
          return m * m;
        },
        lo, hi));
  }

  const Cdf cdf = [&](double p) { return outcome_cdf(meter, psi, obs, p); };
  Histogram hist;
  Json mc = sample_json(samples, cdf, &hist);
  mc["mean_z_score"] = (mc["mean"].get<double>() - closed.mean) / mc["standard_error"].get<double>();
  mc["variance_relative_error"] = (mc["variance"].get<double>() - closed.variance) / closed.variance;

  ResultDocument doc;
  Json& r = doc.results;
  r["closed_form"]["mean"] = closed.mean;
  r["closed_form"]["variance"] = closed.variance;
  r["closed_form"]["averaged_post_density"] = matrix_json(averaged_post_density(meter, psi, obs).elements());
  r["closed_form"]["averaged_post_density_first_order"] =
      matrix_json(averaged_post_density_first_order(meter, psi, obs));
  r["quadrature"]["pdf_integral"] = norm;
  r["quadrature"]["mean"] = q_mean / norm;
  r["quadrature"]["variance"] = q_second / norm - (q_mean / norm) * (q_mean / norm);
  r["quadrature"]["povm_completeness"] = completeness;
  r["monte_carlo"] = mc;
  doc.tables.push_back(histogram_table("histogram", hist, cdf));
  return doc;
}

ResultDocument run_idealized(const ExperimentConfig& cfg, const RunOptions& opt) {
  const QuantumState psi = state_of(cfg);
  const IdealizedApparatus app(static_cast<int>(cfg.m_steps));
  const std::vector<double> dist = outcome_distribution(app, psi);
  const auto n = static_cast<std::size_t>(cfg.realizations);

  std::vector<int> draws(n);
  parallel_for_index(n, opt.workers, [&](std::size_t i) {
    RandomStream rng = derive_stream(cfg.seed, i);
    draws[i] = static_cast<int>(rng.categorical(dist));
  });
  std::vector<double> counts(dist.size(), 0.0);
  std::vector<double> as_real(n);
  for (std::size_t i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(draws[i])] += 1.0;
    as_real[i] = draws[i];
  }
  const StatSummary s = summarize(as_real);

  // Outcome-frequency weighted average of the conditional states.
  CMatrix avg = CMatrix::Zero(2, 2);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (counts[i] == 0.0) continue;
    const QuantumState post = post_state_given_outcome(app, psi, static_cast<int>(i));
    avg += counts[i] / static_cast<double>(n) * post.amplitudes() * post.amplitudes().adjoint();
  }

  double chi2 = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double e = n * dist[i];
    if (e > 0.0) chi2 += (counts[i] - e) * (counts[i] - e) / e;
  }
  int cells = 0;
  for (double p : dist) cells += p > 0.0 ? 1 : 0;

  const PointerStats ps = pointer_stats(app, psi);
  const DensityMatrix rho = reduced_density(app, psi);
  ResultDocument doc;
  Json& r = doc.results;
  r["closed_form"]["n_slots"] = app.n_slots();
  r["closed_form"]["middle_band_probability"] = 1.0 - 2.0 / app.n_slots();
  r["closed_form"]["reduced_density"] = matrix_json(rho.elements());
  r["closed_form"]["purity_weak"] = purity_weak(app, psi);
  r["closed_form"]["purity_of_reduced_density"] = purity(rho);
  r["closed_form"]["pre_mean"] = ps.pre_mean;
  r["closed_form"]["post_mean"] = ps.post_mean;
  r["closed_form"]["pre_variance"] = ps.pre_var;
  r["closed_form"]["post_variance"] = ps.post_var;
  r["monte_carlo"]["samples"] = n;
  r["monte_carlo"]["post_mean"] = s.mean;
  r["monte_carlo"]["post_variance"] = s.variance;
  r["monte_carlo"]["standard_error"] = s.standard_error;
  r["monte_carlo"]["average_post_density"] = matrix_json(avg);
  r["monte_carlo"]["chi_square_statistic"] = chi2;
  r["monte_carlo"]["chi_square_dof"] = cells - 1;
  r["monte_carlo"]["chi_square_pvalue"] = cells > 1 ? Json(chi_square_pvalue(chi2, cells - 1)) : Json(nullptr);

  Table t{"distribution", {"outcome", "probability", "frequency"}, {}};
  for (std::size_t i = 0; i < dist.size(); ++i) {
    t.rows.push_back({static_cast<double>(i), dist[i], counts[i] / static_cast<double>(n)});
  }
  doc.tables.push_back(std::move(t));
  return doc;
}

ResultDocument run_repeat(const ExperimentConfig& cfg, const RunOptions& opt) {
  const QuantumState psi = state_of(cfg);
  const Observable obs(cfg.eigenvalues);
  const GaussianMeter meter(cfg.delta_p);
  const int steps = static_cast<int>(cfg.m_steps);
  const auto n = static_cast<std::size_t>(cfg.realizations);
  const std::size_t traced = std::min(n, kTracedRealizations);

  std::vector<double> y(n);
  std::vector<CVector> finals(n);
  std::vector<std::vector<std::vector<double>>> trace_rows(traced);
  parallel_for_index(n, opt.workers, [&](std::size_t i) {
    RandomStream rng = derive_stream(cfg.seed, i);
    if (i < traced) {
      const RealizationTrace tr = run_realization(meter, obs, psi, steps, rng);
      double running = 0.0;
      auto& rows = trace_rows[i];
      rows.reserve(static_cast<std::size_t>(steps));
      for (int k = 0; k < steps; ++k) {
        running += tr.record.outcomes()[static_cast<std::size_t>(k)];
        rows.push_back({static_cast<double>(i), static_cast<double>(k + 1), tr.record.outcomes()[static_cast<std::size_t>(k)],
                        running / (k + 1), fidelity(psi, tr.states[static_cast<std::size_t>(k) + 1])});
      }
      y[i] = tr.y_mean;
      finals[i] = tr.final_state().amplitudes();
    } else {
      const RealizationSummary s = run_realization_summary(meter, obs, psi, steps, rng);
      y[i] = s.y_mean;
      finals[i] = s.final_state.amplitudes();
    }
  });

  const std::size_t d = obs.dim();
  const double window = 3.0 * cfg.delta_p / std::sqrt(static_cast<double>(steps));
  std::vector<double> nearest(d, 0.0), within(d, 0.0);
  double converged = 0.0;
  CMatrix avg = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    nearest[obs.nearest(y[i])] += 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (std::abs(y[i] - obs.eigenvalue(k)) <= window) within[k] += 1.0;
    }
    const QuantumState fin(finals[i]);
    if (distance_to_nearest_eigenstate(fin) < kConvergenceDistance) converged += 1.0;
    avg += fin.amplitudes() * fin.amplitudes().adjoint();
  }
  const double nn = static_cast<double>(n);
  avg /= nn;
  for (auto& v : nearest) v /= nn;
  for (auto& v : within) v /= nn;

  const DensityMatrix closed_rho = average_reduced_density(meter, obs, psi, steps);
  const CMatrix herm = 0.5 * (avg + avg.adjoint());
  const DensityMatrix mc_rho(herm / herm.trace().real());
  const double eps = outcome_mean_error(cfg.delta_p, steps);

  const Cdf cdf = [&](double v) { return ymean_cdf(meter, obs, psi, steps, v); };
  Histogram hist;
  Json ymc = sample_json(y, cdf, &hist);

  ResultDocument doc;
  Json& r = doc.results;
  r["closed_form"]["born_weights"] = psi.probabilities();
  r["closed_form"]["ymean_component_width"] = eps;
  r["closed_form"]["average_reduced_density"] = matrix_json(closed_rho.elements());
  r["closed_form"]["epsilon"] = eps;
  r["closed_form"]["error_disturbance"] = error_disturbance(psi, obs, eps);
  r["monte_carlo"]["realizations"] = n;
  r["monte_carlo"]["fraction_nearest"] = nearest;
  r["monte_carlo"]["window_halfwidth"] = window;
  r["monte_carlo"]["fraction_within_window"] = within;
  r["monte_carlo"]["convergence_distance"] = kConvergenceDistance;
  r["monte_carlo"]["converged_fraction"] = converged / nn;
  r["monte_carlo"]["ymean"] = ymc;
  r["monte_carlo"]["average_final_density"] = matrix_json(avg);
  r["monte_carlo"]["max_density_deviation"] = (avg - closed_rho.elements()).cwiseAbs().maxCoeff();
  r["monte_carlo"]["disturbance"] = distance_measure(psi.density(), mc_rho);

  Table traces{"traces", {"realization", "step", "outcome", "y_running", "fidelity_to_initial"}, {}};
  for (auto& rows : trace_rows) {
    for (auto& row : rows) traces.rows.push_back(std::move(row));
  }
  doc.tables.push_back(std::move(traces));
  doc.tables.push_back(histogram_table("ymean_histogram", hist, cdf));
  return doc;
}

ResultDocument run_lg(const ExperimentConfig& cfg, const RunOptions& opt) {
  const QuantumState psi = state_of(cfg);
  const Observable obs(cfg.eigenvalues);
  const double delta_a = std::sqrt(expectation_and_variance(psi, obs).variance);
  const LGPlan plan(cfg.m_steps, cfg.delta_p, delta_a);
  const LGReport rep = compare(plan, obs.max_eigenvalue() - obs.min_eigenvalue());

  ResultDocument doc;
  Json& r = doc.results;
  r["closed_form"]["ensemble_size"] = plan.ensemble_size();
  r["closed_form"]["delta_a"] = delta_a;
  r["closed_form"]["weak_error"] = rep.weak_error;
  r["closed_form"]["weak_error_exact"] = rep.weak_error_exact;
  r["closed_form"]["strong_equivalent_ensemble"] = rep.strong_equivalent_ensemble;
  r["closed_form"]["total_strong_budget"] = rep.total_strong_budget;
  r["closed_form"]["advantage_ratio"] = number_or_null(rep.advantage_ratio);
  r["closed_form"]["strong_wins"] = rep.strong_wins;
  r["closed_form"]["copies_needed"] = rep.copies_needed;
  r["closed_form"]["second_measurement_disturbed"] = rep.second_measurement_disturbed;
  if (cfg.realizations >= 2) {
    const LGMonteCarlo mc = lg_monte_carlo(plan, psi, obs, static_cast<int>(cfg.realizations), cfg.seed, opt.workers);
    r["monte_carlo"]["repetitions"] = mc.repetitions;
    r["monte_carlo"]["subensemble_size"] = mc.subensemble_size;
    r["monte_carlo"]["empirical_standard_error"] = mc.empirical_standard_error;
    r["monte_carlo"]["relative_error_vs_weak_error"] = mc.empirical_standard_error / mc.weak_error - 1.0;
    r["monte_carlo"]["relative_error_vs_exact"] = mc.empirical_standard_error / mc.weak_error_exact - 1.0;
  } else {
    r["monte_carlo"] = nullptr;
  }

  Table sweep{"crossover", {"delta_a_over_delta_p", "total_strong_budget_over_m", "advantage_ratio"}, {}};
  for (int k = 1; k <= 40; ++k) {
    const double ratio = 0.025 * k;
    const LGReport s = compare(LGPlan(plan.ensemble_size(), 1.0, ratio));
    sweep.rows.push_back({ratio, s.total_strong_budget / static_cast<double>(plan.ensemble_size()), s.advantage_ratio});
  }
  doc.tables.push_back(std::move(sweep));
  return doc;
}

ResultDocument run_tomo_optimize(const ExperimentConfig& cfg, const RunOptions&) {
  const ErrorBudget budget = statistical_error(cfg.delta_p, static_cast<long>(cfg.m_steps));
  const PostSelectionOptimum opt = optimize_postselection(budget);
  ResultDocument doc;
  Json& r = doc.results;
  r["delta_s"] = budget.delta_s();
  r["optimum"]["weight_plus"] = opt.weight_plus;
  r["optimum"]["averaged_error_volume"] = opt.objective;
  r["optimum"]["reference_closed_form"] =
      averaged_error_volume(PostSelection::from_weight(opt.weight_plus), budget).reference_closed_form;
  r["optimum"]["evaluations"] = opt.evaluations;
  r["mub_weight_plus"] = 0.5;

  Table grid{"objective", {"weight_plus", "averaged_error_volume", "reference_closed_form", "total_volume"}, {}};
  for (int k = 1; k <= 19; ++k) {
    const double t = 0.05 * k;
    const PostSelection b = PostSelection::from_weight(t);
    const ErrorVolume ev = averaged_error_volume(b, budget);
    grid.rows.push_back({t, ev.averaged, ev.reference_closed_form, total_volume(b)});
  }
  doc.tables.push_back(std::move(grid));
  return doc;
}

ResultDocument run_tomo_roundtrip(const ExperimentConfig& cfg, const RunOptions& opt) {
  const QuantumState psi = state_of(cfg);
  const PostSelection post = PostSelection::from_weight(*cfg.b_plus_sq);
  const ErrorBudget budget = statistical_error(cfg.delta_p, static_cast<long>(cfg.m_steps));
  const WeakValueCoord w = weak_value_coord(psi, post);
  const QuantumState back = reconstruct_state(w, post);
  const double g = conformal_factor_analytic(w.x(), w.y(), post);
  const auto n = static_cast<std::size_t>(cfg.realizations);

  std::vector<std::vector<double>> rows(n);
  parallel_for_index(n, opt.workers, [&](std::size_t i) {
    RandomStream rng = derive_stream(cfg.seed, i);
    const WeakValueCoord est = simulate_weak_value_estimate(w, budget, rng);
    const double infidelity = 1.0 - fidelity(psi, reconstruct_state(est, post));
    rows[i] = {static_cast<double>(i), est.x(), est.y(), infidelity};
  });
  double mean_inf = 0.0;
  for (const auto& row : rows) mean_inf += row[3];
  mean_inf /= static_cast<double>(n);

  ResultDocument doc;
  Json& r = doc.results;
  r["delta_s"] = budget.delta_s();
  r["weak_value"]["w_plus"] = complex_json(w.w_plus());
  r["weak_value"]["x"] = w.x();
  r["weak_value"]["y"] = w.y();
  r["reconstruction_infidelity"] = 1.0 - fidelity(psi, back);
  r["conformal_factor"] = g;
  // Small-noise limit: 1 - F = dl^2 / 4 and E[dx^2 + dy^2] = 2 delta_s^2.
  r["predicted_mean_infidelity"] = 0.5 * g * budget.delta_s() * budget.delta_s();
  r["monte_carlo"]["trials"] = n;
  r["monte_carlo"]["mean_infidelity"] = mean_inf;
  Table t{"trials", {"trial", "x_estimate", "y_estimate", "infidelity"}, std::move(rows)};
  doc.tables.push_back(std::move(t));
  return doc;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kConfigFields.contains(key)) throw ConfigError("/" + key, "unknown field");
  }
  auto missing = [](const char* field) { return ConfigError(std::string("/") + field, "required field is missing"); };

  ExperimentConfig cfg;
  if (doc.contains("experiment")) {
    const auto& v = doc["experiment"];
    if (!v.is_string()) throw ConfigError("/experiment", "expected a string");
    const auto kind = parse_experiment_kind(v.get<std::string>());
    if (!kind) throw ConfigError("/experiment", fmt::format("unknown experiment '{}'", v.get<std::string>()));
    if (overrides.experiment && *overrides.experiment != *kind) {
      throw ConfigError("/experiment", fmt::format("config is for '{}' but '{}' was requested",
                                                   to_string(*kind), to_string(*overrides.experiment)));
    }
    cfg.experiment = *kind;
  } else if (overrides.experiment) {
    cfg.experiment = *overrides.experiment;
  } else {
    throw missing("experiment");
  }

  if (!doc.contains("state")) throw missing("state");
  const auto& st = doc["state"];
  if (!st.is_array()) throw ConfigError("/state", "expected an array of [re, im] pairs");
  for (std::size_t i = 0; i < st.size(); ++i) {
    const std::string path = fmt::format("/state/{}", i);
    if (!st[i].is_array() || st[i].size() != 2) throw ConfigError(path, "expected a [re, im] pair");
    cfg.state.emplace_back(get_number(st[i][0], path + "/0"), get_number(st[i][1], path + "/1"));
  }

  if (!doc.contains("eigenvalues")) throw missing("eigenvalues");
  const auto& ev = doc["eigenvalues"];
  if (!ev.is_array()) throw ConfigError("/eigenvalues", "expected an array of numbers");
  for (std::size_t i = 0; i < ev.size(); ++i) cfg.eigenvalues.push_back(get_number(ev[i], fmt::format("/eigenvalues/{}", i)));

  if (overrides.delta_p) {
    cfg.delta_p = *overrides.delta_p;
  } else if (doc.contains("delta_p")) {
    cfg.delta_p = get_number(doc["delta_p"], "/delta_p");
  } else {
    throw missing("delta_p");
  }
  if (overrides.m_steps) {
    cfg.m_steps = *overrides.m_steps;
  } else if (doc.contains("m_steps")) {
    cfg.m_steps = get_integer(doc["m_steps"], "/m_steps");
  } else {
    throw missing("m_steps");
  }
  if (overrides.realizations) {
    cfg.realizations = *overrides.realizations;
  } else if (doc.contains("realizations")) {
    cfg.realizations = get_integer(doc["realizations"], "/realizations");
  } else {
    throw missing("realizations");
  }
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
  } else if (doc.contains("seed")) {
    cfg.seed = get_seed(doc["seed"], "/seed");
  } else {
    throw missing("seed");
  }
  if (overrides.output_path) {
    cfg.output_path = *overrides.output_path;
  } else if (doc.contains("output_path")) {
    if (!doc["output_path"].is_string()) throw ConfigError("/output_path", "expected a string");
    cfg.output_path = doc["output_path"].get<std::string>();
  }
  if (doc.contains("b_plus_sq") && !doc["b_plus_sq"].is_null()) {
    cfg.b_plus_sq = get_number(doc["b_plus_sq"], "/b_plus_sq");
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text, const ConfigOverrides& overrides) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", fmt::format("JSON syntax error at line {}, column {}: {}", line, col, e.what()));
  }
  return parse_config(doc, overrides);
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

void validate(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.state.size();
  if (d < 2) throw ConfigError("/state", "need at least two amplitudes");
  double norm2 = 0.0;
  for (const Complex& c : cfg.state) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ConfigError("/state", "amplitudes must be finite");
    norm2 += std::norm(c);
  }
  if (std::sqrt(norm2) < 1e-14) throw ConfigError("/state", "amplitude vector is zero");
  if (cfg.eigenvalues.size() != d) {
    throw ConfigError("/eigenvalues", fmt::format("expected {} eigenvalues to match the state, got {}", d,
                                                  cfg.eigenvalues.size()));
  }
  try {
    Observable obs(cfg.eigenvalues);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/eigenvalues", e.what());
  }
  if (!(cfg.delta_p > 0.0) || !std::isfinite(cfg.delta_p)) throw ConfigError("/delta_p", "must be positive");
  if (cfg.m_steps < 1) throw ConfigError("/m_steps", "must be >= 1");
  if (cfg.realizations < 1) throw ConfigError("/realizations", "must be >= 1");
  if (cfg.b_plus_sq && !(*cfg.b_plus_sq > 1e-18 && *cfg.b_plus_sq < 1.0 - 1e-18)) {
    throw ConfigError("/b_plus_sq", "must lie strictly inside (0, 1)");
  }
  if (cfg.b_plus_sq) {
    try {
      PostSelection::from_weight(*cfg.b_plus_sq);
    } catch (const InadmissiblePostSelection& e) {
      throw ConfigError("/b_plus_sq", e.what());
    }
  }

  const bool sampled = cfg.experiment == ExperimentKind::meter_check || cfg.experiment == ExperimentKind::idealized ||
                       cfg.experiment == ExperimentKind::repeat;
  if (sampled && cfg.realizations < 2) throw ConfigError("/realizations", "need at least two samples");

  switch (cfg.experiment) {
    case ExperimentKind::meter_check:
      break;
    case ExperimentKind::idealized:
      if (d != 2) throw ConfigError("/state", "idealized experiment needs a qubit state");
      if (cfg.eigenvalues != std::vector<double>{1.0, -1.0}) {
        throw ConfigError("/eigenvalues", "idealized experiment uses the spin observable [1, -1]");
      }
      if (cfg.m_steps < 3 || cfg.m_steps > 100000000) throw ConfigError("/m_steps", "pointer slot count must be in [3, 1e8]");
      break;
    case ExperimentKind::repeat:
      if (cfg.m_steps > INT_MAX) throw ConfigError("/m_steps", "too many measurements per copy");
      break;
    case ExperimentKind::lg:
      if (cfg.m_steps < 8) throw ConfigError("/m_steps", "ensemble size must be >= 8");
      if (cfg.realizations > INT_MAX) throw ConfigError("/realizations", "too many repetitions");
      break;
    case ExperimentKind::tomo_optimize:
      if (d != 2) throw ConfigError("/state", "tomography experiments need a qubit state");
      break;
    case ExperimentKind::tomo_roundtrip: {
      if (d != 2) throw ConfigError("/state", "tomography experiments need a qubit state");
      if (!cfg.b_plus_sq) throw ConfigError("/b_plus_sq", "required for tomo-roundtrip");
      try {
        weak_value(state_of(cfg), PostSelection::from_weight(*cfg.b_plus_sq), Projector::plus);
      } catch (const OrthogonalPostSelection& e) {
        throw ConfigError("/state", e.what());
      }
      break;
    }
  }
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  Json st = Json::array();
  for (const Complex& c : cfg.state) st.push_back(complex_json(c));
  j["state"] = st;
  j["eigenvalues"] = cfg.eigenvalues;
  j["delta_p"] = cfg.delta_p;
  j["m_steps"] = cfg.m_steps;
  j["realizations"] = cfg.realizations;
  j["seed"] = cfg.seed;
  j["output_path"] = cfg.output_path;
  j["b_plus_sq"] = cfg.b_plus_sq ? Json(*cfg.b_plus_sq) : Json(nullptr);
  return j;
}

Json ResultDocument::to_json() const {
  Json j;
  j["version"] = version;
  j["config"] = config;
  j["results"] = results;
  Json tabs = Json::array();
  for (const Table& t : tables) {
    Json tj;
    tj["name"] = t.name;
    tj["columns"] = t.columns;
    tj["rows"] = t.rows;
    tabs.push_back(std::move(tj));
  }
  j["tables"] = std::move(tabs);
  return j;
}

ResultDocument ResultDocument::from_json(const Json& doc) {
  ResultDocument out;
  out.version = doc.at("version").get<std::string>();
  out.config = doc.at("config");
  out.results = doc.at("results");
  for (const auto& tj : doc.at("tables")) {
    Table t;
    t.name = tj.at("name").get<std::string>();
    t.columns = tj.at("columns").get<std::vector<std::string>>();
    t.rows = tj.at("rows").get<std::vector<std::vector<double>>>();
    out.tables.push_back(std::move(t));
  }
  return out;
}

const Table* ResultDocument::table(std::string_view name) const {
  for (const Table& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

ResultDocument run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  ResultDocument doc;
  switch (cfg.experiment) {
    case ExperimentKind::meter_check: doc = run_meter_check(cfg, options); break;
    case ExperimentKind::idealized: doc = run_idealized(cfg, options); break;
    case ExperimentKind::repeat: doc = run_repeat(cfg, options); break;
    case ExperimentKind::lg: doc = run_lg(cfg, options); break;
    case ExperimentKind::tomo_optimize: doc = run_tomo_optimize(cfg, options); break;
    case ExperimentKind::tomo_roundtrip: doc = run_tomo_roundtrip(cfg, options); break;
  }
  doc.version = version_string();
  doc.config = to_json(cfg);
  return doc;
}

std::string render_json(const ResultDocument& doc) { return doc.to_json().dump(2) + "\n"; }

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_number(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::string render_csv(const Table& table) {
  std::string s;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) s += ',';
    s += csv_field(table.columns[c]);
  }
  s += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_number(row[c]);
    }
    s += '\n';
  }
  return s;
}

std::string render_summary_csv(const ResultDocument& doc) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("version", doc.version);
  flatten(doc.config, "config", kv);
  flatten(doc.results, "results", kv);
  std::string s = "key,value\n";
  for (const auto& [k, v] : kv) s += csv_field(k) + "," + csv_field(v) + "\n";
  return s;
}

void emit_results(const ResultDocument& doc, OutputFormat format, const std::filesystem::path& path) {
  if (format == OutputFormat::json) {
    write_file(path, render_json(doc));
    return;
  }
  const std::filesystem::path dir = path.parent_path();
  const std::string stem = path.stem().string();
  auto sibling = [&](const std::string& name) { return dir / (stem + "." + name + ".csv"); };
  for (std::size_t i = 0; i < doc.tables.size(); ++i) {
    write_file(i == 0 ? path : sibling(doc.tables[i].name), render_csv(doc.tables[i]));
  }
  write_file(sibling("summary"), render_summary_csv(doc));
}

std::string version_string() {
  const std::string describe = WEAKMEAS_GIT_DESCRIBE;
  return describe.empty() ? std::string("weakmeas ") + WEAKMEAS_VERSION
                          : std::string("weakmeas ") + WEAKMEAS_VERSION + " (" + describe + ")";
}

}  // namespace weakmeas
