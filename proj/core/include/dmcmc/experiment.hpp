#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dmcmc/config.hpp"
#include "dmcmc/metrics.hpp"
#include "dmcmc/problems.hpp"
#include "dmcmc/samplers.hpp"

namespace dmcmc {

using Problem = std::variant<LinRegProblem, LogRegProblem>;

/// Generates the dataset from spec.data_seed, falling back to `run_seed`.
Problem generate_problem(const ProblemSpec& spec, int n_agents, std::uint64_t run_seed);
PotentialSet problem_potentials(const Problem& problem);

/// Everything a run produces; per-trial seeds and the config echo make the
/// manifest sufficient to reproduce the run.
struct RunManifest {
  std::string version;
  std::string algorithm_label;
  double wall_clock_seconds = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::string> outputs;
  std::string config_echo;
};

struct ExperimentOutput {
  ConvergenceSeries series;
  RunManifest manifest;
  std::vector<ChainHistory> histories;
};

/// Generates the dataset once, runs n_trials chains (concurrently up to the
/// configured worker count; aggregation is by trial index, so the schedule
/// cannot affect results), and reduces the per-iteration trial ensembles to
/// metric rows: Wasserstein distance to the closed-form posterior for
/// linreg, accuracy mean/std on the pooled dataset for logreg.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Runs a shared-dataset comparison; all configs must agree on problem,
/// topology, and run parameters. Metric names are prefixed with the
/// algorithm label.
ExperimentOutput compare_algorithms(const std::vector<ExperimentConfig>& configs);

/// Writes series CSV, manifest, and optional dumps under config.run.out;
/// returns the manifest with the file inventory filled in.
RunManifest write_outputs(ExperimentOutput& output, const ExperimentConfig& config);

std::string manifest_text(const RunManifest& manifest);

extern const char* const kVersion;

}  // namespace dmcmc
