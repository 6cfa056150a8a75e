#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmcmc/samplers.hpp"
#include "dmcmc/topology.hpp"

namespace dmcmc {

enum class ProblemKind { linreg, logreg };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::linreg;
  int d = 2;
  double xi = 4.0;  // linreg observation noise std
  double lambda = 10.0;
  int n_per_agent = 50;
  /// Dataset stream seed; defaults to the run seed so one root seed fixes
  /// the whole experiment, but can be pinned to hold data constant while
  /// varying chain randomness.
  std::optional<std::uint64_t> data_seed;
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::ring_cyclic;
  int n_agents = 5;
};

struct AlgorithmSpec {
  std::string label;  // section suffix in compare configs, else the name
  AlgorithmParams params;
};

struct RunSpec {
  long n_trials = 100;
  long n_iters = 0;  // 0 = problem-kind default (100 linreg, 200 logreg)
  std::uint64_t seed = 1;
  std::string out;
  long thin = 1;
  int workers = 0;  // 0 = DMCMC_WORKERS env var or hardware concurrency
  bool dump_iterates = false;
  bool dump_dataset = false;
};

/// Explicit conditioning constants and (kappa, rho) overrides for the
/// `theory` subcommand; when m_f/M_f are absent they are computed from the
/// generated problem.
struct TheorySpec {
  std::optional<double> m_f;
  std::optional<double> M_f;
  std::optional<double> kappa;
  std::optional<double> rho;
};

/// One fully resolved experiment (single algorithm).
struct ExperimentConfig {
  ProblemSpec problem;
  TopologySpec topology;
  AlgorithmSpec algorithm;
  RunSpec run;

  long effective_iters() const {
    if (run.n_iters > 0) return run.n_iters;
    return problem.kind == ProblemKind::linreg ? 100 : 200;
  }
};

/// Parsed configuration file. `run` needs [problem] and [algorithm];
/// `compare` needs [algorithm.<label>] sections; `theory` needs [topology]
/// plus either [problem] or an explicit [function] m_f / M_f pair.
struct ConfigFile {
  std::optional<ProblemSpec> problem;
  TopologySpec topology;
  std::vector<AlgorithmSpec> algorithms;
  RunSpec run;
  TheorySpec theory;

  ExperimentConfig single_experiment() const;
  std::vector<ExperimentConfig> compare_experiments() const;
};

/// Key/value sections of a config document, insertion-ordered.
using IniDocument = std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;

IniDocument parse_ini(const std::string& text);

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

/// Normalized key=value echo of a config, embedded in run manifests.
std::string config_echo(const ExperimentConfig& config);

int resolve_workers(int configured, long n_trials);

}  // namespace dmcmc
