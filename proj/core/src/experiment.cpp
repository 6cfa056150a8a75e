#include "dmcmc/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dmcmc/io.hpp"
#include "dmcmc/rng.hpp"

namespace dmcmc {

const char* const kVersion = "0.1.0";

Problem generate_problem(const ProblemSpec& spec, int n_agents, std::uint64_t run_seed) {
  const std::uint64_t seed = spec.data_seed.value_or(run_seed);
  if (spec.kind == ProblemKind::linreg)
    return LinRegProblem::generate(spec.d, spec.xi, spec.lambda, n_agents,
                                   spec.n_per_agent, seed);
  return LogRegProblem::generate(spec.d, spec.lambda, n_agents, spec.n_per_agent, seed);
}

PotentialSet problem_potentials(const Problem& problem) {
  return std::visit([](const auto& p) { return p.potentials(); }, problem);
}

namespace {

/// Runs fn(t) for t in [0, n_trials) on `workers` threads. The first
/// exception wins and is rethrown after all workers drain.
void parallel_trials(long n_trials, int workers,
                     const std::function<void(long)>& fn) {
  if (workers <= 1) {
    for (long t = 0; t < n_trials; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const long t = next.fetch_add(1);
      if (t >= n_trials) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ChainHistory> run_trials(const ExperimentConfig& config,
                                     const PotentialSet& potentials,
                                     const Topology& topo,
                                     std::vector<std::uint64_t>& trial_seeds) {
  const long n_trials = config.run.n_trials;
  const long n_iters = config.effective_iters();
  trial_seeds.resize(n_trials);
  for (long t = 0; t < n_trials; ++t)
    trial_seeds[t] = derive_trial_seed(config.run.seed, static_cast<std::uint64_t>(t));

  std::vector<ChainHistory> histories(n_trials);
  const int workers = resolve_workers(config.run.workers, n_trials);
  parallel_trials(n_trials, workers, [&](long t) {
    try {
      histories[t] = run_chain(config.algorithm.params, potentials, topo, n_iters,
                               config.run.thin, trial_seeds[t]);
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(t) + " (" +
                               config.algorithm.label + ") failed: " + e.what());
    }
  });
  return histories;
}

void append_series(ConvergenceSeries& series, const std::string& prefix,
                   const std::vector<ChainHistory>& histories, const Problem& problem) {
  const ConvergenceSeries part =
      std::holds_alternative<LinRegProblem>(problem)
          ? wasserstein_series(histories,
                               linreg_true_posterior(std::get<LinRegProblem>(problem)),
                               prefix)
          : accuracy_series(histories, std::get<LogRegProblem>(problem), prefix);
  series.rows.insert(series.rows.end(), part.rows.begin(), part.rows.end());
}

void check_metric_preconditions(const ExperimentConfig& config) {
  if (config.problem.kind == ProblemKind::linreg && config.run.n_trials < 2)
    throw std::invalid_argument(
        "config error: Wasserstein metrics require run.n_trials >= 2");
  if (config.run.n_trials < 2)
    throw std::invalid_argument("config error: run.n_trials must be >= 2");
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  check_metric_preconditions(config);
  const auto start = std::chrono::steady_clock::now();

  const Topology topo = build_topology(config.topology.kind, config.topology.n_agents);
  const Problem problem = generate_problem(config.problem, topo.n_agents(), config.run.seed);
  const PotentialSet potentials = problem_potentials(problem);

  ExperimentOutput out;
  out.histories = run_trials(config, potentials, topo, out.manifest.trial_seeds);
  append_series(out.series, "", out.histories, problem);

  out.manifest.version = kVersion;
  out.manifest.algorithm_label = config.algorithm.label;
  out.manifest.config_echo = config_echo(config);
  out.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ExperimentOutput compare_algorithms(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty())
    throw std::invalid_argument("compare_algorithms requires at least one config");
  const ExperimentConfig& base = configs.front();
  // The flat iterate dump has no algorithm column, so a merged dump would be
  // ambiguous; run algorithms individually to export raw iterates.
  if (base.run.dump_iterates)
    throw std::invalid_argument(
        "config error: run.dump_iterates is not supported for compare runs");
  for (const auto& c : configs) {
    const bool same_problem =
        c.problem.kind == base.problem.kind && c.problem.d == base.problem.d &&
        c.problem.xi == base.problem.xi && c.problem.lambda == base.problem.lambda &&
        c.problem.n_per_agent == base.problem.n_per_agent;
    const bool same_topology = c.topology.kind == base.topology.kind &&
                               c.topology.n_agents == base.topology.n_agents;
    const bool same_data_seed = c.problem.data_seed.value_or(c.run.seed) ==
                                base.problem.data_seed.value_or(base.run.seed);
    if (!same_problem || !same_topology || !same_data_seed)
      throw std::invalid_argument(
          "compare_algorithms: configs must share problem, topology, and seed");
  }

  const auto start = std::chrono::steady_clock::now();
  const Topology topo = build_topology(base.topology.kind, base.topology.n_agents);
  const Problem problem = generate_problem(base.problem, topo.n_agents(), base.run.seed);
  const PotentialSet potentials = problem_potentials(problem);

  ExperimentOutput out;
  std::string labels;
  for (const auto& config : configs) {
    check_metric_preconditions(config);
    std::vector<std::uint64_t> seeds;
    const std::vector<ChainHistory> histories =
        run_trials(config, potentials, topo, seeds);
    if (out.manifest.trial_seeds.empty()) out.manifest.trial_seeds = seeds;
    append_series(out.series, config.algorithm.label + "/", histories, problem);
    labels += labels.empty() ? config.algorithm.label : "," + config.algorithm.label;
  }

  out.manifest.version = kVersion;
  out.manifest.algorithm_label = labels;
  out.manifest.config_echo = config_echo(base);
  out.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string manifest_text(const RunManifest& manifest) {
  std::ostringstream os;
  os << "[manifest]\n";
  os << "version = " << manifest.version << "\n";
  os << "algorithm = " << manifest.algorithm_label << "\n";
  os << "wall_clock_seconds = " << format_double(manifest.wall_clock_seconds) << "\n";
  os << "[outputs]\n";
  for (std::size_t i = 0; i < manifest.outputs.size(); ++i)
    os << "file_" << i << " = " << manifest.outputs[i] << "\n";
  os << "[trial_seeds]\n";
  for (std::size_t t = 0; t < manifest.trial_seeds.size(); ++t)
    os << "trial_" << t << " = " << manifest.trial_seeds[t] << "\n";
  os << "[config]\n";
  os << manifest.config_echo;
  return os.str();
}

RunManifest write_outputs(ExperimentOutput& output, const ExperimentConfig& config) {
  if (config.run.out.empty())
    throw std::invalid_argument("config error: run.out is required to write outputs");
  namespace fs = std::filesystem;
  const fs::path dir(config.run.out);
  fs::create_directories(dir);

  const fs::path series_path = dir / "series.csv";
  write_text_file(series_path.string(), series_csv_string(output.series));
  output.manifest.outputs.push_back(series_path.string());

  if (config.run.dump_iterates) {
    const fs::path it_path = dir / "iterates.csv";
    std::ostringstream os;
    write_iterates_csv(output.histories, os);
    write_text_file(it_path.string(), os.str());
    output.manifest.outputs.push_back(it_path.string());
  }
  if (config.run.dump_dataset) {
    const Problem problem =
        generate_problem(config.problem, config.topology.n_agents, config.run.seed);
    std::ostringstream os;
    std::visit([&](const auto& p) { write_dataset_csv(p.data(), os); }, problem);
    const fs::path ds_path = dir / "dataset.csv";
    write_text_file(ds_path.string(), os.str());
    output.manifest.outputs.push_back(ds_path.string());
  }

  const fs::path manifest_path = dir / "manifest.ini";
  output.manifest.outputs.push_back(manifest_path.string());
  write_text_file(manifest_path.string(), manifest_text(output.manifest));
  return output.manifest;
}

}  // namespace dmcmc
